#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace bathreuse {

/// A time point on the unfolded contour, stored in units of the step h as
/// `cell + frac` with `cell = floor(s / h)` and `frac` in [0, 1).
///
/// Keeping the integer part separate makes the stretch operator and the
/// shift by whole steps exact: both only touch `cell`, so every bath
/// argument |s_a| - |s_b| computed from these points is reproduced bit for
/// bit after the move.
struct GridTime {
  std::int64_t cell = 0;
  double frac = 0.0;

  static constexpr GridTime node(std::int64_t k) { return {k, 0.0}; }

  /// Decompose a coordinate given in units of h.
  static GridTime from_units(double u) {
    const double c = std::floor(u);
    const double f = u - c;
    // u just below an integer can round f up to 1
    if (f >= 1.0) return {static_cast<std::int64_t>(c) + 1, 0.0};
    return {static_cast<std::int64_t>(c), f};
  }

  static GridTime from_value(double s, double h) { return from_units(s / h); }

  double units() const { return static_cast<double>(cell) + frac; }
  double value(double h) const { return units() * h; }

  bool negative() const { return cell < 0; }
  bool on_node() const { return frac == 0.0; }
  bool is_zero() const { return cell == 0 && frac == 0.0; }

  /// True iff the point lies strictly inside (-h, h).
  bool near_zero() const { return (cell == 0 && frac > 0.0) || (cell == -1 && frac > 0.0); }

  friend auto operator<=>(const GridTime&, const GridTime&) = default;
};

/// |a| - |b| in units of h, computed from the integer and fractional parts
/// separately so the result only depends on cell differences.
inline double abs_difference_units(GridTime a, GridTime b) {
  const std::int64_t ia = a.cell < 0 ? -a.cell : a.cell;
  const std::int64_t ib = b.cell < 0 ? -b.cell : b.cell;
  const double fa = a.cell < 0 ? -a.frac : a.frac;
  const double fb = b.cell < 0 ? -b.frac : b.frac;
  return static_cast<double>(ia - ib) + (fa - fb);
}

/// Move a point away from 0 by j steps (the stretch operator on one point).
inline GridTime stretch(GridTime s, std::int64_t j) {
  return s.negative() ? GridTime{s.cell - j, s.frac} : GridTime{s.cell + j, s.frac};
}

/// Ordered time sequence s_1 < ... < s_m.
struct TimeSequence {
  std::vector<GridTime> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  const GridTime& operator[](std::size_t i) const { return points[i]; }

  int count_negative() const {
    int n = 0;
    for (const auto& p : points) n += p.negative() ? 1 : 0;
    return n;
  }

  bool strictly_ascending() const {
    for (std::size_t i = 1; i < points.size(); ++i)
      if (!(points[i - 1] < points[i])) return false;
    return true;
  }

  std::vector<double> values(double h) const {
    std::vector<double> v;
    v.reserve(points.size());
    for (const auto& p : points) v.push_back(p.value(h));
    return v;
  }

  friend bool operator==(const TimeSequence&, const TimeSequence&) = default;
};

/// Stretch operator I_j: negative points move left by j*h, the others right.
inline TimeSequence stretch(const TimeSequence& seq, std::int64_t j) {
  if (j < 0) throw std::invalid_argument("stretch: j must be non-negative");
  TimeSequence out;
  out.points.reserve(seq.size());
  for (const auto& p : seq.points) out.points.push_back(stretch(p, j));
  return out;
}

/// Shift every point by k whole steps.
inline TimeSequence shift(const TimeSequence& seq, std::int64_t k) {
  TimeSequence out;
  out.points.reserve(seq.size());
  for (const auto& p : seq.points) out.points.push_back({p.cell + k, p.frac});
  return out;
}

/// Build a sequence from real values (test and tooling convenience).
inline TimeSequence sequence_from_values(std::span<const double> values, double h) {
  TimeSequence seq;
  for (double v : values) seq.points.push_back(GridTime::from_value(v, h));
  return seq;
}

}  // namespace bathreuse

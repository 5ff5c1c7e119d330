#pragma once

#include "bathreuse/bath.hpp"
#include "bathreuse/costmodel.hpp"
#include "bathreuse/diagrams.hpp"
#include "bathreuse/dyson.hpp"
#include "bathreuse/sampling.hpp"
#include "bathreuse/spinsys.hpp"

#include <optional>
#include <span>
#include <vector>

namespace bathreuse {

/// Table of G_{j,k} for -N <= j <= k <= N with the node 0 split into 0^- and
/// 0^+. Entries are addressed by extended indices: j < 0 maps to j + N, 0^- to
/// N, 0^+ to N + 1 and j > 0 to j + N + 1.
class PropagatorGrid {
 public:
  PropagatorGrid(int num_steps, double h);

  int num_steps() const { return n_; }
  double h() const { return h_; }
  int extent() const { return 2 * n_ + 2; }

  /// Extended index of a nonzero node.
  int ext(int j) const;
  int zero_minus() const { return n_; }
  int zero_plus() const { return n_ + 1; }
  /// Grid node (as an integer step) of an extended index; both zeros give 0.
  int node_of(int e) const { return e < n_ ? e - n_ : (e <= n_ + 1 ? 0 : e - n_ - 1); }
  /// -1 for nodes left of the jump (including 0^-), +1 otherwise.
  int sign_of(int e) const { return e <= n_ ? -1 : 1; }

  bool has(int a, int b) const { return present_[index(a, b)] != 0; }
  /// Throws std::logic_error if the entry has not been computed yet.
  const Matrix2c& at(int a, int b) const;
  void set(int a, int b, const Matrix2c& g);

 private:
  std::size_t index(int a, int b) const;

  int n_;
  double h_;
  std::vector<Matrix2c> values_;
  std::vector<char> present_;
};

/// A replacement value for one grid entry, used for G* in the second stage.
struct GridOverride {
  int row = 0;
  int col = 0;
  Matrix2c value = Matrix2c::Zero();
};

/// A time argument of the interpolant: either a grid node (extended index)
/// or a point strictly inside a cell.
struct GridPoint {
  bool on_node = true;
  int ext = 0;     // node index when on_node
  int lo = 0;      // cell corners otherwise
  int hi = 0;
  double frac = 0.0;

  static GridPoint node(int e) { return {true, e, e, e, 0.0}; }
  static GridPoint interior(const PropagatorGrid& grid, GridTime s);
};

/// Piecewise linear interpolant G_I(a, b), a <= b.
Matrix2c interpolate_g(const PropagatorGrid& grid, const GridPoint& a, const GridPoint& b,
                       const GridOverride* override_value = nullptr);

/// Real-valued form. Coordinates within 1e-12 of a node snap to it; a left
/// argument at 0 means 0^+, a right argument at 0 means 0^-.
Matrix2c interpolate_g(const PropagatorGrid& grid, double a, double b);

/// U_I(s_i, s, s_f) = G_I(s_m, s_f) W ... W G_I(s_i, s_1) with node endpoints.
Matrix2c u_interp(const ModelConfig& cfg, const PropagatorGrid& grid, int start_ext,
                  std::span<const GridTime> seq, int end_ext,
                  const std::optional<GridOverride>& override_value = std::nullopt);

/// sgn(s_f) i^{m+1} (-1)^{#{s<0}} W U_I(s_i, s, s_f) L, for a known L.
Matrix2c inchworm_rhs_term(const ModelConfig& cfg, const PropagatorGrid& grid, int start_ext,
                           std::span<const GridTime> seq, int end_ext, Complex lb,
                           const std::optional<GridOverride>& override_value = std::nullopt);

/// L_b^c(s, t_k) for grid points s.
Complex inchworm_functional(const BathCorrelation& bath, std::span<const GridTime> seq, int k, double h);

/// Time-sequence sets S_{p,k} for -N <= p <= k - 1, 0 <= k <= N, built from
/// the fresh batches of the nodes p <= -1 as segments:
///   p <= -1: fresh batches (p + a, k - a) of every ancestor on the arrow,
///            each stretched by a;
///   p >= 0:  the batch (p - k, 0) shifted by k, with conjugated values;
///   k = -1:  the batch (p + 1, 0) shifted by -1, same values.
class InchwormSampleStore {
 public:
  struct Segment {
    int batch_p = 0;
    int batch_k = 0;
    bool stretch = true;  // stretch by `amount`, else shift by `amount`
    int amount = 0;
    bool conjugate = false;
  };

  /// Draws every fresh batch. With `reuse`, their functionals are evaluated
  /// once here; otherwise each use recomputes them. Counters go to `cost`.
  InchwormSampleStore(const SamplingConfig& sampling, const BathCorrelation& bath, bool reuse,
                      CostReport* cost);

  int num_steps() const { return n_; }
  bool reuse() const { return reuse_; }
  const SampleBatch& fresh(int p, int k) const;
  std::vector<Segment> segments(int p, int k) const;
  std::size_t node_size(int p, int k) const;

  /// Calls f(points, order, value) for each sequence of S_{p,k} in a fixed
  /// order; `buf` is scratch space.
  template <typename F>
  void for_each(int p, int k, std::vector<GridTime>& buf, F&& f) const;

  /// S_{p,k} and its values as plain lists (tests and tooling).
  std::vector<TimeSequence> sequences(int p, int k) const;
  std::vector<Complex> values(int p, int k) const;

 private:
  std::size_t batch_index(int p, int k) const;
  Complex evaluate(std::span<const GridTime> seq, int k, int m) const;

  int n_;
  double h_;
  bool reuse_;
  const BathCorrelation* bath_;
  CostReport* cost_;
  std::vector<SampleBatch> batches_;
};

struct InchwormOptions {
  SolveMode mode = SolveMode::reuse;
  Stepper stepper = Stepper::heun;
  int quadrature_points = 8;
};

struct InchwormResult {
  PropagatorGrid grid;
  std::vector<Matrix2c> g;  ///< G_{-n,n} for n = 0..N, with G_{0^-,0^+} = O_s first
  CostReport cost;
};

/// Fills the grid following the column order of the evolution algorithm.
InchwormResult run_inchworm(const ModelConfig& cfg, const BathCorrelation& bath,
                            const SamplingConfig& sampling, const InchwormOptions& options = {});

template <typename F>
void InchwormSampleStore::for_each(int p, int k, std::vector<GridTime>& buf, F&& f) const {
  for (const Segment& seg : segments(p, k)) {
    const SampleBatch& batch = batches_[batch_index(seg.batch_p, seg.batch_k)];
    for (std::size_t q = 0; q < batch.size(); ++q) {
      const auto seq = batch.sequence(q);
      buf.resize(seq.size());
      if (seg.stretch) {
        stretch_into(seq, seg.amount, buf.data());
      } else {
        for (std::size_t r = 0; r < seq.size(); ++r) buf[r] = {seq[r].cell + seg.amount, seq[r].frac};
      }
      const int m = batch.order(q);
      Complex lb;
      if (reuse_) {
        lb = seg.conjugate ? std::conj(batch.values[q]) : batch.values[q];
      } else {
        lb = evaluate(buf, k, m);
      }
      f(std::span<const GridTime>(buf), m, lb);
    }
  }
}

}  // namespace bathreuse

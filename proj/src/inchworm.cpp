#include "bathreuse/inchworm.hpp"

#include "quadrature.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bathreuse {

namespace {

using Clock = std::chrono::steady_clock;

const Complex kI(0.0, 1.0);

double odd_phase(int m) { return ((m + 1) / 2) % 2 == 0 ? 1.0 : -1.0; }

int count_negative(std::span<const GridTime> seq) {
  int n = 0;
  for (const auto& p : seq) n += p.negative() ? 1 : 0;
  return n;
}

const Matrix2c& lookup(const PropagatorGrid& grid, int a, int b, const GridOverride* ov) {
  if (ov && ov->row == a && ov->col == b) return ov->value;
  return grid.at(a, b);
}

GridPoint snap(const PropagatorGrid& grid, double x, bool left) {
  const double u = x / grid.h();
  const double r = std::nearbyint(u);
  const int n = grid.num_steps();
  if (u < -n - 1e-12 || u > n + 1e-12)
    throw std::out_of_range("interpolate_g: coordinate outside [-t_N, t_N]");
  if (std::abs(u - r) <= 1e-12 * std::max(1.0, std::abs(u))) {
    const int node = static_cast<int>(r);
    if (node == 0) return GridPoint::node(left ? grid.zero_plus() : grid.zero_minus());
    return GridPoint::node(grid.ext(node));
  }
  return GridPoint::interior(grid, GridTime::from_units(u));
}

}  // namespace

PropagatorGrid::PropagatorGrid(int num_steps, double h)
    : n_(num_steps),
      h_(h),
      values_(static_cast<std::size_t>(2 * num_steps + 2) * static_cast<std::size_t>(2 * num_steps + 2),
              Matrix2c::Zero()),
      present_(values_.size(), 0) {
  if (num_steps < 1) throw std::invalid_argument("PropagatorGrid: num_steps must be >= 1");
  if (!(h > 0.0)) throw std::invalid_argument("PropagatorGrid: h must be > 0");
}

int PropagatorGrid::ext(int j) const {
  if (j == 0 || j < -n_ || j > n_)
    throw std::out_of_range("PropagatorGrid: node " + std::to_string(j) + " has no plain index");
  return j < 0 ? j + n_ : j + n_ + 1;
}

std::size_t PropagatorGrid::index(int a, int b) const {
  if (a < 0 || b < 0 || a >= extent() || b >= extent() || a > b)
    throw std::out_of_range("PropagatorGrid: entry (" + std::to_string(a) + ", " + std::to_string(b) +
                            ") outside the upper triangle");
  return static_cast<std::size_t>(a) * static_cast<std::size_t>(extent()) + static_cast<std::size_t>(b);
}

const Matrix2c& PropagatorGrid::at(int a, int b) const {
  const std::size_t idx = index(a, b);
  if (!present_[idx])
    throw std::logic_error("PropagatorGrid: G(" + std::to_string(a) + ", " + std::to_string(b) +
                           ") used before it was computed");
  return values_[idx];
}

void PropagatorGrid::set(int a, int b, const Matrix2c& g) {
  const std::size_t idx = index(a, b);
  values_[idx] = g;
  present_[idx] = 1;
}

GridPoint GridPoint::interior(const PropagatorGrid& grid, GridTime s) {
  const auto c = static_cast<int>(s.cell);
  const int n = grid.num_steps();
  if (c < -n || c >= n) throw std::out_of_range("GridPoint: time outside [-t_N, t_N]");
  if (s.on_node()) {
    if (c == 0) throw std::invalid_argument("GridPoint: the node 0 needs an explicit side");
    return node(grid.ext(c));
  }
  GridPoint p;
  p.on_node = false;
  p.lo = c == 0 ? grid.zero_plus() : grid.ext(c);
  p.hi = c + 1 == 0 ? grid.zero_minus() : grid.ext(c + 1);
  p.frac = s.frac;
  return p;
}

Matrix2c interpolate_g(const PropagatorGrid& grid, const GridPoint& a, const GridPoint& b,
                       const GridOverride* ov) {
  if (a.on_node && b.on_node) return lookup(grid, a.ext, b.ext, ov);
  if (a.on_node) {
    if (a.ext > b.lo) throw std::invalid_argument("interpolate_g: requires a <= b");
    return (1.0 - b.frac) * lookup(grid, a.ext, b.lo, ov) + b.frac * lookup(grid, a.ext, b.hi, ov);
  }
  if (b.on_node) {
    if (a.hi > b.ext) throw std::invalid_argument("interpolate_g: requires a <= b");
    return (1.0 - a.frac) * lookup(grid, a.lo, b.ext, ov) + a.frac * lookup(grid, a.hi, b.ext, ov);
  }
  if (a.lo == b.lo) {
    // lower triangle of one cell, with G = Id on the diagonal corners
    const double x = a.frac;
    const double y = b.frac;
    if (x > y) throw std::invalid_argument("interpolate_g: requires a <= b");
    return (1.0 - y) * lookup(grid, a.lo, a.lo, ov) + (y - x) * lookup(grid, a.lo, a.hi, ov) +
           x * lookup(grid, a.hi, a.hi, ov);
  }
  if (a.hi > b.lo) throw std::invalid_argument("interpolate_g: requires a <= b");
  const double x = a.frac;
  const double y = b.frac;
  return ((1.0 - x) * (1.0 - y)) * lookup(grid, a.lo, b.lo, ov) +
         ((1.0 - x) * y) * lookup(grid, a.lo, b.hi, ov) + (x * (1.0 - y)) * lookup(grid, a.hi, b.lo, ov) +
         (x * y) * lookup(grid, a.hi, b.hi, ov);
}

Matrix2c interpolate_g(const PropagatorGrid& grid, double a, double b) {
  if (a > b) throw std::invalid_argument("interpolate_g: requires a <= b");
  if (a == b) return Matrix2c::Identity();
  return interpolate_g(grid, snap(grid, a, true), snap(grid, b, false));
}

Matrix2c u_interp(const ModelConfig& cfg, const PropagatorGrid& grid, int start_ext,
                  std::span<const GridTime> seq, int end_ext, const std::optional<GridOverride>& ov) {
  const GridOverride* o = ov ? &*ov : nullptr;
  const GridPoint start = GridPoint::node(start_ext);
  const GridPoint end = GridPoint::node(end_ext);
  if (seq.empty()) return interpolate_g(grid, start, end, o);
  GridPoint prev = GridPoint::interior(grid, seq[0]);
  Matrix2c acc = interpolate_g(grid, start, prev, o);
  for (std::size_t q = 1; q < seq.size(); ++q) {
    const GridPoint cur = GridPoint::interior(grid, seq[q]);
    acc = interpolate_g(grid, prev, cur, o) * cfg.coupling * acc;
    prev = cur;
  }
  return interpolate_g(grid, prev, end, o) * cfg.coupling * acc;
}

Matrix2c inchworm_rhs_term(const ModelConfig& cfg, const PropagatorGrid& grid, int start_ext,
                           std::span<const GridTime> seq, int end_ext, Complex lb,
                           const std::optional<GridOverride>& ov) {
  const int m = static_cast<int>(seq.size());
  if (m % 2 == 0) throw std::invalid_argument("inchworm_rhs_term: sequence length must be odd");
  const double sign = grid.sign_of(end_ext) * odd_phase(m) * (count_negative(seq) % 2 == 0 ? 1.0 : -1.0);
  return (sign * lb) * (cfg.coupling * u_interp(cfg, grid, start_ext, seq, end_ext, ov));
}

Complex inchworm_functional(const BathCorrelation& bath, std::span<const GridTime> seq, int k, double h) {
  std::vector<GridTime> points(seq.begin(), seq.end());
  points.push_back(GridTime::node(k));
  return lb_connected(bath, points, h);
}

InchwormSampleStore::InchwormSampleStore(const SamplingConfig& sampling, const BathCorrelation& bath,
                                         bool reuse, CostReport* cost)
    : n_(sampling.num_steps), h_(sampling.h), reuse_(reuse), bath_(&bath), cost_(cost) {
  sampling.validate();
  batches_.resize(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_ + 1));
  std::int64_t stored = 0;
  for (int p = -n_; p <= -1; ++p) {
    for (int k = 0; k <= n_; ++k) {
      SampleBatch& batch = batches_[batch_index(p, k)];
      batch = sample_fresh_inch(sampling, p, k);
      if (reuse_) {
        batch.values.resize(batch.size());
        for (std::size_t q = 0; q < batch.size(); ++q)
          batch.values[q] = evaluate(batch.sequence(q), k, batch.order(q));
        stored += static_cast<std::int64_t>(batch.size());
      }
    }
  }
  if (!cost_) return;
  cost_->peak_live_values = std::max<std::int64_t>(cost_->peak_live_values, reuse_ ? stored : 1);
  for (int p = -n_; p <= -1; ++p) {
    for (int k = 0; k <= n_; ++k) {
      for (int m = 1; m <= sampling.m_bar; m += 2) {
        std::int64_t total = 0;
        for (const Segment& seg : segments(p, k))
          total += static_cast<std::int64_t>(fresh(seg.batch_p, seg.batch_k).count_of_order(m));
        cost_->add_step_counts(std::max(-p, k), m,
                               static_cast<std::int64_t>(fresh(p, k).count_of_order(m)), total);
      }
    }
  }
}

std::size_t InchwormSampleStore::batch_index(int p, int k) const {
  if (p < -n_ || p > -1 || k < 0 || k > n_)
    throw std::out_of_range("InchwormSampleStore: no fresh batch at (" + std::to_string(p) + ", " +
                            std::to_string(k) + ")");
  return static_cast<std::size_t>(p + n_) * static_cast<std::size_t>(n_ + 1) + static_cast<std::size_t>(k);
}

const SampleBatch& InchwormSampleStore::fresh(int p, int k) const { return batches_[batch_index(p, k)]; }

std::vector<InchwormSampleStore::Segment> InchwormSampleStore::segments(int p, int k) const {
  if (p < -n_ || k > n_ || k < -1 || p >= k)
    throw std::out_of_range("InchwormSampleStore: no sample set at (" + std::to_string(p) + ", " +
                            std::to_string(k) + ")");
  if (k == -1) return {{p + 1, 0, false, -1, false}};
  if (p >= 0) {
    if (p - k < -n_) throw std::out_of_range("InchwormSampleStore: shifted source out of range");
    return {{p - k, 0, false, k, true}};
  }
  std::vector<Segment> out;
  const int depth = std::min(-1 - p, k);
  for (int a = 0; a <= depth; ++a) out.push_back({p + a, k - a, true, a, false});
  return out;
}

std::size_t InchwormSampleStore::node_size(int p, int k) const {
  std::size_t n = 0;
  for (const Segment& seg : segments(p, k)) n += fresh(seg.batch_p, seg.batch_k).size();
  return n;
}

std::vector<TimeSequence> InchwormSampleStore::sequences(int p, int k) const {
  std::vector<TimeSequence> out;
  std::vector<GridTime> buf;
  for_each(p, k, buf, [&](std::span<const GridTime> s, int, Complex) {
    out.push_back({std::vector<GridTime>(s.begin(), s.end())});
  });
  return out;
}

std::vector<Complex> InchwormSampleStore::values(int p, int k) const {
  std::vector<Complex> out;
  std::vector<GridTime> buf;
  for_each(p, k, buf, [&](std::span<const GridTime>, int, Complex v) { out.push_back(v); });
  return out;
}

Complex InchwormSampleStore::evaluate(std::span<const GridTime> seq, int k, int m) const {
  const auto t0 = Clock::now();
  const Complex v = inchworm_functional(*bath_, seq, k, h_);
  if (cost_) {
    OrderCost& c = cost_->at_order(m);
    c.wall_seconds += std::chrono::duration<double>(Clock::now() - t0).count();
    ++c.evaluations;
  }
  return v;
}

InchwormResult run_inchworm(const ModelConfig& cfg, const BathCorrelation& bath,
                            const SamplingConfig& sampling, const InchwormOptions& options) {
  cfg.validate();
  sampling.validate();
  const int n = sampling.num_steps;
  const double h = sampling.h;
  const bool deterministic = options.mode == SolveMode::deterministic;
  if (deterministic && sampling.m_bar != 1)
    throw std::invalid_argument("inchworm: deterministic mode requires m_bar = 1");

  InchwormResult out{PropagatorGrid(n, h), {}, CostReport(sampling.m_bar, n)};
  PropagatorGrid& grid = out.grid;
  const Matrix2c hamiltonian = cfg.hamiltonian();
  const Matrix2c id = Matrix2c::Identity();
  for (int e = 0; e < grid.extent(); ++e) grid.set(e, e, id);
  grid.set(grid.zero_minus(), grid.zero_plus(), cfg.observable);

  std::optional<InchwormSampleStore> store;
  detail::UnitRule rule;
  if (deterministic) {
    rule = detail::unit_rule(options.quadrature_points);
  } else {
    store.emplace(sampling, bath, options.mode == SolveMode::reuse, &out.cost);
  }
  std::vector<GridTime> buf;

  // Average of the integrand over s in [t_j, t_k] with endpoint node end_ext.
  auto stage_integral = [&](int j, int k, int end_ext, const std::optional<GridOverride>& ov) -> Matrix2c {
    Matrix2c sum = Matrix2c::Zero();
    if (k <= j) return sum;
    const int start_ext = grid.ext(j);
    if (deterministic) {
      for (int c = j; c < k; ++c) {
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
          const GridTime s{c, rule.nodes[q]};
          const Complex lb = bath.two_point(s, GridTime::node(k), h);
          sum += (rule.weights[q] * h) *
                 inchworm_rhs_term(cfg, grid, start_ext, std::span<const GridTime>(&s, 1), end_ext, lb, ov);
        }
      }
      return sum;
    }
    std::size_t total = 0;
    for (int p = j; p <= k - 1; ++p) total += store->node_size(p, k);
    if (total == 0) return sum;
    std::vector<double> inv_p;
    for (int m = 1; m <= sampling.m_bar; m += 2) inv_p.push_back(1.0 / density_inch(sampling, j, k, m));
    for (int p = j; p <= k - 1; ++p) {
      store->for_each(p, k, buf, [&](std::span<const GridTime> seq, int m, Complex lb) {
        sum += inv_p[static_cast<std::size_t>(order_index(m))] *
               inchworm_rhs_term(cfg, grid, start_ext, seq, end_ext, lb, ov);
      });
    }
    return sum / static_cast<double>(total);
  };

  // G_{j, target} from G_{j, target - 1}.
  auto step = [&](int j, int target_ext) -> Matrix2c {
    const int k = grid.node_of(target_ext);
    const int k_prev = k - 1;
    const int start_ext = k_prev == 0 ? grid.zero_plus() : grid.ext(k_prev);
    const Matrix2c& g0 = grid.at(grid.ext(j), start_ext);
    const double sgn1 = grid.sign_of(start_ext);
    const Matrix2c f1 = stage_integral(j, k_prev, start_ext, std::nullopt);
    const Matrix2c g_star = g0 + h * (sgn1 * kI * (hamiltonian * g0) + f1);
    if (options.stepper == Stepper::euler) return g_star;
    const double sgn2 = grid.sign_of(target_ext);
    const Matrix2c f2 = stage_integral(j, k, target_ext, GridOverride{grid.ext(j), target_ext, g_star});
    return 0.5 * (g0 + g_star) + (0.5 * h) * (sgn2 * kI * (hamiltonian * g_star) + f2);
  };

  const int zm = grid.zero_minus();
  const int zp = grid.zero_plus();
  for (int s = 1; s <= n; ++s) {
    const int row = grid.ext(-s);
    const Matrix2c g_minus = step(-s, zm);
    grid.set(row, zm, g_minus);
    grid.set(row, zp, cfg.observable * g_minus);
    grid.set(zp, grid.ext(s), g_minus.adjoint());
    grid.set(zm, grid.ext(s), grid.at(row, zp).adjoint());
    for (int l = 1; l <= s; ++l) {
      const Matrix2c g = step(-s, grid.ext(l));
      grid.set(row, grid.ext(l), g);
      if (l < s) grid.set(grid.ext(-l), grid.ext(s), g.adjoint());
    }
    for (int l2 = 1; l2 <= n - s; ++l2) {
      grid.set(grid.ext(-s - l2), grid.ext(-l2), g_minus);
      grid.set(grid.ext(l2), grid.ext(s + l2), grid.at(zp, grid.ext(s)));
    }
  }

  out.g.push_back(grid.at(zm, zp));
  for (int s = 1; s <= n; ++s) out.g.push_back(grid.at(grid.ext(-s), grid.ext(s)));
  return out;
}

}  // namespace bathreuse

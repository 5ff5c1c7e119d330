#include "bathreuse/dyson.hpp"

#include "bathreuse/diagrams.hpp"

#include "quadrature.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace bathreuse {

namespace {

using Clock = std::chrono::steady_clock;

const Complex kI(0.0, 1.0);

// i^{m+1} for odd m, which is real.
double odd_phase(int m) { return ((m + 1) / 2) % 2 == 0 ? 1.0 : -1.0; }

double parity_sign(int negatives) { return negatives % 2 == 0 ? 1.0 : -1.0; }

int count_negative(std::span<const GridTime> seq) {
  int n = 0;
  for (const auto& p : seq) n += p.negative() ? 1 : 0;
  return n;
}

Matrix2c hermitian_part(const Matrix2c& k) { return k + k.adjoint(); }

Matrix2c rhs_commutator(const Matrix2c& hamiltonian, const Matrix2c& g) {
  return kI * commutator(hamiltonian, g);
}

// Applies X -> X + i h [H, X].
Matrix2c alpha(const Matrix2c& hamiltonian, double h, const Matrix2c& x) {
  return x + h * rhs_commutator(hamiltonian, x);
}

Matrix2c alpha_tilde(const Matrix2c& hamiltonian, double h, const Matrix2c& x) {
  return 0.5 * (x + alpha(hamiltonian, h, alpha(hamiltonian, h, x)));
}

// Quadrature of the m = 1 integral over [-t_i, t_i], cell by cell.
Matrix2c deterministic_average(const ModelConfig& cfg, const BathCorrelation& bath, int i, double h,
                               const detail::UnitRule& rule) {
  Matrix2c sum = Matrix2c::Zero();
  for (std::int64_t c = -i; c < i; ++c) {
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const GridTime s{c, rule.nodes[q]};
      const Complex lb = bath.two_point(s, GridTime::node(i), h);
      sum += (rule.weights[q] * h) * dyson_rhs_term(cfg, std::span<const GridTime>(&s, 1), i, h, lb);
    }
  }
  return sum;
}

DysonResult run_deterministic(const ModelConfig& cfg, const BathCorrelation& bath,
                              const SamplingConfig& sampling, const DysonOptions& options) {
  if (sampling.m_bar != 1) throw std::invalid_argument("dyson: deterministic mode requires m_bar = 1");
  const detail::UnitRule rule = detail::unit_rule(options.quadrature_points);
  const Matrix2c hamiltonian = cfg.hamiltonian();
  const int n = sampling.num_steps;
  const double h = sampling.h;
  DysonResult out{{cfg.observable}, CostReport(sampling.m_bar, n)};
  Matrix2c f_prev = Matrix2c::Zero();
  for (int i = 1; i <= n; ++i) {
    const Matrix2c f_curr = deterministic_average(cfg, bath, i, h, rule);
    const Matrix2c& g = out.g.back();
    out.g.push_back(options.stepper == Stepper::heun ? heun_step(g, hamiltonian, h, f_prev, f_curr)
                                                     : euler_step(g, hamiltonian, h, f_prev));
    f_prev = f_curr;
  }
  return out;
}

// 1 / P_i(m) per odd order, indexed by order_index.
std::vector<double> inverse_densities(const SamplingConfig& sampling, int i) {
  std::vector<double> v;
  for (int m = 1; m <= sampling.m_bar; m += 2) v.push_back(1.0 / density_dyson(sampling, i, m));
  return v;
}

Complex timed_functional(const BathCorrelation& bath, std::span<const GridTime> seq, int i, double h,
                         OrderCost& cost) {
  const auto t0 = Clock::now();
  const Complex v = dyson_functional(bath, seq, i, h);
  cost.wall_seconds += std::chrono::duration<double>(Clock::now() - t0).count();
  ++cost.evaluations;
  return v;
}

void record_counts(CostReport& cost, const std::vector<SampleBatch>& batches, int i, int m_bar) {
  for (int m = 1; m <= m_bar; m += 2) {
    std::int64_t total = 0;
    for (int j = 1; j <= i; ++j) total += static_cast<std::int64_t>(batches[j].count_of_order(m));
    cost.add_step_counts(i, m, static_cast<std::int64_t>(batches[i].count_of_order(m)), total);
  }
}

}  // namespace

Matrix2c dyson_rhs_term(const ModelConfig& cfg, const BathCorrelation& bath,
                        std::span<const double> seq, double t) {
  if (seq.empty() || seq.size() % 2 == 0)
    throw std::invalid_argument("dyson_rhs_term: sequence length must be odd");
  std::vector<double> points(seq.begin(), seq.end());
  points.push_back(t);
  int negatives = 0;
  for (double s : seq) negatives += s < 0.0 ? 1 : 0;
  const Matrix2c k = cfg.coupling * u0_functional(cfg, -t, seq, t) * lb_full(bath, points);
  const int m = static_cast<int>(seq.size());
  return (odd_phase(m) * parity_sign(negatives)) * hermitian_part(k);
}

Matrix2c dyson_rhs_term(const ModelConfig& cfg, std::span<const GridTime> seq, int i, double h,
                        Complex lb) {
  const int m = static_cast<int>(seq.size());
  if (m % 2 == 0) throw std::invalid_argument("dyson_rhs_term: sequence length must be odd");
  const Matrix2c k =
      cfg.coupling * u0_functional(cfg, GridTime::node(-i), seq, GridTime::node(i), h) * lb;
  return (odd_phase(m) * parity_sign(count_negative(seq))) * hermitian_part(k);
}

Complex dyson_functional(const BathCorrelation& bath, std::span<const GridTime> seq, int i, double h) {
  std::vector<GridTime> points(seq.begin(), seq.end());
  points.push_back(GridTime::node(i));
  return lb_full(bath, points, h);
}

Matrix2c heun_step(const Matrix2c& g_prev, const Matrix2c& hamiltonian, double h,
                   const Matrix2c& f_prev, const Matrix2c& f_curr) {
  const Matrix2c g_star = g_prev + h * (rhs_commutator(hamiltonian, g_prev) + f_prev);
  return 0.5 * (g_prev + g_star) + (0.5 * h) * (rhs_commutator(hamiltonian, g_star) + f_curr);
}

Matrix2c euler_step(const Matrix2c& g_prev, const Matrix2c& hamiltonian, double h,
                    const Matrix2c& f_prev) {
  return g_prev + h * (rhs_commutator(hamiltonian, g_prev) + f_prev);
}

DysonResult run_dyson(const ModelConfig& cfg, const BathCorrelation& bath,
                      const SamplingConfig& sampling, const DysonOptions& options) {
  cfg.validate();
  sampling.validate();
  if (options.mode == SolveMode::deterministic) return run_deterministic(cfg, bath, sampling, options);

  const bool reuse = options.mode == SolveMode::reuse;
  const int n = sampling.num_steps;
  const double h = sampling.h;
  const Matrix2c hamiltonian = cfg.hamiltonian();
  DysonResult out{{cfg.observable}, CostReport(sampling.m_bar, n)};

  std::vector<SampleBatch> batches(static_cast<std::size_t>(n + 1));
  std::vector<GridTime> buf;
  std::int64_t live = 0;
  std::int64_t total_samples = 0;
  Matrix2c f_prev = Matrix2c::Zero();

  for (int i = 1; i <= n; ++i) {
    SampleBatch& fresh = batches[i];
    fresh = sample_fresh_dyson(sampling, i);
    total_samples += static_cast<std::int64_t>(fresh.size());
    if (reuse) {
      fresh.values.resize(fresh.size());
      for (std::size_t q = 0; q < fresh.size(); ++q)
        fresh.values[q] = timed_functional(bath, fresh.sequence(q), i, h, out.cost.at_order(fresh.order(q)));
      live += static_cast<std::int64_t>(fresh.size());
    } else {
      live = std::max<std::int64_t>(live, 1);
    }
    out.cost.peak_live_values = std::max(out.cost.peak_live_values, live);
    record_counts(out.cost, batches, i, sampling.m_bar);

    const auto inv_p = inverse_densities(sampling, i);
    Matrix2c sum = Matrix2c::Zero();
    for (int j = 1; j <= i; ++j) {
      const SampleBatch& batch = batches[j];
      for (std::size_t q = 0; q < batch.size(); ++q) {
        const auto seq = batch.sequence(q);
        buf.resize(seq.size());
        stretch_into(seq, i - j, buf.data());
        const int m = batch.order(q);
        const Complex lb = reuse ? batch.values[q] : timed_functional(bath, buf, i, h, out.cost.at_order(m));
        sum += inv_p[static_cast<std::size_t>(order_index(m))] * dyson_rhs_term(cfg, buf, i, h, lb);
      }
    }
    const Matrix2c f_curr =
        total_samples > 0 ? Matrix2c(sum / static_cast<double>(total_samples)) : Matrix2c::Zero();

    const Matrix2c& g = out.g.back();
    out.g.push_back(options.stepper == Stepper::heun ? heun_step(g, hamiltonian, h, f_prev, f_curr)
                                                     : euler_step(g, hamiltonian, h, f_prev));
    f_prev = f_curr;
  }
  return out;
}

DysonResult run_dyson_lowmem(const ModelConfig& cfg, const BathCorrelation& bath,
                             const SamplingConfig& sampling, Stepper stepper) {
  cfg.validate();
  sampling.validate();
  const int n = sampling.num_steps;
  const double h = sampling.h;
  const Matrix2c hamiltonian = cfg.hamiltonian();
  DysonResult out{{cfg.observable}, CostReport(sampling.m_bar, n)};

  // theta[i][k] for 1 <= k <= i <= n
  std::vector<std::vector<Matrix2c>> theta(static_cast<std::size_t>(n + 1));
  for (int i = 1; i <= n; ++i) theta[i].assign(static_cast<std::size_t>(i + 1), Matrix2c::Zero());
  std::vector<std::vector<double>> inv_p(static_cast<std::size_t>(n + 1));
  for (int i = 1; i <= n; ++i) inv_p[i] = inverse_densities(sampling, i);

  std::vector<std::int64_t> samples_upto(static_cast<std::size_t>(n + 1), 0);
  std::vector<std::vector<std::int64_t>> fresh_counts(static_cast<std::size_t>(n + 1));
  std::vector<GridTime> buf;

  for (int k = 1; k <= n; ++k) {
    const SampleBatch batch = sample_fresh_dyson(sampling, k);
    samples_upto[k] = samples_upto[k - 1] + static_cast<std::int64_t>(batch.size());
    for (int m = 1; m <= sampling.m_bar; m += 2)
      fresh_counts[k].push_back(static_cast<std::int64_t>(batch.count_of_order(m)));

    for (std::size_t q = 0; q < batch.size(); ++q) {
      const auto seq = batch.sequence(q);
      const int m = batch.order(q);
      const Complex lb = timed_functional(bath, seq, k, h, out.cost.at_order(m));
      out.cost.peak_live_values = std::max<std::int64_t>(out.cost.peak_live_values, 1);
      const double sign = odd_phase(m) * parity_sign(count_negative(seq));
      buf.resize(seq.size());
      for (int i = k; i <= n; ++i) {
        stretch_into(seq, i - k, buf.data());
        const double coef = sign * inv_p[i][static_cast<std::size_t>(order_index(m))];
        theta[i][k] += (coef * lb) *
                       (cfg.coupling * u0_functional(cfg, GridTime::node(-i), buf, GridTime::node(i), h));
      }
    }
  }

  for (int i = 1; i <= n; ++i) {
    for (int m = 1; m <= sampling.m_bar; m += 2) {
      std::int64_t total = 0;
      for (int j = 1; j <= i; ++j) total += fresh_counts[j][static_cast<std::size_t>(order_index(m))];
      out.cost.add_step_counts(i, m, fresh_counts[i][static_cast<std::size_t>(order_index(m))], total);
    }
  }

  std::vector<Matrix2c> f(static_cast<std::size_t>(n + 1), Matrix2c::Zero());
  for (int i = 1; i <= n; ++i) {
    Matrix2c beta = Matrix2c::Zero();
    for (int k = 1; k <= i; ++k) beta += theta[i][k];
    if (samples_upto[i] > 0) beta /= static_cast<double>(samples_upto[i]);
    f[i] = hermitian_part(beta);
  }

  if (stepper == Stepper::heun) {
    // G_i = A_i + h/2 F_i with A_1 = alpha~ O and A_{i+1} = alpha~ A_i + h/2 (alpha + alpha~) F_i
    Matrix2c a = alpha_tilde(hamiltonian, h, cfg.observable);
    for (int i = 1; i <= n; ++i) {
      out.g.push_back(a + (0.5 * h) * f[i]);
      a = alpha_tilde(hamiltonian, h, a) +
          (0.5 * h) * (alpha(hamiltonian, h, f[i]) + alpha_tilde(hamiltonian, h, f[i]));
    }
  } else {
    for (int i = 1; i <= n; ++i)
      out.g.push_back(alpha(hamiltonian, h, out.g.back()) + h * f[i - 1]);
  }
  return out;
}

Matrix2c bare_dqmc(const ModelConfig& cfg, const BathCorrelation& bath, const SamplingConfig& sampling,
                   double t, std::int64_t num_samples) {
  if (!(t > 0.0)) throw std::invalid_argument("bare_dqmc: t must be > 0");
  if (num_samples < 1) throw std::invalid_argument("bare_dqmc: num_samples must be >= 1");
  cfg.validate();
  sampling.validate();

  std::vector<int> orders;
  std::vector<double> weights;
  double lambda = 0.0;
  for (int m = 2; m <= sampling.m_bar + 1; m += 2) {
    double volume = 1.0;
    for (int q = 1; q <= m; ++q) volume *= 2.0 * t / q;
    const double w = volume * double_factorial(m - 1) * std::pow(sampling.b_emp, 0.5 * m);
    orders.push_back(m);
    weights.push_back(w);
    lambda += w;
  }

  Matrix2c sum = Matrix2c::Zero();
  std::int64_t used = 0;
  std::vector<double> s;
  for (std::size_t r = 0; r < orders.size(); ++r) {
    const int m = orders[r];
    const auto count = static_cast<std::int64_t>(
        std::nearbyint(static_cast<double>(num_samples) * weights[r] / lambda));
    const double inv_p = lambda / (double_factorial(m - 1) * std::pow(sampling.b_emp, 0.5 * m));
    const double phase = (m / 2) % 2 == 0 ? 1.0 : -1.0;
    RandomStream rng(sampling.seed, region_stream_id(RegionKind::bare, 0, 0, m));
    s.resize(static_cast<std::size_t>(m));
    for (std::int64_t q = 0; q < count; ++q) {
      for (auto& v : s) v = rng.uniform(-t, t);
      std::sort(s.begin(), s.end());
      int negatives = 0;
      for (double v : s) negatives += v < 0.0 ? 1 : 0;
      sum += (inv_p * phase * parity_sign(negatives) * lb_full(bath, s)) * u0_functional(cfg, -t, s, t);
    }
    used += count;
  }
  const Matrix2c base = bare_propagator(cfg, -t, t);
  return used > 0 ? Matrix2c(base + sum / static_cast<double>(used)) : base;
}

}  // namespace bathreuse

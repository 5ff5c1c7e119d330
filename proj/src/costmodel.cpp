#include "bathreuse/costmodel.hpp"

#include "bathreuse/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace bathreuse {

namespace {

long double power_sum(int m, int from, int to) {
  long double s = 0.0L;
  for (int j = from; j <= to; ++j) s += std::pow(static_cast<long double>(j), m);
  return s;
}

void check_args(int m, int n) {
  if (m < 1 || n < 1) throw std::invalid_argument("cost ratio: requires m >= 1 and N >= 1");
}

}  // namespace

CostReport::CostReport(int m_bar, int num_steps)
    : orders(static_cast<std::size_t>((m_bar + 1) / 2)),
      fresh_by_step(static_cast<std::size_t>(num_steps),
                    std::vector<std::int64_t>(static_cast<std::size_t>((m_bar + 1) / 2), 0)),
      total_by_step(fresh_by_step) {}

void CostReport::add_step_counts(int n, int m, std::int64_t fresh, std::int64_t total) {
  const auto step = static_cast<std::size_t>(n - 1);
  const auto r = static_cast<std::size_t>((m - 1) / 2);
  fresh_by_step.at(step).at(r) += fresh;
  total_by_step.at(step).at(r) += total;
  orders.at(r).fresh_count += fresh;
  orders.at(r).total_count += total;
}

std::int64_t CostReport::cumulative_fresh(int n, int m) const {
  std::int64_t s = 0;
  for (int q = 0; q < n; ++q)
    s += fresh_by_step.at(static_cast<std::size_t>(q)).at(static_cast<std::size_t>((m - 1) / 2));
  return s;
}

std::int64_t CostReport::cumulative_total(int n, int m) const {
  std::int64_t s = 0;
  for (int q = 0; q < n; ++q)
    s += total_by_step.at(static_cast<std::size_t>(q)).at(static_cast<std::size_t>((m - 1) / 2));
  return s;
}

double r_dyson(int m, int n) {
  check_args(m, n);
  return static_cast<double>(1.0L - std::pow(static_cast<long double>(n), m) / power_sum(m, 1, n));
}

double r_inch(int m, int n) {
  check_args(m, n);
  const auto p = [m](int j) { return std::pow(static_cast<long double>(j), m); };
  const long double num = p(2 * n) + p(2 * n - 1) - p(n) - p(n - 1);
  const long double den = power_sum(m, n + 1, 2 * n) - power_sum(m, 1, n - 1);
  return static_cast<double>(1.0L - num / den);
}

double r_dyson_asymptotic(int m, int n) {
  check_args(m, n);
  return 1.0 - static_cast<double>(m + 1) / n;
}

double r_inch_asymptotic(int m, int n) {
  check_args(m, n);
  const double factor = (1.0 - std::pow(0.5, m + 1)) / (1.0 - std::pow(0.5, m));
  return 1.0 - factor * static_cast<double>(m + 1) / n;
}

double r_time(std::span<const double> weights, std::span<const double> fresh,
              std::span<const double> total) {
  if (weights.size() != fresh.size() || weights.size() != total.size())
    throw std::invalid_argument("r_time: weights and counts cover different orders");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t r = 0; r < weights.size(); ++r) {
    if (!(weights[r] > 0.0)) throw std::invalid_argument("r_time: weights must be positive");
    num += fresh[r] * weights[r];
    den += total[r] * weights[r];
  }
  if (!(den > 0.0)) throw std::invalid_argument("r_time: no functionals counted");
  return 1.0 - num / den;
}

std::vector<double> model_fresh_counts(SolverKind kind, int n, int m_bar, double b_emp, double h) {
  std::vector<double> out;
  for (int m = 1; m <= m_bar; m += 2) {
    const double w = double_factorial(m) * std::pow(b_emp, 0.5 * (m + 1));
    double vol = 0.0;
    if (kind == SolverKind::dyson) {
      vol = region_volume_dyson(m, n, h);
    } else {
      for (int p = -n; p <= -1; ++p)
        for (int k = 0; k <= n; ++k) vol += region_volume_inch_fresh(m, p, k, h);
    }
    out.push_back(vol * w);
  }
  return out;
}

std::vector<double> model_total_counts(SolverKind kind, int n, int m_bar, double b_emp, double h) {
  std::vector<double> out;
  for (int m = 1; m <= m_bar; m += 2) {
    const double w = double_factorial(m) * std::pow(b_emp, 0.5 * (m + 1));
    double vol = 0.0;
    if (kind == SolverKind::dyson) {
      for (int i = 1; i <= n; ++i) vol += region_volume_dyson(m, i, h);
    } else {
      for (int p = -n; p <= -1; ++p)
        for (int k = 0; k <= n; ++k) vol += region_volume_inch(m, p, k, h);
    }
    out.push_back(vol * w);
  }
  return out;
}

double r_time_model(SolverKind kind, int n, int m_bar, double b_emp, double h,
                    std::span<const double> weights) {
  const auto fresh = model_fresh_counts(kind, n, m_bar, b_emp, h);
  const auto total = model_total_counts(kind, n, m_bar, b_emp, h);
  return r_time(weights, fresh, total);
}

std::vector<double> power_weights(double base, int m_bar) {
  std::vector<double> w;
  for (int m = 1; m <= m_bar; m += 2) w.push_back(std::pow(base, m));
  return w;
}

std::vector<double> reference_lb_seconds() { return {1.01e-4, 3.28e-4, 6.72e-4, 0.0011, 0.0016, 0.0023}; }

std::vector<double> reference_lbc_seconds() { return {8.8e-5, 4.02e-4, 0.0010, 0.0025, 0.0053, 0.0118}; }

}  // namespace bathreuse

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bathreuse {

/// Evaluation counters for one odd order m.
struct OrderCost {
  std::int64_t fresh_count = 0;  ///< functionals that must be evaluated with reuse
  std::int64_t total_count = 0;  ///< functionals used across all steps
  std::int64_t evaluations = 0;  ///< functionals actually evaluated in this run
  double wall_seconds = 0.0;     ///< time spent in those evaluations

  double mean_seconds() const { return evaluations > 0 ? wall_seconds / evaluations : 0.0; }
};

/// Counters for a solver run. Per-step vectors hold the counts attributed to
/// each outer step n = 1..N (not cumulative).
struct CostReport {
  std::vector<OrderCost> orders;  // index (m - 1) / 2
  std::vector<std::vector<std::int64_t>> fresh_by_step;
  std::vector<std::vector<std::int64_t>> total_by_step;
  std::int64_t peak_live_values = 0;  ///< most functional values held at once

  explicit CostReport(int m_bar = 1, int num_steps = 0);

  int m_bar() const { return 2 * static_cast<int>(orders.size()) - 1; }
  int num_steps() const { return static_cast<int>(fresh_by_step.size()); }
  OrderCost& at_order(int m) { return orders[static_cast<std::size_t>((m - 1) / 2)]; }
  const OrderCost& at_order(int m) const { return orders[static_cast<std::size_t>((m - 1) / 2)]; }

  /// Record that step n uses `fresh` new and `total` functionals of order m.
  void add_step_counts(int n, int m, std::int64_t fresh, std::int64_t total);

  /// Cumulative counts of order m over steps 1..n.
  std::int64_t cumulative_fresh(int n, int m) const;
  std::int64_t cumulative_total(int n, int m) const;
};

/// Saved fraction 1 - N^m / sum_{j<=N} j^m for the Dyson solver.
double r_dyson(int m, int n);

/// Saved fraction for the inchworm solver,
/// 1 - [(2N)^m + (2N-1)^m - N^m - (N-1)^m] / [sum_{j=N+1}^{2N} j^m - sum_{j=1}^{N-1} j^m].
double r_inch(int m, int n);

/// Large-N forms: 1 - (m+1)/N and 1 - (1 - 2^-(m+1)) / (1 - 2^-m) (m+1)/N.
double r_dyson_asymptotic(int m, int n);
double r_inch_asymptotic(int m, int n);

/// 1 - sum fresh_m w_m / sum total_m w_m. All spans must have equal length.
double r_time(std::span<const double> weights, std::span<const double> fresh,
              std::span<const double> total);

enum class SolverKind { dyson, inchworm };

/// Closed-form count model at horizon n (per odd order up to m_bar), up to a
/// common factor M0 / lambda_hat.
std::vector<double> model_fresh_counts(SolverKind kind, int n, int m_bar, double b_emp, double h);
std::vector<double> model_total_counts(SolverKind kind, int n, int m_bar, double b_emp, double h);

/// R_T from the count model with per-order weights.
double r_time_model(SolverKind kind, int n, int m_bar, double b_emp, double h,
                    std::span<const double> weights);

/// Weights base^m for odd m <= m_bar (2 for Dyson, 2.1258 for inchworm).
std::vector<double> power_weights(double base, int m_bar);

/// Reference per-evaluation times for m = 1, 3, ..., 11 (seconds).
std::vector<double> reference_lb_seconds();
std::vector<double> reference_lbc_seconds();

inline constexpr double kInchwormComplexityBase = 2.1258;

}  // namespace bathreuse

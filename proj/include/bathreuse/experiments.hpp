#pragma once

#include "bathreuse/config.hpp"
#include "bathreuse/costmodel.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace bathreuse {

/// Raised when a run breaks a property it is required to keep, such as
/// reuse and no-reuse trajectories agreeing bit for bit.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Propagators G_{-n,n} on t_n = n h with the run's counters.
struct Trajectory {
  double h = 0.0;
  std::vector<Matrix2c> g;
  std::vector<Complex> observable;  ///< tr(rho_s G_{-n,n})
  CostReport cost;

  double time(std::size_t n) const { return static_cast<double>(n) * h; }
};

/// One run of the configured solver.
Trajectory observable_trajectory(const RunConfig& cfg);

struct AccuracyResult {
  std::vector<double> h;
  std::vector<Trajectory> runs;
  /// max_t |<sigma_z>_{h_q} - <sigma_z>_{h_{q+1}}| over the common time points.
  std::vector<double> sup_differences;
  /// ||G_{h_q}(T) - G_{h_{q+1}}(T)||_F at the final time T.
  std::vector<double> final_differences;
  /// log2 of successive final-difference ratios; needs a halving ladder.
  std::vector<double> observed_orders;
};

/// Runs the solver for every h of the ladder up to the same final time.
AccuracyResult accuracy_study(const RunConfig& cfg);

struct ConvergenceResult {
  std::vector<double> times;
  std::vector<std::int64_t> m0;
  std::vector<std::vector<double>> sigma;  ///< sigma[ladder index][n]
  std::size_t eval_index = 0;              ///< step closest to t_eval
  double slope = 0.0;                      ///< fitted d log sigma / d log M0 at t_eval
};

/// Standard deviation of G_{-n,n} in the Frobenius norm over `repetitions`
/// runs per ladder entry, measured against one run at reference_m0.
/// Repetition k of ladder entry q uses seed mix_seed(seed, q * repetitions + k + 1).
ConvergenceResult convergence_study(const RunConfig& cfg);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct RatioRow {
  int n = 0;
  std::vector<double> r_by_order;  ///< R^(1), R^(3), ..., R^(m_bar)
  double r_time_model = 0.0;
  double r_time_real = 0.0;
};

struct EfficiencyResult {
  Trajectory reuse;
  Trajectory no_reuse;
  std::vector<RatioRow> ratios;
};

/// Ratio curves for n = 1..N. R_T^real weighs the instrumented counts of
/// `cost` with the mean evaluation time per order measured in `timing`.
std::vector<RatioRow> ratio_rows(const RunConfig& cfg, const CostReport& cost,
                                 const CostReport& timing);

/// Runs reuse and no-reuse with the same seed. Throws InvariantError if the
/// trajectories differ in any bit.
EfficiencyResult efficiency_report(const RunConfig& cfg);

std::string format_number(double x);
std::string trajectory_csv(const Trajectory& tr);
std::string accuracy_csv(const AccuracyResult& res);
std::string convergence_csv(const ConvergenceResult& res);
std::string ratio_csv(const std::vector<RatioRow>& rows, int m_bar);
std::string cost_report_json(const CostReport& cost);

/// Writes `text` to dir/name, creating dir if needed; returns the path.
std::string write_output(const std::string& dir, const std::string& name, const std::string& text);

}  // namespace bathreuse

#pragma once

#include "bathreuse/bath.hpp"
#include "bathreuse/dyson.hpp"
#include "bathreuse/sampling.hpp"
#include "bathreuse/spinsys.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bathreuse {

enum class Solver { dyson, inchworm, bare_dqmc };

/// Everything an experiment needs. The JSON form uses the same field names:
///
///   model:    {epsilon, delta, observable, coupling, rho}, matrices as
///             2x2 nested arrays of [re, im] pairs
///   bath:     {xi, omega_c, omega_max, beta, num_modes}
///   sampling: {b_emp, m_bar, m0_hat, h, num_steps, seed}
///   solver "dyson" | "inchworm" | "bare-dqmc", mode "reuse" | "no-reuse" |
///   "deterministic", stepper "heun" | "euler", low_memory, quadrature_points,
///   repetitions, m0_ladder, reference_m0, h_ladder, t_eval, out_dir
///
/// Missing keys keep the value of the base config; a bath block without
/// omega_max uses 4 omega_c.
struct RunConfig {
  ModelConfig model;
  BathSpec bath;
  SamplingConfig sampling;
  Solver solver = Solver::dyson;
  SolveMode mode = SolveMode::reuse;
  Stepper stepper = Stepper::heun;
  bool low_memory = false;  ///< Dyson with partial sums instead of stored values
  int quadrature_points = 8;
  int repetitions = 100;    ///< N_exp of the convergence study
  std::vector<std::int64_t> m0_ladder{16, 64, 256, 1024};
  std::int64_t reference_m0 = 10000;
  std::vector<double> h_ladder{0.2, 0.1, 0.05};
  double t_eval = 1.0;      ///< time at which the convergence slope is fitted
  std::string out_dir = ".";

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

bool operator==(const ModelConfig& a, const ModelConfig& b);
bool operator==(const RunConfig& a, const RunConfig& b);

std::string emit_config(const RunConfig& cfg);
/// Parses JSON text on top of `base`. Throws std::invalid_argument on
/// malformed input or unknown enum names.
RunConfig parse_config(std::string_view text, const RunConfig& base = {});
RunConfig load_config(const std::string& path, const RunConfig& base = {});

/// "fig6-left", "fig6-right" or "convergence".
RunConfig preset(std::string_view name);
std::vector<std::string> preset_names();

std::string to_string(Solver s);
std::string to_string(SolveMode m);
std::string to_string(Stepper s);
Solver parse_solver(std::string_view s);
SolveMode parse_mode(std::string_view s);
Stepper parse_stepper(std::string_view s);

}  // namespace bathreuse

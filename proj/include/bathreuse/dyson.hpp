#pragma once

#include "bathreuse/bath.hpp"
#include "bathreuse/costmodel.hpp"
#include "bathreuse/sampling.hpp"
#include "bathreuse/spinsys.hpp"

#include <span>
#include <vector>

namespace bathreuse {

enum class SolveMode { reuse, no_reuse, deterministic };
enum class Stepper { heun, euler };

struct DysonOptions {
  SolveMode mode = SolveMode::reuse;
  Stepper stepper = Stepper::heun;
  int quadrature_points = 8;  ///< Gauss-Legendre points per cell, deterministic mode
};

/// G_0, ..., G_N together with the evaluation counters of the run.
struct DysonResult {
  std::vector<Matrix2c> g;
  CostReport cost;
};

/// i^{m+1} (-1)^{#{s<0}} (K + K^dagger) with K = W U^(0)(-t, s, t) L_b(s, t),
/// for real times -t < s_1 < ... < s_m < t.
Matrix2c dyson_rhs_term(const ModelConfig& cfg, const BathCorrelation& bath,
                        std::span<const double> seq, double t);

/// Same term on grid times with endpoint node i and a known L_b value.
Matrix2c dyson_rhs_term(const ModelConfig& cfg, std::span<const GridTime> seq, int i, double h,
                        Complex lb);

/// L_b(s, t_i) for grid points s and endpoint node i.
Complex dyson_functional(const BathCorrelation& bath, std::span<const GridTime> seq, int i, double h);

/// One Heun step: G_{i-1} and the Monte Carlo averages F_{i-1}, F_i give G_i.
Matrix2c heun_step(const Matrix2c& g_prev, const Matrix2c& hamiltonian, double h,
                   const Matrix2c& f_prev, const Matrix2c& f_curr);

/// One forward Euler step.
Matrix2c euler_step(const Matrix2c& g_prev, const Matrix2c& hamiltonian, double h,
                    const Matrix2c& f_prev);

/// Sequences of Algorithm-1 style runs: each step draws a fresh batch and
/// reuses every earlier batch stretched to the current step.
DysonResult run_dyson(const ModelConfig& cfg, const BathCorrelation& bath,
                      const SamplingConfig& sampling, const DysonOptions& options = {});

/// Partial-sum variant: each functional value is folded into all later steps
/// as soon as it is computed, then dropped.
DysonResult run_dyson_lowmem(const ModelConfig& cfg, const BathCorrelation& bath,
                             const SamplingConfig& sampling, Stepper stepper = Stepper::heun);

/// One-shot estimate of G(-t, t) from the truncated series with
/// `num_samples` sequences of even order 2..m_bar+1, stratified by order.
Matrix2c bare_dqmc(const ModelConfig& cfg, const BathCorrelation& bath,
                   const SamplingConfig& sampling, double t, std::int64_t num_samples);

}  // namespace bathreuse

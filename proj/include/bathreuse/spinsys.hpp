#pragma once

#include "bathreuse/time_grid.hpp"
#include "bathreuse/types.hpp"

#include <cmath>
#include <span>
#include <stdexcept>

namespace bathreuse {

/// Two-level system H_s = epsilon sigma_z + delta sigma_x with coupling W_s,
/// observable O_s and initial state rho_s.
struct ModelConfig {
  double epsilon = 1.0;
  double delta = 1.0;
  Matrix2c observable = pauli::sigma_z();
  Matrix2c coupling = pauli::sigma_z();
  Matrix2c rho = (Matrix2c() << 1, 0, 0, 0).finished();

  Matrix2c hamiltonian() const { return epsilon * pauli::sigma_z() + delta * pauli::sigma_x(); }

  /// Throws std::invalid_argument if O_s or W_s is not Hermitian or tr(rho) != 1.
  void validate() const;
};

/// e^{-i tau H} for H = epsilon sigma_z + delta sigma_x, in closed form.
template <typename Real>
Propagator<Real> evolution(Real epsilon, Real delta, Real tau) {
  using C = std::complex<Real>;
  const Real norm = std::hypot(epsilon, delta);
  Propagator<Real> u = Propagator<Real>::Identity();
  if (norm == Real(0)) return u;
  const Real c = std::cos(norm * tau);
  const Real s = std::sin(norm * tau) / norm;
  // cos I - i sin H/|H|
  u(0, 0) = C(c, -s * epsilon);
  u(1, 1) = C(c, s * epsilon);
  u(0, 1) = C(0, -s * delta);
  u(1, 0) = C(0, -s * delta);
  return u;
}

inline Matrix2c evolution(const ModelConfig& cfg, double tau) {
  return evolution<double>(cfg.epsilon, cfg.delta, tau);
}

/// Bare propagator G_s^(0)(s_i, s_f) for s_i <= s_f:
///   e^{-i (s_f - s_i) H}           if s_i <= s_f < 0,
///   e^{-i (s_i - s_f) H}           if 0 <= s_i <= s_f,
///   e^{i s_f H} O_s e^{i s_i H}    if s_i < 0 <= s_f.
Matrix2c bare_propagator(const ModelConfig& cfg, double s_i, double s_f);

/// Grid-time version; the branch is decided by the cell sign so a point at
/// exactly 0 belongs to the non-negative side.
Matrix2c bare_propagator(const ModelConfig& cfg, GridTime s_i, GridTime s_f, double h);

/// U^(0)(s_i, s, s_f) = G(s_m, s_f) W G(s_{m-1}, s_m) W ... W G(s_1, s_2) W G(s_i, s_1).
Matrix2c u0_functional(const ModelConfig& cfg, double s_i, std::span<const double> times,
                       double s_f);

Matrix2c u0_functional(const ModelConfig& cfg, GridTime s_i, std::span<const GridTime> times,
                       GridTime s_f, double h);

/// tr(rho_s G), the observable read off a propagator value.
inline Complex expectation(const ModelConfig& cfg, const Matrix2c& g) { return (cfg.rho * g).trace(); }

}  // namespace bathreuse

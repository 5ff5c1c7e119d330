#pragma once

#include <Eigen/Dense>

#include <complex>

namespace bathreuse {

using Complex = std::complex<double>;

/// 2x2 complex matrix over a real scalar type (a propagator value).
template <typename Real>
using Propagator = Eigen::Matrix<std::complex<Real>, 2, 2>;

using Matrix2c = Propagator<double>;

namespace pauli {

template <typename Real = double>
inline Propagator<Real> identity() {
  return Propagator<Real>::Identity();
}

template <typename Real = double>
inline Propagator<Real> sigma_x() {
  Propagator<Real> m;
  m << 0, 1, 1, 0;
  return m;
}

template <typename Real = double>
inline Propagator<Real> sigma_y() {
  using C = std::complex<Real>;
  Propagator<Real> m;
  m << C(0), C(0, -1), C(0, 1), C(0);
  return m;
}

template <typename Real = double>
inline Propagator<Real> sigma_z() {
  Propagator<Real> m;
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace pauli

/// Max-abs deviation of `m` from Hermitian.
template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Entry-wise max-abs distance.
template <typename A, typename B>
double max_abs_diff(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// Commutator [a, b].
template <typename A, typename B>
auto commutator(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return (a * b - b * a).eval();
}

}  // namespace bathreuse

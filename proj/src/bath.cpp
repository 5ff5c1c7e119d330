#include "bathreuse/bath.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bathreuse {

void BathSpec::validate() const {
  if (!(xi >= 0.0) || !std::isfinite(xi)) throw std::invalid_argument("bath: xi must be >= 0");
  if (!(omega_c > 0.0)) throw std::invalid_argument("bath: omega_c must be > 0");
  if (!(omega_max > 0.0)) throw std::invalid_argument("bath: omega_max must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("bath: beta must be > 0");
  if (num_modes < 1) throw std::invalid_argument("bath: num_modes must be >= 1");
}

BathCorrelation::BathCorrelation(std::vector<double> couplings, std::vector<double> frequencies,
                                 double beta)
    : couplings_(std::move(couplings)), frequencies_(std::move(frequencies)), beta_(beta) {
  if (couplings_.size() != frequencies_.size())
    throw std::invalid_argument("bath: coupling and frequency tables differ in length");
  if (!(beta_ > 0.0)) throw std::invalid_argument("bath: beta must be > 0");
  sin_weight_.reserve(frequencies_.size());
  cos_weight_.reserve(frequencies_.size());
  for (std::size_t l = 0; l < frequencies_.size(); ++l) {
    const double w = frequencies_[l];
    if (!(w > 0.0)) throw std::invalid_argument("bath: frequencies must be positive");
    const double weight = couplings_[l] * couplings_[l] / (2.0 * w);
    sin_weight_.push_back(weight);
    cos_weight_.push_back(weight / std::tanh(0.5 * beta_ * w));
  }
}

Complex BathCorrelation::direct(double dtau) const {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t l = 0; l < frequencies_.size(); ++l) {
    const double arg = frequencies_[l] * dtau;
    re += cos_weight_[l] * std::cos(arg);
    im -= sin_weight_[l] * std::sin(arg);
  }
  return {re, im};
}

Complex BathCorrelation::b_star(double dtau) const {
  if (table_) {
    const auto k = static_cast<std::int64_t>(std::llround(dtau / table_->step));
    if (k >= -table_->half_width && k <= table_->half_width)
      return table_->values[static_cast<std::size_t>(k + table_->half_width)];
  }
  return direct(dtau);
}

Complex BathCorrelation::two_point(double tau1, double tau2) const {
  if (tau1 > tau2)
    throw std::invalid_argument("two_point: requires tau1 <= tau2, got " + std::to_string(tau1) +
                                " > " + std::to_string(tau2));
  return b_star(std::abs(tau1) - std::abs(tau2));
}

void BathCorrelation::enable_table(double step, double max_abs_dtau) {
  if (!(step > 0.0) || !(max_abs_dtau > 0.0))
    throw std::invalid_argument("bath table: step and range must be positive");
  auto table = std::make_shared<Table>();
  table->step = step;
  table->half_width = static_cast<std::int64_t>(std::ceil(max_abs_dtau / step));
  table->values.reserve(static_cast<std::size_t>(2 * table->half_width + 1));
  for (std::int64_t k = -table->half_width; k <= table->half_width; ++k)
    table->values.push_back(direct(static_cast<double>(k) * step));
  table_ = std::move(table);
}

BathCorrelation build_bath(const BathSpec& spec) {
  spec.validate();
  const auto modes = static_cast<std::size_t>(spec.num_modes);
  const double tail = 1.0 - std::exp(-spec.omega_max / spec.omega_c);
  const double scale = std::sqrt(spec.xi * spec.omega_c * tail / spec.num_modes);
  std::vector<double> c(modes);
  std::vector<double> w(modes);
  for (std::size_t l = 1; l <= modes; ++l) {
    const double x = static_cast<double>(l) / spec.num_modes * tail;
    w[l - 1] = -spec.omega_c * std::log1p(-x);
    c[l - 1] = w[l - 1] * scale;
  }
  return BathCorrelation(std::move(c), std::move(w), spec.beta);
}

}  // namespace bathreuse

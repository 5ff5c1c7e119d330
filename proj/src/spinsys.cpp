#include "bathreuse/spinsys.hpp"

#include <string>

namespace bathreuse {

void ModelConfig::validate() const {
  if (!std::isfinite(epsilon) || !std::isfinite(delta))
    throw std::invalid_argument("model: epsilon and delta must be finite");
  if (hermiticity_defect(observable) > 1e-14)
    throw std::invalid_argument("model: observable must be Hermitian");
  if (hermiticity_defect(coupling) > 1e-14)
    throw std::invalid_argument("model: coupling must be Hermitian");
  if (std::abs(rho.trace() - Complex(1.0, 0.0)) > 1e-12)
    throw std::invalid_argument("model: rho must have unit trace");
}

Matrix2c bare_propagator(const ModelConfig& cfg, double s_i, double s_f) {
  if (s_i > s_f)
    throw std::invalid_argument("bare_propagator: requires s_i <= s_f, got " + std::to_string(s_i) +
                                " > " + std::to_string(s_f));
  if (s_f < 0.0) return evolution(cfg, s_f - s_i);
  if (s_i >= 0.0) return evolution(cfg, s_i - s_f);
  return evolution(cfg, -s_f) * cfg.observable * evolution(cfg, -s_i);
}

Matrix2c bare_propagator(const ModelConfig& cfg, GridTime s_i, GridTime s_f, double h) {
  if (s_f < s_i) throw std::invalid_argument("bare_propagator: requires s_i <= s_f");
  if (s_f.negative() || !s_i.negative()) {
    const double span = static_cast<double>(s_f.cell - s_i.cell) + (s_f.frac - s_i.frac);
    return evolution(cfg, s_f.negative() ? span * h : -span * h);
  }
  return evolution(cfg, -s_f.value(h)) * cfg.observable * evolution(cfg, -s_i.value(h));
}

Matrix2c u0_functional(const ModelConfig& cfg, double s_i, std::span<const double> times,
                       double s_f) {
  double prev = s_i;
  Matrix2c acc = Matrix2c::Identity();
  bool first = true;
  for (double s : times) {
    if (s < prev) throw std::invalid_argument("u0_functional: times must be ordered");
    const Matrix2c g = bare_propagator(cfg, prev, s);
    acc = first ? g : Matrix2c(g * cfg.coupling * acc);
    first = false;
    prev = s;
  }
  if (s_f < prev) throw std::invalid_argument("u0_functional: times must be ordered");
  const Matrix2c g = bare_propagator(cfg, prev, s_f);
  return first ? g : Matrix2c(g * cfg.coupling * acc);
}

Matrix2c u0_functional(const ModelConfig& cfg, GridTime s_i, std::span<const GridTime> times,
                       GridTime s_f, double h) {
  GridTime prev = s_i;
  Matrix2c acc = Matrix2c::Identity();
  bool first = true;
  for (const GridTime& s : times) {
    const Matrix2c g = bare_propagator(cfg, prev, s, h);
    acc = first ? g : Matrix2c(g * cfg.coupling * acc);
    first = false;
    prev = s;
  }
  const Matrix2c g = bare_propagator(cfg, prev, s_f, h);
  return first ? g : Matrix2c(g * cfg.coupling * acc);
}

}  // namespace bathreuse

#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <stdexcept>
#include <vector>

namespace bathreuse::detail {

/// Gauss-Legendre rule mapped to [0, 1].
struct UnitRule {
  std::vector<double> nodes;
  std::vector<double> weights;  // sum to 1
};

template <unsigned N>
UnitRule gauss_on_unit_interval() {
  using rule = boost::math::quadrature::gauss<double, N>;
  UnitRule q;
  const auto& x = rule::abscissa();
  const auto& w = rule::weights();
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] == 0.0) {
      q.nodes.push_back(0.5);
      q.weights.push_back(0.5 * w[k]);
      continue;
    }
    q.nodes.push_back(0.5 * (1.0 - x[k]));
    q.weights.push_back(0.5 * w[k]);
    q.nodes.push_back(0.5 * (1.0 + x[k]));
    q.weights.push_back(0.5 * w[k]);
  }
  return q;
}

inline UnitRule unit_rule(int points) {
  switch (points) {
    case 4: return gauss_on_unit_interval<4>();
    case 8: return gauss_on_unit_interval<8>();
    case 16: return gauss_on_unit_interval<16>();
    default: throw std::invalid_argument("quadrature_points must be 4, 8 or 16");
  }
}

}  // namespace bathreuse::detail

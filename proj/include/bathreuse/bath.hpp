#pragma once

#include "bathreuse/time_grid.hpp"
#include "bathreuse/types.hpp"

#include <memory>
#include <span>
#include <vector>

namespace bathreuse {

/// Parameters of a discretised Ohmic bath.
struct BathSpec {
  double xi = 0.2;          ///< Kondo parameter
  double omega_c = 2.5;     ///< primary frequency
  double omega_max = 10.0;  ///< cutoff frequency
  double beta = 5.0;        ///< inverse temperature
  int num_modes = 400;

  /// Ohmic parameters with the usual cutoff omega_max = 4 omega_c.
  static BathSpec ohmic(double xi, double omega_c, double beta, int num_modes = 400) {
    return {xi, omega_c, 4.0 * omega_c, beta, num_modes};
  }

  /// Throws std::invalid_argument on a non-physical parameter set.
  /// xi = 0 is accepted and yields a decoupled bath.
  void validate() const;

  friend bool operator==(const BathSpec&, const BathSpec&) = default;
};

/// Two-point bath correlation of a finite set of harmonic modes,
///
///   B*(x) = sum_l c_l^2 / (2 w_l) [coth(beta w_l / 2) cos(w_l x) - i sin(w_l x)],
///
/// and B(tau1, tau2) = B*(|tau1| - |tau2|). Immutable once built; an optional
/// nearest-node lookup table can be attached for production runs.
class BathCorrelation {
 public:
  BathCorrelation(std::vector<double> couplings, std::vector<double> frequencies, double beta);

  Complex b_star(double dtau) const;

  /// B(tau1, tau2) for tau1 <= tau2.
  Complex two_point(double tau1, double tau2) const;

  /// B between two grid points. Exact under stretching; no ordering check so
  /// callers that already hold ordered sequences do not pay for it.
  Complex two_point(GridTime a, GridTime b, double h) const {
    return b_star(abs_difference_units(a, b) * h);
  }

  std::span<const double> couplings() const { return couplings_; }
  std::span<const double> frequencies() const { return frequencies_; }
  double beta() const { return beta_; }
  std::size_t num_modes() const { return frequencies_.size(); }

  /// Evaluate B* on the nodes k*step, |k*step| <= max_abs_dtau, and serve
  /// later calls from the nearest node. Changes results at O(step).
  void enable_table(double step, double max_abs_dtau);
  void disable_table() { table_.reset(); }
  bool table_enabled() const { return table_ != nullptr; }

 private:
  struct Table {
    double step = 0.0;
    std::int64_t half_width = 0;
    std::vector<Complex> values;
  };

  Complex direct(double dtau) const;

  std::vector<double> couplings_;
  std::vector<double> frequencies_;
  double beta_;
  std::vector<double> sin_weight_;  // c^2 / (2 w)
  std::vector<double> cos_weight_;  // c^2 / (2 w) * coth(beta w / 2)
  std::shared_ptr<const Table> table_;
};

BathCorrelation build_bath(const BathSpec& spec);

}  // namespace bathreuse

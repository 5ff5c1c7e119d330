#pragma once

#include "bathreuse/rng.hpp"
#include "bathreuse/time_grid.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace bathreuse {

/// Monte Carlo parameters shared by both solvers.
struct SamplingConfig {
  double b_emp = 0.1;        ///< empirical bath magnitude used for allocation
  int m_bar = 11;            ///< series truncation (odd)
  std::int64_t m0_hat = 1000;
  double h = 0.05;
  int num_steps = 40;
  std::uint64_t seed = 1;

  void validate() const;
  double t_max() const { return num_steps * h; }
  int num_orders() const { return (m_bar + 1) / 2; }

  friend bool operator==(const SamplingConfig&, const SamplingConfig&) = default;
};

/// Odd orders m = 1, 3, ... are stored at index (m - 1) / 2.
constexpr int order_index(int m) { return (m - 1) / 2; }
constexpr int order_of(int index) { return 2 * index + 1; }

/// n!! with 0!! = (-1)!! = 1.
double double_factorial(int n);

/// |T_i^(m)| = (2 t_i)^m / m! and the fresh part |T_i^(m)| - |T_{i-1}^(m)|.
double region_volume_dyson(int m, int i, double h);
double region_volume_dyson_fresh(int m, int i, double h);

/// |T_{p,k}^(m)| = [t_{k-p}^m - t_{k-p-1}^m] / m!; the fresh part subtracts
/// |T_{p+1,k-1}^(m)| unless p = -1 or k = 0.
double region_volume_inch(int m, int p, int k, double h);
double region_volume_inch_fresh(int m, int p, int k, double h);

/// Per-order fresh sample counts, round-half-even of
/// M0 / lambda * |fresh volume| * m!! * B^((m+1)/2).
std::vector<std::int64_t> allocate_dyson(const SamplingConfig& cfg, int i);
std::vector<std::int64_t> allocate_inch(const SamplingConfig& cfg, int p, int k);

/// Sampling densities P_i(m) and P_{j,k}(m) (constant in s).
double density_dyson(const SamplingConfig& cfg, int i, int m);
double density_inch(const SamplingConfig& cfg, int j, int k, int m);

/// Region membership, all coordinates in units of h.
bool in_dyson_region(std::span<const GridTime> seq, int i);
bool in_dyson_fresh(std::span<const GridTime> seq, int i);
bool in_inch_region(std::span<const GridTime> seq, int p, int k);
bool in_inch_fresh(std::span<const GridTime> seq, int p, int k);

/// Time sequences of mixed orders stored contiguously, grouped by order.
class SampleBatch {
 public:
  std::size_t size() const { return orders_.size(); }
  bool empty() const { return orders_.empty(); }
  int order(std::size_t idx) const { return orders_[idx]; }
  std::span<const GridTime> sequence(std::size_t idx) const {
    return {points_.data() + offsets_[idx], static_cast<std::size_t>(orders_[idx])};
  }
  TimeSequence to_sequence(std::size_t idx) const {
    const auto s = sequence(idx);
    return {std::vector<GridTime>(s.begin(), s.end())};
  }
  std::size_t count_of_order(int m) const;

  void push_back(std::span<const GridTime> seq);

  /// Cached bath functional values, one per sequence once filled.
  std::vector<std::complex<double>> values;

 private:
  std::vector<GridTime> points_;
  std::vector<std::size_t> offsets_;
  std::vector<int> orders_;
};

/// One draw from the uniform law on the fresh Dyson region of order m at
/// step i, by rejection from the full simplex. `trials` counts attempts.
void draw_dyson_sequence(RandomStream& rng, int m, int i, std::vector<GridTime>& out,
                         std::uint64_t* trials = nullptr);

/// One draw from the uniform law on the fresh inchworm region (p, k) of order m.
void draw_inch_sequence(RandomStream& rng, int m, int p, int k, std::vector<GridTime>& out,
                        std::uint64_t* trials = nullptr);

/// All fresh samples of one region, each order from its own keyed stream.
SampleBatch sample_fresh_dyson(const SamplingConfig& cfg, int i);
SampleBatch sample_fresh_inch(const SamplingConfig& cfg, int p, int k);

/// Stretch a span of points by j cells into `out` (same length).
inline void stretch_into(std::span<const GridTime> seq, std::int64_t j, GridTime* out) {
  for (std::size_t q = 0; q < seq.size(); ++q) out[q] = stretch(seq[q], j);
}

}  // namespace bathreuse

#include "bathreuse/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bathreuse {

namespace {

constexpr std::uint64_t kMaxTrials = 100'000'000;

double factorial(int n) {
  double f = 1.0;
  for (int q = 2; q <= n; ++q) f *= q;
  return f;
}

double allocation_weight(const SamplingConfig& cfg, int m) {
  return double_factorial(m) * std::pow(cfg.b_emp, 0.5 * (m + 1));
}

std::int64_t round_half_even(double x) { return static_cast<std::int64_t>(std::nearbyint(x)); }

bool all_off_node_and_ascending(std::span<const GridTime> seq) {
  for (std::size_t q = 0; q < seq.size(); ++q) {
    if (seq[q].on_node()) return false;
    if (q > 0 && !(seq[q - 1] < seq[q])) return false;
  }
  return true;
}

bool any_near_zero(std::span<const GridTime> seq) {
  return std::any_of(seq.begin(), seq.end(), [](const GridTime& g) { return g.near_zero(); });
}

void check_trials(std::uint64_t n) {
  if (n > kMaxTrials) throw std::runtime_error("sampler: rejection loop did not terminate");
}

}  // namespace

void SamplingConfig::validate() const {
  if (!(b_emp > 0.0)) throw std::invalid_argument("sampling: b_emp must be > 0");
  if (m_bar < 1 || m_bar % 2 == 0) throw std::invalid_argument("sampling: m_bar must be odd and >= 1");
  if (m_bar > 13) throw std::invalid_argument("sampling: m_bar above 13 exceeds the pairing bound");
  if (m0_hat < 1) throw std::invalid_argument("sampling: m0_hat must be >= 1");
  if (!(h > 0.0)) throw std::invalid_argument("sampling: h must be > 0");
  if (num_steps < 1) throw std::invalid_argument("sampling: num_steps must be >= 1");
}

double double_factorial(int n) {
  double f = 1.0;
  for (int q = n; q > 1; q -= 2) f *= q;
  return f;
}

double region_volume_dyson(int m, int i, double h) {
  if (m < 1 || i < 0) throw std::invalid_argument("region_volume_dyson: bad index");
  return std::pow(2.0 * i * h, m) / factorial(m);
}

double region_volume_dyson_fresh(int m, int i, double h) {
  if (m < 1 || i < 1) throw std::invalid_argument("region_volume_dyson_fresh: bad index");
  return (std::pow(2.0 * i * h, m) - std::pow(2.0 * (i - 1) * h, m)) / factorial(m);
}

double region_volume_inch(int m, int p, int k, double h) {
  if (m < 1 || k - p < 1) throw std::invalid_argument("region_volume_inch: requires p < k");
  return (std::pow((k - p) * h, m) - std::pow((k - p - 1) * h, m)) / factorial(m);
}

double region_volume_inch_fresh(int m, int p, int k, double h) {
  if (p > -1 || k < 0)
    throw std::invalid_argument("region_volume_inch_fresh: requires p <= -1 and k >= 0, got (" +
                                std::to_string(p) + ", " + std::to_string(k) + ")");
  const double full = region_volume_inch(m, p, k, h);
  if (p == -1 || k == 0) return full;
  return full - region_volume_inch(m, p + 1, k - 1, h);
}

std::vector<std::int64_t> allocate_dyson(const SamplingConfig& cfg, int i) {
  if (i < 1 || i > cfg.num_steps) throw std::invalid_argument("allocate_dyson: step out of range");
  const double lambda_hat = 2.0 * cfg.b_emp * cfg.h;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(cfg.num_orders()));
  for (int r = 0; r < cfg.num_orders(); ++r) {
    const int m = order_of(r);
    const double x = static_cast<double>(cfg.m0_hat) / lambda_hat *
                     region_volume_dyson_fresh(m, i, cfg.h) * allocation_weight(cfg, m);
    counts[static_cast<std::size_t>(r)] = (m == 1 && i == 1) ? cfg.m0_hat : round_half_even(x);
  }
  return counts;
}

std::vector<std::int64_t> allocate_inch(const SamplingConfig& cfg, int p, int k) {
  if (p < -cfg.num_steps || p > -1 || k < 0 || k > cfg.num_steps)
    throw std::invalid_argument("allocate_inch: region out of range");
  const double lambda_hat = cfg.b_emp * cfg.h;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(cfg.num_orders()));
  for (int r = 0; r < cfg.num_orders(); ++r) {
    const int m = order_of(r);
    const double x = static_cast<double>(cfg.m0_hat) / lambda_hat *
                     region_volume_inch_fresh(m, p, k, cfg.h) * allocation_weight(cfg, m);
    counts[static_cast<std::size_t>(r)] =
        (m == 1 && p == -1 && k == 0) ? cfg.m0_hat : round_half_even(x);
  }
  return counts;
}

double density_dyson(const SamplingConfig& cfg, int i, int m) {
  if (i < 1) throw std::invalid_argument("density_dyson: step must be >= 1");
  const double t = 2.0 * i * cfg.h;
  double lambda = 0.0;
  for (int mp = 1; mp <= cfg.m_bar; mp += 2)
    lambda += std::pow(t, mp) / double_factorial(mp - 1) * std::pow(cfg.b_emp, 0.5 * (mp + 1));
  return allocation_weight(cfg, m) / lambda;
}

double density_inch(const SamplingConfig& cfg, int j, int k, int m) {
  if (k <= j) throw std::invalid_argument("density_inch: requires j < k");
  const double t = (k - j) * cfg.h;
  double lambda = 0.0;
  for (int mp = 1; mp <= cfg.m_bar; mp += 2)
    lambda += std::pow(t, mp) / double_factorial(mp - 1) * std::pow(cfg.b_emp, 0.5 * (mp + 1));
  return allocation_weight(cfg, m) / lambda;
}

bool in_dyson_region(std::span<const GridTime> seq, int i) {
  if (seq.empty()) return false;
  for (std::size_t q = 1; q < seq.size(); ++q)
    if (seq[q] < seq[q - 1]) return false;
  return seq.front() >= GridTime::node(-i) && seq.back() <= GridTime::node(i);
}

bool in_dyson_fresh(std::span<const GridTime> seq, int i) {
  return in_dyson_region(seq, i) && any_near_zero(seq);
}

bool in_inch_region(std::span<const GridTime> seq, int p, int k) {
  if (seq.empty()) return false;
  for (std::size_t q = 1; q < seq.size(); ++q)
    if (seq[q] < seq[q - 1]) return false;
  return seq.front() >= GridTime::node(p) && seq.front() <= GridTime::node(p + 1) &&
         seq.back() <= GridTime::node(k);
}

bool in_inch_fresh(std::span<const GridTime> seq, int p, int k) {
  return in_inch_region(seq, p, k) && (k == 0 || any_near_zero(seq));
}

std::size_t SampleBatch::count_of_order(int m) const {
  return static_cast<std::size_t>(std::count(orders_.begin(), orders_.end(), m));
}

void SampleBatch::push_back(std::span<const GridTime> seq) {
  offsets_.push_back(points_.size());
  orders_.push_back(static_cast<int>(seq.size()));
  points_.insert(points_.end(), seq.begin(), seq.end());
}

void draw_dyson_sequence(RandomStream& rng, int m, int i, std::vector<GridTime>& out,
                         std::uint64_t* trials) {
  if (m < 1 || i < 1) throw std::invalid_argument("draw_dyson_sequence: bad region");
  std::vector<double> x(static_cast<std::size_t>(m));
  const double lo = -static_cast<double>(i);
  const double width = 2.0 * i;
  std::uint64_t n = 0;
  for (;;) {
    check_trials(++n);
    for (auto& v : x) v = lo + width * rng.uniform();
    std::sort(x.begin(), x.end());
    out.resize(x.size());
    for (std::size_t q = 0; q < x.size(); ++q) out[q] = GridTime::from_units(x[q]);
    if (!all_off_node_and_ascending(out)) continue;
    if (i == 1 || any_near_zero(out)) break;
  }
  if (trials) *trials += n;
}

void draw_inch_sequence(RandomStream& rng, int m, int p, int k, std::vector<GridTime>& out,
                        std::uint64_t* trials) {
  if (m < 1 || p > -1 || k < 0) throw std::invalid_argument("draw_inch_sequence: bad region");
  const double a = static_cast<double>(k - p - 1);
  const double b = static_cast<double>(k - p);
  const double am = std::pow(a, m);
  const double bm = std::pow(b, m);
  const double end = static_cast<double>(k);
  const bool always_fresh = (p == -1 || k == 0);
  std::vector<double> rest(static_cast<std::size_t>(m - 1));
  std::uint64_t n = 0;
  for (;;) {
    check_trials(++n);
    // distance from the endpoint has density proportional to d^(m-1) on [a, b]
    const double u = rng.uniform();
    const double d = (m == 1) ? a + u : std::pow(am + u * (bm - am), 1.0 / m);
    const double s1 = end - d;
    for (auto& v : rest) v = s1 + (end - s1) * rng.uniform();
    std::sort(rest.begin(), rest.end());
    out.resize(static_cast<std::size_t>(m));
    out[0] = GridTime::from_units(s1);
    for (std::size_t q = 0; q < rest.size(); ++q) out[q + 1] = GridTime::from_units(rest[q]);
    if (!all_off_node_and_ascending(out) || !in_inch_region(out, p, k)) continue;
    if (always_fresh || any_near_zero(out)) break;
  }
  if (trials) *trials += n;
}

SampleBatch sample_fresh_dyson(const SamplingConfig& cfg, int i) {
  const auto counts = allocate_dyson(cfg, i);
  SampleBatch batch;
  std::vector<GridTime> buf;
  for (int r = 0; r < cfg.num_orders(); ++r) {
    const int m = order_of(r);
    RandomStream rng(cfg.seed, region_stream_id(RegionKind::dyson, i, 0, m));
    for (std::int64_t q = 0; q < counts[static_cast<std::size_t>(r)]; ++q) {
      draw_dyson_sequence(rng, m, i, buf);
      batch.push_back(buf);
    }
  }
  return batch;
}

SampleBatch sample_fresh_inch(const SamplingConfig& cfg, int p, int k) {
  const auto counts = allocate_inch(cfg, p, k);
  SampleBatch batch;
  std::vector<GridTime> buf;
  for (int r = 0; r < cfg.num_orders(); ++r) {
    const int m = order_of(r);
    RandomStream rng(cfg.seed, region_stream_id(RegionKind::inchworm, p, k, m));
    for (std::int64_t q = 0; q < counts[static_cast<std::size_t>(r)]; ++q) {
      draw_inch_sequence(rng, m, p, k, buf);
      batch.push_back(buf);
    }
  }
  return batch;
}

}  // namespace bathreuse

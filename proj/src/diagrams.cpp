#include "bathreuse/diagrams.hpp"

#include <array>
#include <mutex>
#include <stdexcept>
#include <string>

namespace bathreuse {

namespace {

void check_size(int num_points, int max_points) {
  if (num_points < 0 || num_points % 2 != 0)
    throw std::invalid_argument("pairings: number of points must be even and non-negative, got " +
                                std::to_string(num_points));
  if (num_points > max_points)
    throw std::invalid_argument("pairings: " + std::to_string(num_points) +
                                " points exceeds the bound " + std::to_string(max_points));
}

void enumerate_into(std::vector<int>& free_points, Pairing& current, std::vector<Pairing>& out) {
  if (free_points.empty()) {
    out.push_back(current);
    return;
  }
  const int first = free_points.front();
  for (std::size_t idx = 1; idx < free_points.size(); ++idx) {
    const int partner = free_points[idx];
    std::vector<int> rest;
    rest.reserve(free_points.size() - 2);
    for (std::size_t r = 1; r < free_points.size(); ++r)
      if (r != idx) rest.push_back(free_points[r]);
    current.emplace_back(first, partner);
    enumerate_into(rest, current, out);
    current.pop_back();
  }
}

bool arcs_cross(std::pair<int, int> x, std::pair<int, int> y) {
  const auto [a, b] = x;
  const auto [c, d] = y;
  return (a < c && c < b && b < d) || (c < a && a < d && d < b);
}

// Hafnian by first-point expansion over a bitmask of remaining points.
Complex hafnian_rec(unsigned mask, std::span<const Complex> table, int n) {
  if (mask == 0) return {1.0, 0.0};
  const int first = __builtin_ctz(mask);
  const unsigned rest = mask & ~(1u << first);
  Complex sum{0.0, 0.0};
  for (unsigned scan = rest; scan != 0; scan &= scan - 1) {
    const int partner = __builtin_ctz(scan);
    sum += table[static_cast<std::size_t>(first * n + partner)] *
           hafnian_rec(rest & ~(1u << partner), table, n);
  }
  return sum;
}

void check_ascending(std::span<const GridTime> points) {
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(points[i - 1] < points[i]))
      throw std::invalid_argument("bath functional: time points must be strictly ascending");
}

void check_ascending(std::span<const double> times) {
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i - 1] < times[i]))
      throw std::invalid_argument("bath functional: time points must be strictly ascending");
}

constexpr int kMaxCached = 16;

using Table = std::array<Complex, kMaxCached * kMaxCached>;

Table grid_table(const BathCorrelation& bath, std::span<const GridTime> points, double h) {
  Table table{};
  const int n = static_cast<int>(points.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      table[static_cast<std::size_t>(i * n + j)] = bath.two_point(points[i], points[j], h);
  return table;
}

Table real_table(const BathCorrelation& bath, std::span<const double> times) {
  Table table{};
  const int n = static_cast<int>(times.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      table[static_cast<std::size_t>(i * n + j)] = bath.two_point(times[i], times[j]);
  return table;
}

Complex full_from_table(const Table& table, int n) {
  if (n % 2 != 0) return {0.0, 0.0};
  return hafnian_rec((n == 0) ? 0u : ((1u << n) - 1u), std::span<const Complex>(table.data(), table.size()), n);
}

Complex connected_from_table(const Table& table, int n) {
  if (n % 2 != 0) return {0.0, 0.0};
  Complex sum{0.0, 0.0};
  for (const auto& p : linked_pairings(n, kMaxCached))
    sum += pairing_product(p, std::span<const Complex>(table.data(), table.size()), n);
  return sum;
}

}  // namespace

std::vector<Pairing> enumerate_pairings(int num_points, int max_points) {
  check_size(num_points, max_points);
  std::vector<int> free_points(static_cast<std::size_t>(num_points));
  for (int i = 0; i < num_points; ++i) free_points[static_cast<std::size_t>(i)] = i;
  std::vector<Pairing> out;
  Pairing current;
  enumerate_into(free_points, current, out);
  return out;
}

bool is_linked(const Pairing& pairing) {
  const std::size_t n = pairing.size();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t cur = stack.back();
    stack.pop_back();
    for (std::size_t other = 0; other < n; ++other) {
      if (seen[other] || !arcs_cross(pairing[cur], pairing[other])) continue;
      seen[other] = 1;
      ++reached;
      stack.push_back(other);
    }
  }
  return reached == n;
}

const std::vector<Pairing>& linked_pairings(int num_points, int max_points) {
  check_size(num_points, std::min(max_points, kMaxCached));
  static std::array<std::vector<Pairing>, kMaxCached / 2 + 1> cache;
  static std::array<std::once_flag, kMaxCached / 2 + 1> flags;
  const auto slot = static_cast<std::size_t>(num_points / 2);
  std::call_once(flags[slot], [&] {
    for (auto& p : enumerate_pairings(num_points, kMaxCached))
      if (is_linked(p)) cache[slot].push_back(std::move(p));
  });
  return cache[slot];
}

Complex pairing_product(const Pairing& pairing, std::span<const Complex> table, int num_points) {
  Complex prod{1.0, 0.0};
  for (const auto& [a, b] : pairing) prod *= table[static_cast<std::size_t>(a * num_points + b)];
  return prod;
}

Complex lb_full(const BathCorrelation& bath, std::span<const GridTime> points, double h,
                int max_points) {
  const int n = static_cast<int>(points.size());
  if (n > std::min(max_points, kMaxCached))
    throw std::invalid_argument("lb_full: too many points (" + std::to_string(n) + ")");
  check_ascending(points);
  if (n % 2 != 0) return {0.0, 0.0};
  return full_from_table(grid_table(bath, points, h), n);
}

Complex lb_connected(const BathCorrelation& bath, std::span<const GridTime> points, double h,
                     int max_points) {
  const int n = static_cast<int>(points.size());
  if (n > std::min(max_points, kMaxCached))
    throw std::invalid_argument("lb_connected: too many points (" + std::to_string(n) + ")");
  check_ascending(points);
  if (n % 2 != 0) return {0.0, 0.0};
  return connected_from_table(grid_table(bath, points, h), n);
}

Complex lb_full(const BathCorrelation& bath, std::span<const double> times) {
  const int n = static_cast<int>(times.size());
  if (n > kDefaultMaxPoints) throw std::invalid_argument("lb_full: too many points");
  check_ascending(times);
  if (n % 2 != 0) return {0.0, 0.0};
  return full_from_table(real_table(bath, times), n);
}

Complex lb_connected(const BathCorrelation& bath, std::span<const double> times) {
  const int n = static_cast<int>(times.size());
  if (n > kDefaultMaxPoints) throw std::invalid_argument("lb_connected: too many points");
  check_ascending(times);
  if (n % 2 != 0) return {0.0, 0.0};
  return connected_from_table(real_table(bath, times), n);
}

}  // namespace bathreuse

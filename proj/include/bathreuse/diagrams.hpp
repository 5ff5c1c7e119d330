#pragma once

#include "bathreuse/bath.hpp"
#include "bathreuse/time_grid.hpp"

#include <span>
#include <utility>
#include <vector>

namespace bathreuse {

/// A perfect matching of the indices {0, ..., M-1}. Each pair has first < second
/// and pairs are listed by increasing first index.
using Pairing = std::vector<std::pair<int, int>>;

inline constexpr int kDefaultMaxPoints = 14;

/// All (M-1)!! pairings of M points in lexicographic recursion order
/// (pair the first free point with each later partner, recurse).
std::vector<Pairing> enumerate_pairings(int num_points, int max_points = kDefaultMaxPoints);

/// True iff the crossing graph of the arcs is connected. Arcs (a,b), (c,d)
/// cross iff a < c < b < d or c < a < d < b; nested arcs do not.
bool is_linked(const Pairing& pairing);

/// Linked pairings of M points, in enumeration order. Cached per M.
const std::vector<Pairing>& linked_pairings(int num_points, int max_points = kDefaultMaxPoints);

/// Sum over all pairings of products of two-point correlations. The points
/// must be strictly ascending; odd sizes give 0.
Complex lb_full(const BathCorrelation& bath, std::span<const GridTime> points, double h,
                int max_points = kDefaultMaxPoints);

/// Same sum restricted to linked pairings.
Complex lb_connected(const BathCorrelation& bath, std::span<const GridTime> points, double h,
                     int max_points = kDefaultMaxPoints);

/// Real-valued conveniences for tests and tooling.
Complex lb_full(const BathCorrelation& bath, std::span<const double> times);
Complex lb_connected(const BathCorrelation& bath, std::span<const double> times);

/// Evaluate one pairing on a precomputed correlation table b[i * M + j].
Complex pairing_product(const Pairing& pairing, std::span<const Complex> table, int num_points);

}  // namespace bathreuse

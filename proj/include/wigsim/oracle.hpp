#pragma once

// Brute-force reference checks for small instances. Nothing here calls the
// simplex, so the grid search can stand as an independent judge of it.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "wigsim/channel.hpp"
#include "wigsim/feasibility.hpp"
#include "wigsim/graph.hpp"

namespace wigsim::oracle {

struct GridVerdict {
  bool feasible{false};
  /// Best over the grid of min_i margin_i, where margin_i is the constraint
  /// slack divided by how much one grid step in every power can move it.
  /// Feasible iff >= 0; |best_margin| <= 1 means within one cell of the boundary.
  double best_margin{0.0};
  /// Least sum_i w_i P_i over feasible grid points (infinity if none).
  double min_weighted_power{0.0};
  std::vector<double> argmin_power;
};

/// Exhaustive search over the grid {0, h, ..., upper_i}^L with h = upper_i /
/// resolution. Exact along the last axis (the margin is concave there), so
/// the cost is (resolution + 1)^(L - 1). Requires L <= 3.
GridVerdict grid_feasibility(const FeasibilityInstance& inst, std::size_t resolution = 400);

/// Random rate-constraint instance with `links` node-disjoint links, mixing
/// feasible and infeasible cases.
FeasibilityInstance random_instance(std::mt19937_64& rng, std::size_t links);

/// A sub-slot of `links` node-disjoint links (2i -> 2i+1) with random gains.
struct RandomSubSlot {
  std::vector<DirectedLink> links;
  ChannelState state;
  ChannelConfig cfg;
  std::vector<double> weights;  // per node
  double v{0.0};
};
RandomSubSlot random_subslot(std::mt19937_64& rng, std::size_t links);

struct SubsetBest {
  double objective{0.0};
  std::vector<DirectedLink> links;
};

/// Minimum of -v |S| + sum w e over the nested prefixes of the rate-sorted
/// list, recomputed from scratch.
SubsetBest best_nested_case(std::span<const DirectedLink> links, const ChannelState& st, const ChannelConfig& cfg,
                            std::span<const double> weights, double v);

/// Minimum of the same objective over all 2^L link subsets.
SubsetBest best_subset(std::span<const DirectedLink> links, const ChannelState& st, const ChannelConfig& cfg,
                       std::span<const double> weights, double v);

}  // namespace wigsim::oracle

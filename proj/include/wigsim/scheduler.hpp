#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wigsim/graph.hpp"

namespace wigsim {

/// Partition of a slot's directed links into orthogonal sub-slots. Inside a
/// group every node is the endpoint of at most one link.
struct SubSlotPlan {
  std::vector<std::vector<DirectedLink>> groups;

  std::size_t size() const noexcept { return groups.size(); }
};

/// First-fit matching decomposition over a seed-shuffled link order.
SubSlotPlan decompose(std::span<const DirectedLink> links, std::uint64_t seed);

/// Describes the first violated plan invariant (node reuse within a group,
/// duplicate link, missing or foreign link), or nullopt if the plan is valid.
std::optional<std::string> plan_violation(const SubSlotPlan& plan, std::span<const DirectedLink> links);

/// Every (tx, rx) pair whose gain a sub-slot needs: direct links plus each
/// same-group transmitter toward each same-group receiver.
std::vector<DirectedLink> gain_pairs(const SubSlotPlan& plan);

}  // namespace wigsim

#include "wigsim/scheduler.hpp"

#include <algorithm>
#include <random>
#include <set>

#include <fmt/format.h>

namespace wigsim {

SubSlotPlan decompose(std::span<const DirectedLink> links, std::uint64_t seed) {
  std::vector<DirectedLink> order(links.begin(), links.end());
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  NodeId max_node = 0;
  for (const auto& l : order) max_node = std::max({max_node, l.tx, l.rx});

  SubSlotPlan plan;
  std::vector<std::vector<bool>> used;  // per group, per node
  for (const auto& link : order) {
    std::size_t m = 0;
    while (m < plan.groups.size() && (used[m][link.tx] || used[m][link.rx])) ++m;
    if (m == plan.groups.size()) {
      plan.groups.emplace_back();
      used.emplace_back(std::size_t{max_node} + 1, false);
    }
    plan.groups[m].push_back(link);
    used[m][link.tx] = true;
    used[m][link.rx] = true;
  }
  return plan;
}

std::optional<std::string> plan_violation(const SubSlotPlan& plan, std::span<const DirectedLink> links) {
  std::set<DirectedLink> expected(links.begin(), links.end());
  std::set<DirectedLink> seen;
  for (std::size_t m = 0; m < plan.groups.size(); ++m) {
    std::set<NodeId> nodes;
    for (const auto& l : plan.groups[m]) {
      if (l.tx == l.rx) return fmt::format("group {}: self link at {}", m, l.tx);
      if (!nodes.insert(l.tx).second || !nodes.insert(l.rx).second) {
        return fmt::format("group {}: node reused by link ({}, {})", m, l.tx, l.rx);
      }
      if (!seen.insert(l).second) return fmt::format("link ({}, {}) appears twice", l.tx, l.rx);
      if (!expected.contains(l)) return fmt::format("link ({}, {}) is not in the link set", l.tx, l.rx);
    }
  }
  if (seen.size() != expected.size()) {
    return fmt::format("plan covers {} of {} links", seen.size(), expected.size());
  }
  return std::nullopt;
}

std::vector<DirectedLink> gain_pairs(const SubSlotPlan& plan) {
  std::vector<DirectedLink> pairs;
  for (const auto& group : plan.groups) {
    for (const auto& to : group) {
      for (const auto& from : group) pairs.push_back({from.tx, to.rx});
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

}  // namespace wigsim

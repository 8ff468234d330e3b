#include "wigsim/greedy.hpp"

#include <algorithm>
#include <numeric>

#include <spdlog/spdlog.h>

#include "wigsim/error.hpp"
#include "wigsim/lyapunov.hpp"

namespace wigsim {

double CaseResult::total_energy() const {
  return std::accumulate(solution.energy.begin(), solution.energy.end(), 0.0);
}

void SlotOutcome::record(const Transmission& t) {
  transmissions.push_back(t);
  energies[t.link.tx] += t.energy_j;
  if (t.activated) {
    auto& flag = activated[t.link.tx * num_nodes + t.link.rx];
    if (!flag) ++n_links;
    flag = 1;
  }
}

std::vector<DirectedLink> sort_links_desc(std::span<const DirectedLink> links, const ChannelState& st,
                                          const ChannelConfig& cfg, double probe_power) {
  NodeId max_node = 0;
  for (const auto& l : links) max_node = std::max({max_node, l.tx, l.rx});
  std::vector<double> powers(links.empty() ? 0 : std::size_t{max_node} + 1, 0.0);
  std::vector<NodeId> transmitters;
  for (const auto& l : links) {
    powers[l.tx] = probe_power;
    transmitters.push_back(l.tx);
  }

  std::vector<std::pair<double, DirectedLink>> ranked;
  ranked.reserve(links.size());
  for (const auto& l : links) {
    const double rate = achievable_rate(sinr(l, powers, transmitters, st, cfg.noise_power_w), cfg.bandwidth_hz);
    ranked.emplace_back(rate, l);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  std::vector<DirectedLink> sorted;
  sorted.reserve(ranked.size());
  for (const auto& [rate, l] : ranked) sorted.push_back(l);
  return sorted;
}

std::vector<CaseResult> enumerate_cases(std::span<const DirectedLink> sorted, const ChannelState& st,
                                        const ChannelConfig& cfg, const CasePolicy& policy) {
  std::vector<CaseResult> cases;
  cases.reserve(sorted.size() + 1);
  for (std::size_t j = 0; j <= sorted.size(); ++j) {
    CaseResult c;
    c.case_index = j;
    c.retained.assign(sorted.begin(), sorted.end() - static_cast<std::ptrdiff_t>(j));

    auto inst = build_instance(c.retained, st, cfg);
    apply_queue_weights(inst, policy.objective_weights);
    if (!policy.energy_caps.empty()) apply_energy_caps(inst, policy.energy_caps);
    try {
      c.solution = solve_feasibility(inst);
    } catch (const SolverError& e) {
      spdlog::warn("slot {}: case {} of {} treated as infeasible: {}", st.slot(), j, sorted.size(), e.what());
      c.solver_failed = true;
    }
    c.feasible = c.solution.feasible;
    if (c.feasible) {
      std::vector<double> weights(c.retained.size());
      for (std::size_t i = 0; i < c.retained.size(); ++i) {
        weights[i] = policy.objective_weights[c.retained[i].tx];
      }
      c.objective = drift_penalty(c.retained.size(), c.solution.energy, weights, policy.v);
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

std::size_t select_case(std::span<const CaseResult> cases) {
  std::size_t best = cases.size();
  for (std::size_t j = 0; j < cases.size(); ++j) {
    const auto& c = cases[j];
    if (!c.feasible) continue;
    if (best == cases.size()) {
      best = j;
      continue;
    }
    const auto& b = cases[best];
    if (c.objective < b.objective ||
        (c.objective == b.objective &&
         (c.retained.size() > b.retained.size() ||
          (c.retained.size() == b.retained.size() && c.total_energy() < b.total_energy())))) {
      best = j;
    }
  }
  return best;
}

CaseResult solve_subslot(std::span<const DirectedLink> sub_links, const ChannelState& st,
                         const ChannelConfig& cfg, const CasePolicy& policy) {
  const auto sorted = sort_links_desc(sub_links, st, cfg, cfg.p_max_w);
  auto cases = enumerate_cases(sorted, st, cfg, policy);
  const std::size_t best = select_case(cases);
  // The empty case has no constraints, so it is always feasible.
  return std::move(cases.at(best));
}

SlotOutcome run_slot(const SubSlotPlan& plan, const ChannelState& st, const ChannelConfig& cfg,
                     std::size_t num_nodes, const SlotPolicy& policy) {
  SlotOutcome outcome(num_nodes);
  std::vector<double> remaining;
  if (policy.per_slot_budget) remaining.assign(num_nodes, *policy.per_slot_budget);

  for (std::size_t m = 0; m < plan.size(); ++m) {
    std::vector<DirectedLink> links;
    for (const auto& l : plan.groups[m]) {
      // A node with its slot budget spent sits out the rest of the slot.
      if (policy.per_slot_budget && remaining[l.tx] <= 0.0) continue;
      links.push_back(l);
    }

    CasePolicy case_policy{policy.objective_weights, policy.v, remaining};
    auto cases = enumerate_cases(sort_links_desc(links, st, cfg, cfg.p_max_w), st, cfg, case_policy);
    for (const auto& c : cases) outcome.solver_failures += c.solver_failed ? 1 : 0;
    const auto& chosen = cases.at(select_case(cases));

    for (std::size_t i = 0; i < chosen.retained.size(); ++i) {
      const auto& l = chosen.retained[i];
      outcome.record({l, m, chosen.solution.power[i], chosen.solution.achieved_rate[i],
                      chosen.solution.energy[i], true});
      if (!remaining.empty()) remaining[l.tx] -= chosen.solution.energy[i];
    }
  }
  return outcome;
}

}  // namespace wigsim

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "wigsim/channel.hpp"
#include "wigsim/feasibility.hpp"
#include "wigsim/graph.hpp"
#include "wigsim/scheduler.hpp"

namespace wigsim {

/// One nested case of a sub-slot: the sorted link list minus its last
/// `case_index` entries.
struct CaseResult {
  std::vector<DirectedLink> retained;
  PowerSolution solution;
  double objective{0.0};  // -v |retained| + sum_u w_u e_u; meaningful only when feasible
  std::size_t case_index{0};
  bool feasible{false};
  bool solver_failed{false};

  double total_energy() const;
};

/// How cases are scored and constrained inside one sub-slot.
struct CasePolicy {
  std::span<const double> objective_weights;  // per node: Z_u for the proposed rule
  double v{0.0};
  std::span<const double> energy_caps;  // per node remaining joules; empty = uncapped
};

/// Orders links by rate with every sub-slot transmitter at probe_power,
/// highest first; equal rates fall back to ascending (tx, rx).
std::vector<DirectedLink> sort_links_desc(std::span<const DirectedLink> links, const ChannelState& st,
                                          const ChannelConfig& cfg, double probe_power);

/// Solves every nested case of an already sorted link list. Entry j retains
/// the first size - j links; the last entry is the empty case.
std::vector<CaseResult> enumerate_cases(std::span<const DirectedLink> sorted, const ChannelState& st,
                                        const ChannelConfig& cfg, const CasePolicy& policy);

/// Index of the case with the least objective among feasible ones; ties go
/// to more links, then less energy.
std::size_t select_case(std::span<const CaseResult> cases);

/// Sorts, enumerates and selects for one sub-slot.
CaseResult solve_subslot(std::span<const DirectedLink> sub_links, const ChannelState& st,
                         const ChannelConfig& cfg, const CasePolicy& policy);

/// One attempted transmission within a slot.
struct Transmission {
  DirectedLink link;
  std::size_t subslot{0};
  double power_w{0.0};
  double rate_bps{0.0};
  double energy_j{0.0};
  bool activated{false};
};

/// Result of one slot across all sub-slots.
struct SlotOutcome {
  std::size_t num_nodes{0};
  std::vector<std::uint8_t> activated;  // n x n, [tx * n + rx]
  std::vector<Transmission> transmissions;
  std::vector<double> energies;  // per node, summed over sub-slots
  std::size_t n_links{0};
  std::size_t solver_failures{0};

  explicit SlotOutcome(std::size_t n = 0) : num_nodes(n), activated(n * n, 0), energies(n, 0.0) {}

  bool is_active(const DirectedLink& l) const { return activated[l.tx * num_nodes + l.rx] != 0; }
  void record(const Transmission& t);
};

struct SlotPolicy {
  std::span<const double> objective_weights;  // per node, frozen for the slot
  double v{0.0};
  std::optional<double> per_slot_budget;  // per-node joules per slot; caps each sub-slot by what is left
};

/// Runs the case selection in every sub-slot and merges the chosen topologies.
SlotOutcome run_slot(const SubSlotPlan& plan, const ChannelState& st, const ChannelConfig& cfg,
                     std::size_t num_nodes, const SlotPolicy& policy);

}  // namespace wigsim

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wigsim/channel.hpp"
#include "wigsim/graph.hpp"

namespace wigsim {

/// Floor applied to queue weights in the power-minimizing objective, so the
/// secondary LP objective stays bounded and positive when queues are empty.
inline constexpr double kWeightFloor = 1e-6;

/// SINR threshold 2^(D / (B tau)) - 1 that makes the rate constraint linear.
/// Throws ParameterError when B * tau is not positive.
double g_constant(double payload_bits, double bandwidth_hz, double tau_s);

/// One case of a sub-slot: each link must meet its rate with every other
/// case transmitter interfering,
///
///   |h_ii|^2 P_i - G_i sum_{j != i} |h_ji|^2 P_j >= G_i sigma^2,
///   0 <= P_i <= upper_i,
///
/// where h_ji is the gain from link j's transmitter to link i's receiver.
struct FeasibilityInstance {
  std::vector<DirectedLink> links;
  std::vector<double> direct_gain;   // per link
  std::vector<double> cross_gain;    // L x L row-major, [i * L + j]; diagonal unused
  std::vector<double> g_const;       // per link
  std::vector<double> upper;         // per link power cap (W)
  std::vector<double> weights;       // per link objective weight, > 0
  std::vector<double> payload_bits;  // per link
  double noise_power_w{0.0};
  double bandwidth_hz{0.0};
  double tau_max_s{0.0};

  std::size_t size() const noexcept { return links.size(); }
  double cross(std::size_t i, std::size_t j) const { return cross_gain[i * links.size() + j]; }
};

/// Instance for a node-disjoint link set, with weights kWeightFloor and caps
/// at P_max. Throws InternalError if a needed gain was not sampled.
FeasibilityInstance build_instance(std::span<const DirectedLink> case_links, const ChannelState& st,
                                   const ChannelConfig& cfg);

/// Sets weight_i = max(node_weights[tx_i], kWeightFloor).
void apply_queue_weights(FeasibilityInstance& inst, std::span<const double> node_weights);

/// Adds the per-slot energy surrogate P_i * tau_max <= remaining[tx_i] by
/// tightening the power cap.
void apply_energy_caps(FeasibilityInstance& inst, std::span<const double> remaining_j);

struct PowerSolution {
  bool feasible{false};
  std::vector<double> power;           // per link transmitter (W)
  std::vector<double> achieved_rate;   // per link (bits/s)
  std::vector<double> energy;          // per link transmitter (J)
};

/// Finds the power vector of least weighted sum power that meets every rate
/// constraint, or reports infeasibility. Two-phase simplex; the returned
/// point satisfies each constraint to 1e-9 relative residual. Throws
/// SolverError if the simplex hits its iteration cap or loses accuracy.
PowerSolution solve_feasibility(const FeasibilityInstance& inst);

/// SINR of link i at the given per-link powers, with all case links active.
double case_sinr(const FeasibilityInstance& inst, std::span<const double> power, std::size_t i);

/// Per-link energy P_i * D_i / C_i at the given powers.
std::vector<double> solution_energy(const FeasibilityInstance& inst, std::span<const double> power);

/// Largest relative violation of the rate constraints (0 if all hold):
/// max_i max(0, rhs_i - lhs_i) / (|signal_i| + G_i |interference_i| + G_i sigma^2).
double max_relative_violation(const FeasibilityInstance& inst, std::span<const double> power);

}  // namespace wigsim

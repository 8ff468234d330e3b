#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "wigsim/graph.hpp"

namespace wigsim {

enum class Placement {
  uniform_square,  // i.i.d. uniform in [0, side]^2
  fixed_distance,  // every pair sits at fixed_distance_m
};

/// Radio parameters shared by every node. Defaults follow the reference
/// setup: 1 MHz, 0.5 W peak, 1 Mbit payload, 0.5 s deadline, 100 m spacing.
struct ChannelConfig {
  double bandwidth_hz{1e6};
  double noise_power_w{1e-14};
  double payload_bits{1e6};
  std::vector<double> payload_bits_per_node;  // optional override; empty = uniform
  double tau_max_s{0.5};
  double p_max_w{0.5};
  double area_side_m{100.0};
  double pathloss_a{30.6};
  double pathloss_b{36.7};
  double min_distance_m{1.0};
  Placement placement{Placement::uniform_square};
  double fixed_distance_m{100.0};

  double payload(NodeId u) const;
  /// Required rate D_u / tau_max for transmissions from u.
  double required_rate(NodeId u) const;
  void validate() const;
};

struct Position {
  double x{0.0};
  double y{0.0};
};

std::vector<Position> place_nodes(std::size_t n, const ChannelConfig& cfg, std::uint64_t seed);

/// Distance used for path loss, clamped below by min_distance_m.
double link_distance(const ChannelConfig& cfg, std::span<const Position> positions, NodeId u, NodeId v);

/// Large-scale power gain 10^(-(a + b log10 d)/10).
double path_gain(const ChannelConfig& cfg, double distance_m);

inline constexpr double kMinGain = 1e-30;

/// Squared channel gains |h_kv|^2 for one slot. Only sampled pairs exist.
class ChannelState {
 public:
  ChannelState() = default;
  explicit ChannelState(std::size_t slot) : slot_(slot) {}

  std::size_t slot() const noexcept { return slot_; }
  std::size_t size() const noexcept { return gains_.size(); }

  bool has_gain(NodeId tx, NodeId rx) const { return gains_.contains(key(tx, rx)); }
  /// Throws InternalError for a pair that was never sampled.
  double gain(NodeId tx, NodeId rx) const;
  void set_gain(NodeId tx, NodeId rx, double gain);

 private:
  static std::uint64_t key(NodeId tx, NodeId rx) noexcept {
    return (std::uint64_t{tx} << 32) | std::uint64_t{rx};
  }

  std::size_t slot_{0};
  std::unordered_map<std::uint64_t, double> gains_;
};

/// Unit-mean exponential small-scale power for (seed, slot, tx, rx).
/// Counter based: the value does not depend on which other pairs are drawn.
double fading_draw(std::uint64_t seed, std::size_t slot, NodeId tx, NodeId rx);

/// Gains for the requested (tx, rx) pairs: path gain times Exp(1) fading,
/// clamped below at kMinGain.
ChannelState sample_channel(std::span<const Position> positions, std::span<const DirectedLink> pairs,
                            std::size_t slot, const ChannelConfig& cfg, std::uint64_t seed);

/// Received SINR of `link` when every node in `transmitters` sends at
/// powers[node] in the same sub-slot.
double sinr(const DirectedLink& link, std::span<const double> powers,
            std::span<const NodeId> transmitters, const ChannelState& st, double noise_power_w);

/// Shannon rate B log2(1 + sinr), bits/s.
double achievable_rate(double sinr_ratio, double bandwidth_hz);

/// D / tau_max, bits/s. Throws ParameterError for tau <= 0.
double min_rate(double payload_bits, double tau_max_s);

/// 1 when the achievable rate meets the required rate (boundary counts as success).
bool communication_indicator(double rate_bps, double required_bps);

/// Energy of one transmission at power p: p * min(D / C, tau_max).
/// A transmission in outage keeps the channel for the whole deadline.
double transmission_energy(double power_w, double payload_bits, double rate_bps, double tau_max_s);

}  // namespace wigsim

#include "wigsim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "wigsim/error.hpp"
#include "wigsim/random.hpp"

namespace wigsim {

double ChannelConfig::payload(NodeId u) const {
  if (payload_bits_per_node.empty()) return payload_bits;
  return payload_bits_per_node.at(u);
}

double ChannelConfig::required_rate(NodeId u) const { return min_rate(payload(u), tau_max_s); }

void ChannelConfig::validate() const {
  auto positive = [](double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw ParameterError(fmt::format("{} must be positive and finite, got {}", name, value));
    }
  };
  positive(bandwidth_hz, "bandwidth_hz");
  positive(noise_power_w, "noise_power_w");
  positive(payload_bits, "payload_bits");
  positive(tau_max_s, "tau_max_s");
  positive(p_max_w, "p_max_w");
  positive(min_distance_m, "min_distance_m");
  positive(fixed_distance_m, "fixed_distance_m");
  for (double d : payload_bits_per_node) positive(d, "payload_bits_per_node");
  if (!(area_side_m >= 0.0)) throw ParameterError("area_side_m must be non-negative");
  if (!std::isfinite(pathloss_a) || !std::isfinite(pathloss_b)) {
    throw ParameterError("path-loss coefficients must be finite");
  }
}

std::vector<Position> place_nodes(std::size_t n, const ChannelConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed({seed, stream::placement}));
  std::vector<Position> positions(n);
  for (auto& p : positions) {
    p.x = unit_interval(rng()) * cfg.area_side_m;
    p.y = unit_interval(rng()) * cfg.area_side_m;
  }
  return positions;
}

double link_distance(const ChannelConfig& cfg, std::span<const Position> positions, NodeId u, NodeId v) {
  if (cfg.placement == Placement::fixed_distance) return cfg.fixed_distance_m;
  const auto& a = positions[u];
  const auto& b = positions[v];
  return std::max(std::hypot(a.x - b.x, a.y - b.y), cfg.min_distance_m);
}

double path_gain(const ChannelConfig& cfg, double distance_m) {
  const double loss_db = cfg.pathloss_a + cfg.pathloss_b * std::log10(distance_m);
  return std::pow(10.0, -loss_db / 10.0);
}

double ChannelState::gain(NodeId tx, NodeId rx) const {
  auto it = gains_.find(key(tx, rx));
  if (it == gains_.end()) {
    throw InternalError(fmt::format("no channel gain sampled for ({} -> {})", tx, rx));
  }
  return it->second;
}

void ChannelState::set_gain(NodeId tx, NodeId rx, double gain) { gains_[key(tx, rx)] = gain; }

double fading_draw(std::uint64_t seed, std::size_t slot, NodeId tx, NodeId rx) {
  const double u = unit_interval(derive_seed({seed, stream::fading, slot, tx, rx}));
  return -std::log1p(-u);
}

ChannelState sample_channel(std::span<const Position> positions, std::span<const DirectedLink> pairs,
                            std::size_t slot, const ChannelConfig& cfg, std::uint64_t seed) {
  ChannelState st(slot);
  for (const auto& pair : pairs) {
    if (pair.tx == pair.rx) continue;
    if (st.has_gain(pair.tx, pair.rx)) continue;
    const double large_scale = path_gain(cfg, link_distance(cfg, positions, pair.tx, pair.rx));
    const double g = large_scale * fading_draw(seed, slot, pair.tx, pair.rx);
    st.set_gain(pair.tx, pair.rx, std::max(g, kMinGain));
  }
  return st;
}

double sinr(const DirectedLink& link, std::span<const double> powers,
            std::span<const NodeId> transmitters, const ChannelState& st, double noise_power_w) {
  double interference = 0.0;
  for (NodeId k : transmitters) {
    if (k == link.tx || k == link.rx) continue;
    interference += st.gain(k, link.rx) * powers[k];
  }
  return st.gain(link.tx, link.rx) * powers[link.tx] / (interference + noise_power_w);
}

double achievable_rate(double sinr_ratio, double bandwidth_hz) {
  return bandwidth_hz * std::log2(1.0 + sinr_ratio);
}

double min_rate(double payload_bits, double tau_max_s) {
  if (!(tau_max_s > 0.0)) throw ParameterError(fmt::format("tau_max must be positive, got {}", tau_max_s));
  return payload_bits / tau_max_s;
}

bool communication_indicator(double rate_bps, double required_bps) { return rate_bps >= required_bps; }

double transmission_energy(double power_w, double payload_bits, double rate_bps, double tau_max_s) {
  if (power_w <= 0.0) return 0.0;
  if (!(rate_bps > 0.0)) return power_w * tau_max_s;
  return power_w * std::min(payload_bits / rate_bps, tau_max_s);
}

}  // namespace wigsim

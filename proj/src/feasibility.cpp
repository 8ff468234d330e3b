#include "wigsim/feasibility.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "simplex.hpp"
#include "wigsim/error.hpp"

namespace wigsim {

namespace {
constexpr double kResidualTol = 1e-9;
}

double g_constant(double payload_bits, double bandwidth_hz, double tau_s) {
  const double denom = bandwidth_hz * tau_s;
  if (!(denom > 0.0)) throw ParameterError(fmt::format("B * tau must be positive, got {}", denom));
  return std::exp2(payload_bits / denom) - 1.0;
}

FeasibilityInstance build_instance(std::span<const DirectedLink> case_links, const ChannelState& st,
                                   const ChannelConfig& cfg) {
  const std::size_t n = case_links.size();
  FeasibilityInstance inst;
  inst.links.assign(case_links.begin(), case_links.end());
  inst.direct_gain.resize(n);
  inst.cross_gain.assign(n * n, 0.0);
  inst.g_const.resize(n);
  inst.upper.assign(n, cfg.p_max_w);
  inst.weights.assign(n, kWeightFloor);
  inst.payload_bits.resize(n);
  inst.noise_power_w = cfg.noise_power_w;
  inst.bandwidth_hz = cfg.bandwidth_hz;
  inst.tau_max_s = cfg.tau_max_s;

  for (std::size_t i = 0; i < n; ++i) {
    const auto& link = case_links[i];
    inst.direct_gain[i] = st.gain(link.tx, link.rx);
    inst.payload_bits[i] = cfg.payload(link.tx);
    inst.g_const[i] = g_constant(inst.payload_bits[i], cfg.bandwidth_hz, cfg.tau_max_s);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (case_links[j].tx == link.tx || case_links[j].tx == link.rx) {
        throw InternalError(fmt::format("case links share node {}", case_links[j].tx));
      }
      inst.cross_gain[i * n + j] = st.gain(case_links[j].tx, link.rx);
    }
  }
  return inst;
}

void apply_queue_weights(FeasibilityInstance& inst, std::span<const double> node_weights) {
  for (std::size_t i = 0; i < inst.size(); ++i) {
    inst.weights[i] = std::max(node_weights[inst.links[i].tx], kWeightFloor);
  }
}

void apply_energy_caps(FeasibilityInstance& inst, std::span<const double> remaining_j) {
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const double cap = std::max(remaining_j[inst.links[i].tx], 0.0) / inst.tau_max_s;
    inst.upper[i] = std::min(inst.upper[i], cap);
  }
}

double case_sinr(const FeasibilityInstance& inst, std::span<const double> power, std::size_t i) {
  double interference = 0.0;
  for (std::size_t j = 0; j < inst.size(); ++j) {
    if (j != i) interference += inst.cross(i, j) * power[j];
  }
  return inst.direct_gain[i] * power[i] / (interference + inst.noise_power_w);
}

std::vector<double> solution_energy(const FeasibilityInstance& inst, std::span<const double> power) {
  std::vector<double> energy(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const double rate = achievable_rate(case_sinr(inst, power, i), inst.bandwidth_hz);
    energy[i] = transmission_energy(power[i], inst.payload_bits[i], rate, inst.tau_max_s);
  }
  return energy;
}

double max_relative_violation(const FeasibilityInstance& inst, std::span<const double> power) {
  double worst = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const double g = inst.g_const[i];
    double interference = 0.0;
    for (std::size_t j = 0; j < inst.size(); ++j) {
      if (j != i) interference += inst.cross(i, j) * power[j];
    }
    const double signal = inst.direct_gain[i] * power[i];
    const double lhs = signal - g * interference;
    const double rhs = g * inst.noise_power_w;
    const double scale = std::abs(signal) + g * std::abs(interference) + rhs;
    if (lhs < rhs && scale > 0.0) worst = std::max(worst, (rhs - lhs) / scale);
  }
  return worst;
}

PowerSolution solve_feasibility(const FeasibilityInstance& inst) {
  const std::size_t n = inst.size();
  PowerSolution sol;
  sol.power.assign(n, 0.0);

  // Variables x_k = P_i / upper_i for links with a positive cap; the rest are
  // pinned at zero power.
  std::vector<std::size_t> var_of(n, n);
  std::vector<std::size_t> link_of;
  for (std::size_t i = 0; i < n; ++i) {
    if (inst.upper[i] > 0.0) {
      var_of[i] = link_of.size();
      link_of.push_back(i);
    } else if (inst.g_const[i] > 0.0) {
      return sol;  // zero power cannot meet a positive SINR target
    }
  }

  detail::DenseLp lp;
  lp.num_vars = link_of.size();
  const double noise = inst.noise_power_w;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = inst.g_const[i];
    if (g <= 0.0) continue;  // zero payload: met by any power
    std::vector<double> row(lp.num_vars, 0.0);
    for (std::size_t k = 0; k < lp.num_vars; ++k) {
      const std::size_t j = link_of[k];
      row[k] = j == i ? inst.direct_gain[i] * inst.upper[i] / (g * noise)
                      : -inst.cross(i, j) * inst.upper[j] / noise;
    }
    lp.rows.push_back(std::move(row));
    lp.sense.push_back(detail::RowSense::greater_equal);
    lp.rhs.push_back(1.0);
  }
  for (std::size_t k = 0; k < lp.num_vars; ++k) {
    std::vector<double> row(lp.num_vars, 0.0);
    row[k] = 1.0;
    lp.rows.push_back(std::move(row));
    lp.sense.push_back(detail::RowSense::less_equal);
    lp.rhs.push_back(1.0);
  }
  lp.cost.resize(lp.num_vars);
  double cost_scale = 0.0;
  for (std::size_t k = 0; k < lp.num_vars; ++k) {
    const std::size_t i = link_of[k];
    lp.cost[k] = inst.weights[i] * inst.upper[i];
    cost_scale = std::max(cost_scale, lp.cost[k]);
  }
  if (cost_scale > 0.0) {
    for (double& c : lp.cost) c /= cost_scale;
  }

  const auto result = detail::solve_lp(lp);
  switch (result.status) {
    case detail::LpStatus::infeasible:
      return sol;
    case detail::LpStatus::iteration_limit:
      throw SolverError(fmt::format("simplex iteration cap reached after {} pivots", result.iterations));
    case detail::LpStatus::unbounded:
      throw SolverError("simplex reported an unbounded power problem");
    case detail::LpStatus::optimal:
      break;
  }

  for (std::size_t k = 0; k < lp.num_vars; ++k) {
    const std::size_t i = link_of[k];
    sol.power[i] = std::clamp(result.x[k] * inst.upper[i], 0.0, inst.upper[i]);
  }
  const double violation = max_relative_violation(inst, sol.power);
  if (violation > kResidualTol) {
    throw SolverError(fmt::format("power solution violates a rate constraint by {:.3g} (relative)", violation));
  }

  sol.feasible = true;
  sol.achieved_rate.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    sol.achieved_rate[i] = achievable_rate(case_sinr(inst, sol.power, i), inst.bandwidth_hz);
  }
  sol.energy = solution_energy(inst, sol.power);
  return sol;
}

}  // namespace wigsim

#include "wigsim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wigsim/error.hpp"

namespace wigsim::oracle {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Row {
  std::size_t link;
  double cell;  // change of the constraint value from one grid step in every power
};

}  // namespace

GridVerdict grid_feasibility(const FeasibilityInstance& inst, std::size_t resolution) {
  const std::size_t n = inst.size();
  if (n > 3) throw ParameterError("grid oracle supports at most 3 links");
  if (resolution == 0) throw ParameterError("grid resolution must be positive");

  GridVerdict verdict;
  verdict.best_margin = -kInf;
  verdict.min_weighted_power = kInf;
  if (n == 0) {
    verdict.feasible = true;
    verdict.best_margin = kInf;
    verdict.min_weighted_power = 0.0;
    return verdict;
  }

  const double res = static_cast<double>(resolution);
  std::vector<double> step(n);
  for (std::size_t i = 0; i < n; ++i) step[i] = std::max(inst.upper[i], 0.0) / res;

  std::vector<Row> rows;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = inst.g_const[i];
    if (g <= 0.0) continue;
    double cell = inst.direct_gain[i] * step[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) cell += g * inst.cross(i, j) * step[j];
    }
    rows.push_back({i, cell});
  }

  const std::size_t last = n - 1;
  std::vector<double> power(n, 0.0);

  auto lhs = [&](std::size_t i) {
    double interference = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) interference += inst.cross(i, j) * power[j];
    }
    const double g = inst.g_const[i];
    return inst.direct_gain[i] * power[i] - g * interference - g * inst.noise_power_w;
  };
  auto margin_at = [&](std::size_t k) {
    power[last] = static_cast<double>(k) * step[last];
    double worst = kInf;
    for (const auto& r : rows) {
      const double value = lhs(r.link);
      const double m = r.cell > 0.0 ? value / r.cell : (value >= 0.0 ? kInf : -kInf);
      worst = std::min(worst, m);
    }
    return worst;
  };
  auto weighted_power = [&] {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) total += inst.weights[j] * power[j];
    return total;
  };

  std::vector<std::size_t> index(n, 0);
  while (true) {
    for (std::size_t j = 0; j < last; ++j) power[j] = static_cast<double>(index[j]) * step[j];

    // Along the last axis each margin is affine, so their minimum is concave:
    // its grid maximum sits next to an endpoint or a pairwise crossing.
    std::vector<double> alpha, beta;
    for (const auto& r : rows) {
      power[last] = 0.0;
      const double a0 = lhs(r.link);
      power[last] = step[last];
      const double a1 = lhs(r.link);
      const double scale = r.cell > 0.0 ? r.cell : 1.0;
      alpha.push_back(a0 / scale);
      beta.push_back((a1 - a0) / scale);
    }
    std::vector<double> candidates{0.0, res};
    for (std::size_t a = 0; a < alpha.size(); ++a) {
      for (std::size_t b = a + 1; b < alpha.size(); ++b) {
        if (beta[a] != beta[b]) candidates.push_back((alpha[b] - alpha[a]) / (beta[a] - beta[b]));
      }
    }
    double best = -kInf;
    std::size_t best_k = 0;
    for (double c : candidates) {
      for (double k : {std::floor(c), std::ceil(c)}) {
        if (!(k >= 0.0)) k = 0.0;
        k = std::min(k, res);
        const double m = margin_at(static_cast<std::size_t>(k));
        if (m > best) {
          best = m;
          best_k = static_cast<std::size_t>(k);
        }
      }
    }
    verdict.best_margin = std::max(verdict.best_margin, best);

    if (best >= 0.0) {
      // Margin is non-decreasing on [0, best_k]; find the first feasible index.
      std::size_t lo = 0, hi = best_k;
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (margin_at(mid) >= 0.0) hi = mid;
        else lo = mid + 1;
      }
      margin_at(lo);
      const double wp = weighted_power();
      if (wp < verdict.min_weighted_power) {
        verdict.min_weighted_power = wp;
        verdict.argmin_power = power;
      }
    }

    std::size_t j = 0;
    while (j < last && index[j] == resolution) index[j++] = 0;
    if (j == last) break;
    ++index[j];
  }

  verdict.feasible = verdict.best_margin >= 0.0;
  return verdict;
}

FeasibilityInstance random_instance(std::mt19937_64& rng, std::size_t links) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) { return std::pow(10.0, lo + (hi - lo) * unif(rng)); };

  FeasibilityInstance inst;
  inst.noise_power_w = 1e-13;
  inst.bandwidth_hz = 1e6;
  inst.tau_max_s = 0.5;
  inst.cross_gain.assign(links * links, 0.0);
  for (std::size_t i = 0; i < links; ++i) {
    inst.links.push_back({static_cast<NodeId>(2 * i), static_cast<NodeId>(2 * i + 1)});
    inst.direct_gain.push_back(log_uniform(-12.5, -10.0));
    inst.payload_bits.push_back(1e6);
    inst.g_const.push_back(g_constant(1e6, inst.bandwidth_hz, inst.tau_max_s));
    inst.upper.push_back(0.5);
    inst.weights.push_back(log_uniform(-6.0, 0.0));
  }
  for (std::size_t i = 0; i < links; ++i) {
    for (std::size_t j = 0; j < links; ++j) {
      if (i != j) inst.cross_gain[i * links + j] = inst.direct_gain[i] * log_uniform(-2.5, 0.3);
    }
  }
  return inst;
}

RandomSubSlot random_subslot(std::mt19937_64& rng, std::size_t links) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) { return std::pow(10.0, lo + (hi - lo) * unif(rng)); };

  RandomSubSlot s;
  s.cfg.noise_power_w = 1e-13;
  for (std::size_t i = 0; i < links; ++i) {
    s.links.push_back({static_cast<NodeId>(2 * i), static_cast<NodeId>(2 * i + 1)});
  }
  std::vector<double> direct(links);
  for (std::size_t i = 0; i < links; ++i) direct[i] = log_uniform(-12.5, -10.0);
  for (std::size_t i = 0; i < links; ++i) {
    for (std::size_t j = 0; j < links; ++j) {
      const double g = i == j ? direct[i] : direct[i] * log_uniform(-3.0, 0.0);
      s.state.set_gain(s.links[j].tx, s.links[i].rx, g);
    }
  }
  s.weights.assign(2 * links, 0.0);
  for (std::size_t i = 0; i < links; ++i) {
    s.weights[2 * i] = unif(rng) < 0.3 ? 0.0 : log_uniform(-4.0, 0.0);
  }
  s.v = log_uniform(-6.0, -2.0);
  return s;
}

namespace {

// Objective of one link set, or +inf when infeasible.
double subset_objective(std::span<const DirectedLink> subset, const ChannelState& st, const ChannelConfig& cfg,
                        std::span<const double> weights, double v) {
  auto inst = build_instance(subset, st, cfg);
  apply_queue_weights(inst, weights);
  PowerSolution sol;
  try {
    sol = solve_feasibility(inst);
  } catch (const SolverError&) {
    return kInf;
  }
  if (!sol.feasible) return kInf;
  double weighted = 0.0;
  for (std::size_t i = 0; i < subset.size(); ++i) weighted += weights[subset[i].tx] * sol.energy[i];
  return -v * static_cast<double>(subset.size()) + weighted;
}

}  // namespace

SubsetBest best_nested_case(std::span<const DirectedLink> links, const ChannelState& st, const ChannelConfig& cfg,
                            std::span<const double> weights, double v) {
  std::vector<double> rate(links.size());
  for (std::size_t i = 0; i < links.size(); ++i) {
    double interference = 0.0;
    for (std::size_t j = 0; j < links.size(); ++j) {
      if (j != i) interference += st.gain(links[j].tx, links[i].rx) * cfg.p_max_w;
    }
    const double ratio = st.gain(links[i].tx, links[i].rx) * cfg.p_max_w / (interference + cfg.noise_power_w);
    rate[i] = cfg.bandwidth_hz * std::log2(1.0 + ratio);
  }
  std::vector<std::size_t> order(links.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rate[a] != rate[b]) return rate[a] > rate[b];
    return links[a] < links[b];
  });

  SubsetBest best{0.0, {}};  // empty prefix
  std::vector<DirectedLink> prefix;
  for (std::size_t k = 1; k <= order.size(); ++k) {
    prefix.push_back(links[order[k - 1]]);
    const double obj = subset_objective(prefix, st, cfg, weights, v);
    if (obj < best.objective || (obj == best.objective && prefix.size() > best.links.size())) {
      best = {obj, prefix};
    }
  }
  return best;
}

SubsetBest best_subset(std::span<const DirectedLink> links, const ChannelState& st, const ChannelConfig& cfg,
                       std::span<const double> weights, double v) {
  if (links.size() > 20) throw ParameterError("subset oracle limited to 20 links");
  SubsetBest best{0.0, {}};
  const std::size_t total = std::size_t{1} << links.size();
  for (std::size_t mask = 1; mask < total; ++mask) {
    std::vector<DirectedLink> subset;
    for (std::size_t i = 0; i < links.size(); ++i) {
      if (mask & (std::size_t{1} << i)) subset.push_back(links[i]);
    }
    const double obj = subset_objective(subset, st, cfg, weights, v);
    if (obj < best.objective) best = {obj, std::move(subset)};
  }
  return best;
}

}  // namespace wigsim::oracle

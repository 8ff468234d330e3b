#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wigsim/channel.hpp"

namespace wigsim {

/// Per-node energy-deficit queues Z_u(t), in joules. Start empty.
struct VirtualQueues {
  std::vector<double> z;
  std::size_t slot{0};

  static VirtualQueues empty(std::size_t n) { return {std::vector<double>(n, 0.0), 0}; }
  double mean() const;
};

struct LyapunovConfig {
  double v{1e-5};  // weight on the link count; must be >= 0

  void validate() const;
};

/// Z_u <- max(Z_u + E_u - budget_u, 0), elementwise; advances the slot counter.
VirtualQueues update_queues(const VirtualQueues& q, std::span<const double> energies,
                            std::span<const double> budgets);

/// L(Z) = 1/2 sum Z_u^2.
double lyapunov_value(const VirtualQueues& q);

/// Constant of the one-slot drift bound, per node, evaluated at peak power:
/// 1/2 ((P_max tau_max)^2 + budget_u^2). Diagnostic only.
std::vector<double> theta_bound(const ChannelConfig& cfg, std::span<const double> budgets);

/// Drift-plus-penalty value -v * n_links + sum_u z_u e_u.
double drift_penalty(std::size_t n_links, std::span<const double> energies, std::span<const double> z,
                     double v);

/// Time-normalized mean backlog: element i is mean(history[i]) / (i + 1),
/// treating history[0] as slot 1.
std::vector<double> mean_rate_series(std::span<const VirtualQueues> history);

}  // namespace wigsim

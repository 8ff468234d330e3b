#include "wigsim/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "wigsim/error.hpp"

namespace wigsim {

double VirtualQueues::mean() const {
  if (z.empty()) return 0.0;
  return std::accumulate(z.begin(), z.end(), 0.0) / static_cast<double>(z.size());
}

void LyapunovConfig::validate() const {
  if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError(fmt::format("V must be >= 0, got {}", v));
}

VirtualQueues update_queues(const VirtualQueues& q, std::span<const double> energies,
                            std::span<const double> budgets) {
  if (energies.size() != q.z.size() || budgets.size() != q.z.size()) {
    throw ParameterError("queue, energy and budget vectors must have equal length");
  }
  VirtualQueues next{std::vector<double>(q.z.size()), q.slot + 1};
  for (std::size_t u = 0; u < q.z.size(); ++u) {
    next.z[u] = std::max(q.z[u] + energies[u] - budgets[u], 0.0);
  }
  return next;
}

double lyapunov_value(const VirtualQueues& q) {
  double sum = 0.0;
  for (double z : q.z) sum += z * z;
  return 0.5 * sum;
}

std::vector<double> theta_bound(const ChannelConfig& cfg, std::span<const double> budgets) {
  const double peak = cfg.p_max_w * cfg.tau_max_s;
  std::vector<double> theta(budgets.size());
  for (std::size_t u = 0; u < budgets.size(); ++u) {
    theta[u] = 0.5 * (peak * peak + budgets[u] * budgets[u]);
  }
  return theta;
}

double drift_penalty(std::size_t n_links, std::span<const double> energies, std::span<const double> z,
                     double v) {
  if (energies.size() != z.size()) throw ParameterError("energy and queue vectors differ in length");
  double weighted = 0.0;
  for (std::size_t u = 0; u < z.size(); ++u) weighted += z[u] * energies[u];
  return -v * static_cast<double>(n_links) + weighted;
}

std::vector<double> mean_rate_series(std::span<const VirtualQueues> history) {
  std::vector<double> series(history.size());
  for (std::size_t i = 0; i < history.size(); ++i) {
    series[i] = history[i].mean() / static_cast<double>(i + 1);
  }
  return series;
}

}  // namespace wigsim

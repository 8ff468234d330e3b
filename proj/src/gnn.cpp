#include "wigsim/gnn.hpp"

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "wigsim/error.hpp"
#include "wigsim/random.hpp"

namespace wigsim {

GcnModel init_model(std::size_t feature_dim, std::size_t hidden, std::size_t classes, std::uint64_t seed) {
  if (feature_dim == 0 || hidden == 0 || classes == 0) throw ParameterError("GCN dimensions must be positive");
  std::mt19937_64 rng(derive_seed({seed, stream::model}));
  auto glorot = [&rng](std::size_t fan_in, std::size_t fan_out) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Eigen::MatrixXd w(fan_in, fan_out);
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = (2.0 * unit_interval(rng()) - 1.0) * limit;
    }
    return w;
  };
  GcnModel model;
  model.w1 = glorot(feature_dim, hidden);
  model.w2 = glorot(hidden, classes);
  return model;
}

MaskedAggregator build_aggregator(const Graph& g, const std::vector<std::uint8_t>& delivered,
                                  const AggregatorOptions& opts) {
  const std::size_t n = g.num_nodes();
  if (delivered.size() != n * n) throw ParameterError("indicator matrix must be n x n");
  const double extra = opts.self_loops ? 1.0 : 0.0;
  std::vector<double> inv_sqrt_deg(n, 0.0);
  for (NodeId v = 0; v < n; ++v) {
    const double d = static_cast<double>(degree(g, v)) + extra;
    if (d > 0.0) inv_sqrt_deg[v] = 1.0 / std::sqrt(d);
  }

  std::vector<Eigen::Triplet<double>> entries;
  for (NodeId v = 0; v < n; ++v) {
    if (opts.self_loops) entries.emplace_back(v, v, inv_sqrt_deg[v] * inv_sqrt_deg[v]);
    for (NodeId u : g.neighbors(v)) {
      if (delivered[u * n + v]) entries.emplace_back(v, u, inv_sqrt_deg[v] * inv_sqrt_deg[u]);
    }
  }
  MaskedAggregator agg;
  agg.norm_adj.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  agg.norm_adj.setFromTriplets(entries.begin(), entries.end());
  return agg;
}

MaskedAggregator build_aggregator(const Graph& g, const SlotOutcome& outcome, const AggregatorOptions& opts) {
  if (outcome.num_nodes != g.num_nodes()) throw ParameterError("slot outcome does not match graph size");
  return build_aggregator(g, outcome.activated, opts);
}

MaskedAggregator full_aggregator(const Graph& g, const AggregatorOptions& opts) {
  const std::size_t n = g.num_nodes();
  std::vector<std::uint8_t> all(n * n, 0);
  for (const auto& l : directed_links(g)) all[l.tx * n + l.rx] = 1;
  return build_aggregator(g, all, opts);
}

namespace {

void check_shapes(const GcnModel& model, const Graph& g, const MaskedAggregator& agg) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  if (agg.norm_adj.rows() != n || agg.norm_adj.cols() != n) {
    throw ParameterError(fmt::format("aggregator is {}x{}, graph has {} nodes", agg.norm_adj.rows(),
                                     agg.norm_adj.cols(), n));
  }
  if (model.w1.rows() != g.features().cols() || model.w2.rows() != model.w1.cols() ||
      model.w2.cols() != static_cast<Eigen::Index>(g.num_classes())) {
    throw ParameterError("GCN weight shapes do not match the graph");
  }
}

struct ForwardCache {
  Eigen::MatrixXd agg_x;    // A X
  Eigen::MatrixXd pre1;     // A X W1
  Eigen::MatrixXd hidden;   // relu(pre1)
  Eigen::MatrixXd agg_h;    // A H
  Eigen::MatrixXd logits;   // A H W2
};

ForwardCache run_forward(const GcnModel& model, const Graph& g, const MaskedAggregator& agg) {
  check_shapes(model, g, agg);
  ForwardCache c;
  c.agg_x = agg.norm_adj * g.features();
  c.pre1 = c.agg_x * model.w1;
  c.hidden = c.pre1.cwiseMax(0.0);
  c.agg_h = agg.norm_adj * c.hidden;
  c.logits = c.agg_h * model.w2;
  return c;
}

std::size_t mask_count(const std::vector<bool>& mask, std::size_t n) {
  if (mask.size() != n) throw ParameterError("mask size does not match node count");
  std::size_t count = 0;
  for (bool b : mask) count += b ? 1 : 0;
  if (count == 0) throw ParameterError("mask selects no nodes");
  return count;
}

}  // namespace

Eigen::MatrixXd forward(const GcnModel& model, const Graph& g, const MaskedAggregator& agg) {
  return run_forward(model, g, agg).logits;
}

LossAndGrad loss_and_grad(const GcnModel& model, const Graph& g, const MaskedAggregator& agg,
                          const std::vector<bool>& mask) {
  const std::size_t count = mask_count(mask, g.num_nodes());
  const auto c = run_forward(model, g, agg);
  const double inv_count = 1.0 / static_cast<double>(count);

  LossAndGrad out;
  Eigen::MatrixXd d_logits = Eigen::MatrixXd::Zero(c.logits.rows(), c.logits.cols());
  for (Eigen::Index v = 0; v < c.logits.rows(); ++v) {
    if (!mask[static_cast<std::size_t>(v)]) continue;
    const auto row = c.logits.row(v);
    const double peak = row.maxCoeff();
    const Eigen::RowVectorXd e = (row.array() - peak).exp();
    const double z = e.sum();
    const int label = g.labels()[static_cast<std::size_t>(v)];
    out.loss += (std::log(z) + peak - row(label)) * inv_count;
    d_logits.row(v) = e / z * inv_count;
    d_logits(v, label) -= inv_count;
  }

  out.grads.w2 = c.agg_h.transpose() * d_logits;
  const Eigen::MatrixXd d_hidden = agg.norm_adj.transpose() * (d_logits * model.w2.transpose());
  const Eigen::MatrixXd d_pre1 = d_hidden.cwiseProduct((c.pre1.array() > 0.0).cast<double>().matrix());
  out.grads.w1 = c.agg_x.transpose() * d_pre1;
  return out;
}

GcnModel train_step(const GcnModel& model, const GcnGradients& grads, double lr) {
  return {model.w1 - lr * grads.w1, model.w2 - lr * grads.w2};
}

double evaluate(const GcnModel& model, const Graph& g, const MaskedAggregator& agg, const std::vector<bool>& mask) {
  const std::size_t count = mask_count(mask, g.num_nodes());
  const auto logits = forward(model, g, agg);
  std::size_t correct = 0;
  for (Eigen::Index v = 0; v < logits.rows(); ++v) {
    if (!mask[static_cast<std::size_t>(v)]) continue;
    Eigen::Index best = 0;
    logits.row(v).maxCoeff(&best);
    if (best == g.labels()[static_cast<std::size_t>(v)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(count);
}

}  // namespace wigsim

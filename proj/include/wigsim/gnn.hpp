#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "wigsim/graph.hpp"
#include "wigsim/greedy.hpp"

namespace wigsim {

/// Two-layer GCN weights: features (d) -> hidden (h) -> classes (c).
struct GcnModel {
  Eigen::MatrixXd w1;  // d x h
  Eigen::MatrixXd w2;  // h x c
};

/// Glorot-uniform initialization, deterministic per seed.
GcnModel init_model(std::size_t feature_dim, std::size_t hidden, std::size_t classes, std::uint64_t seed);

struct GcnGradients {
  Eigen::MatrixXd w1;
  Eigen::MatrixXd w2;
};

/// Row v holds the weights receiver v applies to each neighbor's message:
/// 1_uv / (sqrt(deg v) sqrt(deg u)) for delivered messages, 0 otherwise.
/// Degrees always come from the full graph.
struct MaskedAggregator {
  Eigen::SparseMatrix<double, Eigen::RowMajor> norm_adj;
};

struct AggregatorOptions {
  bool self_loops{false};  // add a never-dropped self message, degrees counted +1
};

/// Aggregator for the messages delivered in `outcome`.
MaskedAggregator build_aggregator(const Graph& g, const SlotOutcome& outcome, const AggregatorOptions& opts = {});
/// Aggregator with every message delivered.
MaskedAggregator full_aggregator(const Graph& g, const AggregatorOptions& opts = {});
/// Aggregator from an explicit n x n indicator matrix ([tx * n + rx]).
MaskedAggregator build_aggregator(const Graph& g, const std::vector<std::uint8_t>& delivered,
                                  const AggregatorOptions& opts = {});

/// Logits agg * relu(agg * X * W1) * W2, n x c.
Eigen::MatrixXd forward(const GcnModel& model, const Graph& g, const MaskedAggregator& agg);

struct LossAndGrad {
  double loss{0.0};
  GcnGradients grads;
};

/// Mean softmax cross-entropy over `mask` and its exact gradient.
/// Throws ParameterError for an empty mask.
LossAndGrad loss_and_grad(const GcnModel& model, const Graph& g, const MaskedAggregator& agg,
                          const std::vector<bool>& mask);

/// Plain gradient descent step.
GcnModel train_step(const GcnModel& model, const GcnGradients& grads, double lr);

/// Argmax accuracy over `mask`. Throws ParameterError for an empty mask.
double evaluate(const GcnModel& model, const Graph& g, const MaskedAggregator& agg, const std::vector<bool>& mask);

}  // namespace wigsim

#pragma once

#include <algorithm>
#include <cmath>

#include "wigsim/gnn.hpp"

namespace wigsim::test {

struct GradCheck {
  double worst_relative{0.0};
  std::size_t entries{0};
};

/// Compares loss_and_grad with central differences of step h on every weight.
/// Relative error is |a - n| / max(|a|, |n|, floor).
inline GradCheck check_gradients(const GcnModel& model, const Graph& g, const MaskedAggregator& agg,
                                 const std::vector<bool>& mask, double h = 1e-4, double floor = 1e-7) {
  const auto analytic = loss_and_grad(model, g, agg, mask).grads;
  GradCheck out;
  auto sweep = [&](Eigen::MatrixXd GcnModel::*w, const Eigen::MatrixXd& grad) {
    for (Eigen::Index i = 0; i < grad.rows(); ++i) {
      for (Eigen::Index j = 0; j < grad.cols(); ++j) {
        GcnModel plus = model, minus = model;
        (plus.*w)(i, j) += h;
        (minus.*w)(i, j) -= h;
        const double numeric =
            (loss_and_grad(plus, g, agg, mask).loss - loss_and_grad(minus, g, agg, mask).loss) / (2.0 * h);
        const double a = grad(i, j);
        const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
        out.worst_relative = std::max(out.worst_relative, rel);
        ++out.entries;
      }
    }
  };
  sweep(&GcnModel::w1, analytic.w1);
  sweep(&GcnModel::w2, analytic.w2);
  return out;
}

}  // namespace wigsim::test

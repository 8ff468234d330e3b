#pragma once

// Dense two-phase primal simplex for small problems:
//
//   minimize c'x  subject to  A_i x {>=, <=, =} b_i,  x >= 0.
//
// Bland's rule on both entering and leaving choices, so the method
// terminates on degenerate problems without cycling.

#include <cstddef>
#include <vector>

namespace wigsim::detail {

enum class RowSense { greater_equal, less_equal, equal };

struct DenseLp {
  std::size_t num_vars{0};
  std::vector<std::vector<double>> rows;  // each of length num_vars
  std::vector<RowSense> sense;
  std::vector<double> rhs;
  std::vector<double> cost;  // length num_vars
};

struct SimplexOptions {
  double pivot_tol{1e-12};
  double feasibility_tol{1e-9};
  double optimality_tol{1e-12};
  /// 0 means 10 * (rows + columns) of the tableau, per phase.
  std::size_t max_iterations{0};
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
  LpStatus status{LpStatus::infeasible};
  std::vector<double> x;
  double objective{0.0};
  std::size_t iterations{0};
};

LpResult solve_lp(const DenseLp& lp, const SimplexOptions& options = {});

}  // namespace wigsim::detail

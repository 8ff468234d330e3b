#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wigsim/error.hpp"

namespace wigsim::detail {
namespace {

class Tableau {
 public:
  Tableau(const DenseLp& lp, const SimplexOptions& options) : opt_(options), n_(lp.num_vars) {
    const std::size_t m = lp.rows.size();
    if (lp.sense.size() != m || lp.rhs.size() != m || lp.cost.size() != n_) {
      throw ParameterError("inconsistent LP dimensions");
    }

    // Column layout: original | slack/surplus | artificial.
    std::size_t n_slack = 0, n_art = 0;
    std::vector<RowSense> sense(lp.sense);
    std::vector<double> sign(m, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
      if (lp.rhs[i] < 0.0) {
        sign[i] = -1.0;
        if (sense[i] == RowSense::greater_equal) {
          sense[i] = RowSense::less_equal;
        } else if (sense[i] == RowSense::less_equal) {
          sense[i] = RowSense::greater_equal;
        }
      }
      if (sense[i] != RowSense::equal) ++n_slack;
      if (sense[i] != RowSense::less_equal) ++n_art;
    }
    cols_ = n_ + n_slack + n_art;
    artificial_.assign(cols_, false);
    t_.assign(m, std::vector<double>(cols_ + 1, 0.0));
    basis_.assign(m, 0);

    std::size_t slack_col = n_, art_col = n_ + n_slack;
    for (std::size_t i = 0; i < m; ++i) {
      if (lp.rows[i].size() != n_) throw ParameterError("LP row has wrong length");
      for (std::size_t j = 0; j < n_; ++j) t_[i][j] = sign[i] * lp.rows[i][j];
      t_[i][cols_] = sign[i] * lp.rhs[i];
      switch (sense[i]) {
        case RowSense::less_equal:
          t_[i][slack_col] = 1.0;
          basis_[i] = slack_col++;
          break;
        case RowSense::greater_equal:
          t_[i][slack_col++] = -1.0;
          t_[i][art_col] = 1.0;
          artificial_[art_col] = true;
          basis_[i] = art_col++;
          break;
        case RowSense::equal:
          t_[i][art_col] = 1.0;
          artificial_[art_col] = true;
          basis_[i] = art_col++;
          break;
      }
    }
    max_iter_ = opt_.max_iterations ? opt_.max_iterations : 10 * (m + cols_);
  }

  bool has_artificials() const {
    return std::find(artificial_.begin(), artificial_.end(), true) != artificial_.end();
  }

  /// Minimizes cost over the columns not excluded; returns status.
  LpStatus optimize(const std::vector<double>& cost, bool allow_artificial) {
    const std::size_t m = t_.size();
    reduced_.assign(cols_, 0.0);
    for (std::size_t j = 0; j < cols_; ++j) {
      double d = cost[j];
      for (std::size_t i = 0; i < m; ++i) d -= cost[basis_[i]] * t_[i][j];
      reduced_[j] = d;
    }

    for (std::size_t iter = 0;; ++iter) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!allow_artificial && artificial_[j]) continue;
        if (reduced_[j] < -opt_.optimality_tol) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return LpStatus::optimal;
      if (iter >= max_iter_) return LpStatus::iteration_limit;

      std::size_t leave = m;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        const double a = t_[i][enter];
        if (a <= opt_.pivot_tol) continue;
        const double ratio = std::max(t_[i][cols_], 0.0) / a;
        const double slack = 1e-14 * std::max(1.0, std::abs(best));
        if (leave == m || ratio < best - slack ||
            (ratio <= best + slack && basis_[i] < basis_[leave])) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave == m) return LpStatus::unbounded;
      pivot(leave, enter);
      ++iterations_;
    }
  }

  /// Pivots basic artificials (at zero level) out where possible.
  void expel_artificials() {
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (!artificial_[basis_[i]]) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!artificial_[j] && std::abs(t_[i][j]) > opt_.pivot_tol) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  double value(const std::vector<double>& cost) const {
    double z = 0.0;
    for (std::size_t i = 0; i < t_.size(); ++i) z += cost[basis_[i]] * t_[i][cols_];
    return z;
  }

  std::vector<double> primal() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (basis_[i] < n_) x[basis_[i]] = std::max(t_[i][cols_], 0.0);
    }
    return x;
  }

  std::size_t columns() const { return cols_; }
  bool is_artificial(std::size_t j) const { return artificial_[j]; }
  std::size_t iterations() const { return iterations_; }

 private:
  void pivot(std::size_t r, std::size_t c) {
    auto& row = t_[r];
    const double p = row[c];
    for (double& v : row) v /= p;
    row[c] = 1.0;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (i == r) continue;
      const double f = t_[i][c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) t_[i][j] -= f * row[j];
      t_[i][c] = 0.0;
    }
    const double f = reduced_.empty() ? 0.0 : reduced_[c];
    if (f != 0.0) {
      for (std::size_t j = 0; j < cols_; ++j) reduced_[j] -= f * row[j];
      reduced_[c] = 0.0;
    }
    basis_[r] = c;
  }

  SimplexOptions opt_;
  std::size_t n_;
  std::size_t cols_{0};
  std::size_t max_iter_{0};
  std::size_t iterations_{0};
  std::vector<std::vector<double>> t_;
  std::vector<double> reduced_;
  std::vector<std::size_t> basis_;
  std::vector<bool> artificial_;
};

}  // namespace

LpResult solve_lp(const DenseLp& lp, const SimplexOptions& options) {
  Tableau tab(lp, options);
  LpResult result;

  if (tab.has_artificials()) {
    std::vector<double> phase1(tab.columns(), 0.0);
    for (std::size_t j = 0; j < tab.columns(); ++j) phase1[j] = tab.is_artificial(j) ? 1.0 : 0.0;
    const auto status = tab.optimize(phase1, true);
    result.iterations = tab.iterations();
    if (status == LpStatus::iteration_limit) {
      result.status = status;
      return result;
    }
    double scale = 1.0;
    for (double b : lp.rhs) scale = std::max(scale, std::abs(b));
    if (tab.value(phase1) > options.feasibility_tol * scale) {
      result.status = LpStatus::infeasible;
      return result;
    }
    tab.expel_artificials();
  }

  std::vector<double> phase2(tab.columns(), 0.0);
  std::copy(lp.cost.begin(), lp.cost.end(), phase2.begin());
  result.status = tab.optimize(phase2, false);
  result.iterations = tab.iterations();
  if (result.status == LpStatus::optimal) {
    result.x = tab.primal();
    result.objective = 0.0;
    for (std::size_t j = 0; j < lp.num_vars; ++j) result.objective += lp.cost[j] * result.x[j];
  }
  return result;
}

}  // namespace wigsim::detail

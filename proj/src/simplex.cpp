#include "diot/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "diot/error.hpp"

namespace diot::lp {
namespace {

constexpr int kMaxPivots = 100'000;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t i, std::size_t j) { return data_[i * (cols_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * (cols_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, cols_); }
  double rhs(std::size_t i) const { return at(i, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  // `reduced` has cols + 1 entries; the last holds minus the objective value.
  void pivot(std::size_t row, std::size_t col, std::vector<double>& reduced) {
    const double p = at(row, col);
    for (std::size_t j = 0; j <= cols_; ++j) at(row, j) /= p;
    at(row, col) = 1.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == row) continue;
      const double factor = at(i, col);
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= factor * at(row, j);
      at(i, col) = 0.0;
    }
    const double factor = reduced[col];
    if (factor != 0.0) {
      for (std::size_t j = 0; j <= cols_; ++j) reduced[j] -= factor * at(row, j);
      reduced[col] = 0.0;
    }
    basis_[row] = col;
  }

  void remove_row(std::size_t row) {
    data_.erase(data_.begin() + static_cast<std::ptrdiff_t>(row * (cols_ + 1)),
                data_.begin() + static_cast<std::ptrdiff_t>((row + 1) * (cols_ + 1)));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(row));
    --rows_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

enum class Outcome { kOptimal, kUnbounded };

// Bland's rule: lowest-index improving column, lowest basic index among ratio ties.
Outcome iterate(Tableau& t, std::vector<double>& reduced, const std::vector<bool>& allowed,
                double tol) {
  for (int step = 0; step < kMaxPivots; ++step) {
    std::size_t entering = t.cols();
    for (std::size_t j = 0; j < t.cols(); ++j) {
      if (allowed[j] && reduced[j] < -tol) {
        entering = j;
        break;
      }
    }
    if (entering == t.cols()) return Outcome::kOptimal;

    std::size_t leaving = t.rows();
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.rows(); ++i) {
      const double a = t.at(i, entering);
      if (a <= tol) continue;
      const double ratio = t.rhs(i) / a;
      if (ratio < best_ratio - tol ||
          (std::abs(ratio - best_ratio) <= tol && t.basis()[i] < t.basis()[leaving])) {
        best_ratio = ratio;
        leaving = i;
      }
    }
    if (leaving == t.rows()) return Outcome::kUnbounded;
    t.pivot(leaving, entering, reduced);
  }
  throw DiotError(ErrorCode::kInvalidArgument, "simplex exceeded its pivot budget");
}

}  // namespace

LpResult solve(const LinearProgram& problem, double pivot_tol) {
  const std::size_t n = problem.num_vars;
  const std::size_t m = problem.rows.size();
  std::vector<bool> free_vars = problem.free_vars;
  free_vars.resize(n, false);
  for (const auto& row : problem.rows) {
    if (row.coefs.size() != n) {
      throw DiotError(ErrorCode::kInvalidArgument, "LP row width does not match variable count");
    }
  }

  // Column layout: [x_j or x_j^+ | x_j^- for free j | slacks | artificials].
  std::vector<std::size_t> pos_col(n), neg_col(n, 0);
  std::size_t cols = 0;
  for (std::size_t j = 0; j < n; ++j) pos_col[j] = cols++;
  for (std::size_t j = 0; j < n; ++j) {
    if (free_vars[j]) neg_col[j] = cols++;
  }
  std::vector<std::size_t> slack_col(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    if (problem.rows[i].sense == RowSense::kLessEqual) slack_col[i] = cols++;
  }
  const std::size_t first_artificial = cols;
  cols += m;

  Tableau t(m, cols);
  std::vector<double> sign(m, 1.0);
  double rhs_scale = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Row& row = problem.rows[i];
    sign[i] = row.rhs < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      t.at(i, pos_col[j]) = sign[i] * row.coefs[j];
      if (free_vars[j]) t.at(i, neg_col[j]) = -sign[i] * row.coefs[j];
    }
    if (row.sense == RowSense::kLessEqual) t.at(i, slack_col[i]) = sign[i];
    t.at(i, first_artificial + i) = 1.0;
    t.rhs(i) = sign[i] * row.rhs;
    t.basis()[i] = first_artificial + i;
    rhs_scale = std::max(rhs_scale, std::abs(row.rhs));
  }

  // Phase 1: minimize the sum of artificials.
  std::vector<double> reduced(cols + 1, 0.0);
  for (std::size_t j = first_artificial; j < cols; ++j) reduced[j] = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= cols; ++j) reduced[j] -= t.at(i, j);
  }
  std::vector<bool> allowed(cols, true);
  iterate(t, reduced, allowed, pivot_tol);

  LpResult result;
  const double infeasibility = -reduced[cols];
  if (infeasibility > pivot_tol * rhs_scale) {
    result.status = LpStatus::kInfeasible;
    result.farkas.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double y = 1.0 - reduced[first_artificial + i];
      result.farkas[i] = -y * sign[i];
    }
    return result;
  }

  // Drive remaining artificials out of the basis; rows where that fails are redundant.
  for (std::size_t j = first_artificial; j < cols; ++j) allowed[j] = false;
  for (std::size_t i = 0; i < t.rows();) {
    if (t.basis()[i] < first_artificial) {
      ++i;
      continue;
    }
    std::size_t col = first_artificial;
    for (std::size_t j = 0; j < first_artificial; ++j) {
      if (std::abs(t.at(i, j)) > pivot_tol) {
        col = j;
        break;
      }
    }
    if (col == first_artificial) {
      t.remove_row(i);
    } else {
      t.pivot(i, col, reduced);
      ++i;
    }
  }

  // Phase 2.
  std::vector<double> cost(cols, 0.0);
  if (!problem.objective.empty()) {
    if (problem.objective.size() != n) {
      throw DiotError(ErrorCode::kInvalidArgument, "LP objective width does not match");
    }
    for (std::size_t j = 0; j < n; ++j) {
      cost[pos_col[j]] = problem.objective[j];
      if (free_vars[j]) cost[neg_col[j]] = -problem.objective[j];
    }
  }
  std::fill(reduced.begin(), reduced.end(), 0.0);
  for (std::size_t j = 0; j < cols; ++j) reduced[j] = cost[j];
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const double cb = cost[t.basis()[i]];
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j <= cols; ++j) reduced[j] -= cb * t.at(i, j);
  }
  const Outcome outcome = iterate(t, reduced, allowed, pivot_tol);

  std::vector<double> column_value(cols, 0.0);
  for (std::size_t i = 0; i < t.rows(); ++i) column_value[t.basis()[i]] = t.rhs(i);
  result.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    result.x[j] = column_value[pos_col[j]] - (free_vars[j] ? column_value[neg_col[j]] : 0.0);
  }
  result.objective_value = -reduced[cols];
  result.status = outcome == Outcome::kOptimal ? LpStatus::kOptimal : LpStatus::kUnbounded;
  return result;
}

}  // namespace diot::lp

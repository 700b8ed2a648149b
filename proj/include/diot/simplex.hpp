#pragma once

#include <cstddef>
#include <vector>

namespace diot::lp {

enum class RowSense { kEqual, kLessEqual };

struct Row {
  std::vector<double> coefs;  // one per variable
  RowSense sense = RowSense::kEqual;
  double rhs = 0.0;
};

/// minimize objective . x  subject to the rows, with x_j >= 0 unless
/// free_vars[j]. An empty objective asks for any feasible point.
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<bool> free_vars;
  std::vector<Row> rows;
  std::vector<double> objective;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective_value = 0.0;
  // Farkas multipliers, one per row, set when infeasible: z_i >= 0 on
  // kLessEqual rows, z^T A >= 0 on sign-restricted columns, z^T A = 0 on free
  // columns and z^T b < 0.
  std::vector<double> farkas;
};

/// Dense two-phase tableau simplex with Bland's rule.
LpResult solve(const LinearProgram& problem, double pivot_tol = 1e-9);

}  // namespace diot::lp

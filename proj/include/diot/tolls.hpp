#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diot/cost.hpp"
#include "diot/network.hpp"
#include "diot/simplex.hpp"
#include "diot/solver.hpp"

namespace diot {

/// Result of the order-shift constructions. For an order v_(1..n) every edge
/// v_(i) -> v_(j) gets delta = j - i, and every path of commodity i has delta
/// sum equal to delta_per_commodity[i].
struct TollConstruction {
  TollVector tolls;
  std::vector<VertexIndex> vertex_order;
  std::vector<long> delta;
  std::vector<long> delta_per_commodity;
  double xi = 0.0;
  double chi = 0.0;
  double gamma = 0.0;
};

/// tau_e = -beta/(beta+1) t_e. Throws kNotBpr unless every edge is BPR-type
/// with the network degree.
TollVector trivial_diot(const Network& network);

/// Trivial toll shifted by delta_e * chi along a topological order, where
/// chi = max(-min_e tau_e/delta_e, 0). Entrywise non-negative.
/// Throws kCyclicGraph or kNotBpr.
TollConstruction nonnegative_diot_dag(const Network& network);

/// Trivial toll shifted by delta_e * gamma along an order with every origin
/// before its destination; gamma is the smallest value making every path's
/// toll sum non-negative. Throws kNoValidOrder or kNotBpr.
TollConstruction budget_diot(const Network& network);

/// Per commodity, the paths (global path indices) treated as used by some optimum.
struct UsedPathSet {
  std::vector<std::vector<PathIndex>> per_commodity;

  bool contains(CommodityIndex i, PathIndex p) const;
  std::size_t size() const;
  static UsedPathSet all_paths(const Network& network);
};

/// One row of the toll optimality system over edge tolls:
///   sum_e coef_e tau_e + constant  (== or <=)  0
/// which encodes S(first) == S(second) or S(first) <= S(second) for the path
/// sums S(p) = sum_{e in p} (tau_e + beta/(beta+1) t_e).
struct DiotConstraint {
  enum class Kind { kEqual, kLessEqual };
  Kind kind = Kind::kEqual;
  CommodityIndex commodity = 0;
  PathIndex first = 0;
  PathIndex second = 0;
  std::vector<std::pair<EdgeIndex, double>> coefficients;  // sorted by edge
  double constant = 0.0;
};

struct DiotConstraintSystem {
  std::size_t num_edges = 0;
  std::vector<DiotConstraint> constraints;
  // beta/(beta+1) * sum_{e in p} t_e for every enumerated path.
  std::vector<double> path_constants;
};

/// Equalities between every pair of used paths and inequalities from every
/// used path to every unused path of the same commodity. Throws kNotBpr.
DiotConstraintSystem build_constraint_system(const Network& network, const UsedPathSet& used);

enum class LpObjective { kFeasibility, kMinimizeTotalToll };

struct DiotLpOptions {
  bool require_nonnegative = false;
  LpObjective objective = LpObjective::kFeasibility;
  // Edges whose toll may vary; the rest are fixed at 0. Empty means all.
  std::vector<bool> active_edges;
};

/// Aggregated constraint that no admissible toll satisfies:
///   sum_e coefficients_e tau_e  (== or <=)  rhs.
struct InfeasibilityCertificate {
  std::vector<double> coefficients;
  double rhs = 0.0;
  bool equality = true;
};

struct DiotLpResult {
  lp::LpStatus status = lp::LpStatus::kInfeasible;
  TollVector tolls;
  std::optional<InfeasibilityCertificate> certificate;
};

DiotLpResult solve_diot_lp(const DiotConstraintSystem& system, const DiotLpOptions& options = {});

/// Renders e.g. "τ₃+τ₄=−1.5" using the edge ids (e<N> ids become subscripts).
std::string describe_certificate(const Network& network, const InfeasibilityCertificate& cert);

/// tau_e = x*_e c_e'(x*_e) at the system optimum for this demand.
TollVector marginal_cost_tolls(const Network& network, const DemandVector& demand,
                               const SolverConfig& config = {});

}  // namespace diot

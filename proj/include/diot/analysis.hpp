#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "diot/network.hpp"
#include "diot/solver.hpp"
#include "diot/tolls.hpp"

namespace diot {

inline constexpr std::size_t kMaxGridPoints = 10'000;

/// A finite set of demand vectors, stored explicitly in evaluation order.
struct DemandGrid {
  std::vector<DemandVector> points;

  /// Cartesian product of per-commodity value lists; the first commodity
  /// varies slowest. Throws kInvalidArgument for negative or empty lists and
  /// for products above kMaxGridPoints.
  static DemandGrid product(const std::vector<std::vector<double>>& per_commodity);
  static DemandGrid list(std::vector<DemandVector> points);
  /// One commodity, one value per point.
  static DemandGrid single(const std::vector<double>& values);
};

/// count values geometrically spaced from lo to hi inclusive (lo > 0).
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

/// Demand at which the commodity's cheapest free-flow path, carrying all of
/// it, becomes as expensive as its costliest free-flow path. Falls back to 1
/// when the free-flow costs coincide or the cheap path never catches up.
double demand_scale(const Network& network, CommodityIndex commodity);

/// 40 log-spaced values in [0.01, 4] * demand_scale per commodity. Product
/// grid for up to 3 commodities (fewer values per commodity when the product
/// would exceed kMaxGridPoints); beyond that a list sweeping all commodities
/// together and each one alone.
DemandGrid default_grid(const Network& network, std::size_t values_per_commodity = 40);

struct UsedPathOptions {
  double support_epsilon = 1e-6;
  int refinement_levels = 6;
  SolverConfig solver;
};

/// Paths carrying more than support_epsilon * demand at the optimum of some
/// grid point. Between consecutive grid points whose supports differ the grid
/// is bisected up to refinement_levels times.
UsedPathSet estimate_used_paths(const Network& network, const DemandGrid& grid,
                                const UsedPathOptions& options = {});

enum class Verdict { kPass, kFail, kInconclusive };
const char* verdict_name(Verdict verdict);

struct SweepPoint {
  DemandVector demand;
  TollVector tolls;
  double optimum_cost = 0.0;
  double equilibrium_cost = 0.0;
  // Equilibrium cost of the solver's equilibrium before the worst-case search.
  double solver_equilibrium_cost = 0.0;
  double absolute_gap = 0.0;
  double relative_gap = 0.0;
  bool converged = true;
  bool passed = true;
};

struct SweepReport {
  std::vector<SweepPoint> points;
  Verdict verdict = Verdict::kPass;
  std::size_t worst_index = 0;
  double worst_relative_gap = 0.0;
};

struct VerifyOptions {
  double rel_tol = 1e-5;
  SolverConfig solver;
  // Search the tolled equilibrium set for its costliest member instead of
  // trusting the single equilibrium the solver returns.
  bool worst_case_equilibrium = true;
  // 0 = hardware concurrency.
  unsigned threads = 0;
};

/// Compares the tolled equilibrium with the untolled optimum at every grid
/// point. Points where either solve fails to converge are inconclusive.
SweepReport verify_diot(const Network& network, const TollVector& tolls, const DemandGrid& grid,
                        const VerifyOptions& options = {});

/// Like verify_diot, but every point uses the marginal-cost tolls of its own
/// demand.
SweepReport sweep_marginal(const Network& network, const DemandGrid& grid,
                           const VerifyOptions& options = {});

/// Largest social cost over all equilibria of the tolled game that share the
/// given equilibrium's loads on strictly increasing edges.
double worst_equilibrium_cost(const Network& network, const DemandVector& demand,
                              const TollVector& tolls, const SolveResult& equilibrium);

struct BudgetReport {
  std::vector<double> path_sums;
  PathIndex worst_path = 0;
  double minimum = 0.0;
  bool passed = true;
};

inline constexpr double kBudgetTolerance = 1e-9;

/// Per-path toll sums; passes iff every sum is >= -kBudgetTolerance.
BudgetReport budget_check(const Network& network, const TollVector& tolls);

struct NoDiotOptions {
  SolverConfig solver;
  // Golden-section search around the best grid toll.
  bool refine = false;
  double refine_tol = 1e-7;
};

struct NoDiotResult {
  double best_toll = 0.0;
  double minmax_gap = 0.0;
  // Worst relative gap over the demand grid for every grid toll.
  std::vector<double> gap_per_toll;
};

/// For a network of two parallel edges carrying one commodity, scans tolls
/// (tau, 0) and returns the toll minimizing the largest relative gap between
/// tolled equilibrium and optimum over the demands. Throws kWrongShape.
NoDiotResult no_diot_search(const Network& network, const std::vector<double>& toll_grid,
                            const std::vector<double>& demand_grid,
                            const NoDiotOptions& options = {});

}  // namespace diot

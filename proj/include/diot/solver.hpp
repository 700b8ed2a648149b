#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "diot/cost.hpp"
#include "diot/network.hpp"

namespace diot {

struct SolverConfig {
  double relative_gap_tol = 1e-8;
  int max_iterations = 100'000;
  double line_search_tol = 1e-12;
  // When set, SolveResult::objective_history receives the objective after
  // every iteration (and the starting point).
  bool record_history = false;
};

struct SolveResult {
  PathFlow path_flow;
  LoadProfile loads;
  // Beckmann potential (plus toll terms) for equilibria, social cost for optima.
  double objective = 0.0;
  // (sum_p f_p C_p - sum_i mu_i min_p C_p) over the total tolled cost, or over
  // the total untolled cost when that is smaller and positive.
  double relative_gap = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_history;
};

/// Used-path threshold and Wardrop slack shared by the solver's stopping rule
/// and by the checks in tests.
inline constexpr double kUsedFlowFraction = 1e-6;
inline double wardrop_tolerance(double min_path_cost) {
  return 1e-6 * (1.0 + std::abs(min_path_cost));
}

/// Wardrop equilibrium of the (optionally tolled) game. Minimizes the Beckmann
/// potential sum_e (int_0^x_e c_e + tau_e x_e) over feasible path flows by
/// path equilibration: each iteration sweeps the commodities and moves flow
/// from every costlier used path onto the current cheapest path with an exact
/// line search. Returns the last iterate with converged = false if the
/// iteration budget runs out.
SolveResult solve_equilibrium(const Network& network, const DemandVector& demand,
                              const TollVector& tolls = {}, const SolverConfig& config = {});

/// System optimum: the equilibrium under marginal costs c + x c'.
SolveResult solve_optimum(const Network& network, const DemandVector& demand,
                          const SolverConfig& config = {});

/// L(f) = sum_e x_e c_e(x_e). Tolls never enter.
double social_cost(const Network& network, std::span<const double> path_flow);
double social_cost_of_loads(const Network& network, std::span<const double> loads);

/// Per-path cost at the given loads under latency + tolls (empty = none).
std::vector<double> path_costs(const Network& network, const LoadProfile& loads,
                               const TollVector& tolls = {});
/// Per-path marginal cost sum_e (c_e + x_e c_e') at the given loads.
std::vector<double> path_marginal_costs(const Network& network, const LoadProfile& loads);

/// Eq / Opt for the untolled game. Throws kZeroOptimum when Opt is zero.
double price_of_anarchy(const Network& network, const DemandVector& demand,
                        const SolverConfig& config = {});

}  // namespace diot

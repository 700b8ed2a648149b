#include <gtest/gtest.h>

#include "diot/error.hpp"
#include "diot/solver.hpp"
#include "support.hpp"

using namespace diot;
using namespace diot::testing;

namespace {

void expect_wardrop(const Network& n, const SolveResult& r, const DemandVector& demand,
                    const TollVector& tolls) {
  const auto costs = path_costs(n, r.loads, tolls);
  for (CommodityIndex i = 0; i < n.num_commodities(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (PathIndex p = n.path_begin(i); p < n.path_end(i); ++p) best = std::min(best, costs[p]);
    for (PathIndex p = n.path_begin(i); p < n.path_end(i); ++p) {
      if (r.path_flow[p] > kUsedFlowFraction * demand[i]) {
        EXPECT_LE(costs[p], best + wardrop_tolerance(best)) << "path " << p;
      }
    }
  }
}

}  // namespace

TEST(Solver, PigouEquilibriumAndOptimum) {
  const Network n = pigou();
  const SolveResult eq = solve_equilibrium(n, {1.0});
  EXPECT_TRUE(eq.converged);
  EXPECT_NEAR(eq.loads[0], 0.0, 1e-9);
  EXPECT_NEAR(eq.loads[1], 1.0, 1e-9);
  EXPECT_NEAR(social_cost(n, eq.path_flow), 1.0, 1e-9);

  const SolveResult opt = solve_optimum(n, {1.0});
  EXPECT_NEAR(opt.loads[0], 0.5, 1e-6);
  EXPECT_NEAR(social_cost(n, opt.path_flow), 0.75, 1e-9);

  const SolveResult low = solve_equilibrium(n, {0.3});
  EXPECT_NEAR(low.loads[1], 0.3, 1e-12);
}

TEST(Solver, PigouWithQuarterToll) {
  const Network n = pigou();
  const SolveResult eq = solve_equilibrium(n, {1.0}, {0.0, 0.25});
  EXPECT_NEAR(eq.loads[0], 0.25, 1e-6);
  EXPECT_NEAR(eq.loads[1], 0.75, 1e-6);
  EXPECT_NEAR(social_cost(n, eq.path_flow), 13.0 / 16.0, 1e-9);
}

TEST(Solver, BraessAgreesWithBruteForce) {
  const Network n = braess();
  for (double mu : {0.25, 0.5, 0.75, 1.0, 1.5}) {
    const SolveResult opt = solve_optimum(n, {mu});
    const auto grid_opt = simplex_grid_minimize(
        n, {mu}, [&](const std::vector<double>& f) { return oracle_social_cost(n, f); }, 1e-4);
    EXPECT_NEAR(social_cost(n, opt.path_flow), grid_opt.value, 1e-7) << mu;
    EXPECT_LE(social_cost(n, opt.path_flow), grid_opt.value + 1e-12);

    const SolveResult eq = solve_equilibrium(n, {mu});
    const auto grid_eq = simplex_grid_minimize(
        n, {mu}, [&](const std::vector<double>& f) { return oracle_potential(n, f, {}); }, 1e-4);
    EXPECT_NEAR(eq.objective, grid_eq.value, 1e-7) << mu;
    EXPECT_NEAR(social_cost(n, eq.path_flow), oracle_social_cost(n, grid_eq.flow), 1e-3) << mu;
  }
}

TEST(Solver, BraessUntolledEquilibriumUsesZigZag) {
  const Network n = braess();
  const SolveResult eq = solve_equilibrium(n, {1.0});
  EXPECT_NEAR(eq.path_flow[1], 1.0, 1e-6);
  EXPECT_NEAR(social_cost(n, eq.path_flow), 2.0, 1e-6);
  EXPECT_NEAR(path_costs(n, eq.loads)[1], 2.0, 1e-6);
  EXPECT_NEAR(price_of_anarchy(n, {1.0}), 4.0 / 3.0, 1e-6);
}

TEST(Solver, WardropConditionAtConvergence) {
  for (unsigned seed = 1; seed <= 10; ++seed) {
    const Network n = random_damg(seed);
    DemandVector demand(n.num_commodities(), 0.7);
    const SolveResult eq = solve_equilibrium(n, demand);
    ASSERT_TRUE(eq.converged) << seed;
    EXPECT_TRUE(validate_flow(n, eq.path_flow, demand).ok());
    expect_wardrop(n, eq, demand, {});
    const SolveResult opt = solve_optimum(n, demand);
    ASSERT_TRUE(opt.converged) << seed;
    EXPECT_TRUE(validate_flow(n, opt.path_flow, demand).ok());
    // The optimum never costs more than the equilibrium.
    EXPECT_LE(social_cost(n, opt.path_flow),
              social_cost(n, eq.path_flow) * (1 + 1e-9) + 1e-12);
  }
}

TEST(Solver, NegativeTollsAreAllowed) {
  const Network n = cyclic();
  const TollVector tolls = {-1, 0, -0.5, -1, 0, -1};
  const SolveResult eq = solve_equilibrium(n, {0.8}, tolls);
  EXPECT_TRUE(eq.converged);
  expect_wardrop(n, eq, {0.8}, tolls);
}

TEST(Solver, ObjectiveHistoryIsNonIncreasing) {
  const Network n = braess();
  SolverConfig config;
  config.record_history = true;
  const SolveResult eq = solve_equilibrium(n, {1.5}, {}, config);
  ASSERT_GE(eq.objective_history.size(), 2u);
  for (std::size_t k = 1; k < eq.objective_history.size(); ++k) {
    EXPECT_LE(eq.objective_history[k], eq.objective_history[k - 1] + 1e-15);
  }
}

TEST(Solver, IterationBudgetReportsNonConvergence) {
  const Network n = braess();
  SolverConfig config;
  config.max_iterations = 1;
  config.relative_gap_tol = 1e-15;
  const SolveResult eq = solve_optimum(n, {0.75}, config);
  EXPECT_FALSE(eq.converged);
  EXPECT_LE(eq.iterations, 1);
}

TEST(Solver, ZeroDemand) {
  const Network n = braess();
  const SolveResult eq = solve_equilibrium(n, {0.0});
  EXPECT_TRUE(eq.converged);
  EXPECT_EQ(social_cost(n, eq.path_flow), 0.0);
  EXPECT_THROW(price_of_anarchy(n, {0.0}), DiotError);
}

TEST(Solver, InputErrors) {
  const Network n = braess();
  EXPECT_THROW(solve_equilibrium(n, {1.0, 2.0}), DiotError);
  EXPECT_THROW(solve_equilibrium(n, {-1.0}), DiotError);
  try {
    solve_equilibrium(n, {1.0}, {0.0, 1.0});
    FAIL();
  } catch (const DiotError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownEdge);
  }
}

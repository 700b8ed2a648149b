#include <gtest/gtest.h>

#include "diot/analysis.hpp"
#include "diot/error.hpp"
#include "support.hpp"

using namespace diot;
using namespace diot::testing;

TEST(Analysis, LogSpacing) {
  const auto v = log_spaced(0.05, 2.0, 40);
  ASSERT_EQ(v.size(), 40u);
  EXPECT_EQ(v.front(), 0.05);
  EXPECT_EQ(v.back(), 2.0);
  for (std::size_t k = 2; k < v.size(); ++k) {
    EXPECT_NEAR(v[k] / v[k - 1], v[1] / v[0], 1e-12);
  }
  EXPECT_THROW(log_spaced(0.0, 1.0, 3), DiotError);
}

TEST(Analysis, ProductGridOrderAndCap) {
  const DemandGrid g = DemandGrid::product({{1, 2}, {3, 4, 5}});
  ASSERT_EQ(g.points.size(), 6u);
  EXPECT_EQ(g.points[0], (DemandVector{1, 3}));
  EXPECT_EQ(g.points[1], (DemandVector{1, 4}));
  EXPECT_EQ(g.points[5], (DemandVector{2, 5}));
  std::vector<double> many(101, 1.0);
  EXPECT_THROW(DemandGrid::product({many, many}), DiotError);
  EXPECT_THROW(DemandGrid::product({{-1.0}}), DiotError);
}

TEST(Analysis, DemandScaleAndDefaultGrid) {
  // Pigou: the lower edge reaches cost 1 at demand 1.
  EXPECT_NEAR(demand_scale(pigou(), 0), 1.0, 1e-9);
  // Cyclic: cheapest free-flow path (e5,e3,e2) costs 8 mu + 1, costliest 6.
  EXPECT_NEAR(demand_scale(cyclic(), 0), 0.625, 1e-9);
  const DemandGrid g = default_grid(pigou());
  EXPECT_EQ(g.points.size(), 40u);
  EXPECT_NEAR(g.points.front()[0], 0.01, 1e-12);
  EXPECT_NEAR(g.points.back()[0], 4.0, 1e-9);
  const DemandGrid g2 = default_grid(double_pigou());
  EXPECT_EQ(g2.points.size(), 1600u);
}

TEST(Analysis, UsedPathsPigouAndBraess) {
  const UsedPathSet p = estimate_used_paths(pigou(), DemandGrid::single({0.1, 0.4, 0.7, 1.0, 1.5}));
  EXPECT_EQ(p.per_commodity[0], (std::vector<PathIndex>{0, 1}));
  const UsedPathSet b = estimate_used_paths(braess(), DemandGrid::single({0.25, 0.75, 1.5}));
  EXPECT_EQ(b.per_commodity[0], (std::vector<PathIndex>{0, 1, 2}));
  const UsedPathSet low = estimate_used_paths(pigou(), DemandGrid::single({0.1, 0.3}));
  EXPECT_EQ(low.per_commodity[0], (std::vector<PathIndex>{1}));
}

TEST(Analysis, BraessOptimumSupportAtThreeQuarters) {
  // All three paths carry flow at mu = 0.75; confirmed against the brute-force grid.
  const Network n = braess();
  const auto grid = simplex_grid_minimize(
      n, {0.75}, [&](const std::vector<double>& f) { return oracle_social_cost(n, f); }, 1e-4);
  for (double f : grid.flow) EXPECT_GT(f, 0.1);
  const SolveResult opt = solve_optimum(n, {0.75});
  for (double f : opt.path_flow) EXPECT_GT(f, 0.1);
}

TEST(Analysis, UsedPathsCyclicSmallDemandUsesOnlyTheCrossPath) {
  const UsedPathSet u = estimate_used_paths(cyclic(), DemandGrid::single({0.05, 0.1}));
  EXPECT_EQ(u.per_commodity[0], (std::vector<PathIndex>{2}));
}

TEST(Analysis, UsedPathsAreMonotoneInTheGrid) {
  const Network n = cyclic();
  const auto small = estimate_used_paths(n, DemandGrid::single({0.05, 0.5}));
  const auto large = estimate_used_paths(n, DemandGrid::single({0.05, 0.2, 0.5, 1.5}));
  for (PathIndex p : small.per_commodity[0]) EXPECT_TRUE(large.contains(0, p));
}

TEST(Analysis, VerifyPigouHalfPasses) {
  const SweepReport r = verify_diot(pigou(), {0, 0.5}, DemandGrid::single(log_spaced(0.05, 2, 40)));
  EXPECT_EQ(r.verdict, Verdict::kPass);
  for (const auto& p : r.points) {
    EXPECT_LE(p.optimum_cost, p.equilibrium_cost + 1e-9 * (1 + p.equilibrium_cost));
  }
}

TEST(Analysis, VerifyPigouQuarterFailsAtOne) {
  const SweepReport r = verify_diot(pigou(), {0, 0.25}, DemandGrid::single({0.2, 1.0}));
  EXPECT_EQ(r.verdict, Verdict::kFail);
  EXPECT_TRUE(r.points[0].passed);
  const SweepPoint& p = r.points[1];
  EXPECT_FALSE(p.passed);
  EXPECT_NEAR(p.equilibrium_cost, 13.0 / 16.0, 1e-9);
  EXPECT_NEAR(p.optimum_cost, 0.75, 1e-9);
  EXPECT_NEAR(p.absolute_gap, 1.0 / 16.0, 1e-9);
  EXPECT_EQ(r.worst_index, 1u);
}

TEST(Analysis, VerifyDoublePigouProductGrid) {
  const auto values = log_spaced(0.05, 2, 10);
  const SweepReport r = verify_diot(double_pigou(), {0.5, 0, 0.5, 0}, DemandGrid::product({values, values}));
  EXPECT_EQ(r.points.size(), 100u);
  EXPECT_EQ(r.verdict, Verdict::kPass);
}

TEST(Analysis, NonConvergedPointsAreInconclusive) {
  VerifyOptions options;
  options.solver.max_iterations = 0;
  options.solver.relative_gap_tol = 1e-15;
  const SweepReport r = verify_diot(braess(), {0, 0, 0, 0, 0.5}, DemandGrid::single({0.75}), options);
  EXPECT_FALSE(r.points[0].converged);
  EXPECT_EQ(r.verdict, Verdict::kInconclusive);
}

TEST(Analysis, WorstCaseEquilibriumFindsCostlierTie) {
  // Two routes o->m->d: the first leg is shared and congestible, the second
  // leg is either a constant edge of cost 1 or a constant edge of cost 3
  // tolled by -2. Every split is an equilibrium; the worst puts all flow on
  // the cost-3 edge.
  const Network n(1.0, {"o", "m", "d"},
                  {{"e1", 0, 1, bpr(0, 1)}, {"e2", 1, 2, bpr(1, 0)}, {"e3", 1, 2, bpr(3, 0)}},
                  {{"c1", 0, 2}});
  const TollVector tolls = {0, 0, -2};
  const SolveResult eq = solve_equilibrium(n, {1.0}, tolls);
  EXPECT_NEAR(worst_equilibrium_cost(n, {1.0}, tolls, eq), 1.0 + 3.0, 1e-9);
  const SweepReport r = verify_diot(n, tolls, DemandGrid::single({1.0}));
  EXPECT_EQ(r.verdict, Verdict::kFail);
  VerifyOptions trusting;
  trusting.worst_case_equilibrium = false;
  EXPECT_LE(verify_diot(n, tolls, DemandGrid::single({1.0}), trusting).points[0].equilibrium_cost,
            4.0);
}

TEST(Analysis, ThreadedSweepMatchesSequential) {
  const Network n = braess();
  const DemandGrid grid = DemandGrid::single(log_spaced(0.05, 2, 25));
  VerifyOptions one, four;
  one.threads = 1;
  four.threads = 4;
  const SweepReport a = verify_diot(n, {0, 0, 0, 0, 0.5}, grid, one);
  const SweepReport b = verify_diot(n, {0, 0, 0, 0, 0.5}, grid, four);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t k = 0; k < a.points.size(); ++k) {
    EXPECT_EQ(a.points[k].demand, b.points[k].demand);
    EXPECT_EQ(a.points[k].equilibrium_cost, b.points[k].equilibrium_cost);
  }
}

TEST(Analysis, SweepMarginalPigou) {
  const SweepReport r = sweep_marginal(pigou(), DemandGrid::single({0.25, 1.0, 2.0}));
  EXPECT_EQ(r.verdict, Verdict::kPass);
  EXPECT_NEAR(r.points[0].tolls[1], 0.25, 1e-9);
  EXPECT_NEAR(r.points[2].tolls[1], 0.5, 1e-6);
}

TEST(Analysis, BudgetCheckExamples) {
  const Network c = cyclic();
  const BudgetReport zero = budget_check(c, {0, 0, 0, 0, 0, 0});
  EXPECT_TRUE(zero.passed);
  EXPECT_EQ(zero.minimum, 0.0);
  const BudgetReport trivial = budget_check(pigou(), {-0.5, 0});
  EXPECT_FALSE(trivial.passed);
  EXPECT_DOUBLE_EQ(trivial.minimum, -0.5);
  EXPECT_EQ(trivial.worst_path, 0u);
  const BudgetReport budget = budget_check(c, {0, 2, -1.5, 0, 2, 0});
  EXPECT_TRUE(budget.passed);
  EXPECT_EQ(budget.path_sums, (std::vector<double>{2, 0, 2.5, 2}));
  EXPECT_EQ(budget.minimum, 0.0);
}

TEST(Analysis, NoDiotSearchShape) {
  try {
    no_diot_search(braess(), {0.0}, {1.0});
    FAIL();
  } catch (const DiotError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWrongShape);
  }
}

TEST(Analysis, NoDiotSearchSwappedPigou) {
  const Network n = two_links(bpr(0, 1), bpr(1, 0), 1.0);
  std::vector<double> tolls;
  for (int k = 0; k <= 100; ++k) tolls.push_back(k * 0.01);
  const NoDiotResult r = no_diot_search(n, tolls, log_spaced(0.1, 3, 40));
  EXPECT_NEAR(r.best_toll, 0.5, 1e-12);
  EXPECT_LE(r.minmax_gap, 1e-5);
}

TEST(Analysis, NoDiotSearchMatchesBisectionOracle) {
  const CostFunction c1 = terms({{1, 2}, {1, 1}});
  const CostFunction c2 = terms({{1, 2}, {1, 1}, {1, 0}});
  const Network n = two_links(c1, c2, 2.0);
  const TwoLinkOracle oracle{c1, c2};
  const auto demands = log_spaced(0.1, 3, 40);
  std::vector<double> tolls;
  for (int k = -200; k <= 200; k += 10) tolls.push_back(k * 0.01);
  const NoDiotResult r = no_diot_search(n, tolls, demands);
  ASSERT_EQ(r.gap_per_toll.size(), tolls.size());
  for (std::size_t k = 0; k < tolls.size(); ++k) {
    EXPECT_NEAR(r.gap_per_toll[k], oracle.worst_gap(tolls[k], demands),
                1e-6 * (1 + r.gap_per_toll[k]))
        << tolls[k];
  }
}

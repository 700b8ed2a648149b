#include "diot/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <thread>

#include "diot/error.hpp"
#include "diot/simplex.hpp"

namespace diot {
namespace {

constexpr double kGapFloor = 1e-12;
constexpr std::size_t kMaxWorstCaseColumns = 2000;

void check_demand(const Network& network, const DemandVector& demand) {
  if (demand.size() != network.num_commodities()) {
    throw DiotError(ErrorCode::kInvalidArgument, "grid point has " +
                                                     std::to_string(demand.size()) +
                                                     " demands for " +
                                                     std::to_string(network.num_commodities()) +
                                                     " commodities");
  }
}

using Support = std::vector<std::vector<PathIndex>>;

Support optimum_support(const Network& network, const DemandVector& demand,
                        const UsedPathOptions& options) {
  const SolveResult optimum = solve_optimum(network, demand, options.solver);
  Support support(network.num_commodities());
  for (CommodityIndex i = 0; i < network.num_commodities(); ++i) {
    for (PathIndex p = network.path_begin(i); p < network.path_end(i); ++p) {
      if (demand[i] > 0.0 && optimum.path_flow[p] > options.support_epsilon * demand[i]) {
        support[i].push_back(p);
      }
    }
  }
  return support;
}

void merge_support(UsedPathSet& used, const Support& support) {
  for (std::size_t i = 0; i < support.size(); ++i) {
    auto& target = used.per_commodity[i];
    for (PathIndex p : support[i]) {
      if (std::find(target.begin(), target.end(), p) == target.end()) target.push_back(p);
    }
  }
}

DemandVector midpoint(const DemandVector& a, const DemandVector& b) {
  DemandVector mid(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) mid[i] = 0.5 * (a[i] + b[i]);
  return mid;
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      (void)w;
      for (;;) {
        const std::size_t k = next.fetch_add(1);
        if (k >= count || failed.load()) return;
        try {
          body(k);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& worker : workers) worker.join();
  if (failure) std::rethrow_exception(failure);
}

SweepPoint evaluate_point(const Network& network, const DemandVector& demand,
                          const TollVector& tolls, const VerifyOptions& options) {
  SweepPoint point;
  point.demand = demand;
  point.tolls = tolls;
  const SolveResult optimum = solve_optimum(network, demand, options.solver);
  const SolveResult equilibrium = solve_equilibrium(network, demand, tolls, options.solver);
  point.optimum_cost = social_cost(network, optimum.path_flow);
  point.solver_equilibrium_cost = social_cost(network, equilibrium.path_flow);
  point.equilibrium_cost = point.solver_equilibrium_cost;
  if (options.worst_case_equilibrium) {
    point.equilibrium_cost = std::max(
        point.equilibrium_cost, worst_equilibrium_cost(network, demand, tolls, equilibrium));
  }
  point.absolute_gap = point.equilibrium_cost - point.optimum_cost;
  point.relative_gap = point.absolute_gap / std::max(point.optimum_cost, kGapFloor);
  point.converged = optimum.converged && equilibrium.converged;
  point.passed = point.converged && point.relative_gap <= options.rel_tol;
  return point;
}

SweepReport summarize(std::vector<SweepPoint> points) {
  SweepReport report;
  report.points = std::move(points);
  bool failed = false;
  bool inconclusive = false;
  for (std::size_t k = 0; k < report.points.size(); ++k) {
    const SweepPoint& point = report.points[k];
    if (k == 0 || point.relative_gap > report.worst_relative_gap) {
      report.worst_relative_gap = point.relative_gap;
      report.worst_index = k;
    }
    if (!point.converged) {
      inconclusive = true;
    } else if (!point.passed) {
      failed = true;
    }
  }
  report.verdict = failed         ? Verdict::kFail
                   : inconclusive ? Verdict::kInconclusive
                                  : Verdict::kPass;
  return report;
}

void check_two_links(const Network& network) {
  const bool shaped = network.num_commodities() == 1 && network.num_edges() == 2 &&
                      std::all_of(network.edges().begin(), network.edges().end(),
                                  [&](const Edge& edge) {
                                    const Commodity& c = network.commodities()[0];
                                    return edge.tail == c.origin && edge.head == c.destination;
                                  });
  if (!shaped) {
    throw DiotError(ErrorCode::kWrongShape,
                    "expected two parallel edges from the origin to the destination of a "
                    "single commodity");
  }
}

}  // namespace

DemandGrid DemandGrid::product(const std::vector<std::vector<double>>& per_commodity) {
  if (per_commodity.empty()) throw DiotError(ErrorCode::kInvalidArgument, "empty demand grid");
  std::size_t total = 1;
  for (const auto& values : per_commodity) {
    if (values.empty()) throw DiotError(ErrorCode::kInvalidArgument, "empty demand list");
    for (double v : values) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw DiotError(ErrorCode::kInvalidArgument, "demands must be finite and >= 0");
      }
    }
    total *= values.size();
    if (total > kMaxGridPoints) {
      throw DiotError(ErrorCode::kInvalidArgument,
                      "demand grid exceeds " + std::to_string(kMaxGridPoints) + " points");
    }
  }
  DemandGrid grid;
  grid.points.reserve(total);
  std::vector<std::size_t> index(per_commodity.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    DemandVector point(per_commodity.size());
    for (std::size_t i = 0; i < per_commodity.size(); ++i) point[i] = per_commodity[i][index[i]];
    grid.points.push_back(std::move(point));
    for (std::size_t i = per_commodity.size(); i-- > 0;) {
      if (++index[i] < per_commodity[i].size()) break;
      index[i] = 0;
    }
  }
  return grid;
}

DemandGrid DemandGrid::list(std::vector<DemandVector> points) {
  if (points.empty()) throw DiotError(ErrorCode::kInvalidArgument, "empty demand grid");
  if (points.size() > kMaxGridPoints) {
    throw DiotError(ErrorCode::kInvalidArgument,
                    "demand grid exceeds " + std::to_string(kMaxGridPoints) + " points");
  }
  for (const auto& point : points) {
    for (double v : point) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw DiotError(ErrorCode::kInvalidArgument, "demands must be finite and >= 0");
      }
    }
  }
  DemandGrid grid;
  grid.points = std::move(points);
  return grid;
}

DemandGrid DemandGrid::single(const std::vector<double>& values) { return product({values}); }

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) {
    throw DiotError(ErrorCode::kInvalidArgument, "log spacing needs 0 < lo <= hi and count > 0");
  }
  if (count == 1) return {lo};
  std::vector<double> values(count);
  const double ratio = std::log(hi / lo);
  for (std::size_t k = 0; k < count; ++k) {
    values[k] = lo * std::exp(ratio * static_cast<double>(k) / static_cast<double>(count - 1));
  }
  values.front() = lo;
  values.back() = hi;
  return values;
}

double demand_scale(const Network& network, CommodityIndex commodity) {
  const std::vector<double> zero(network.num_edges(), 0.0);
  PathIndex cheapest = network.path_begin(commodity);
  double low = std::numeric_limits<double>::infinity();
  double high = -std::numeric_limits<double>::infinity();
  for (PathIndex p = network.path_begin(commodity); p < network.path_end(commodity); ++p) {
    const double c = path_cost(network, zero, network.path(p));
    if (c < low) {
      low = c;
      cheapest = p;
    }
    high = std::max(high, c);
  }
  if (high - low <= 1e-12 * (1.0 + std::abs(high))) return 1.0;

  auto cost_at = [&](double mu) {
    std::vector<double> loads(network.num_edges(), 0.0);
    for (EdgeIndex e : network.path(cheapest).edges) loads[e] += mu;
    return path_cost(network, loads, network.path(cheapest));
  };
  double hi = 1.0;
  while (cost_at(hi) < high) {
    hi *= 2.0;
    if (hi > 1e9) return 1.0;
  }
  double lo = 0.0;
  for (int k = 0; k < 200 && hi - lo > 1e-12 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (cost_at(mid) < high ? lo : hi) = mid;
  }
  return hi;
}

DemandGrid default_grid(const Network& network, std::size_t values_per_commodity) {
  const std::size_t k = network.num_commodities();
  std::vector<double> scale(k);
  for (CommodityIndex i = 0; i < k; ++i) scale[i] = demand_scale(network, i);
  auto values_for = [&](CommodityIndex i, std::size_t count) {
    std::vector<double> values = log_spaced(0.01, 4.0, count);
    for (double& v : values) v *= scale[i];
    return values;
  };

  if (k <= 3) {
    std::size_t count = values_per_commodity;
    auto product_size = [&](std::size_t c) {
      std::size_t total = 1;
      for (std::size_t i = 0; i < k; ++i) total *= c;
      return total;
    };
    while (count > 1 && product_size(count) > kMaxGridPoints) --count;
    std::vector<std::vector<double>> per_commodity;
    for (CommodityIndex i = 0; i < k; ++i) per_commodity.push_back(values_for(i, count));
    return DemandGrid::product(per_commodity);
  }

  std::vector<DemandVector> points;
  const std::vector<double> steps = log_spaced(0.01, 4.0, values_per_commodity);
  for (double s : steps) {
    DemandVector point(k);
    for (CommodityIndex i = 0; i < k; ++i) point[i] = s * scale[i];
    points.push_back(std::move(point));
  }
  for (CommodityIndex i = 0; i < k; ++i) {
    for (double s : steps) {
      DemandVector point(k, 0.0);
      point[i] = s * scale[i];
      points.push_back(std::move(point));
    }
  }
  return DemandGrid::list(std::move(points));
}

UsedPathSet estimate_used_paths(const Network& network, const DemandGrid& grid,
                                const UsedPathOptions& options) {
  if (grid.points.empty()) throw DiotError(ErrorCode::kInvalidArgument, "empty demand grid");
  for (const auto& point : grid.points) check_demand(network, point);

  UsedPathSet used;
  used.per_commodity.resize(network.num_commodities());
  std::vector<Support> supports;
  for (const auto& point : grid.points) {
    supports.push_back(optimum_support(network, point, options));
    merge_support(used, supports.back());
  }

  std::function<void(const DemandVector&, const DemandVector&, const Support&, const Support&,
                     int)>
      refine = [&](const DemandVector& a, const DemandVector& b, const Support& sa,
                   const Support& sb, int level) {
        if (level >= options.refinement_levels || sa == sb) return;
        const DemandVector mid = midpoint(a, b);
        const Support sm = optimum_support(network, mid, options);
        merge_support(used, sm);
        refine(a, mid, sa, sm, level + 1);
        refine(mid, b, sm, sb, level + 1);
      };
  for (std::size_t k = 0; k + 1 < grid.points.size(); ++k) {
    refine(grid.points[k], grid.points[k + 1], supports[k], supports[k + 1], 0);
  }
  for (auto& paths : used.per_commodity) std::sort(paths.begin(), paths.end());
  return used;
}

const char* verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::kPass:
      return "PASS";
    case Verdict::kFail:
      return "FAIL";
    case Verdict::kInconclusive:
      return "INCONCLUSIVE";
  }
  return "?";
}

double worst_equilibrium_cost(const Network& network, const DemandVector& demand,
                              const TollVector& tolls, const SolveResult& equilibrium) {
  const double solver_cost = social_cost(network, equilibrium.path_flow);
  const std::vector<double> costs = path_costs(network, equilibrium.loads, tolls);

  std::vector<PathIndex> candidates;
  for (CommodityIndex i = 0; i < network.num_commodities(); ++i) {
    if (demand[i] <= 0.0) continue;
    double best = std::numeric_limits<double>::infinity();
    for (PathIndex p = network.path_begin(i); p < network.path_end(i); ++p) {
      best = std::min(best, costs[p]);
    }
    for (PathIndex p = network.path_begin(i); p < network.path_end(i); ++p) {
      if (equilibrium.path_flow[p] > 0.0 || costs[p] <= best + wardrop_tolerance(best)) {
        candidates.push_back(p);
      }
    }
  }
  if (candidates.empty() || candidates.size() > kMaxWorstCaseColumns) return solver_cost;

  std::vector<bool> increasing(network.num_edges());
  double fixed_cost = 0.0;
  for (EdgeIndex e = 0; e < network.num_edges(); ++e) {
    increasing[e] = is_strictly_increasing(network.edges()[e].cost);
    if (increasing[e]) {
      fixed_cost += total_cost_term(network.edges()[e].cost, equilibrium.loads[e]);
    }
  }

  lp::LinearProgram problem;
  problem.num_vars = candidates.size();
  problem.objective.assign(candidates.size(), 0.0);
  std::vector<double> candidate_loads(network.num_edges(), 0.0);
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    for (EdgeIndex e : network.path(candidates[j]).edges) {
      candidate_loads[e] += equilibrium.path_flow[candidates[j]];
      if (!increasing[e]) problem.objective[j] -= cost_value(network.edges()[e].cost, 0.0);
    }
  }
  for (CommodityIndex i = 0; i < network.num_commodities(); ++i) {
    if (demand[i] <= 0.0) continue;
    lp::Row row;
    row.coefs.assign(candidates.size(), 0.0);
    row.rhs = 0.0;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (network.path(candidates[j]).commodity == i) {
        row.coefs[j] = 1.0;
        row.rhs += equilibrium.path_flow[candidates[j]];
      }
    }
    problem.rows.push_back(std::move(row));
  }
  for (EdgeIndex e = 0; e < network.num_edges(); ++e) {
    if (!increasing[e]) continue;
    lp::Row row;
    row.coefs.assign(candidates.size(), 0.0);
    bool touched = false;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      const auto& edges = network.path(candidates[j]).edges;
      if (std::find(edges.begin(), edges.end(), e) != edges.end()) {
        row.coefs[j] = 1.0;
        touched = true;
      }
    }
    if (!touched) continue;
    row.rhs = candidate_loads[e];
    problem.rows.push_back(std::move(row));
  }

  const lp::LpResult solved = lp::solve(problem);
  if (solved.status != lp::LpStatus::kOptimal) return solver_cost;
  return std::max(solver_cost, fixed_cost - solved.objective_value);
}

SweepReport verify_diot(const Network& network, const TollVector& tolls, const DemandGrid& grid,
                        const VerifyOptions& options) {
  if (!tolls.empty() && tolls.size() != network.num_edges()) {
    throw DiotError(ErrorCode::kUnknownEdge, "toll vector length does not match the edges");
  }
  for (const auto& point : grid.points) check_demand(network, point);
  std::vector<SweepPoint> points(grid.points.size());
  parallel_for(grid.points.size(), options.threads, [&](std::size_t k) {
    points[k] = evaluate_point(network, grid.points[k], tolls, options);
  });
  return summarize(std::move(points));
}

SweepReport sweep_marginal(const Network& network, const DemandGrid& grid,
                           const VerifyOptions& options) {
  for (const auto& point : grid.points) check_demand(network, point);
  std::vector<SweepPoint> points(grid.points.size());
  parallel_for(grid.points.size(), options.threads, [&](std::size_t k) {
    const TollVector tolls = marginal_cost_tolls(network, grid.points[k], options.solver);
    points[k] = evaluate_point(network, grid.points[k], tolls, options);
  });
  return summarize(std::move(points));
}

BudgetReport budget_check(const Network& network, const TollVector& tolls) {
  BudgetReport report;
  report.path_sums.resize(network.num_paths(), 0.0);
  report.minimum = std::numeric_limits<double>::infinity();
  for (PathIndex p = 0; p < network.num_paths(); ++p) {
    double sum = 0.0;
    if (!tolls.empty()) {
      for (EdgeIndex e : network.path(p).edges) sum += tolls.at(e);
    }
    report.path_sums[p] = sum;
    if (sum < report.minimum) {
      report.minimum = sum;
      report.worst_path = p;
    }
  }
  if (network.num_paths() == 0) report.minimum = 0.0;
  report.passed = report.minimum >= -kBudgetTolerance;
  return report;
}

NoDiotResult no_diot_search(const Network& network, const std::vector<double>& toll_grid,
                            const std::vector<double>& demand_grid,
                            const NoDiotOptions& options) {
  check_two_links(network);
  if (toll_grid.empty() || demand_grid.empty()) {
    throw DiotError(ErrorCode::kInvalidArgument, "toll and demand grids must be non-empty");
  }
  for (double mu : demand_grid) {
    if (!(mu >= 0.0)) throw DiotError(ErrorCode::kInvalidArgument, "demands must be >= 0");
  }

  std::vector<double> optimum_cost;
  for (double mu : demand_grid) {
    optimum_cost.push_back(social_cost(network, solve_optimum(network, {mu}, options.solver).path_flow));
  }
  auto worst_gap = [&](double tau) {
    double worst = 0.0;
    for (std::size_t k = 0; k < demand_grid.size(); ++k) {
      const SolveResult eq = solve_equilibrium(network, {demand_grid[k]}, {tau, 0.0}, options.solver);
      const double gap =
          (social_cost(network, eq.path_flow) - optimum_cost[k]) / std::max(optimum_cost[k], kGapFloor);
      worst = std::max(worst, gap);
    }
    return worst;
  };

  NoDiotResult result;
  std::size_t best = 0;
  for (std::size_t k = 0; k < toll_grid.size(); ++k) {
    result.gap_per_toll.push_back(worst_gap(toll_grid[k]));
    if (result.gap_per_toll[k] < result.gap_per_toll[best]) best = k;
  }
  result.best_toll = toll_grid[best];
  result.minmax_gap = result.gap_per_toll[best];

  if (options.refine && toll_grid.size() > 1) {
    std::vector<double> sorted = toll_grid;
    std::sort(sorted.begin(), sorted.end());
    const auto at = std::lower_bound(sorted.begin(), sorted.end(), result.best_toll);
    double a = at == sorted.begin() ? *at : *(at - 1);
    double b = at + 1 == sorted.end() ? *at : *(at + 1);
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = worst_gap(c);
    double fd = worst_gap(d);
    while (b - a > options.refine_tol) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - ratio * (b - a);
        fc = worst_gap(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + ratio * (b - a);
        fd = worst_gap(d);
      }
    }
    const double tau = 0.5 * (a + b);
    const double gap = worst_gap(tau);
    if (gap < result.minmax_gap) {
      result.best_toll = tau;
      result.minmax_gap = gap;
    }
  }
  return result;
}

}  // namespace diot

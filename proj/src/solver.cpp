#include "diot/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "diot/error.hpp"

namespace diot {
namespace {

enum class Mode { kEquilibrium, kOptimum };

// Iterations without objective decrease before giving up; the gap has then
// hit the floating-point floor.
constexpr int kMaxStalledIterations = 50;

void check_inputs(const Network& network, const DemandVector& demand, const TollVector& tolls) {
  if (demand.size() != network.num_commodities()) {
    throw DiotError(ErrorCode::kInvalidArgument,
                    "demand vector has " + std::to_string(demand.size()) + " entries, expected " +
                        std::to_string(network.num_commodities()));
  }
  for (double mu : demand) {
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
      throw DiotError(ErrorCode::kInvalidArgument, "demands must be finite and >= 0");
    }
  }
  if (!tolls.empty() && tolls.size() != network.num_edges()) {
    throw DiotError(ErrorCode::kUnknownEdge, "toll vector does not match the edge set");
  }
  for (double tau : tolls) {
    if (!std::isfinite(tau)) throw DiotError(ErrorCode::kInvalidArgument, "tolls must be finite");
  }
}

// Holds the per-call mutable state of one path-equilibration run.
class PathEquilibration {
 public:
  PathEquilibration(const Network& network, const DemandVector& demand, const TollVector& tolls,
                    Mode mode, const SolverConfig& config)
      : network_(network), demand_(demand), tolls_(tolls), mode_(mode), config_(config) {}

  SolveResult run() {
    const std::size_t num_paths = network_.num_paths();
    const std::size_t num_edges = network_.num_edges();
    SolveResult result;
    flow_.assign(num_paths, 0.0);
    edge_cost_.assign(num_edges, 0.0);
    path_cost_.assign(num_paths, 0.0);
    path_toll_.assign(num_paths, 0.0);
    if (mode_ == Mode::kEquilibrium && !tolls_.empty()) {
      for (PathIndex p = 0; p < num_paths; ++p) {
        for (EdgeIndex e : network_.path(p).edges) path_toll_[p] += tolls_[e];
      }
    }

    // All-or-nothing start on free-flow costs.
    loads_.assign(num_edges, 0.0);
    update_costs();
    for (CommodityIndex i = 0; i < network_.num_commodities(); ++i) {
      flow_[cheapest_path(i)] = demand_[i];
    }
    loads_ = loads_from_flow(network_, flow_);
    update_costs();
    double objective = objective_at(loads_);
    if (config_.record_history) result.objective_history.push_back(objective);

    int iteration = 0;
    double relative_gap = 0.0;
    bool converged = false;
    int stalled = 0;
    for (;;) {
      const Gap gap = measure_gap();
      relative_gap = gap.relative;
      if (gap.relative <= config_.relative_gap_tol && gap.wardrop_ok) {
        converged = true;
        break;
      }
      if (iteration >= config_.max_iterations) break;

      bool moved = false;
      for (CommodityIndex i = 0; i < network_.num_commodities(); ++i) moved |= equilibrate(i);
      ++iteration;
      // Rebuild from path flows so shifted loads do not accumulate rounding.
      loads_ = loads_from_flow(network_, flow_);
      update_costs();
      const double previous = objective;
      objective = objective_at(loads_);
      if (config_.record_history) result.objective_history.push_back(objective);
      stalled = objective < previous ? 0 : stalled + 1;
      if (!moved || stalled >= kMaxStalledIterations) {
        // No further progress is possible at this precision.
        relative_gap = measure_gap().relative;
        break;
      }
    }

    result.path_flow = flow_;
    result.loads = loads_;
    result.objective = objective;
    result.relative_gap = relative_gap;
    result.iterations = iteration;
    result.converged = converged;
    return result;
  }

 private:
  struct Gap {
    double total = 0.0;     // sum_p f_p (toll_p + c_p)
    double untolled = 0.0;  // sum_p f_p c_p
    double absolute = 0.0;  // sum_p f_p (cost_p - min cost of its commodity)
    double relative = 0.0;
    bool wardrop_ok = true;
  };

  // Latency (or marginal cost) without the toll. Tolls are kept apart so that
  // cost differences between paths with equal toll sums keep full precision
  // when the tolls dwarf the latencies.
  double edge_cost(EdgeIndex e, double x) const {
    const auto& cost = network_.edges()[e].cost;
    if (mode_ == Mode::kOptimum) return marginal_cost_value(cost, x);
    return cost_value(cost, x);
  }

  // Tolled cost of path p minus that of path q.
  double cost_gap(PathIndex p, PathIndex q) const {
    return (path_toll_[p] - path_toll_[q]) + (path_cost_[p] - path_cost_[q]);
  }

  double edge_objective(EdgeIndex e, double x) const {
    const auto& cost = network_.edges()[e].cost;
    if (mode_ == Mode::kOptimum) return total_cost_term(cost, x);
    double value = beckmann_term(cost, x);
    return tolls_.empty() ? value : value + tolls_[e] * x;
  }

  double objective_at(const std::vector<double>& loads) const {
    double sum = 0.0;
    for (EdgeIndex e = 0; e < loads.size(); ++e) sum += edge_objective(e, loads[e]);
    return sum;
  }

  void update_path_costs() {
    for (PathIndex p = 0; p < path_cost_.size(); ++p) {
      double sum = 0.0;
      for (EdgeIndex e : network_.path(p).edges) sum += edge_cost_[e];
      path_cost_[p] = sum;
    }
  }

  void update_costs() {
    for (EdgeIndex e = 0; e < edge_cost_.size(); ++e) edge_cost_[e] = edge_cost(e, loads_[e]);
    update_path_costs();
  }

  // Lowest index wins ties.
  PathIndex cheapest_path(CommodityIndex i) const {
    PathIndex best = network_.path_begin(i);
    for (PathIndex p = best + 1; p < network_.path_end(i); ++p) {
      if (cost_gap(p, best) < 0.0) best = p;
    }
    return best;
  }

  Gap measure_gap() const {
    Gap gap;
    for (CommodityIndex i = 0; i < network_.num_commodities(); ++i) {
      const double mu = demand_[i];
      const PathIndex s = cheapest_path(i);
      const double slack = wardrop_tolerance(path_toll_[s] + path_cost_[s]);
      for (PathIndex p = network_.path_begin(i); p < network_.path_end(i); ++p) {
        gap.total += flow_[p] * (path_toll_[p] + path_cost_[p]);
        gap.untolled += flow_[p] * path_cost_[p];
        const double excess = cost_gap(p, s);
        gap.absolute += flow_[p] * excess;
        if (flow_[p] > kUsedFlowFraction * mu && excess > slack) gap.wardrop_ok = false;
      }
    }
    // Relative to the tolled total, and also to the untolled total when that
    // is smaller, so large tolls cannot hide an unresolved latency split.
    gap.relative = gap.total > 0.0 ? gap.absolute / gap.total : gap.absolute;
    if (gap.untolled > 0.0 && gap.untolled < gap.total) {
      gap.relative = std::max(gap.relative, gap.absolute / gap.untolled);
    }
    return gap;
  }

  // One Gauss-Seidel pass over the used paths of commodity i: each path with
  // cost above the current cheapest path sends flow to it until the two costs
  // meet or the path is empty. Returns whether any flow moved.
  bool equilibrate(CommodityIndex i) {
    bool moved = false;
    for (PathIndex p = network_.path_begin(i); p < network_.path_end(i); ++p) {
      if (!(flow_[p] > 0.0)) continue;
      const PathIndex s = cheapest_path(i);
      if (s == p || !(cost_gap(p, s) > 0.0)) continue;
      const double amount = shift_amount(s, p);
      if (!(amount > 0.0)) continue;
      apply_shift(s, p, amount);
      moved = true;
    }
    return moved;
  }

  // Edge multiplicities of the move "one unit from `from` to `to`"; shared
  // edges cancel.
  void build_difference(PathIndex to, PathIndex from) {
    difference_.clear();
    for (EdgeIndex e : network_.path(to).edges) difference_.emplace_back(e, 1.0);
    for (EdgeIndex e : network_.path(from).edges) {
      auto it = std::find_if(difference_.begin(), difference_.end(),
                             [e](const auto& entry) { return entry.first == e; });
      if (it != difference_.end()) {
        it->second -= 1.0;
      } else {
        difference_.emplace_back(e, -1.0);
      }
    }
  }

  // Cost of `to` minus cost of `from` after moving delta units.
  double cost_difference(double delta) const {
    double sum = toll_difference_;
    for (const auto& [e, d] : difference_) {
      if (d == 0.0) continue;
      sum += d * edge_cost(e, std::max(0.0, loads_[e] + delta * d));
    }
    return sum;
  }

  // Exact line search: the objective along the move is convex with derivative
  // cost_difference, so bisect for its root on [0, f_from].
  double shift_amount(PathIndex to, PathIndex from) {
    build_difference(to, from);
    toll_difference_ = path_toll_[to] - path_toll_[from];
    const double limit = flow_[from];
    if (cost_difference(0.0) >= 0.0) return 0.0;
    if (cost_difference(limit) <= 0.0) return limit;
    double lo = 0.0;
    double hi = limit;
    const double tol = config_.line_search_tol * limit;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (cost_difference(mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    // The derivative is negative on [0, lo], so lo never increases the objective.
    return lo;
  }

  void apply_shift(PathIndex to, PathIndex from, double amount) {
    if (amount >= flow_[from]) {
      flow_[to] += flow_[from];
      flow_[from] = 0.0;
    } else {
      flow_[to] += amount;
      flow_[from] -= amount;
    }
    for (const auto& [e, d] : difference_) {
      if (d == 0.0) continue;
      loads_[e] = std::max(0.0, loads_[e] + amount * d);
      edge_cost_[e] = edge_cost(e, loads_[e]);
    }
    update_path_costs();
  }

  const Network& network_;
  const DemandVector& demand_;
  const TollVector& tolls_;
  Mode mode_;
  const SolverConfig& config_;

  PathFlow flow_;
  LoadProfile loads_;
  std::vector<double> edge_cost_;
  std::vector<double> path_cost_;
  std::vector<double> path_toll_;
  double toll_difference_ = 0.0;
  std::vector<std::pair<EdgeIndex, double>> difference_;
};

}  // namespace

SolveResult solve_equilibrium(const Network& network, const DemandVector& demand,
                              const TollVector& tolls, const SolverConfig& config) {
  check_inputs(network, demand, tolls);
  return PathEquilibration(network, demand, tolls, Mode::kEquilibrium, config).run();
}

SolveResult solve_optimum(const Network& network, const DemandVector& demand,
                          const SolverConfig& config) {
  check_inputs(network, demand, {});
  return PathEquilibration(network, demand, {}, Mode::kOptimum, config).run();
}

double social_cost_of_loads(const Network& network, std::span<const double> loads) {
  double sum = 0.0;
  for (EdgeIndex e = 0; e < network.num_edges(); ++e) {
    sum += total_cost_term(network.edges()[e].cost, loads[e]);
  }
  return sum;
}

double social_cost(const Network& network, std::span<const double> path_flow) {
  const LoadProfile loads = loads_from_flow(network, path_flow);
  return social_cost_of_loads(network, loads);
}

std::vector<double> path_costs(const Network& network, const LoadProfile& loads,
                               const TollVector& tolls) {
  std::vector<double> costs(network.num_paths());
  for (PathIndex p = 0; p < network.num_paths(); ++p) {
    costs[p] = path_cost(network, loads, network.path(p), tolls);
  }
  return costs;
}

std::vector<double> path_marginal_costs(const Network& network, const LoadProfile& loads) {
  std::vector<double> costs(network.num_paths(), 0.0);
  for (PathIndex p = 0; p < network.num_paths(); ++p) {
    for (EdgeIndex e : network.path(p).edges) {
      costs[p] += marginal_cost_value(network.edges()[e].cost, loads[e]);
    }
  }
  return costs;
}

double price_of_anarchy(const Network& network, const DemandVector& demand,
                        const SolverConfig& config) {
  const SolveResult optimum = solve_optimum(network, demand, config);
  const double opt = social_cost_of_loads(network, optimum.loads);
  if (!(opt > 0.0)) {
    throw DiotError(ErrorCode::kZeroOptimum, "optimum social cost is zero");
  }
  const SolveResult equilibrium = solve_equilibrium(network, demand, {}, config);
  return social_cost_of_loads(network, equilibrium.loads) / opt;
}

}  // namespace diot

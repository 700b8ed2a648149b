#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "diot/network.hpp"

namespace diot::testing {

inline CostFunction bpr(double t, double a, double beta = 1.0) { return BprCost{t, a, beta}; }

inline CostFunction terms(std::vector<MonomialTerm> list) { return MonomialSumCost{std::move(list)}; }

// e1: c = 1, e2: c = x.
inline Network pigou() {
  return Network(1.0, {"o", "d"}, {{"e1", 0, 1, bpr(1, 0)}, {"e2", 0, 1, bpr(0, 1)}},
                 {{"c1", 0, 1}});
}

// Paths in enumeration order: upper (e1,e2), zig-zag (e1,e5,e4), lower (e3,e4).
inline Network braess() {
  return Network(1.0, {"o", "u", "v", "d"},
                 {{"e1", 0, 1, bpr(0, 1)},
                  {"e2", 1, 3, bpr(1, 0)},
                  {"e3", 0, 2, bpr(1, 0)},
                  {"e4", 2, 3, bpr(0, 1)},
                  {"e5", 1, 2, bpr(0, 0)}},
                 {{"c1", 0, 3}});
}

// Paths in enumeration order: (e1,e2), (e1,e4,e6), (e5,e3,e2), (e5,e6).
inline Network cyclic() {
  return Network(1.0, {"o", "u", "v", "d"},
                 {{"e1", 0, 1, bpr(2, 0)},
                  {"e2", 1, 3, bpr(0, 4)},
                  {"e3", 2, 1, bpr(1, 0)},
                  {"e4", 1, 2, bpr(2, 0)},
                  {"e5", 0, 2, bpr(0, 4)},
                  {"e6", 2, 3, bpr(2, 0)}},
                 {{"c1", 0, 3}});
}

inline Network double_pigou() {
  return Network(1.0, {"v", "w"},
                 {{"e1", 0, 1, bpr(0, 1)},
                  {"e2", 0, 1, bpr(1, 0)},
                  {"e3", 1, 0, bpr(0, 1)},
                  {"e4", 1, 0, bpr(1, 0)}},
                 {{"c1", 0, 1}, {"c2", 1, 0}});
}

// Two parallel links with costs c and c + offset.
inline Network two_links(const CostFunction& c, const CostFunction& c_plus_offset, double beta) {
  return Network(beta, {"o", "d"}, {{"e1", 0, 1, c}, {"e2", 0, 1, c_plus_offset}},
                 {{"c1", 0, 1}});
}

inline std::string fixture_path(const std::string& name) {
  return std::string(DIOT_FIXTURE_DIR) + "/" + name;
}

// ---------------------------------------------------------------------------
// Independent evaluation of costs straight from the cost parameters.

inline double oracle_cost(const CostFunction& cost, double x) {
  if (const auto* b = std::get_if<BprCost>(&cost)) return b->t + b->a * std::pow(x, b->beta);
  double sum = 0.0;
  for (const auto& term : std::get<MonomialSumCost>(cost).terms) {
    sum += term.coef * (term.exponent == 0.0 ? 1.0 : std::pow(x, term.exponent));
  }
  return sum;
}

// x c'(x)
inline double oracle_elasticity(const CostFunction& cost, double x) {
  if (const auto* b = std::get_if<BprCost>(&cost)) {
    return b->beta == 0.0 || x == 0.0 ? 0.0 : b->beta * b->a * std::pow(x, b->beta);
  }
  double sum = 0.0;
  for (const auto& term : std::get<MonomialSumCost>(cost).terms) {
    if (term.exponent != 0.0 && x > 0.0) sum += term.exponent * term.coef * std::pow(x, term.exponent);
  }
  return sum;
}

inline double oracle_integral(const CostFunction& cost, double x) {
  if (const auto* b = std::get_if<BprCost>(&cost)) {
    return b->t * x + b->a * std::pow(x, b->beta + 1.0) / (b->beta + 1.0);
  }
  double sum = 0.0;
  for (const auto& term : std::get<MonomialSumCost>(cost).terms) {
    sum += term.coef * std::pow(x, term.exponent + 1.0) / (term.exponent + 1.0);
  }
  return sum;
}

inline std::vector<double> oracle_loads(const Network& network, const std::vector<double>& flow) {
  std::vector<double> loads(network.num_edges(), 0.0);
  for (PathIndex p = 0; p < network.num_paths(); ++p) {
    for (EdgeIndex e : network.path(p).edges) loads[e] += flow[p];
  }
  return loads;
}

inline double oracle_social_cost(const Network& network, const std::vector<double>& flow) {
  const auto loads = oracle_loads(network, flow);
  double total = 0.0;
  for (EdgeIndex e = 0; e < network.num_edges(); ++e) {
    total += loads[e] * oracle_cost(network.edges()[e].cost, loads[e]);
  }
  return total;
}

inline double oracle_potential(const Network& network, const std::vector<double>& flow,
                               const std::vector<double>& tolls) {
  const auto loads = oracle_loads(network, flow);
  double total = 0.0;
  for (EdgeIndex e = 0; e < network.num_edges(); ++e) {
    total += oracle_integral(network.edges()[e].cost, loads[e]);
    if (!tolls.empty()) total += tolls[e] * loads[e];
  }
  return total;
}

// ---------------------------------------------------------------------------
// Brute-force minimization over the product of demand simplices. Starts with
// `initial_divisions` steps per unit of demand, then repeatedly shrinks the
// search box around the incumbent by a factor of 10 until the step is at
// most `resolution` times the demand.

struct GridMinimum {
  std::vector<double> flow;
  double value = 0.0;
};

inline GridMinimum simplex_grid_minimize(const Network& network, const std::vector<double>& demand,
                                         const std::function<double(const std::vector<double>&)>& f,
                                         double resolution, int initial_divisions = 100) {
  const std::size_t k = network.num_commodities();
  std::vector<double> center(network.num_paths(), 0.0);
  std::vector<double> half_width(k, 0.0);
  std::vector<double> step(k);
  for (CommodityIndex i = 0; i < k; ++i) {
    step[i] = demand[i] / initial_divisions;
    half_width[i] = demand[i];
  }
  GridMinimum best;
  best.value = std::numeric_limits<double>::infinity();
  bool first = true;

  for (;;) {
    // Candidate flows per commodity: all lattice points (multiples of step,
    // summing to demand) within half_width of the current center.
    std::vector<std::vector<std::vector<double>>> options(k);
    for (CommodityIndex i = 0; i < k; ++i) {
      const PathIndex begin = network.path_begin(i);
      const std::size_t n = network.path_end(i) - begin;
      if (demand[i] <= 0.0) {
        options[i].push_back(std::vector<double>(n, 0.0));
        continue;
      }
      const long total = std::lround(demand[i] / step[i]);
      std::vector<long> lo(n), hi(n);
      for (std::size_t j = 0; j < n; ++j) {
        const double c = first ? 0.0 : center[begin + j];
        lo[j] = first ? 0 : std::max(0L, static_cast<long>(std::floor((c - half_width[i]) / step[i])));
        hi[j] = first ? total
                      : std::min(total, static_cast<long>(std::ceil((c + half_width[i]) / step[i])));
      }
      std::vector<long> units(n, 0);
      std::function<void(std::size_t, long)> rec = [&](std::size_t j, long remaining) {
        if (j + 1 == n) {
          if (remaining < lo[j] || remaining > hi[j]) return;
          units[j] = remaining;
          std::vector<double> flow(n);
          for (std::size_t q = 0; q < n; ++q) flow[q] = static_cast<double>(units[q]) * step[i];
          // Keep the exact demand on the last coordinate.
          double assigned = 0.0;
          for (std::size_t q = 0; q + 1 < n; ++q) assigned += flow[q];
          flow[n - 1] = std::max(0.0, demand[i] - assigned);
          options[i].push_back(std::move(flow));
          return;
        }
        for (long u = lo[j]; u <= std::min(hi[j], remaining); ++u) {
          units[j] = u;
          rec(j + 1, remaining - u);
        }
      };
      rec(0, total);
    }

    std::vector<double> flow(network.num_paths(), 0.0);
    std::function<void(CommodityIndex)> combine = [&](CommodityIndex i) {
      if (i == k) {
        const double value = f(flow);
        if (value < best.value) {
          best.value = value;
          best.flow = flow;
        }
        return;
      }
      for (const auto& option : options[i]) {
        std::copy(option.begin(), option.end(), flow.begin() + static_cast<long>(network.path_begin(i)));
        combine(i + 1);
      }
    };
    combine(0);

    bool done = true;
    for (CommodityIndex i = 0; i < k; ++i) {
      if (demand[i] > 0.0 && step[i] > resolution * demand[i] * (1.0 + 1e-9)) done = false;
    }
    if (done) break;
    center = best.flow;
    for (CommodityIndex i = 0; i < k; ++i) {
      half_width[i] = 2.0 * step[i];
      step[i] = std::max(step[i] / 10.0, resolution * demand[i]);
    }
    first = false;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Two parallel links: equilibrium and optimum splits by bisection on the
// first link's load, and the worst relative gap over demands for a toll
// (tau, 0).

struct TwoLinkOracle {
  CostFunction c1;
  CostFunction c2;

  double split(double mu, const std::function<double(double)>& left,
               const std::function<double(double)>& right) const {
    // Root of left(x) - right(mu - x), clamped to [0, mu].
    if (left(0.0) >= right(mu)) return 0.0;
    if (left(mu) <= right(0.0)) return mu;
    double lo = 0.0, hi = mu;
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (lo + hi);
      (left(mid) < right(mu - mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  double social(double x, double mu) const {
    return x * oracle_cost(c1, x) + (mu - x) * oracle_cost(c2, mu - x);
  }

  double optimum_cost(double mu) const {
    auto mc1 = [&](double x) { return oracle_cost(c1, x) + oracle_elasticity(c1, x); };
    auto mc2 = [&](double x) { return oracle_cost(c2, x) + oracle_elasticity(c2, x); };
    return social(split(mu, mc1, mc2), mu);
  }

  double equilibrium_cost(double mu, double tau) const {
    auto l1 = [&](double x) { return oracle_cost(c1, x) + tau; };
    auto l2 = [&](double x) { return oracle_cost(c2, x); };
    return social(split(mu, l1, l2), mu);
  }

  double worst_gap(double tau, const std::vector<double>& demands) const {
    double worst = 0.0;
    for (double mu : demands) {
      const double opt = optimum_cost(mu);
      worst = std::max(worst, (equilibrium_cost(mu, tau) - opt) / std::max(opt, 1e-12));
    }
    return worst;
  }
};

// ---------------------------------------------------------------------------
// Random directed acyclic multigraphs with BPR costs. Vertices are created in
// topological order; every commodity joins a reachable vertex pair.

struct RandomInstance {
  unsigned seed = 0;
  Network network;
};

inline Network random_damg(unsigned seed) {
  std::mt19937_64 rng(seed);
  auto uniform_int = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  const double betas[] = {1.0, 2.0, 4.0};
  const double beta = betas[uniform_int(0, 2)];

  for (;;) {
    const int n = uniform_int(3, 8);
    const int m = uniform_int(5, 16);
    std::vector<std::string> vertices;
    for (int v = 0; v < n; ++v) vertices.push_back("v" + std::to_string(v));
    std::vector<Edge> edges;
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (int e = 0; e < m; ++e) {
      const int tail = uniform_int(0, n - 2);
      const int head = uniform_int(tail + 1, n - 1);
      const double t = uniform_int(0, 4) == 0 ? 0.0 : uniform(0.0, 2.0);
      const double a = uniform_int(0, 5) == 0 ? 0.0 : uniform(0.2, 2.0);
      edges.push_back({"e" + std::to_string(e + 1), static_cast<VertexIndex>(tail),
                       static_cast<VertexIndex>(head), bpr(t, a, beta)});
      reach[tail][head] = true;
    }
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (reach[i][k] && reach[k][j]) reach[i][j] = true;
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (reach[i][j]) pairs.emplace_back(i, j);
    if (pairs.empty()) continue;
    std::shuffle(pairs.begin(), pairs.end(), rng);
    const int k = std::min<int>(uniform_int(1, 3), static_cast<int>(pairs.size()));
    std::vector<Commodity> commodities;
    for (int i = 0; i < k; ++i) {
      commodities.push_back({"c" + std::to_string(i + 1), static_cast<VertexIndex>(pairs[i].first),
                             static_cast<VertexIndex>(pairs[i].second)});
    }
    return Network(beta, vertices, edges, commodities);
  }
}

}  // namespace diot::testing

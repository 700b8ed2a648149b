#include "diot/network.hpp"

#include <cmath>
#include <functional>
#include <queue>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>

#include "diot/error.hpp"

namespace diot {
namespace {

void validate_cost(const Edge& edge) {
  auto bad = [&edge](const std::string& what) {
    return DiotError(ErrorCode::kValidationError, "edge '" + edge.id + "': " + what);
  };
  if (const auto* bpr = std::get_if<BprCost>(&edge.cost)) {
    if (!(bpr->t >= 0.0) || !std::isfinite(bpr->t)) throw bad("free-flow time t must be >= 0");
    if (!(bpr->a >= 0.0) || !std::isfinite(bpr->a)) throw bad("coefficient a must be >= 0");
    if (!(bpr->beta >= 0.0) || !std::isfinite(bpr->beta)) throw bad("degree must be >= 0");
    return;
  }
  const auto& sum = std::get<MonomialSumCost>(edge.cost);
  if (sum.terms.empty()) throw bad("monomial cost needs at least one term");
  for (const auto& term : sum.terms) {
    if (!(term.coef >= 0.0) || !std::isfinite(term.coef)) throw bad("coefficients must be >= 0");
    if (!(term.exponent >= 0.0) || !std::isfinite(term.exponent)) {
      throw bad("exponents must be >= 0");
    }
  }
}

}  // namespace

Network::Network(double beta, std::vector<std::string> vertices, std::vector<Edge> edges,
                 std::vector<Commodity> commodities, std::size_t path_cap)
    : beta_(beta),
      path_cap_(path_cap),
      vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      commodities_(std::move(commodities)) {
  auto invalid = [](const std::string& what) {
    return DiotError(ErrorCode::kValidationError, what);
  };
  if (!(beta_ >= 0.0) || !std::isfinite(beta_)) throw invalid("beta must be finite and >= 0");
  if (path_cap_ == 0) throw invalid("path cap must be positive");

  std::unordered_set<std::string> seen;
  for (const auto& v : vertices_) {
    if (!seen.insert(v).second) throw invalid("duplicate vertex id '" + v + "'");
  }
  seen.clear();
  out_edges_.assign(vertices_.size(), {});
  for (EdgeIndex e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    if (!seen.insert(edge.id).second) throw invalid("duplicate edge id '" + edge.id + "'");
    if (edge.tail >= vertices_.size() || edge.head >= vertices_.size()) {
      throw invalid("edge '" + edge.id + "' references an unknown vertex");
    }
    if (edge.tail == edge.head) throw invalid("edge '" + edge.id + "' is a self-loop");
    validate_cost(edge);
    out_edges_[edge.tail].push_back(e);
  }
  seen.clear();
  std::set<std::pair<VertexIndex, VertexIndex>> od_pairs;
  for (const auto& c : commodities_) {
    if (!seen.insert(c.id).second) throw invalid("duplicate commodity id '" + c.id + "'");
    if (c.origin >= vertices_.size() || c.destination >= vertices_.size()) {
      throw invalid("commodity '" + c.id + "' references an unknown vertex");
    }
    if (c.origin == c.destination) {
      throw invalid("commodity '" + c.id + "' has origin equal to destination");
    }
    if (!od_pairs.emplace(c.origin, c.destination).second) {
      throw invalid("commodity '" + c.id + "' repeats an existing origin-destination pair");
    }
  }

  path_offsets_.push_back(0);
  for (CommodityIndex i = 0; i < commodities_.size(); ++i) {
    auto paths = enumerate_paths(*this, i, path_cap_);
    for (auto& p : paths) paths_.push_back(std::move(p));
    path_offsets_.push_back(paths_.size());
  }
}

VertexIndex Network::vertex_index(const std::string& id) const {
  for (VertexIndex v = 0; v < vertices_.size(); ++v) {
    if (vertices_[v] == id) return v;
  }
  throw DiotError(ErrorCode::kValidationError, "unknown vertex '" + id + "'");
}

EdgeIndex Network::edge_index(const std::string& id) const {
  for (EdgeIndex e = 0; e < edges_.size(); ++e) {
    if (edges_[e].id == id) return e;
  }
  throw DiotError(ErrorCode::kUnknownEdge, "unknown edge '" + id + "'");
}

CommodityIndex Network::commodity_index(const std::string& id) const {
  for (CommodityIndex i = 0; i < commodities_.size(); ++i) {
    if (commodities_[i].id == id) return i;
  }
  throw DiotError(ErrorCode::kValidationError, "unknown commodity '" + id + "'");
}

std::vector<Path> enumerate_paths(const Network& network, CommodityIndex commodity,
                                  std::size_t path_cap) {
  const Commodity& c = network.commodities().at(commodity);
  std::vector<Path> result;
  std::vector<EdgeIndex> stack;
  std::vector<bool> on_path(network.num_vertices(), false);

  // Depth-first over out-edges in increasing index yields paths in
  // lexicographic order of their edge sequences.
  std::function<void(VertexIndex)> visit = [&](VertexIndex v) {
    if (v == c.destination) {
      if (result.size() == path_cap) {
        throw DiotError(ErrorCode::kPathExplosion,
                        "commodity '" + c.id + "' has more than " + std::to_string(path_cap) +
                            " simple paths");
      }
      result.push_back(Path{commodity, stack});
      return;
    }
    on_path[v] = true;
    for (EdgeIndex e : network.out_edges(v)) {
      VertexIndex next = network.edges()[e].head;
      if (on_path[next]) continue;
      stack.push_back(e);
      visit(next);
      stack.pop_back();
    }
    on_path[v] = false;
  };
  visit(c.origin);

  if (result.empty()) {
    throw DiotError(ErrorCode::kNoPath, "commodity '" + c.id + "' has no origin-destination path");
  }
  return result;
}

std::vector<VertexIndex> topological_sort(
    std::size_t num_vertices, std::span<const std::pair<VertexIndex, VertexIndex>> arcs) {
  std::vector<std::size_t> in_degree(num_vertices, 0);
  std::vector<std::vector<VertexIndex>> successors(num_vertices);
  for (const auto& [tail, head] : arcs) {
    successors[tail].push_back(head);
    ++in_degree[head];
  }
  std::priority_queue<VertexIndex, std::vector<VertexIndex>, std::greater<>> ready;
  for (VertexIndex v = 0; v < num_vertices; ++v) {
    if (in_degree[v] == 0) ready.push(v);
  }
  std::vector<VertexIndex> order;
  order.reserve(num_vertices);
  while (!ready.empty()) {
    VertexIndex v = ready.top();
    ready.pop();
    order.push_back(v);
    for (VertexIndex w : successors[v]) {
      if (--in_degree[w] == 0) ready.push(w);
    }
  }
  if (order.size() != num_vertices) {
    throw DiotError(ErrorCode::kCyclicGraph, "graph contains a directed cycle");
  }
  return order;
}

std::vector<VertexIndex> topological_sort(const Network& network) {
  std::vector<std::pair<VertexIndex, VertexIndex>> arcs;
  arcs.reserve(network.num_edges());
  for (const auto& edge : network.edges()) arcs.emplace_back(edge.tail, edge.head);
  return topological_sort(network.num_vertices(), arcs);
}

LoadProfile loads_from_flow(const Network& network, std::span<const double> path_flow) {
  LoadProfile loads(network.num_edges(), 0.0);
  const std::size_t n = std::min(path_flow.size(), network.num_paths());
  for (PathIndex p = 0; p < n; ++p) {
    if (path_flow[p] == 0.0) continue;
    for (EdgeIndex e : network.path(p).edges) loads[e] += path_flow[p];
  }
  return loads;
}

FlowReport validate_flow(const Network& network, std::span<const double> path_flow,
                         std::span<const double> demand) {
  FlowReport report;
  using Kind = FlowViolation::Kind;
  if (path_flow.size() != network.num_paths()) {
    report.violations.push_back({Kind::kSize, 0, static_cast<double>(path_flow.size())});
    return report;
  }
  if (demand.size() != network.num_commodities()) {
    report.violations.push_back({Kind::kSize, 1, static_cast<double>(demand.size())});
    return report;
  }
  for (PathIndex p = 0; p < path_flow.size(); ++p) {
    if (!(path_flow[p] >= 0.0)) report.violations.push_back({Kind::kNegativeFlow, p, path_flow[p]});
  }
  for (CommodityIndex i = 0; i < network.num_commodities(); ++i) {
    double sum = 0.0;
    for (PathIndex p = network.path_begin(i); p < network.path_end(i); ++p) sum += path_flow[p];
    double residual = demand[i] - sum;
    if (!(std::abs(residual) <= kFlowTolerance)) {
      report.violations.push_back({Kind::kConservation, i, residual});
    }
  }
  return report;
}

}  // namespace diot

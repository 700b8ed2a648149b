#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "diot/cost.hpp"

namespace diot {

using VertexIndex = std::size_t;
using EdgeIndex = std::size_t;
using CommodityIndex = std::size_t;
using PathIndex = std::size_t;

// Vectors indexed by commodity, path and edge respectively.
using DemandVector = std::vector<double>;
using PathFlow = std::vector<double>;
using LoadProfile = std::vector<double>;

inline constexpr std::size_t kDefaultPathCap = 10'000;
inline constexpr double kFlowTolerance = 1e-9;

struct Edge {
  std::string id;
  VertexIndex tail = 0;
  VertexIndex head = 0;
  CostFunction cost;
};

struct Commodity {
  std::string id;
  VertexIndex origin = 0;
  VertexIndex destination = 0;
};

struct Path {
  CommodityIndex commodity = 0;
  std::vector<EdgeIndex> edges;
};

/// Directed multigraph with per-edge costs, a shared BPR degree and a set of
/// commodities. All simple origin-destination paths are enumerated on
/// construction and stored commodity by commodity; path indices used by
/// PathFlow refer to this list. Immutable once built.
class Network {
 public:
  /// Validates the structural invariants and enumerates paths. Throws
  /// DiotError with kValidationError, kNoPath or kPathExplosion.
  Network(double beta, std::vector<std::string> vertices, std::vector<Edge> edges,
          std::vector<Commodity> commodities, std::size_t path_cap = kDefaultPathCap);

  double beta() const { return beta_; }
  std::size_t path_cap() const { return path_cap_; }

  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Commodity>& commodities() const { return commodities_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_commodities() const { return commodities_.size(); }
  std::size_t num_paths() const { return paths_.size(); }

  const std::vector<Path>& paths() const { return paths_; }
  const Path& path(PathIndex p) const { return paths_[p]; }

  // Paths of commodity i occupy [path_begin(i), path_end(i)).
  PathIndex path_begin(CommodityIndex i) const { return path_offsets_[i]; }
  PathIndex path_end(CommodityIndex i) const { return path_offsets_[i + 1]; }

  // Throws kValidationError / kUnknownEdge for unknown ids.
  VertexIndex vertex_index(const std::string& id) const;
  EdgeIndex edge_index(const std::string& id) const;
  CommodityIndex commodity_index(const std::string& id) const;

  // Outgoing edges of each vertex in increasing edge index.
  const std::vector<EdgeIndex>& out_edges(VertexIndex v) const { return out_edges_[v]; }

 private:
  double beta_;
  std::size_t path_cap_;
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<Commodity> commodities_;
  std::vector<std::vector<EdgeIndex>> out_edges_;
  std::vector<Path> paths_;
  std::vector<PathIndex> path_offsets_;
};

/// All simple origin->destination paths of one commodity, ordered
/// lexicographically by edge-index sequence.
/// Throws kNoPath if there is none and kPathExplosion above path_cap.
std::vector<Path> enumerate_paths(const Network& network, CommodityIndex commodity,
                                  std::size_t path_cap = kDefaultPathCap);

/// Kahn's algorithm, smallest vertex index first among ready vertices.
/// Throws kCyclicGraph if the graph has a directed cycle.
std::vector<VertexIndex> topological_sort(const Network& network);

/// Same procedure over an arbitrary arc list on num_vertices vertices.
std::vector<VertexIndex> topological_sort(
    std::size_t num_vertices, std::span<const std::pair<VertexIndex, VertexIndex>> arcs);

LoadProfile loads_from_flow(const Network& network, std::span<const double> path_flow);

struct FlowViolation {
  enum class Kind { kNegativeFlow, kConservation, kSize };
  Kind kind;
  std::size_t index;  // path index for kNegativeFlow, commodity otherwise
  double residual;
};

struct FlowReport {
  std::vector<FlowViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks non-negativity and per-commodity conservation within
/// kFlowTolerance. Never throws.
FlowReport validate_flow(const Network& network, std::span<const double> path_flow,
                         std::span<const double> demand);

}  // namespace diot

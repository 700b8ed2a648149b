#include "diot/tolls.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "diot/error.hpp"

namespace diot {
namespace {

double beta_share(double beta) { return beta / (beta + 1.0); }

std::vector<double> free_flow_offsets(const Network& network) {
  std::vector<double> t(network.num_edges());
  for (EdgeIndex e = 0; e < network.num_edges(); ++e) {
    const auto params = is_bpr_type(network.edges()[e].cost, network.beta());
    if (!params) {
      throw DiotError(ErrorCode::kNotBpr,
                      "edge " + network.edges()[e].id + " is not of the form t + a x^beta");
    }
    t[e] = params->t;
  }
  return t;
}

TollConstruction shift_construction(const Network& network, std::vector<VertexIndex> order) {
  TollConstruction result;
  result.tolls = trivial_diot(network);
  std::vector<long> position(network.num_vertices());
  for (std::size_t k = 0; k < order.size(); ++k) position[order[k]] = static_cast<long>(k);
  result.vertex_order = std::move(order);

  result.delta.resize(network.num_edges());
  for (EdgeIndex e = 0; e < network.num_edges(); ++e) {
    const Edge& edge = network.edges()[e];
    result.delta[e] = position[edge.head] - position[edge.tail];
  }
  for (const Commodity& c : network.commodities()) {
    result.delta_per_commodity.push_back(position[c.destination] - position[c.origin]);
  }
  return result;
}

void apply_shift(TollConstruction& construction, double amount) {
  for (std::size_t e = 0; e < construction.tolls.size(); ++e) {
    construction.tolls[e] += static_cast<double>(construction.delta[e]) * amount + 0.0;
  }
}

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.10g", std::abs(value));
  std::string text = buffer;
  return value < 0.0 ? "−" + text : text;
}

std::string toll_symbol(const std::string& edge_id) {
  static const char* kSubscripts[] = {"₀", "₁", "₂", "₃", "₄",
                                      "₅", "₆", "₇", "₈", "₉"};
  const bool numbered = edge_id.size() > 1 && edge_id[0] == 'e' &&
                        std::all_of(edge_id.begin() + 1, edge_id.end(),
                                    [](char ch) { return ch >= '0' && ch <= '9'; });
  if (!numbered) return "τ[" + edge_id + "]";
  std::string symbol = "τ";
  for (std::size_t k = 1; k < edge_id.size(); ++k) symbol += kSubscripts[edge_id[k] - '0'];
  return symbol;
}

}  // namespace

TollVector trivial_diot(const Network& network) {
  const std::vector<double> t = free_flow_offsets(network);
  const double share = beta_share(network.beta());
  TollVector tolls(t.size());
  for (std::size_t e = 0; e < t.size(); ++e) tolls[e] = -share * t[e] + 0.0;
  return tolls;
}

TollConstruction nonnegative_diot_dag(const Network& network) {
  TollConstruction result = shift_construction(network, topological_sort(network));
  double xi = std::numeric_limits<double>::infinity();
  for (EdgeIndex e = 0; e < network.num_edges(); ++e) {
    xi = std::min(xi, result.tolls[e] / static_cast<double>(result.delta[e]));
  }
  if (network.num_edges() == 0) xi = 0.0;
  result.xi = xi;
  result.chi = std::max(-xi, 0.0);
  apply_shift(result, result.chi);
  return result;
}

TollConstruction budget_diot(const Network& network) {
  const std::vector<double> t = free_flow_offsets(network);
  std::vector<std::pair<VertexIndex, VertexIndex>> arcs;
  for (const Commodity& c : network.commodities()) arcs.emplace_back(c.origin, c.destination);
  std::vector<VertexIndex> order;
  try {
    order = topological_sort(network.num_vertices(), arcs);
  } catch (const DiotError& error) {
    if (error.code() != ErrorCode::kCyclicGraph) throw;
    throw DiotError(ErrorCode::kNoValidOrder,
                    "no vertex order puts every origin before its destination");
  }

  TollConstruction result = shift_construction(network, std::move(order));
  const double share = beta_share(network.beta());
  double gamma = 0.0;
  for (CommodityIndex i = 0; i < network.num_commodities(); ++i) {
    double worst = 0.0;
    for (PathIndex p = network.path_begin(i); p < network.path_end(i); ++p) {
      double sum = 0.0;
      for (EdgeIndex e : network.path(p).edges) sum += t[e];
      worst = std::max(worst, share * sum);
    }
    gamma = std::max(gamma, worst / static_cast<double>(result.delta_per_commodity[i]));
  }
  result.gamma = gamma;
  apply_shift(result, gamma);
  return result;
}

bool UsedPathSet::contains(CommodityIndex i, PathIndex p) const {
  if (i >= per_commodity.size()) return false;
  const auto& paths = per_commodity[i];
  return std::find(paths.begin(), paths.end(), p) != paths.end();
}

std::size_t UsedPathSet::size() const {
  std::size_t total = 0;
  for (const auto& paths : per_commodity) total += paths.size();
  return total;
}

UsedPathSet UsedPathSet::all_paths(const Network& network) {
  UsedPathSet used;
  used.per_commodity.resize(network.num_commodities());
  for (CommodityIndex i = 0; i < network.num_commodities(); ++i) {
    for (PathIndex p = network.path_begin(i); p < network.path_end(i); ++p) {
      used.per_commodity[i].push_back(p);
    }
  }
  return used;
}

DiotConstraintSystem build_constraint_system(const Network& network, const UsedPathSet& used) {
  const std::vector<double> t = free_flow_offsets(network);
  const double share = beta_share(network.beta());

  DiotConstraintSystem system;
  system.num_edges = network.num_edges();
  system.path_constants.resize(network.num_paths());
  for (PathIndex p = 0; p < network.num_paths(); ++p) {
    double sum = 0.0;
    for (EdgeIndex e : network.path(p).edges) sum += t[e];
    system.path_constants[p] = share * sum;
  }

  auto make_row = [&](DiotConstraint::Kind kind, CommodityIndex i, PathIndex first,
                      PathIndex second) {
    std::map<EdgeIndex, double> coefs;
    for (EdgeIndex e : network.path(first).edges) coefs[e] += 1.0;
    for (EdgeIndex e : network.path(second).edges) coefs[e] -= 1.0;
    DiotConstraint row;
    row.kind = kind;
    row.commodity = i;
    row.first = first;
    row.second = second;
    for (const auto& [e, c] : coefs) {
      if (c != 0.0) row.coefficients.emplace_back(e, c);
    }
    row.constant = system.path_constants[first] - system.path_constants[second];
    system.constraints.push_back(std::move(row));
  };

  for (CommodityIndex i = 0; i < network.num_commodities(); ++i) {
    std::vector<PathIndex> members;
    if (i < used.per_commodity.size()) members = used.per_commodity[i];
    for (PathIndex p : members) {
      if (p < network.path_begin(i) || p >= network.path_end(i)) {
        throw DiotError(ErrorCode::kInvalidArgument,
                        "used path " + std::to_string(p) + " does not belong to commodity " +
                            network.commodities()[i].id);
      }
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());

    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        make_row(DiotConstraint::Kind::kEqual, i, members[a], members[b]);
      }
    }
    for (PathIndex p : members) {
      for (PathIndex q = network.path_begin(i); q < network.path_end(i); ++q) {
        if (std::binary_search(members.begin(), members.end(), q)) continue;
        make_row(DiotConstraint::Kind::kLessEqual, i, p, q);
      }
    }
  }
  return system;
}

DiotLpResult solve_diot_lp(const DiotConstraintSystem& system, const DiotLpOptions& options) {
  std::vector<bool> active = options.active_edges;
  if (active.empty()) active.assign(system.num_edges, true);
  if (active.size() != system.num_edges) {
    throw DiotError(ErrorCode::kInvalidArgument, "active edge mask has the wrong length");
  }
  std::vector<std::size_t> column(system.num_edges, 0);
  std::vector<EdgeIndex> edge_of_column;
  for (EdgeIndex e = 0; e < system.num_edges; ++e) {
    if (!active[e]) continue;
    column[e] = edge_of_column.size();
    edge_of_column.push_back(e);
  }

  lp::LinearProgram problem;
  problem.num_vars = edge_of_column.size();
  problem.free_vars.assign(problem.num_vars, !options.require_nonnegative);
  for (const DiotConstraint& c : system.constraints) {
    lp::Row row;
    row.coefs.assign(problem.num_vars, 0.0);
    for (const auto& [e, coef] : c.coefficients) {
      if (active[e]) row.coefs[column[e]] = coef;
    }
    row.sense = c.kind == DiotConstraint::Kind::kEqual ? lp::RowSense::kEqual
                                                       : lp::RowSense::kLessEqual;
    row.rhs = -c.constant;
    problem.rows.push_back(std::move(row));
  }
  if (options.objective == LpObjective::kMinimizeTotalToll) {
    problem.objective.assign(problem.num_vars, 1.0);
  }

  const lp::LpResult solved = lp::solve(problem);
  DiotLpResult result;
  result.status = solved.status;
  if (solved.status == lp::LpStatus::kInfeasible) {
    InfeasibilityCertificate cert;
    cert.coefficients.assign(system.num_edges, 0.0);
    for (std::size_t r = 0; r < problem.rows.size(); ++r) {
      const double z = solved.farkas[r];
      if (z == 0.0) continue;
      for (std::size_t j = 0; j < problem.num_vars; ++j) {
        cert.coefficients[edge_of_column[j]] += z * problem.rows[r].coefs[j];
      }
      cert.rhs += z * problem.rows[r].rhs;
      if (problem.rows[r].sense == lp::RowSense::kLessEqual && std::abs(z) > 1e-12) {
        cert.equality = false;
      }
    }
    double largest = 0.0;
    for (double c : cert.coefficients) largest = std::max(largest, std::abs(c));
    double smallest = std::numeric_limits<double>::infinity();
    for (double& c : cert.coefficients) {
      if (std::abs(c) <= 1e-9 * std::max(1.0, largest)) {
        c = 0.0;
      } else {
        smallest = std::min(smallest, std::abs(c));
      }
    }
    if (std::isfinite(smallest)) {
      for (double& c : cert.coefficients) c /= smallest;
      cert.rhs /= smallest;
    }
    result.certificate = std::move(cert);
    return result;
  }
  if (solved.status == lp::LpStatus::kOptimal) {
    result.tolls.assign(system.num_edges, 0.0);
    for (std::size_t j = 0; j < problem.num_vars; ++j) {
      result.tolls[edge_of_column[j]] = solved.x[j] + 0.0;
    }
  }
  return result;
}

std::string describe_certificate(const Network& network, const InfeasibilityCertificate& cert) {
  std::string text;
  for (EdgeIndex e = 0; e < cert.coefficients.size() && e < network.num_edges(); ++e) {
    const double c = cert.coefficients[e];
    if (c == 0.0) continue;
    if (c < 0.0) {
      text += "−";
    } else if (!text.empty()) {
      text += "+";
    }
    if (std::abs(std::abs(c) - 1.0) > 1e-9) text += format_number(std::abs(c));
    text += toll_symbol(network.edges()[e].id);
  }
  if (text.empty()) text = "0";
  text += cert.equality ? "=" : "≤";
  text += format_number(cert.rhs);
  return text;
}

TollVector marginal_cost_tolls(const Network& network, const DemandVector& demand,
                               const SolverConfig& config) {
  const SolveResult optimum = solve_optimum(network, demand, config);
  TollVector tolls(network.num_edges());
  for (EdgeIndex e = 0; e < network.num_edges(); ++e) {
    tolls[e] = cost_elasticity_term(network.edges()[e].cost, optimum.loads[e]);
  }
  return tolls;
}

}  // namespace diot

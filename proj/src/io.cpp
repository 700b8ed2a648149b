#include "diot/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "diot/error.hpp"

namespace diot {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

DiotError invalid(const std::string& what) { return DiotError(ErrorCode::kValidationError, what); }

std::string location(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& error) {
    // The reported byte is one past the offending character.
    const std::size_t byte = error.byte > 0 ? error.byte - 1 : 0;
    std::string message = error.what();
    const auto colon = message.rfind(": ");
    if (colon != std::string::npos) message = message.substr(colon + 2);
    throw DiotError(ErrorCode::kParseError, location(text, byte) + ": " + message);
  }
}

const json& field(const json& object, const char* key, const std::string& where) {
  const auto it = object.find(key);
  if (it == object.end()) throw invalid(where + " is missing '" + key + "'");
  return *it;
}

double number(const json& object, const char* key, const std::string& where) {
  const json& value = field(object, key, where);
  if (!value.is_number()) throw invalid(where + ": '" + key + "' must be a number");
  return value.get<double>();
}

std::string text_field(const json& object, const char* key, const std::string& where) {
  const json& value = field(object, key, where);
  if (!value.is_string()) throw invalid(where + ": '" + key + "' must be a string");
  return value.get<std::string>();
}

VertexIndex find_vertex(const std::vector<std::string>& vertices, const std::string& id,
                        const std::string& where) {
  for (VertexIndex v = 0; v < vertices.size(); ++v) {
    if (vertices[v] == id) return v;
  }
  throw invalid(where + " references unknown vertex '" + id + "'");
}

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view text, char separator) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto end = text.find(separator, start);
    parts.push_back(trim(text.substr(start, end == std::string_view::npos ? end : end - start)));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return parts;
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used == text.size() && std::isfinite(value)) return value;
  } catch (const std::exception&) {
  }
  throw DiotError(ErrorCode::kInvalidArgument, "cannot read " + what + " from '" + text + "'");
}

std::size_t parse_count(const std::string& text) {
  const double value = parse_double(text, "a point count");
  if (value < 1.0 || value != std::floor(value)) {
    throw DiotError(ErrorCode::kInvalidArgument, "point count must be a positive integer");
  }
  return static_cast<std::size_t>(value);
}

std::string format12(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

}  // namespace

Network parse_network(std::string_view text, std::size_t path_cap) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw invalid("network document must be an object");

  const double beta = number(doc, "beta", "network");
  std::vector<std::string> vertices;
  const json& vertex_list = field(doc, "vertices", "network");
  if (!vertex_list.is_array()) throw invalid("'vertices' must be a list");
  for (const json& v : vertex_list) {
    if (!v.is_string()) throw invalid("vertex ids must be strings");
    vertices.push_back(v.get<std::string>());
  }

  std::vector<Edge> edges;
  const json& edge_list = field(doc, "edges", "network");
  if (!edge_list.is_array()) throw invalid("'edges' must be a list");
  for (std::size_t k = 0; k < edge_list.size(); ++k) {
    const json& item = edge_list[k];
    std::string where = "edge #" + std::to_string(k + 1);
    if (!item.is_object()) throw invalid(where + " must be an object");
    Edge edge;
    edge.id = text_field(item, "id", where);
    where = "edge '" + edge.id + "'";
    edge.tail = find_vertex(vertices, text_field(item, "tail", where), where);
    edge.head = find_vertex(vertices, text_field(item, "head", where), where);
    const bool has_bpr = item.contains("t") || item.contains("a");
    const bool has_terms = item.contains("terms");
    if (has_bpr == has_terms) throw invalid(where + " needs exactly one of (t, a) or terms");
    if (has_bpr) {
      edge.cost = BprCost{number(item, "t", where), number(item, "a", where), beta};
    } else {
      const json& terms = item["terms"];
      if (!terms.is_array()) throw invalid(where + ": 'terms' must be a list");
      MonomialSumCost cost;
      for (const json& term : terms) {
        if (!term.is_object()) throw invalid(where + ": every term must be an object");
        cost.terms.push_back({number(term, "coef", where), number(term, "exp", where)});
      }
      edge.cost = std::move(cost);
    }
    edges.push_back(std::move(edge));
  }

  std::vector<Commodity> commodities;
  const json& commodity_list = field(doc, "commodities", "network");
  if (!commodity_list.is_array()) throw invalid("'commodities' must be a list");
  for (std::size_t k = 0; k < commodity_list.size(); ++k) {
    const json& item = commodity_list[k];
    std::string where = "commodity #" + std::to_string(k + 1);
    if (!item.is_object()) throw invalid(where + " must be an object");
    Commodity c;
    c.id = text_field(item, "id", where);
    where = "commodity '" + c.id + "'";
    c.origin = find_vertex(vertices, text_field(item, "origin", where), where);
    c.destination = find_vertex(vertices, text_field(item, "destination", where), where);
    commodities.push_back(std::move(c));
  }
  return Network(beta, std::move(vertices), std::move(edges), std::move(commodities), path_cap);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DiotError(ErrorCode::kInvalidArgument, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DiotError(ErrorCode::kInvalidArgument, "cannot write '" + path + "'");
  out << contents;
}

Network load_network(const std::string& path, std::size_t path_cap) {
  std::ifstream probe(path);
  const std::string resolved = probe ? path : path + ".json";
  return parse_network(read_file(resolved), path_cap);
}

std::string emit_network(const Network& network) {
  ordered_json doc;
  doc["beta"] = network.beta();
  doc["vertices"] = network.vertices();
  ordered_json edges = ordered_json::array();
  for (const Edge& edge : network.edges()) {
    ordered_json item;
    item["id"] = edge.id;
    item["tail"] = network.vertices()[edge.tail];
    item["head"] = network.vertices()[edge.head];
    const auto* bpr = std::get_if<BprCost>(&edge.cost);
    if (bpr && bpr->beta == network.beta()) {
      item["t"] = bpr->t;
      item["a"] = bpr->a;
    } else {
      ordered_json terms = ordered_json::array();
      if (bpr) {
        terms.push_back({{"coef", bpr->t}, {"exp", 0.0}});
        terms.push_back({{"coef", bpr->a}, {"exp", bpr->beta}});
      } else {
        for (const auto& term : std::get<MonomialSumCost>(edge.cost).terms) {
          terms.push_back({{"coef", term.coef}, {"exp", term.exponent}});
        }
      }
      item["terms"] = std::move(terms);
    }
    edges.push_back(std::move(item));
  }
  doc["edges"] = std::move(edges);
  ordered_json commodities = ordered_json::array();
  for (const Commodity& c : network.commodities()) {
    commodities.push_back({{"id", c.id},
                           {"origin", network.vertices()[c.origin]},
                           {"destination", network.vertices()[c.destination]}});
  }
  doc["commodities"] = std::move(commodities);
  return doc.dump(2) + "\n";
}

TollDocument parse_tolls(std::string_view text, const Network& network) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw invalid("toll document must be an object");
  const json& map = doc.contains("tolls") ? doc["tolls"] : doc;
  if (!map.is_object()) throw invalid("'tolls' must map edge ids to numbers");

  TollDocument result;
  result.tolls.assign(network.num_edges(), 0.0);
  std::vector<bool> seen(network.num_edges(), false);
  for (const auto& [id, value] : map.items()) {
    const EdgeIndex e = network.edge_index(id);
    if (!value.is_number()) throw invalid("toll for '" + id + "' must be a number");
    result.tolls[e] = value.get<double>();
    seen[e] = true;
  }
  for (EdgeIndex e = 0; e < network.num_edges(); ++e) {
    if (!seen[e]) result.defaulted.push_back(network.edges()[e].id);
  }
  return result;
}

TollDocument load_tolls(const std::string& path, const Network& network) {
  return parse_tolls(read_file(path), network);
}

std::string emit_tolls(const Network& network, const TollVector& tolls,
                       const std::vector<std::string>& defaulted) {
  ordered_json map = ordered_json::object();
  for (EdgeIndex e = 0; e < network.num_edges(); ++e) {
    map[network.edges()[e].id] = tolls.empty() ? 0.0 : tolls.at(e);
  }
  ordered_json doc;
  doc["tolls"] = std::move(map);
  if (!defaulted.empty()) doc["defaulted"] = defaulted;
  return doc.dump(2) + "\n";
}

DemandVector parse_demand(std::string_view text, const Network& network) {
  DemandVector demand(network.num_commodities(), 0.0);
  const std::string trimmed = trim(text);
  if (trimmed.find('=') == std::string::npos) {
    if (network.num_commodities() != 1) {
      throw DiotError(ErrorCode::kInvalidArgument, "use id=value pairs for several commodities");
    }
    demand[0] = parse_double(trimmed, "a demand");
  } else {
    for (const std::string& part : split(trimmed, ',')) {
      const auto eq = part.find('=');
      if (eq == std::string::npos) {
        throw DiotError(ErrorCode::kInvalidArgument, "expected id=value, got '" + part + "'");
      }
      const CommodityIndex i = network.commodity_index(trim(part.substr(0, eq)));
      demand[i] = parse_double(trim(part.substr(eq + 1)), "a demand");
    }
  }
  for (double d : demand) {
    if (d < 0.0) throw DiotError(ErrorCode::kInvalidArgument, "demands must be >= 0");
  }
  return demand;
}

std::vector<double> parse_value_list(std::string_view spec) {
  const std::string text = trim(spec);
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) {
      throw DiotError(ErrorCode::kInvalidArgument, "grid range must be lo:hi:count");
    }
    const std::size_t count = parse_count(parts[2]);
    if (count > kMaxGridPoints) {
      throw DiotError(ErrorCode::kInvalidArgument, "grid range has too many points");
    }
    return log_spaced(parse_double(parts[0], "a grid bound"), parse_double(parts[1], "a grid bound"),
                      count);
  }
  std::vector<double> values;
  for (const std::string& part : split(text, ',')) {
    const double v = parse_double(part, "a grid value");
    if (v < 0.0) throw DiotError(ErrorCode::kInvalidArgument, "grid values must be >= 0");
    values.push_back(v);
  }
  return values;
}

DemandGrid parse_grid(const std::vector<std::string>& specs, const Network& network) {
  if (specs.empty()) throw DiotError(ErrorCode::kInvalidArgument, "no grid given");
  std::vector<std::vector<double>> per_commodity(network.num_commodities());
  std::vector<double> shared;
  for (const std::string& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
      shared = parse_value_list(spec);
    } else {
      const CommodityIndex i = network.commodity_index(trim(spec.substr(0, eq)));
      per_commodity[i] = parse_value_list(spec.substr(eq + 1));
    }
  }
  for (CommodityIndex i = 0; i < network.num_commodities(); ++i) {
    if (per_commodity[i].empty()) {
      if (shared.empty()) {
        throw DiotError(ErrorCode::kInvalidArgument,
                        "no grid for commodity '" + network.commodities()[i].id + "'");
      }
      per_commodity[i] = shared;
    }
  }
  return DemandGrid::product(per_commodity);
}

std::vector<double> parse_toll_range(std::string_view spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw DiotError(ErrorCode::kInvalidArgument, "toll range must be a:b:step");
  const double a = parse_double(parts[0], "a toll bound");
  const double b = parse_double(parts[1], "a toll bound");
  const double step = parse_double(parts[2], "a toll step");
  if (!(step > 0.0) || b < a) {
    throw DiotError(ErrorCode::kInvalidArgument, "toll range needs a <= b and step > 0");
  }
  const double span = (b - a) / step;
  if (span > 1e6) throw DiotError(ErrorCode::kInvalidArgument, "toll range has too many points");
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> values(count);
  for (std::size_t k = 0; k < count; ++k) values[k] = a + static_cast<double>(k) * step;
  return values;
}

std::string sweep_csv(const Network& network, const SweepReport& report) {
  std::string out;
  for (const Commodity& c : network.commodities()) out += "demand_" + c.id + ",";
  out += "L_opt,L_eq,abs_gap,rel_gap,converged\n";
  for (const SweepPoint& point : report.points) {
    for (double d : point.demand) out += format12(d) + ",";
    out += format12(point.optimum_cost) + "," + format12(point.equilibrium_cost) + "," +
           format12(point.absolute_gap) + "," + format12(point.relative_gap) + "," +
           (point.converged ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace diot

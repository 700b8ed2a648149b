#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "diot/analysis.hpp"
#include "diot/network.hpp"

namespace diot {

/// Parses a network document:
///   {"beta": 1, "vertices": ["o", "d"],
///    "edges": [{"id": "e1", "tail": "o", "head": "d", "t": 1, "a": 0},
///              {"id": "e2", "tail": "o", "head": "d", "terms": [{"coef": 1, "exp": 2}]}],
///    "commodities": [{"id": "c1", "origin": "o", "destination": "d"}]}
/// Throws kParseError (with line and column) or kValidationError.
Network parse_network(std::string_view text, std::size_t path_cap = kDefaultPathCap);

/// Reads and parses a network file; "name" falls back to "name.json".
Network load_network(const std::string& path, std::size_t path_cap = kDefaultPathCap);

/// Document text that parse_network turns back into an identical network.
std::string emit_network(const Network& network);

struct TollDocument {
  TollVector tolls;
  // Edge ids absent from the document, set to 0.
  std::vector<std::string> defaulted;
};

/// Accepts {"tolls": {"e1": 0.5, ...}} or the bare map. Unknown edge ids
/// throw kUnknownEdge.
TollDocument parse_tolls(std::string_view text, const Network& network);
TollDocument load_tolls(const std::string& path, const Network& network);
std::string emit_tolls(const Network& network, const TollVector& tolls,
                       const std::vector<std::string>& defaulted = {});

/// "c1=1,c2=0.5". A bare number is accepted for single-commodity networks.
/// Commodities not mentioned get demand 0.
DemandVector parse_demand(std::string_view text, const Network& network);

/// "lo:hi:count" (log-spaced, inclusive) or a comma-separated list.
std::vector<double> parse_value_list(std::string_view spec);

/// Each spec is either a value list applied to every commodity or
/// "id=<value list>" for one commodity; the result is their product.
DemandGrid parse_grid(const std::vector<std::string>& specs, const Network& network);

/// "a:b:step", inclusive of b up to rounding.
std::vector<double> parse_toll_range(std::string_view spec);

/// Columns: demand_<id> per commodity, L_opt, L_eq, abs_gap, rel_gap,
/// converged. 12 significant digits, LF line endings.
std::string sweep_csv(const Network& network, const SweepReport& report);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace diot

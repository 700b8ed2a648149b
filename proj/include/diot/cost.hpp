#pragma once

#include <optional>
#include <variant>
#include <vector>

namespace diot {

/// Shifted monomial c(x) = t + a * x^beta.
struct BprCost {
  double t = 0.0;
  double a = 0.0;
  double beta = 1.0;

  friend bool operator==(const BprCost&, const BprCost&) = default;
};

struct MonomialTerm {
  double coef = 0.0;
  double exponent = 0.0;

  friend bool operator==(const MonomialTerm&, const MonomialTerm&) = default;
};

/// c(x) = sum_k coef_k * x^exponent_k with non-negative coefficients and
/// exponents. Used for cost functions outside the BPR family.
struct MonomialSumCost {
  std::vector<MonomialTerm> terms;

  friend bool operator==(const MonomialSumCost&, const MonomialSumCost&) = default;
};

using CostFunction = std::variant<BprCost, MonomialSumCost>;

// Per-edge toll, may be negative. An empty vector means "no tolls".
using TollVector = std::vector<double>;

// All evaluations below throw DiotError(kDomainError) for x < 0.

double cost_value(const CostFunction& cost, double x);

// c'(x). May be +inf at x = 0 for exponents in (0, 1).
double cost_derivative(const CostFunction& cost, double x);

// x * c'(x), finite everywhere on x >= 0. This is the marginal-cost toll.
double cost_elasticity_term(const CostFunction& cost, double x);

// (x c(x))' = c(x) + x c'(x).
double marginal_cost_value(const CostFunction& cost, double x);

// integral_0^x c(s) ds.
double beckmann_term(const CostFunction& cost, double x);

// x * c(x), the edge's contribution to the social cost.
double total_cost_term(const CostFunction& cost, double x);

// True when c(x) > c(0) for some x > 0, i.e. the cost is strictly increasing.
bool is_strictly_increasing(const CostFunction& cost);

struct BprParameters {
  double t = 0.0;
  double a = 0.0;
};

/// Returns (t, a) when the cost can be written as t + a x^beta for the given
/// network degree, std::nullopt otherwise. A monomial sum qualifies when every
/// term with a non-zero coefficient has exponent 0 or exactly beta.
std::optional<BprParameters> is_bpr_type(const CostFunction& cost, double beta);

class Network;
struct Path;

/// Sum of c_e(x_e) + tau_e over the path. Empty tolls mean latency only.
/// Throws kUnknownEdge if the path or the toll vector does not fit the network.
double path_cost(const Network& network, const std::vector<double>& loads, const Path& path,
                 const TollVector& tolls = {});

}  // namespace diot

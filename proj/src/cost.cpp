#include "diot/cost.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "diot/error.hpp"
#include "diot/network.hpp"

namespace diot {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_non_negative(double x) {
  if (!(x >= 0.0)) {
    throw DiotError(ErrorCode::kDomainError,
                    "cost evaluated at negative load " + std::to_string(x));
  }
}

// x^k with the conventions 0^0 = 1 and 0^k = 0 for k > 0.
double power(double x, double k) {
  if (k == 0.0) return 1.0;
  if (k == 1.0) return x;
  if (k == 2.0) return x * x;
  return std::pow(x, k);
}

}  // namespace

double cost_value(const CostFunction& cost, double x) {
  require_non_negative(x);
  return std::visit(
      Overloaded{
          [x](const BprCost& c) { return c.t + c.a * power(x, c.beta); },
          [x](const MonomialSumCost& c) {
            double sum = 0.0;
            for (const auto& term : c.terms) sum += term.coef * power(x, term.exponent);
            return sum;
          },
      },
      cost);
}

double cost_derivative(const CostFunction& cost, double x) {
  require_non_negative(x);
  auto term_derivative = [x](double coef, double k) -> double {
    if (coef == 0.0 || k == 0.0) return 0.0;
    if (x == 0.0) {
      if (k < 1.0) return std::numeric_limits<double>::infinity();
      return k == 1.0 ? coef : 0.0;
    }
    return coef * k * power(x, k - 1.0);
  };
  return std::visit(
      Overloaded{
          [&](const BprCost& c) { return term_derivative(c.a, c.beta); },
          [&](const MonomialSumCost& c) {
            double sum = 0.0;
            for (const auto& term : c.terms) sum += term_derivative(term.coef, term.exponent);
            return sum;
          },
      },
      cost);
}

double cost_elasticity_term(const CostFunction& cost, double x) {
  require_non_negative(x);
  return std::visit(
      Overloaded{
          [x](const BprCost& c) { return c.beta * c.a * power(x, c.beta); },
          [x](const MonomialSumCost& c) {
            double sum = 0.0;
            for (const auto& term : c.terms) {
              if (term.exponent != 0.0) sum += term.exponent * term.coef * power(x, term.exponent);
            }
            return sum;
          },
      },
      cost);
}

double marginal_cost_value(const CostFunction& cost, double x) {
  require_non_negative(x);
  return std::visit(
      Overloaded{
          [x](const BprCost& c) { return c.t + (c.beta + 1.0) * c.a * power(x, c.beta); },
          [x](const MonomialSumCost& c) {
            double sum = 0.0;
            for (const auto& term : c.terms) {
              sum += (term.exponent + 1.0) * term.coef * power(x, term.exponent);
            }
            return sum;
          },
      },
      cost);
}

double beckmann_term(const CostFunction& cost, double x) {
  require_non_negative(x);
  return std::visit(
      Overloaded{
          [x](const BprCost& c) {
            return c.t * x + c.a * power(x, c.beta + 1.0) / (c.beta + 1.0);
          },
          [x](const MonomialSumCost& c) {
            double sum = 0.0;
            for (const auto& term : c.terms) {
              sum += term.coef * power(x, term.exponent + 1.0) / (term.exponent + 1.0);
            }
            return sum;
          },
      },
      cost);
}

double total_cost_term(const CostFunction& cost, double x) {
  return x * cost_value(cost, x);
}

bool is_strictly_increasing(const CostFunction& cost) {
  return std::visit(
      Overloaded{
          [](const BprCost& c) { return c.a > 0.0 && c.beta > 0.0; },
          [](const MonomialSumCost& c) {
            for (const auto& term : c.terms) {
              if (term.coef > 0.0 && term.exponent > 0.0) return true;
            }
            return false;
          },
      },
      cost);
}

std::optional<BprParameters> is_bpr_type(const CostFunction& cost, double beta) {
  return std::visit(
      Overloaded{
          [beta](const BprCost& c) -> std::optional<BprParameters> {
            if (c.beta == beta || c.a == 0.0) return BprParameters{c.t, c.a};
            if (c.beta == 0.0) return BprParameters{c.t + c.a, 0.0};
            return std::nullopt;
          },
          [beta](const MonomialSumCost& c) -> std::optional<BprParameters> {
            BprParameters params;
            for (const auto& term : c.terms) {
              if (term.coef == 0.0) continue;
              if (term.exponent == 0.0) {
                params.t += term.coef;
              } else if (term.exponent == beta) {
                params.a += term.coef;
              } else {
                return std::nullopt;
              }
            }
            return params;
          },
      },
      cost);
}

double path_cost(const Network& network, const std::vector<double>& loads, const Path& path,
                 const TollVector& tolls) {
  if (loads.size() != network.num_edges() ||
      (!tolls.empty() && tolls.size() != network.num_edges())) {
    throw DiotError(ErrorCode::kUnknownEdge, "load or toll vector does not match the edge set");
  }
  double sum = 0.0;
  for (EdgeIndex e : path.edges) {
    if (e >= network.num_edges()) {
      throw DiotError(ErrorCode::kUnknownEdge, "path references edge index " + std::to_string(e));
    }
    sum += cost_value(network.edges()[e].cost, loads[e]);
    if (!tolls.empty()) sum += tolls[e];
  }
  return sum;
}

}  // namespace diot

#include "diot/cli.hpp"

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diot/analysis.hpp"
#include "diot/error.hpp"
#include "diot/io.hpp"
#include "diot/solver.hpp"
#include "diot/tolls.hpp"

namespace diot {
namespace {

std::string fmt(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

std::string describe_path(const Network& network, const Path& path) {
  std::string text;
  for (EdgeIndex e : path.edges) {
    if (!text.empty()) text += " ";
    text += network.edges()[e].id;
  }
  return text;
}

struct Common {
  std::string network_path;
  std::size_t path_cap = kDefaultPathCap;
  double gap_tol = SolverConfig{}.relative_gap_tol;
  int max_iterations = SolverConfig{}.max_iterations;

  Network load() const { return load_network(network_path, path_cap); }
  SolverConfig solver() const {
    SolverConfig config;
    config.relative_gap_tol = gap_tol;
    config.max_iterations = max_iterations;
    return config;
  }
};

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("network", common.network_path, "Network document")->required();
  sub->add_option("--path-cap", common.path_cap, "Maximum paths per commodity");
  sub->add_option("--gap-tol", common.gap_tol, "Solver relative gap tolerance");
  sub->add_option("--max-iter", common.max_iterations, "Solver iteration budget");
}

void print_solution(std::ostream& out, const Network& network, const SolveResult& result,
                    const TollVector& tolls) {
  out << "loads:\n";
  for (EdgeIndex e = 0; e < network.num_edges(); ++e) {
    out << "  " << network.edges()[e].id << " " << fmt(result.loads[e]) << "\n";
  }
  const std::vector<double> costs = path_costs(network, result.loads, tolls);
  out << "path flows:\n";
  for (PathIndex p = 0; p < network.num_paths(); ++p) {
    out << "  " << network.commodities()[network.path(p).commodity].id << " ["
        << describe_path(network, network.path(p)) << "] flow " << fmt(result.path_flow[p])
        << " cost " << fmt(costs[p]) << "\n";
  }
  out << "social cost: " << fmt(social_cost(network, result.path_flow)) << "\n";
  out << "relative gap: " << fmt(result.relative_gap) << "\n";
  out << "iterations: " << result.iterations << "\n";
  out << "converged: " << (result.converged ? "yes" : "no") << "\n";
}

void print_report(std::ostream& out, const Network& network, const SweepReport& report) {
  out << "points: " << report.points.size() << "\n";
  if (!report.points.empty()) {
    const SweepPoint& worst = report.points[report.worst_index];
    out << "worst relative gap: " << fmt(report.worst_relative_gap) << " at demand";
    for (CommodityIndex i = 0; i < network.num_commodities(); ++i) {
      out << " " << network.commodities()[i].id << "=" << fmt(worst.demand[i]);
    }
    out << " (L_eq " << fmt(worst.equilibrium_cost) << ", L_opt " << fmt(worst.optimum_cost)
        << ")\n";
  }
  std::size_t unconverged = 0;
  for (const auto& point : report.points) unconverged += point.converged ? 0 : 1;
  if (unconverged > 0) out << "unconverged points: " << unconverged << "\n";
  out << "verdict: " << verdict_name(report.verdict) << "\n";
}

int verdict_exit(Verdict verdict) {
  switch (verdict) {
    case Verdict::kPass:
      return kExitOk;
    case Verdict::kFail:
      return kExitFail;
    case Verdict::kInconclusive:
      return kExitInconclusive;
  }
  return kExitError;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string text;
  for (const auto& v : values) {
    if (!text.empty()) text += " ";
    if constexpr (std::is_floating_point_v<T>) {
      text += fmt(v);
    } else {
      text += std::to_string(v);
    }
  }
  return text;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Routing-game equilibria, optima and demand-independent optimal tolls"};
  app.name("diot");
  app.require_subcommand(1);

  Common common;
  std::string demand_text;
  std::string tolls_path;
  std::string out_path;
  std::string method;
  std::vector<std::string> grid_specs;
  std::vector<std::string> used_grid_specs;
  std::string toll_range;
  bool nonneg = false;
  bool minimize_total = false;
  bool all_paths = false;
  bool per_point_marginal = false;
  bool refine = false;
  double rel_tol = VerifyOptions{}.rel_tol;
  unsigned threads = 0;

  auto* paths_cmd = app.add_subcommand("paths", "List enumerated paths per commodity");
  add_common(paths_cmd, common);

  auto* eq_cmd = app.add_subcommand("equilibrium", "Wardrop equilibrium for a fixed demand");
  add_common(eq_cmd, common);
  eq_cmd->add_option("--demand", demand_text, "Demands as id=value,...")->required();
  eq_cmd->add_option("--tolls", tolls_path, "Toll document");

  auto* opt_cmd = app.add_subcommand("optimum", "System optimum for a fixed demand");
  add_common(opt_cmd, common);
  opt_cmd->add_option("--demand", demand_text, "Demands as id=value,...")->required();

  auto* poa_cmd = app.add_subcommand("poa", "Price of anarchy for a fixed demand");
  add_common(poa_cmd, common);
  poa_cmd->add_option("--demand", demand_text, "Demands as id=value,...")->required();

  auto* diot_cmd = app.add_subcommand("diot", "Construct a demand-independent optimal toll");
  add_common(diot_cmd, common);
  diot_cmd->add_option("--method", method, "trivial | nonneg | budget | lp")
      ->required()
      ->check(CLI::IsMember({"trivial", "nonneg", "budget", "lp"}));
  diot_cmd->add_flag("--nonneg", nonneg, "LP: require non-negative tolls");
  diot_cmd->add_flag("--minimize-total", minimize_total, "LP: minimize the sum of tolls");
  diot_cmd->add_flag("--all-paths", all_paths, "LP: treat every path as used");
  diot_cmd->add_option("--used-grid", used_grid_specs,
                       "LP: demand grid for estimating used paths (default grid if absent)");
  diot_cmd->add_option("--out", out_path, "Write the toll document here");

  auto* marginal_cmd = app.add_subcommand("marginal", "Marginal-cost tolls for a fixed demand");
  add_common(marginal_cmd, common);
  marginal_cmd->add_option("--demand", demand_text, "Demands as id=value,...")->required();
  marginal_cmd->add_option("--out", out_path, "Write the toll document here");

  auto* verify_cmd = app.add_subcommand("verify", "Check a toll against optima on a demand grid");
  add_common(verify_cmd, common);
  verify_cmd->add_option("--tolls", tolls_path, "Toll document")->required();
  verify_cmd->add_option("--grid", grid_specs, "lo:hi:count, a,b,c or id=<spec>");
  verify_cmd->add_option("--rel-tol", rel_tol, "Relative optimality tolerance");
  verify_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Per-demand CSV of tolled vs optimal cost");
  add_common(sweep_cmd, common);
  auto* sweep_tolls = sweep_cmd->add_option("--tolls", tolls_path, "Toll document");
  sweep_cmd->add_flag("--marginal", per_point_marginal, "Use each point's marginal-cost tolls")
      ->excludes(sweep_tolls);
  sweep_cmd->add_option("--grid", grid_specs, "lo:hi:count, a,b,c or id=<spec>");
  sweep_cmd->add_option("--out", out_path, "CSV file (stdout if absent)");
  sweep_cmd->add_option("--rel-tol", rel_tol, "Relative optimality tolerance");
  sweep_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* nodiot_cmd = app.add_subcommand("no-diot", "Search constant tolls on two parallel links");
  add_common(nodiot_cmd, common);
  nodiot_cmd->add_option("--toll-range", toll_range, "a:b:step")->required();
  nodiot_cmd->add_option("--grid", grid_specs, "Demand values: lo:hi:count or a,b,c")->required();
  nodiot_cmd->add_flag("--refine", refine, "Golden-section refinement around the best toll");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "ERROR USAGE " << e.what() << "\n";
    return kExitError;
  }

  try {
    const Network network = common.load();
    const SolverConfig solver = common.solver();
    VerifyOptions verify_options;
    verify_options.rel_tol = rel_tol;
    verify_options.solver = solver;
    verify_options.threads = threads;

    if (paths_cmd->parsed()) {
      const std::vector<double> zero(network.num_edges(), 0.0);
      for (CommodityIndex i = 0; i < network.num_commodities(); ++i) {
        out << network.commodities()[i].id << ": " << network.path_end(i) - network.path_begin(i)
            << " paths\n";
        for (PathIndex p = network.path_begin(i); p < network.path_end(i); ++p) {
          out << "  " << p << " [" << describe_path(network, network.path(p))
              << "] free-flow cost " << fmt(path_cost(network, zero, network.path(p))) << "\n";
        }
      }
      return kExitOk;
    }

    if (eq_cmd->parsed()) {
      const DemandVector demand = parse_demand(demand_text, network);
      TollVector tolls;
      if (!tolls_path.empty()) {
        const TollDocument doc = load_tolls(tolls_path, network);
        tolls = doc.tolls;
        for (const auto& id : doc.defaulted) out << "toll for " << id << " defaulted to 0\n";
      }
      print_solution(out, network, solve_equilibrium(network, demand, tolls, solver), tolls);
      return kExitOk;
    }

    if (opt_cmd->parsed()) {
      const DemandVector demand = parse_demand(demand_text, network);
      print_solution(out, network, solve_optimum(network, demand, solver), {});
      return kExitOk;
    }

    if (poa_cmd->parsed()) {
      out << fmt(price_of_anarchy(network, parse_demand(demand_text, network), solver)) << "\n";
      return kExitOk;
    }

    if (diot_cmd->parsed()) {
      TollVector tolls;
      std::vector<std::string> notes;
      if (method == "trivial") {
        tolls = trivial_diot(network);
      } else if (method == "nonneg" || method == "budget") {
        const TollConstruction c =
            method == "nonneg" ? nonnegative_diot_dag(network) : budget_diot(network);
        tolls = c.tolls;
        std::string order;
        for (VertexIndex v : c.vertex_order) order += (order.empty() ? "" : " ") + network.vertices()[v];
        notes.push_back("vertex order: " + order);
        notes.push_back("delta: " + join(c.delta));
        notes.push_back("delta per commodity: " + join(c.delta_per_commodity));
        if (method == "nonneg") {
          notes.push_back("xi: " + fmt(c.xi));
          notes.push_back("chi: " + fmt(c.chi));
        } else {
          notes.push_back("gamma: " + fmt(c.gamma));
        }
      } else {
        UsedPathSet used;
        if (all_paths) {
          used = UsedPathSet::all_paths(network);
        } else {
          const DemandGrid grid = used_grid_specs.empty() ? default_grid(network)
                                                          : parse_grid(used_grid_specs, network);
          UsedPathOptions used_options;
          used_options.solver = solver;
          used = estimate_used_paths(network, grid, used_options);
        }
        for (CommodityIndex i = 0; i < network.num_commodities(); ++i) {
          std::string listed;
          for (PathIndex p : used.per_commodity[i]) {
            listed += " [" + describe_path(network, network.path(p)) + "]";
          }
          notes.push_back("used paths " + network.commodities()[i].id + ":" + listed);
        }
        DiotLpOptions lp_options;
        lp_options.require_nonnegative = nonneg;
        lp_options.objective =
            minimize_total ? LpObjective::kMinimizeTotalToll : LpObjective::kFeasibility;
        const DiotLpResult lp = solve_diot_lp(build_constraint_system(network, used), lp_options);
        if (lp.status == lp::LpStatus::kInfeasible) {
          for (const auto& note : notes) out << note << "\n";
          out << "INFEASIBLE " << describe_certificate(network, *lp.certificate) << "\n";
          return kExitFail;
        }
        if (lp.status == lp::LpStatus::kUnbounded) {
          for (const auto& note : notes) out << note << "\n";
          out << "UNBOUNDED total toll has no lower bound\n";
          return kExitFail;
        }
        tolls = lp.tolls;
        notes.push_back("lp status: OPTIMAL");
      }
      const std::string document = emit_tolls(network, tolls);
      if (out_path.empty()) {
        out << document;
      } else {
        write_file(out_path, document);
      }
      for (const auto& note : notes) out << note << "\n";
      return kExitOk;
    }

    if (marginal_cmd->parsed()) {
      const TollVector tolls =
          marginal_cost_tolls(network, parse_demand(demand_text, network), solver);
      const std::string document = emit_tolls(network, tolls);
      if (out_path.empty()) {
        out << document;
      } else {
        write_file(out_path, document);
      }
      return kExitOk;
    }

    if (verify_cmd->parsed()) {
      const TollDocument doc = load_tolls(tolls_path, network);
      for (const auto& id : doc.defaulted) out << "toll for " << id << " defaulted to 0\n";
      const DemandGrid grid =
          grid_specs.empty() ? default_grid(network) : parse_grid(grid_specs, network);
      const SweepReport report = verify_diot(network, doc.tolls, grid, verify_options);
      print_report(out, network, report);
      return verdict_exit(report.verdict);
    }

    if (sweep_cmd->parsed()) {
      const DemandGrid grid =
          grid_specs.empty() ? default_grid(network) : parse_grid(grid_specs, network);
      SweepReport report;
      if (per_point_marginal) {
        report = sweep_marginal(network, grid, verify_options);
      } else {
        TollVector tolls;
        if (!tolls_path.empty()) tolls = load_tolls(tolls_path, network).tolls;
        report = verify_diot(network, tolls, grid, verify_options);
      }
      const std::string csv = sweep_csv(network, report);
      if (out_path.empty()) {
        out << csv;
      } else {
        write_file(out_path, csv);
        print_report(out, network, report);
      }
      return kExitOk;
    }

    if (nodiot_cmd->parsed()) {
      if (grid_specs.size() != 1) {
        throw DiotError(ErrorCode::kInvalidArgument, "no-diot takes a single demand list");
      }
      NoDiotOptions options;
      options.solver = solver;
      options.refine = refine;
      const NoDiotResult result = no_diot_search(network, parse_toll_range(toll_range),
                                                 parse_value_list(grid_specs[0]), options);
      out << "best toll: " << fmt(result.best_toll) << "\n";
      out << "minmax relative gap: " << fmt(result.minmax_gap) << "\n";
      return kExitOk;
    }
  } catch (const DiotError& e) {
    err << "ERROR " << error_code_name(e.code()) << " " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "ERROR INTERNAL " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace diot

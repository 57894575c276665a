#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "remest/commands.hpp"

using namespace remest;
using namespace remest::cli;

namespace {

// Replaces every @path argument with the whitespace-separated tokens of that
// file. Lines starting with '#' are ignored.
std::vector<std::string> expand_flag_files(int argc, char** argv) {
  std::vector<std::string> out;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg.size() < 2 || arg[0] != '@') {
      out.push_back(std::move(arg));
      continue;
    }
    std::ifstream in(arg.substr(1));
    if (!in) throw std::invalid_argument("cannot read flag file " + arg.substr(1));
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line[0] == '#') continue;
      std::istringstream ls(line);
      for (std::string tok; ls >> tok;) out.push_back(tok);
    }
  }
  return out;
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  if (s == "text") return OutputFormat::text;
  throw std::invalid_argument("--format must be text, csv or json");
}

CurveKind parse_kind(const std::string& s) {
  if (s == "costly") return CurveKind::costly;
  if (s == "constrained") return CurveKind::constrained;
  throw std::invalid_argument("kind must be costly or constrained");
}

void add_spec_flags(CLI::App* app, SpecOptions& so, std::string& model) {
  app->add_option("--model", model, "A (integer chain) or B (Gaussian innovations)")->check(CLI::IsMember({"A", "B"}));
  app->add_option("--beta", so.beta, "discount factor in (0, 1]; 1 is the long-run average");
  app->add_option("--a", so.a, "dynamics coefficient");
  app->add_option("--p", so.p, "birth-death step probability (model A)");
  app->add_option("--sigma", so.sigma, "innovation standard deviation (model B)");
  app->add_option("--distortion", so.distortion, "abs or quad")->check(CLI::IsMember({"abs", "quad"}));
}

void emit(const OutputRecord& rec, const std::string& format, const std::string& out_path) {
  const std::string text = render(rec, parse_format(format));
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot write " + out_path);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Remote estimation of autoregressive Markov sources: optimal thresholds, trade-off curves, simulation"};
  app.require_subcommand(1);

  std::string format = "text", out_path;
  auto add_output_flags = [&](CLI::App* sub) {
    sub->add_option("--format", format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
    sub->add_option("--out", out_path, "output file (default stdout)");
  };

  // table
  double table_p = 0.3;
  std::vector<double> table_betas{0.9, 0.95, 1.0};
  long table_kmax = 10;
  auto* table = app.add_subcommand("table", "D, N and lambda per threshold for the birth-death chain");
  table->add_option("--p", table_p, "step probability in (0, 1/3)");
  table->add_option("--beta", table_betas, "discount factors")->delimiter(',');
  table->add_option("--k-max", table_kmax, "largest threshold");
  add_output_flags(table);

  // curve
  SpecOptions curve_spec;
  std::string curve_model = "A", curve_kind = "constrained";
  CurveOptions curve_opts;
  double grid_from = 0.0, grid_to = 0.0;
  int grid_points = 0;
  auto* curve = app.add_subcommand("curve", "optimal trade-off curve C*(lambda) or D*(alpha)");
  add_spec_flags(curve, curve_spec, curve_model);
  curve->add_option("--kind", curve_kind, "costly or constrained")->check(CLI::IsMember({"costly", "constrained"}));
  curve->add_option("--k-max", curve_opts.k_max, "largest threshold (model A)");
  curve->add_option("--grid", curve_opts.abscissas, "abscissas (model B)")->delimiter(',');
  curve->add_option("--from", grid_from, "first abscissa of an even grid (model B)");
  curve->add_option("--to", grid_to, "last abscissa of an even grid (model B)");
  curve->add_option("--points", grid_points, "number of grid points (model B)");
  curve->add_option("--epsilon", curve_opts.epsilon, "bisection tolerance (model B)");
  add_output_flags(curve);

  // solve
  SpecOptions solve_spec;
  std::string solve_model = "A", solve_problem = "costly";
  std::optional<double> solve_lambda, solve_alpha;
  double solve_eps = 1e-6;
  auto* solve = app.add_subcommand("solve", "optimal policy for a price lambda or a rate alpha");
  add_spec_flags(solve, solve_spec, solve_model);
  solve->add_option("--problem", solve_problem, "costly or constrained")
      ->check(CLI::IsMember({"costly", "constrained"}));
  solve->add_option("--lambda", solve_lambda, "communication price (costly)");
  solve->add_option("--alpha", solve_alpha, "transmission rate (constrained)");
  solve->add_option("--epsilon", solve_eps, "bisection tolerance (model B)");
  add_output_flags(solve);

  // simulate
  SpecOptions sim_spec;
  std::string sim_model = "A";
  PolicyOptions sim_policy;
  SimConfig sim_cfg;
  double sim_k = -1.0, sim_theta = -1.0, sim_alpha = -1.0;
  long sim_period = 0;
  auto* sim = app.add_subcommand("simulate", "Monte-Carlo estimate of (D, N) for a policy");
  add_spec_flags(sim, sim_spec, sim_model);
  sim->add_option("--policy", sim_policy.kind, "threshold, randomized, periodic, iid, steering or time-sharing")
      ->check(CLI::IsMember({"threshold", "randomized", "periodic", "iid", "steering", "time-sharing"}));
  auto* k_opt = sim->add_option("--k", sim_k, "threshold");
  auto* theta_opt = sim->add_option("--theta", sim_theta, "boundary transmit probability or mixing weight");
  auto* alpha_opt = sim->add_option("--alpha", sim_alpha, "target transmission rate");
  auto* period_opt = sim->add_option("--period", sim_period, "period T (periodic)");
  sim->add_option("--family", sim_policy.family, "one_in_T or all_but_one (periodic)")
      ->check(CLI::IsMember({"one_in_T", "all_but_one"}));
  sim->add_option("--depth", sim_policy.depth, "schedule denominator digits (time-sharing)");
  sim->add_option("--seed", sim_cfg.seed, "base seed");
  sim->add_option("--reps", sim_cfg.replications, "replications");
  sim->add_option("--horizon", sim_cfg.horizon, "steps per replication (beta = 1)");
  sim->add_option("--burn-in", sim_cfg.burn_in, "discarded steps (beta = 1)");
  sim->add_option("--discount-tol", sim_cfg.discount_truncation_tol, "truncate once beta^t < tol (beta < 1)");
  sim->add_option("--threads", sim_cfg.threads, "worker threads (0: all cores); does not affect results");
  add_output_flags(sim);

  // validate
  std::string suite = "all";
  auto* validate = app.add_subcommand("validate", "run a validation suite");
  validate->add_option("--suite", suite, "tableI, closed_forms, scaling, renewal, dp, baselines or all")
      ->check(CLI::IsMember({"tableI", "closed_forms", "scaling", "renewal", "dp", "baselines", "all"}));
  add_output_flags(validate);

  try {
    std::vector<std::string> args = expand_flag_files(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kSuccess : kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*table) {
      emit(cmd_table(table_p, table_betas, table_kmax), format, out_path);
    } else if (*curve) {
      curve_spec.model = curve_model[0];
      curve_opts.kind = parse_kind(curve_kind);
      if (grid_points > 0) {
        if (grid_points == 1) {
          curve_opts.abscissas.push_back(grid_from);
        } else {
          for (int i = 0; i < grid_points; ++i)
            curve_opts.abscissas.push_back(grid_from + (grid_to - grid_from) * i / (grid_points - 1));
        }
      }
      emit(cmd_curve(curve_spec, curve_opts), format, out_path);
    } else if (*solve) {
      solve_spec.model = solve_model[0];
      const CurveKind problem = parse_kind(solve_problem);
      const auto& value = problem == CurveKind::costly ? solve_lambda : solve_alpha;
      if (!value) throw std::invalid_argument(problem == CurveKind::costly ? "--lambda is required" : "--alpha is required");
      emit(cmd_solve(solve_spec, problem, *value, solve_eps), format, out_path);
    } else if (*sim) {
      sim_spec.model = sim_model[0];
      if (k_opt->count()) sim_policy.k = sim_k;
      if (theta_opt->count()) sim_policy.theta = sim_theta;
      if (alpha_opt->count()) sim_policy.alpha = sim_alpha;
      if (period_opt->count()) sim_policy.period = sim_period;
      emit(cmd_simulate(sim_spec, sim_policy, sim_cfg), format, out_path);
    } else if (*validate) {
      const auto [rec, ok] = cmd_validate(suite);
      emit(rec, format, out_path);
      if (!ok) {
        std::cerr << "validation failed: " << rec.metadata.back().second << " check(s)\n";
        return kValidation;
      }
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const remest::Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kSuccess;
}

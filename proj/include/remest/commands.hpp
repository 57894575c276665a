#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "remest/birth_death.hpp"
#include "remest/core_model.hpp"
#include "remest/dp_oracle.hpp"
#include "remest/errors.hpp"
#include "remest/output.hpp"
#include "remest/reference_values.hpp"
#include "remest/sim.hpp"
#include "remest/solver_a.hpp"
#include "remest/solver_b.hpp"

// Command implementations behind the remest executable. Each returns an
// OutputRecord; argument errors throw std::invalid_argument and numerical
// failures throw remest::Error.

namespace remest::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kNumerical = 2, kValidation = 3 };

struct SpecOptions {
  char model = 'A';
  double beta = 1.0;
  double a = 1.0;
  double p = 0.3;
  double sigma = 1.0;
  std::string distortion;  // empty: abs for A, quad for B
};

inline std::string distortion_name(const SpecOptions& o) {
  if (!o.distortion.empty()) return o.distortion;
  return o.model == 'A' ? "abs" : "quad";
}

inline DistortionFn make_distortion(const SpecOptions& o) {
  const std::string name = distortion_name(o);
  if (name == "abs") return DistortionFn::absolute();
  if (name == "quad") return DistortionFn::quadratic();
  throw std::invalid_argument("distortion must be abs or quad");
}

inline ModelSpecA make_spec_a(const SpecOptions& o) {
  if (o.a != std::round(o.a)) throw std::invalid_argument("model A needs an integer --a");
  if (!(o.p > 0.0 && o.p < 0.5)) throw std::invalid_argument("--p must lie in (0, 1/2)");
  return ModelSpecA{static_cast<long>(o.a), IntegerPmf::birth_death(o.p), make_distortion(o), DiscountFactor(o.beta)};
}

inline ModelSpecB make_spec_b(const SpecOptions& o) {
  return ModelSpecB{o.a, SmoothPdf::gaussian(o.sigma), make_distortion(o), DiscountFactor(o.beta)};
}

inline std::string spec_string(const SpecOptions& o) {
  std::string s = std::string("model=") + o.model + ";a=" + format_full(o.a) + ";beta=" + format_full(o.beta);
  s += o.model == 'A' ? ";pmf=birth_death(" + format_full(o.p) + ")" : ";pdf=gaussian(" + format_full(o.sigma) + ")";
  s += ";distortion=" + distortion_name(o);
  return s;
}

inline void add_spec_metadata(OutputRecord& rec, const SpecOptions& o) {
  rec.add_metadata("spec", spec_string(o));
  rec.add_metadata("spec_hash", fnv1a_hex(spec_string(o)));
}

inline Cell opt_cell(const std::optional<double>& v) { return v ? Cell(*v) : Cell(NoValue{}); }

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

/// D^(k), N^(k), lambda^(k) for the birth-death chain, k = 0..k_max, per beta.
inline OutputRecord cmd_table(double p, const std::vector<double>& betas, long k_max) {
  if (!(p > 0.0 && p < 1.0 / 3.0)) throw std::invalid_argument("--p must lie in (0, 1/3)");
  if (k_max < 0) throw std::invalid_argument("--k-max must be >= 0");
  if (betas.empty()) throw std::invalid_argument("at least one --beta is required");
  OutputRecord rec;
  rec.command = "table";
  rec.columns = {"beta", "k", "D", "N", "lambda"};
  rec.add_metadata("p", format_full(p));
  rec.add_metadata("k_max", std::to_string(k_max));
  for (double b : betas) {
    const auto spec = birth_death_spec(p, b);
    ThresholdFamilyA family(spec);
    std::vector<std::optional<double>> lam(static_cast<std::size_t>(k_max + 1));
    if (k_max >= 1)
      for (const auto& c : detail::corner_lambdas(family, k_max)) lam[static_cast<std::size_t>(c.k)] = c.lambda;
    for (long k = 0; k <= k_max; ++k) {
      const auto& pt = k == 0 ? performance(spec, 0L) : family.at(k);
      rec.add_row({b, k, pt.distortion, pt.transmission_rate, opt_cell(lam[static_cast<std::size_t>(k)])});
    }
  }
  return rec;
}

// ---------------------------------------------------------------------------
// curve
// ---------------------------------------------------------------------------

struct CurveOptions {
  CurveKind kind = CurveKind::constrained;
  long k_max = 10;                 // model A
  std::vector<double> abscissas;   // model B
  double epsilon = 1e-6;           // model B
};

inline OutputRecord curve_record(const TradeoffCurve& curve) {
  OutputRecord rec;
  rec.command = "curve";
  if (curve.kind == CurveKind::costly)
    rec.columns = {"lambda", "cost", "k"};
  else
    rec.columns = {"alpha", "distortion", "k"};
  for (const auto& pt : curve.points) {
    const double k = pt.policy.k;
    Cell kc = k == std::round(k) && std::abs(k) < 1e15 ? Cell(static_cast<long>(k)) : Cell(k);
    rec.add_row({pt.abscissa, pt.ordinate, kc});
  }
  return rec;
}

inline OutputRecord cmd_curve(const SpecOptions& so, const CurveOptions& co) {
  TradeoffCurve curve;
  if (so.model == 'A') {
    curve = tradeoff_curve(make_spec_a(so), co.kind, co.k_max);
    // Constrained points are stored with decreasing k, i.e. increasing alpha.
  } else {
    if (co.abscissas.empty()) throw std::invalid_argument("model B curves need an abscissa grid (--grid)");
    curve = tradeoff_curve_b(make_spec_b(so), co.kind, co.abscissas, co.epsilon);
  }
  OutputRecord rec = curve_record(curve);
  add_spec_metadata(rec, so);
  rec.add_metadata("kind", to_string(co.kind));
  rec.add_metadata("shape", curve.shape == CurveShape::piecewise_linear ? "piecewise_linear" : "sampled");
  if (so.model == 'B') rec.add_metadata("epsilon", format_full(co.epsilon));
  const auto bad = curve.violations();
  rec.add_metadata("shape_check", bad.empty() ? "ok" : bad.front());
  return rec;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

inline OutputRecord cmd_solve(const SpecOptions& so, CurveKind problem, double value, double epsilon) {
  OutputRecord rec;
  rec.command = "solve";
  rec.columns = {"problem", "value", "k", "theta", "boundary_probability", "D", "N", "C"};
  add_spec_metadata(rec, so);
  const std::string name = to_string(problem);
  if (so.model == 'A') {
    const auto spec = make_spec_a(so);
    if (problem == CurveKind::costly) {
      const auto s = optimal_costly(spec, value);
      rec.add_row({name, value, s.k_star, NoValue{}, NoValue{}, s.perf.distortion, s.perf.transmission_rate, s.cost});
    } else {
      const auto s = optimal_constrained(spec, value);
      rec.add_row({name, value, s.policy.k_star(), s.policy.theta_star(), s.boundary_probability, s.d_star,
                   s.achieved_rate, NoValue{}});
    }
  } else {
    const auto spec = make_spec_b(so);
    rec.add_metadata("epsilon", format_full(epsilon));
    if (problem == CurveKind::costly) {
      const auto s = algorithm1_costly(spec, value, epsilon);
      rec.add_row({name, value, s.k_circ, NoValue{}, NoValue{}, s.perf.distortion, s.perf.transmission_rate, s.value});
    } else {
      const auto s = algorithm2_constrained(spec, value, epsilon);
      rec.add_row(
          {name, value, s.k_circ, NoValue{}, NoValue{}, s.perf.distortion, s.perf.transmission_rate, NoValue{}});
    }
  }
  return rec;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct PolicyOptions {
  std::string kind = "threshold";  // threshold | randomized | periodic | iid | steering | time-sharing
  std::optional<double> k;
  std::optional<double> theta;
  std::optional<double> alpha;
  std::optional<long> period;
  std::string family = "one_in_T";
  int depth = 4;
};

inline PeriodicFamily parse_family(const std::string& s) {
  if (s == "one_in_T") return PeriodicFamily::one_in_T;
  if (s == "all_but_one") return PeriodicFamily::all_but_one;
  throw std::invalid_argument("--family must be one_in_T or all_but_one");
}

inline long integer_k(double k) {
  if (k != std::round(k) || k < 0) throw std::invalid_argument("--k must be a nonnegative integer for this policy");
  return static_cast<long>(k);
}

/// Builds the policy; boundary policies may be derived from --alpha on model A.
inline std::pair<PolicySpec, std::string> make_policy(const SpecOptions& so, const PolicyOptions& po) {
  auto need = [](const auto& v, const char* flag) {
    if (!v) throw std::invalid_argument(std::string("this policy needs ") + flag);
    return *v;
  };
  const std::string& kind = po.kind;
  if (kind == "threshold") {
    const double k = need(po.k, "--k");
    return {policy::Threshold{k}, "threshold(k=" + format_full(k) + ")"};
  }
  if (kind == "iid") {
    const double a = need(po.alpha, "--alpha");
    return {policy::IidRandom{a}, "iid_random(alpha=" + format_full(a) + ")"};
  }
  if (kind == "periodic") {
    const auto fam = parse_family(po.family);
    policy::Periodic pat = po.period ? (fam == PeriodicFamily::one_in_T ? policy::Periodic::one_in(*po.period)
                                                                        : policy::Periodic::all_but_one(*po.period))
                                     : periodic_pattern(need(po.alpha, "--alpha or --period"), fam);
    const std::string desc = "periodic(" + po.family + ",T=" + std::to_string(pat.period) + ")";
    return {std::move(pat), desc};
  }
  if (kind == "randomized" || kind == "steering" || kind == "time-sharing") {
    long k;
    double theta;
    std::vector<std::pair<long, long>> schedule;
    if (po.alpha && !po.k) {
      if (so.model != 'A') throw std::invalid_argument("deriving a boundary policy from --alpha needs model A");
      const auto spec = make_spec_a(so);
      const auto sol = optimal_constrained(spec, *po.alpha);
      k = sol.policy.k_star();
      if (kind == "time-sharing") {
        theta = sol.policy.theta_star();
        schedule = time_sharing_schedule(*po.alpha, performance(spec, k).transmission_rate,
                                         performance(spec, k + 1).transmission_rate, theta, po.depth);
      } else {
        theta = sol.boundary_probability;
      }
    } else {
      k = integer_k(need(po.k, "--k (or --alpha)"));
      theta = need(po.theta, "--theta");
      if (kind == "time-sharing") {
        if (!po.alpha) throw std::invalid_argument("time-sharing with explicit --k needs --alpha");
        if (so.model != 'A') throw std::invalid_argument("time-sharing rates need model A");
        const auto spec = make_spec_a(so);
        schedule = time_sharing_schedule(*po.alpha, performance(spec, k).transmission_rate,
                                         performance(spec, k + 1).transmission_rate, theta, po.depth);
      }
    }
    if (kind == "randomized")
      return {policy::RandomizedThreshold{k, theta},
              "randomized(k=" + std::to_string(k) + ",q=" + format_full(theta) + ")"};
    if (kind == "steering")
      return {policy::Steering{k, theta}, "steering(k=" + std::to_string(k) + ",q=" + format_full(theta) + ")"};
    std::string desc = "time_sharing(k=" + std::to_string(k) + ",schedule=";
    for (auto [a, b] : schedule) desc += "(" + std::to_string(a) + ":" + std::to_string(b) + ")";
    return {policy::TimeSharing{k, schedule}, desc + ")"};
  }
  throw std::invalid_argument("unknown --policy " + kind);
}

inline OutputRecord simulation_record(const SimResult& r) {
  OutputRecord rec;
  rec.command = "simulate";
  rec.columns = {"d_hat", "d_se", "n_hat", "n_se", "replications", "steps", "seed"};
  rec.add_row({r.d_hat, r.d_se, r.n_hat, r.n_se, r.replications_used, r.steps_per_replication,
               std::to_string(r.seed)});
  return rec;
}

/// Output does not depend on cfg.threads.
inline OutputRecord cmd_simulate(const SpecOptions& so, const PolicyOptions& po, const SimConfig& cfg) {
  const auto [pol, desc] = make_policy(so, po);
  const SimResult r = so.model == 'A' ? simulate(make_spec_a(so), pol, cfg) : simulate(make_spec_b(so), pol, cfg);
  OutputRecord rec = simulation_record(r);
  add_spec_metadata(rec, so);
  rec.add_metadata("policy", desc);
  rec.add_metadata("seed", std::to_string(cfg.seed));
  rec.add_metadata("horizon", std::to_string(cfg.horizon));
  rec.add_metadata("burn_in", std::to_string(cfg.burn_in));
  rec.add_metadata("discount_truncation_tol", format_full(cfg.discount_truncation_tol));
  rec.add_metadata("streams", r.stream_id);
  return rec;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

struct Check {
  std::string suite;
  std::string name;
  std::string claim;
  bool passed;
  double observed;
  double expected;
  double tolerance;
};

namespace detail {

inline Check close_check(std::string suite, std::string name, std::string claim, double observed, double expected,
                         double tol) {
  const bool ok = std::abs(observed - expected) <= tol;
  return {std::move(suite), std::move(name), std::move(claim), ok, observed, expected, tol};
}

inline Check bool_check(std::string suite, std::string name, std::string claim, bool ok) {
  return {std::move(suite), std::move(name), std::move(claim), ok, ok ? 1.0 : 0.0, 1.0, 0.0};
}

inline void suite_table(std::vector<Check>& out) {
  const std::string suite = "tableI";
  const std::string claim = "published birth-death table (p=0.3), 4-decimal rounding";
  for (const auto& t : reference::birth_death_tables()) {
    const auto rec = cmd_table(reference::kBirthDeathP, {t.beta}, 10);
    for (const auto& row : t.rows) {
      const auto& cells = rec.rows[static_cast<std::size_t>(row.k)];
      const std::string tag = "beta=" + format_display(t.beta) + " k=" + std::to_string(row.k);
      out.push_back(close_check(suite, tag + " D", claim, std::get<double>(cells[2]), row.D, reference::kTableTolerance));
      out.push_back(close_check(suite, tag + " N", claim, std::get<double>(cells[3]), row.N, reference::kTableTolerance));
      if (std::isnan(row.lambda)) {
        out.push_back(bool_check(suite, tag + " lambda", claim + " (dash at k=0)",
                                 std::holds_alternative<NoValue>(cells[4])));
      } else {
        const double lam = std::holds_alternative<double>(cells[4]) ? std::get<double>(cells[4])
                                                                 : std::numeric_limits<double>::quiet_NaN();
        out.push_back(close_check(suite, tag + " lambda", claim, lam, row.lambda, reference::kTableTolerance));
      }
    }
  }
}

inline void suite_closed_forms(std::vector<Check>& out) {
  const std::string suite = "closed_forms";
  for (double p : {0.1, 0.2, 0.3}) {
    for (double b : {0.9, 0.95, 1.0}) {
      const auto spec = birth_death_spec(p, b);
      double worst = 0.0;
      for (long k = 1; k <= 10; ++k) {
        const auto lin = performance(spec, k);
        const auto cf = bd_closed_form(p, DiscountFactor(b), k);
        worst = std::max({worst, std::abs(lin.distortion - cf.distortion),
                          std::abs(lin.transmission_rate - cf.transmission_rate)});
      }
      out.push_back(close_check(suite, "p=" + format_display(p) + " beta=" + format_display(b) + " D,N k=1..10",
                                "hyperbolic/polynomial closed forms equal the linear solve", worst, 0.0, 1e-9));

      double worst_q = 0.0;
      for (long k : {2L, 5L, 9L}) {
        const auto sys = build_silent_system(spec, k);
        const long n = sys.dimension();
        const Eigen::MatrixXd Q =
            (Eigen::MatrixXd::Identity(n, n) - b * sys.transition).inverse();
        for (long i = -(k - 1); i <= k - 1; ++i)
          for (long j = -(k - 1); j <= k - 1; ++j)
            worst_q = std::max(worst_q, std::abs(Q(sys.index_of(i), sys.index_of(j)) -
                                                 bd_q_entry(p, DiscountFactor(b), k, i, j)));
      }
      out.push_back(close_check(suite, "p=" + format_display(p) + " beta=" + format_display(b) + " Q entries",
                                "closed-form inverse of I - beta P equals direct inversion", worst_q, 0.0, 1e-9));
    }
  }
  {
    const auto spec = birth_death_spec(0.3, 1.0);
    double worst = 0.0;
    for (const auto& c : corner_lambdas(spec, 10))
      worst = std::max(worst, std::abs(c.lambda - bd_lambda_average(0.3, c.k)));
    out.push_back(close_check(suite, "p=0.3 beta=1 lambda^(k) k=1..10",
                              "average-cost corner prices k(k+1)(k^2+k+1)/(6p(2k+1))", worst, 0.0, 1e-9));
  }
}

inline void suite_scaling(std::vector<Check>& out) {
  const std::string suite = "scaling";
  const double tol = 2.0 * FredholmOptions{}.tolerance;
  const double eps = 1e-6;
  const auto base = gauss_markov_spec(1.0, 1.0);
  for (double alpha : {0.2, 0.5}) {
    const auto s1 = algorithm2_constrained(base, alpha, eps);
    for (double sigma : {0.5, 2.0}) {
      const auto ss = algorithm2_constrained(gauss_markov_spec(sigma, 1.0), alpha, eps);
      const std::string tag = "sigma=" + format_display(sigma) + " alpha=" + format_display(alpha);
      out.push_back(close_check(suite, tag + " k*", "k*_sigma(alpha) = sigma k*_1(alpha)", ss.k_circ,
                                sigma * s1.k_circ, tol * std::max(1.0, sigma * s1.k_circ)));
      out.push_back(close_check(suite, tag + " D*", "D*_sigma(alpha) = sigma^2 D*_1(alpha)", ss.value,
                                sigma * sigma * s1.value, tol * std::max(1.0, sigma * sigma * s1.value)));
    }
  }
  for (double lambda : {0.5, 2.0}) {
    for (double sigma : {0.5, 2.0}) {
      const double s2 = sigma * sigma;
      const auto s1 = algorithm1_costly(base, lambda / s2, eps);
      const auto ss = algorithm1_costly(gauss_markov_spec(sigma, 1.0), lambda, eps * s2);
      const std::string tag = "sigma=" + format_display(sigma) + " lambda=" + format_display(lambda);
      out.push_back(close_check(suite, tag + " C*", "C*_sigma(lambda) = sigma^2 C*_1(lambda/sigma^2)", ss.value,
                                s2 * s1.value, tol * std::max(1.0, s2 * s1.value)));
    }
  }
}

inline void suite_renewal(std::vector<Check>& out) {
  const std::string suite = "renewal";
  const std::string claim = "D = L(0)/M(0), N = 1/M(0) - (1-beta) match simulation within 3 se";
  SimConfig cfg;
  cfg.horizon = 20000;
  cfg.replications = 50;
  cfg.seed = 7;
  const auto bd = birth_death_spec(0.3, 1.0);
  for (long k : {2L, 3L}) {
    const auto an = performance(bd, k);
    const auto r = simulate(bd, policy::Threshold{static_cast<double>(k)}, cfg);
    const std::string tag = "birth-death beta=1 k=" + std::to_string(k);
    out.push_back(close_check(suite, tag + " D", claim, r.d_hat, an.distortion, 3.0 * r.d_se));
    out.push_back(close_check(suite, tag + " N", claim, r.n_hat, an.transmission_rate, 3.0 * r.n_se));
  }
  const auto bd9 = birth_death_spec(0.3, 0.9);
  {
    const auto an = performance(bd9, 3L);
    SimConfig c9 = cfg;
    c9.replications = 4000;
    const auto r = simulate(bd9, policy::Threshold{3.0}, c9);
    out.push_back(close_check(suite, "birth-death beta=0.9 k=3 D", claim, r.d_hat, an.distortion, 3.0 * r.d_se));
    out.push_back(close_check(suite, "birth-death beta=0.9 k=3 N", claim, r.n_hat, an.transmission_rate, 3.0 * r.n_se));
  }
  const auto gm = gauss_markov_spec(1.0, 1.0);
  {
    const auto an = performance_b(gm, 1.0);
    const auto r = simulate(gm, policy::Threshold{1.0}, cfg);
    out.push_back(close_check(suite, "gauss-markov beta=1 k=1 D", claim, r.d_hat, an.distortion, 3.0 * r.d_se));
    out.push_back(close_check(suite, "gauss-markov beta=1 k=1 N", claim, r.n_hat, an.transmission_rate, 3.0 * r.n_se));
  }
  for (double b : {0.5, 0.9, 1.0}) {
    const auto spec = birth_death_spec(0.3, b);
    out.push_back(close_check(suite, "beta=" + format_display(b) + " N^(1)", "N^(1) = beta (1 - p_0)",
                              performance(spec, 1L).transmission_rate, b * (1.0 - 0.4), 1e-12));
  }
}

inline void suite_dp(std::vector<Check>& out) {
  const std::string suite = "dp";
  const auto spec = birth_death_spec(0.3, 0.9);
  for (double lambda : {2.0, 10.0, 20.0, 40.0}) {
    const auto dp = value_iterate(spec, lambda, 1e-9);
    const long k_solver = optimal_costly(spec, lambda).k_star;
    const std::string tag = "lambda=" + format_display(lambda);
    out.push_back(bool_check(suite, tag + " threshold structure", "greedy DP policy is a symmetric threshold rule",
                             dp.threshold.has_value()));
    out.push_back(close_check(suite, tag + " k", "value-iteration k equals the corner-interval k",
                              dp.threshold ? static_cast<double>(*dp.threshold) : -1.0,
                              static_cast<double>(k_solver), 0.0));
    out.push_back(bool_check(suite, tag + " value shape", "value function even and nondecreasing on e >= 0",
                             dp.even && dp.monotone));
  }
  const double tol = 1e-10;
  for (double b : {0.9, 0.95}) {
    const auto s = birth_death_spec(0.3, b);
    double worst = 0.0;
    for (long k = 1; k <= 6; ++k) {
      const auto fp = policy_evaluate_fixed_point(s, k, k + s.pmf.support_radius(), tol);
      const auto an = performance(s, k);
      worst = std::max({worst, std::abs(fp.distortion - an.distortion),
                        std::abs(fp.transmission_rate - an.transmission_rate)});
    }
    out.push_back(close_check(suite, "beta=" + format_display(b) + " fixed point k=1..6",
                              "policy-evaluation fixed point equals renewal (D, N)", worst, 0.0, 10.0 * tol));
  }
}

inline void suite_baselines(std::vector<Check>& out) {
  const std::string suite = "baselines";
  const auto gm = gauss_markov_spec(1.0, 1.0);
  SimConfig cfg;
  cfg.horizon = 20000;
  cfg.replications = 50;
  cfg.seed = 11;
  for (double alpha : {0.25, 0.5}) {
    const auto r = simulate(gm, policy::IidRandom{alpha}, cfg);
    out.push_back(close_check(suite, "iid alpha=" + format_display(alpha), "D_rand = sigma^2 (1/alpha - 1)", r.d_hat,
                              1.0 / alpha - 1.0, 3.0 * r.d_se));
    const auto rp = simulate(gm, periodic_pattern(alpha, PeriodicFamily::one_in_T), cfg);
    out.push_back(close_check(suite, "periodic one_in_T alpha=" + format_display(alpha),
                              "D_per = (sigma^2/2)(1/alpha - 1)", rp.d_hat,
                              periodic_distortion(alpha, 1.0, PeriodicFamily::one_in_T), 3.0 * rp.d_se + 1e-12));
  }
  for (double alpha : {0.5, 0.75}) {
    const auto rp = simulate(gm, periodic_pattern(alpha, PeriodicFamily::all_but_one), cfg);
    out.push_back(close_check(suite, "periodic all_but_one alpha=" + format_display(alpha),
                              "D_per = sigma^2 (1 - alpha)", rp.d_hat,
                              periodic_distortion(alpha, 1.0, PeriodicFamily::all_but_one), 3.0 * rp.d_se + 1e-12));
  }
  const double alpha = 0.2;
  out.push_back(close_check(suite, "stopping-time geometric", "(sigma^2/2)[E tau^2/E tau - 1] at geometric tau",
                            stationary_stopping_distortion(1.0 / alpha, 2.0 / (alpha * alpha) - 1.0 / alpha, 1.0),
                            1.0 / alpha - 1.0, 1e-12));
  out.push_back(close_check(suite, "stopping-time deterministic", "(sigma^2/2)[E tau^2/E tau - 1] at tau = T",
                            stationary_stopping_distortion(5.0, 25.0, 1.0), 2.0, 1e-12));
}

}  // namespace detail

inline const std::vector<std::string>& validation_suites() {
  static const std::vector<std::string> names{"tableI", "closed_forms", "scaling", "renewal", "dp", "baselines"};
  return names;
}

inline std::vector<Check> run_validation(const std::string& suite) {
  std::vector<Check> out;
  const std::vector<std::pair<std::string, std::function<void(std::vector<Check>&)>>> suites{
      {"tableI", detail::suite_table},   {"closed_forms", detail::suite_closed_forms},
      {"scaling", detail::suite_scaling}, {"renewal", detail::suite_renewal},
      {"dp", detail::suite_dp},           {"baselines", detail::suite_baselines}};
  bool found = false;
  for (const auto& [name, fn] : suites) {
    if (suite == "all" || suite == name) {
      fn(out);
      found = true;
    }
  }
  if (!found) throw std::invalid_argument("unknown suite " + suite);
  return out;
}

/// Report rows plus overall pass flag.
inline std::pair<OutputRecord, bool> cmd_validate(const std::string& suite) {
  const auto checks = run_validation(suite);
  OutputRecord rec;
  rec.command = "validate";
  rec.columns = {"suite", "check", "status", "observed", "expected", "tolerance", "claim"};
  bool all = true;
  long failed = 0;
  for (const auto& c : checks) {
    all = all && c.passed;
    failed += c.passed ? 0 : 1;
    rec.add_row({c.suite, c.name, std::string(c.passed ? "PASS" : "FAIL"), c.observed, c.expected, c.tolerance,
                 c.claim});
  }
  rec.add_metadata("suite", suite);
  rec.add_metadata("checks", std::to_string(checks.size()));
  rec.add_metadata("failed", std::to_string(failed));
  return {rec, all};
}

}  // namespace remest::cli

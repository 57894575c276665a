#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "remest/core_model.hpp"
#include "remest/errors.hpp"
#include "remest/fredholm.hpp"
#include "remest/solver_a.hpp"

namespace remest {

/// L^(k)(0), M^(k)(0) for a real-valued instance plus the node count used.
struct LMAtZero {
  double L0;
  double M0;
  int nodes;
};

inline Kernel transition_kernel(const ModelSpecB& spec) {
  const SmoothPdf pdf = spec.pdf;
  const double a = spec.a;
  return [pdf, a](double e, double n) { return pdf(n - a * e); };
}

/// Both Fredholm equations (rhs d and rhs 1) on (-k, k).
inline std::vector<FredholmSolution> solve_lm_b(const ModelSpecB& spec, double k, const FredholmOptions& opts = {}) {
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("threshold must be positive and finite");
  const DistortionFn d = spec.distortion;
  return fredholm_solve_many(transition_kernel(spec), {[d](double e) { return d(e); }, [](double) { return 1.0; }},
                             k, spec.beta, opts);
}

inline LMAtZero lm_at_zero_b(const ModelSpecB& spec, double k, const FredholmOptions& opts = {}) {
  const auto sols = solve_lm_b(spec, k, opts);
  return {sols[0](0.0), sols[1](0.0), static_cast<int>(sols[0].order())};
}

namespace detail {

inline double never_transmit_distortion_b(const ModelSpecB& spec) {
  if (!is_gauss_markov(spec))
    throw std::invalid_argument("never-transmit performance is only available for the Gauss-Markov instance");
  const double s2 = spec.pdf.sigma() * spec.pdf.sigma();
  const double a2 = spec.a * spec.a;
  const double beta = spec.beta.value();
  if (spec.beta.is_average()) {
    if (a2 >= 1.0) throw DivergenceError("never-transmit distortion diverges for beta = 1 and |a| >= 1");
    return s2 / (1.0 - a2);
  }
  // Var X_t = s2 (1 + a^2 + ... + a^{2(t-1)}); sum (1-beta) beta^t Var X_t.
  if (beta * a2 >= 1.0) throw DivergenceError("never-transmit distortion diverges for beta a^2 >= 1");
  return s2 * beta / (1.0 - beta * a2);
}

}  // namespace detail

/// Renewal performance of f^(k) for a real-valued instance. k = 0 and k = +inf are handled exactly.
inline PerfPoint performance_b(const ModelSpecB& spec, double k, std::optional<double> lambda = std::nullopt,
                               const FredholmOptions& opts = {}) {
  if (std::isnan(k) || k < 0.0) throw std::invalid_argument("threshold must be nonnegative");
  if (k == 0.0) {
    PerfPoint out{0.0, 1.0, std::nullopt, std::nullopt, Provenance::analytic};
    return lambda ? out.with_cost(*lambda) : out;
  }
  if (std::isinf(k)) {
    PerfPoint out{detail::never_transmit_distortion_b(spec), 0.0, std::nullopt, std::nullopt, Provenance::analytic};
    return lambda ? out.with_cost(*lambda) : out;
  }
  const auto lm = lm_at_zero_b(spec, k, opts);
  return renewal_performance(lm.L0, lm.M0, spec.beta.value(), lambda);
}

struct KDerivatives {
  double dD_dk;
  double dN_dk;
};

/// Default finite-difference step max(1e-3, 1e-2 k), capped at k/2 so k - h stays positive.
inline double default_fd_step(double k) { return std::min(std::max(1e-3, 1e-2 * k), 0.5 * k); }

/**
 * dD/dk and dN/dk by central differences with one Richardson level.
 *
 * The node count is fixed at the value converged for k so the four
 * evaluations share one discretization and the difference is smooth.
 */
inline KDerivatives dk_derivatives(const ModelSpecB& spec, double k, std::optional<double> step = std::nullopt,
                                   const FredholmOptions& opts = {}) {
  const double h = step.value_or(default_fd_step(k));
  if (!(h > 0.0) || !(k - h > 0.0)) throw std::invalid_argument("finite-difference step must satisfy 0 < h < k");
  if (opts.tolerance / h > 1e-4)
    throw StepSizeError("finite-difference step is too small for the quadrature tolerance");

  FredholmOptions fixed = opts;
  fixed.fixed_nodes = lm_at_zero_b(spec, k, opts).nodes;
  auto at = [&](double kk) { return performance_b(spec, kk, std::nullopt, fixed); };
  const auto p1 = at(k + h), m1 = at(k - h), p2 = at(k + h / 2), m2 = at(k - h / 2);
  const double dD_h = (p1.distortion - m1.distortion) / (2.0 * h);
  const double dD_h2 = (p2.distortion - m2.distortion) / h;
  const double dN_h = (p1.transmission_rate - m1.transmission_rate) / (2.0 * h);
  const double dN_h2 = (p2.transmission_rate - m2.transmission_rate) / h;
  return {(4.0 * dD_h2 - dD_h) / 3.0, (4.0 * dN_h2 - dN_h) / 3.0};
}

/// lambda(k) = -dD/dk / dN/dk: the price at which f^(k) is optimal.
inline double lambda_of_k(const ModelSpecB& spec, double k, const FredholmOptions& opts = {}) {
  const auto d = dk_derivatives(spec, k, std::nullopt, opts);
  if (!(d.dN_dk < 0.0))
    throw ConsistencyError("dN/dk is not negative at k=" + std::to_string(k));
  return -d.dD_dk / d.dN_dk;
}

namespace detail {

inline double seed_threshold(const ModelSpecB& spec) { return spec.pdf.scale() * std::max(1.0, std::abs(spec.a)); }

inline constexpr int kMaxBracketSteps = 60;
inline constexpr int kMaxBisections = 200;

}  // namespace detail

struct ThresholdSolutionB {
  double k_circ;
  double value;  // C*(lambda) for the costly problem, D*(alpha) for the constrained one
  PerfPoint perf;
};

/// Costly problem: bisection on k until |lambda(k) - lambda| <= epsilon.
inline ThresholdSolutionB algorithm1_costly(const ModelSpecB& spec, double lambda, double epsilon,
                                            const FredholmOptions& opts = {}) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  auto lam = [&](double k) { return lambda_of_k(spec, k, opts); };

  double lo = detail::seed_threshold(spec), hi = lo;
  int steps = 0;
  while (lam(lo) >= lambda) {
    lo /= 2.0;
    if (++steps > detail::kMaxBracketSteps) throw BracketError("could not find k with lambda(k) < lambda");
  }
  steps = 0;
  while (lam(hi) <= lambda) {
    hi *= 2.0;
    if (++steps > detail::kMaxBracketSteps) throw BracketError("could not find k with lambda(k) > lambda");
  }
  double k = 0.5 * (lo + hi);
  double value = lam(k);
  for (int it = 0; std::abs(value - lambda) > epsilon; ++it) {
    if (it >= detail::kMaxBisections) throw ConvergenceError("costly-problem bisection did not reach epsilon");
    (value < lambda ? lo : hi) = k;
    k = 0.5 * (lo + hi);
    value = lam(k);
  }
  const auto perf = performance_b(spec, k, lambda, opts);
  return {k, *perf.cost, perf};
}

/// Constrained problem: bisection on k until |N(k) - alpha| <= epsilon; D*(alpha) = D(k).
inline ThresholdSolutionB algorithm2_constrained(const ModelSpecB& spec, double alpha, double epsilon,
                                                 const FredholmOptions& opts = {}) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  auto rate = [&](double k) { return performance_b(spec, k, std::nullopt, opts).transmission_rate; };

  // N is decreasing in k: `small` has N > alpha, `large` has N < alpha.
  double small = detail::seed_threshold(spec), large = small;
  int steps = 0;
  while (rate(small) <= alpha) {
    small /= 2.0;
    if (++steps > detail::kMaxBracketSteps) throw BracketError("could not find k with N(k) > alpha");
  }
  steps = 0;
  while (rate(large) >= alpha) {
    large *= 2.0;
    if (++steps > detail::kMaxBracketSteps) throw BracketError("could not find k with N(k) < alpha");
  }
  double k = 0.5 * (small + large);
  auto perf = performance_b(spec, k, std::nullopt, opts);
  for (int it = 0; std::abs(perf.transmission_rate - alpha) > epsilon; ++it) {
    if (it >= detail::kMaxBisections) throw ConvergenceError("constrained-problem bisection did not reach epsilon");
    (perf.transmission_rate < alpha ? large : small) = k;
    k = 0.5 * (small + large);
    perf = performance_b(spec, k, std::nullopt, opts);
  }
  return {k, perf.distortion, perf};
}

/// Sampled C*(lambda) or D*(alpha) at the given abscissas, each solved to epsilon.
inline TradeoffCurve tradeoff_curve_b(const ModelSpecB& spec, CurveKind kind, std::vector<double> abscissas,
                                      double epsilon, const FredholmOptions& opts = {}) {
  std::sort(abscissas.begin(), abscissas.end());
  abscissas.erase(std::unique(abscissas.begin(), abscissas.end()), abscissas.end());
  TradeoffCurve curve;
  curve.kind = kind;
  curve.shape = CurveShape::sampled;
  if (is_gauss_markov(spec)) curve.origin = CurveOrigin{true, spec.pdf.sigma(), spec.a, spec.beta.value()};
  for (double x : abscissas) {
    const auto sol = kind == CurveKind::costly ? algorithm1_costly(spec, x, epsilon, opts)
                                               : algorithm2_constrained(spec, x, epsilon, opts);
    curve.points.push_back({x, sol.value, {sol.k_circ, {}}});
  }
  return curve;
}

/**
 * Maps a curve computed for the unit-variance Gauss-Markov instance to
 * variance sigma^2: costly (lambda, c) -> (sigma^2 lambda, sigma^2 c),
 * constrained (alpha, d) -> (alpha, sigma^2 d); thresholds k -> sigma k.
 */
inline TradeoffCurve gauss_markov_rescale(const TradeoffCurve& base, double sigma, CurveKind kind) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be positive");
  if (!base.origin || !base.origin->gauss_markov || base.origin->sigma != 1.0)
    throw std::invalid_argument("rescaling needs a curve computed for the Gauss-Markov instance with sigma = 1");
  if (base.kind != kind) throw std::invalid_argument("curve kind mismatch");
  TradeoffCurve out = base;
  out.origin->sigma = sigma;
  const double s2 = sigma * sigma;
  for (auto& p : out.points) {
    if (kind == CurveKind::costly) p.abscissa *= s2;
    p.ordinate *= s2;
    p.policy.k *= sigma;
  }
  return out;
}

}  // namespace remest

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "remest/core_model.hpp"
#include "remest/errors.hpp"

namespace remest {

/// Largest admissible silent-set size 2k-1.
inline constexpr long kDefaultMaxDimension = 20001;

/**
 * Silent-set restriction of the error chain under f^(k).
 *
 * States are ordered e = -(k-1), ..., k-1; entry(e, n) = p_{n - a e}. Rows
 * are substochastic, the missing mass is the probability of transmitting
 * at the next step.
 */
struct SilentSystem {
  long k = 1;
  Eigen::MatrixXd transition;
  Eigen::VectorXd distortion;

  long dimension() const { return 2 * k - 1; }
  long index_of(long e) const { return e + (k - 1); }
  double entry(long e, long n) const { return transition(index_of(e), index_of(n)); }
};

/// L^(k) (distortion until first transmission) and M^(k) (time until first transmission) over S^(k).
struct LMVectors {
  long k = 1;
  Eigen::VectorXd L;
  Eigen::VectorXd M;

  double L_at(long e) const { return L(e + (k - 1)); }
  double M_at(long e) const { return M(e + (k - 1)); }
};

inline SilentSystem build_silent_system(const ModelSpecA& spec, long k, long max_dimension = kDefaultMaxDimension) {
  if (k < 1) throw std::invalid_argument("silent system needs k >= 1");
  const long n = 2 * k - 1;
  if (n > max_dimension)
    throw CapacityError("silent system dimension " + std::to_string(n) + " exceeds cap " +
                        std::to_string(max_dimension));
  SilentSystem sys;
  sys.k = k;
  sys.transition = Eigen::MatrixXd::Zero(n, n);
  sys.distortion.resize(n);
  for (long e = -(k - 1); e <= k - 1; ++e) {
    const long row = e + k - 1;
    sys.distortion(row) = spec.distortion(static_cast<double>(e));
    const long centre = spec.a * e;
    // Only offsets within the pmf support contribute.
    for (const auto& [w, p] : spec.pmf.probabilities()) {
      const long next = centre + w;
      if (next <= -k || next >= k) continue;
      sys.transition(row, next + k - 1) = p;
    }
  }
  return sys;
}

namespace detail {

inline Eigen::VectorXd refined_solve(const Eigen::MatrixXd& A, const Eigen::PartialPivLU<Eigen::MatrixXd>& lu,
                                     const Eigen::VectorXd& b) {
  Eigen::VectorXd x = lu.solve(b);
  const Eigen::VectorXd r = b - A * x;
  x += lu.solve(r);
  return x;
}

}  // namespace detail

/// Solves L = d + beta T L and M = 1 + beta T M by dense LU with one refinement step.
inline LMVectors solve_lm(const SilentSystem& system, DiscountFactor beta) {
  const long n = system.dimension();
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - beta.value() * system.transition;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  // The rcond estimate misses exact zero pivots, so check those directly.
  if (!(lu.rcond() >= 1e-13) || !(lu.matrixLU().diagonal().cwiseAbs().minCoeff() > 0.0))
    throw SingularSystemError("I - beta*P is singular for k=" + std::to_string(system.k) +
                              ": the silent set is absorbing");

  LMVectors out;
  out.k = system.k;
  out.L = detail::refined_solve(A, lu, system.distortion);
  out.M = detail::refined_solve(A, lu, Eigen::VectorXd::Ones(n));

  const double rl = (A * out.L - system.distortion).lpNorm<Eigen::Infinity>();
  const double rm = (A * out.M - Eigen::VectorXd::Ones(n)).lpNorm<Eigen::Infinity>();
  if (!(rl <= 1e-10 * (1.0 + out.L.lpNorm<Eigen::Infinity>())) ||
      !(rm <= 1e-10 * (1.0 + out.M.lpNorm<Eigen::Infinity>())))
    throw SingularSystemError("silent-system solve residual too large for k=" + std::to_string(system.k));
  return out;
}

/// Renewal relationships: D = L(0)/M(0), N = 1/M(0) - (1-beta).
inline PerfPoint renewal_performance(double L0, double M0, double beta, std::optional<double> lambda) {
  PerfPoint out;
  out.distortion = L0 / M0;
  out.transmission_rate = 1.0 / M0 - (1.0 - beta);
  out.provenance = Provenance::analytic;
  if (lambda) {
    out.lambda = *lambda;
    out.cost = (L0 + *lambda) / M0 - *lambda * (1.0 - beta);
  }
  return out;
}

namespace detail {

// Performance of the never-transmit policy (k = +inf).
inline double never_transmit_distortion_a(const ModelSpecA& spec) {
  const double beta = spec.beta.value();
  if (spec.a == 0) {
    // X_t = W_{t-1} for t >= 1.
    double ed = 0.0;
    for (const auto& [w, p] : spec.pmf.probabilities()) ed += p * spec.distortion(static_cast<double>(w));
    return spec.beta.is_average() ? ed : beta * ed;
  }
  if (spec.beta.is_average())
    throw DivergenceError("never-transmit distortion diverges for beta = 1 and |a| >= 1");
  // D^(k) increases to D^(inf) as k grows; N^(k) -> 0.
  double prev = -1.0;
  for (long k = 8; 2 * k - 1 <= kDefaultMaxDimension; k *= 2) {
    const auto lm = solve_lm(build_silent_system(spec, k), spec.beta);
    const double m0 = lm.M_at(0);
    const double d = lm.L_at(0) / m0;
    const double rate = 1.0 / m0 - (1.0 - beta);
    if (prev >= 0.0 && std::abs(d - prev) <= 1e-10 * (1.0 + d) && rate < 1e-12) return d;
    prev = d;
  }
  throw DivergenceError("never-transmit distortion did not converge; it is infinite or beyond the dimension cap");
}

}  // namespace detail

/// Performance of f^(k) for k >= 0.
inline PerfPoint performance(const ModelSpecA& spec, long k, std::optional<double> lambda = std::nullopt) {
  if (k < 0) throw std::invalid_argument("threshold must be nonnegative");
  if (k == 0) {
    PerfPoint out{0.0, 1.0, std::nullopt, std::nullopt, Provenance::analytic};
    return lambda ? out.with_cost(*lambda) : out;
  }
  const auto lm = solve_lm(build_silent_system(spec, k), spec.beta);
  return renewal_performance(lm.L_at(0), lm.M_at(0), spec.beta.value(), lambda);
}

/// Performance of a threshold policy, including the k = +inf sentinel.
inline PerfPoint performance(const ModelSpecA& spec, const ThresholdPolicy& policy,
                             std::optional<double> lambda = std::nullopt) {
  if (policy.is_never()) {
    PerfPoint out{detail::never_transmit_distortion_a(spec), 0.0, std::nullopt, std::nullopt, Provenance::analytic};
    return lambda ? out.with_cost(*lambda) : out;
  }
  // |E| takes integer values, so threshold k acts like ceil(k).
  return performance(spec, static_cast<long>(std::ceil(policy.k())), lambda);
}

/// Memoized k -> (D, N) for one instance; not thread-safe, use one per task.
class ThresholdFamilyA {
 public:
  explicit ThresholdFamilyA(const ModelSpecA& spec, long max_dimension = kDefaultMaxDimension)
      : spec_(spec), max_dimension_(max_dimension) {}

  const PerfPoint& at(long k) {
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
    if (2 * k - 1 > max_dimension_)
      throw CapacityError("threshold " + std::to_string(k) + " exceeds the silent-system dimension cap");
    return cache_.emplace(k, performance(spec_, k)).first->second;
  }

  double D(long k) { return at(k).distortion; }
  double N(long k) { return at(k).transmission_rate; }
  const ModelSpecA& spec() const { return spec_; }
  long max_k() const { return (max_dimension_ + 1) / 2; }

 private:
  ModelSpecA spec_;
  long max_dimension_;
  std::map<long, PerfPoint> cache_;
};

/// Threshold k_n of the optimal set K and the price lambda^(k_n) at which f^(k_n) stops being optimal.
struct Corner {
  long k;
  double lambda;
};

inline constexpr double kCornerTolerance = 1e-12;

namespace detail {

// Next element of K = {k : D^(k+1) > D^(k)} at or after `from`.
inline long next_in_k_set(ThresholdFamilyA& family, long from) {
  for (long k = from; k < family.max_k(); ++k)
    if (family.D(k + 1) > family.D(k) + kCornerTolerance) return k;
  throw CapacityError("no further element of the optimal threshold set below the dimension cap");
}

inline std::vector<Corner> corner_lambdas(ThresholdFamilyA& family, long k_max) {
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  std::vector<Corner> out;
  long current = next_in_k_set(family, 0);
  while (current <= k_max) {
    const long next = next_in_k_set(family, current + 1);
    const double dn = family.N(current) - family.N(next);
    if (!(dn > 0.0))
      throw ConsistencyError("N^(k) not strictly decreasing between k=" + std::to_string(current) + " and k=" +
                             std::to_string(next));
    const double lam = (family.D(next) - family.D(current)) / dn;
    if (!out.empty() && !(lam > out.back().lambda))
      throw ConsistencyError("corner prices not strictly increasing at k=" + std::to_string(current));
    out.push_back({current, lam});
    current = next;
  }
  return out;
}

}  // namespace detail

/// Corners (k_n, lambda^(k_n)) for every k_n in K with k_n <= k_max.
inline std::vector<Corner> corner_lambdas(const ModelSpecA& spec, long k_max) {
  ThresholdFamilyA family(spec);
  return detail::corner_lambdas(family, k_max);
}

struct CostlySolution {
  long k_star;
  double cost;
  PerfPoint perf;
};

/// Optimal threshold for communication price lambda: the k_n with lambda in (lambda^(k_{n-1}), lambda^(k_n)].
inline CostlySolution optimal_costly(const ModelSpecA& spec, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be finite and >= 0");
  ThresholdFamilyA family(spec);
  for (long k_max = 16;; k_max *= 2) {
    k_max = std::min(k_max, family.max_k() - 1);
    const auto corners = detail::corner_lambdas(family, k_max);
    for (const auto& c : corners) {
      if (lambda <= c.lambda) {
        const auto perf = family.at(c.k).with_cost(lambda);
        return {c.k, *perf.cost, perf};
      }
    }
    if (k_max >= family.max_k() - 1)
      throw CapacityError("lambda beyond the largest corner reachable under the dimension cap");
  }
}

/**
 * Performance of the stationary policy that transmits when |e| > k, stays
 * silent when |e| < k and transmits with probability q at each visit to
 * |e| == k. The silent system is enlarged to -k..k with the boundary rows
 * and right-hand sides scaled by 1-q.
 */
inline PerfPoint randomized_performance(const ModelSpecA& spec, long k, double q) {
  if (k < 0) throw std::invalid_argument("threshold must be nonnegative");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("boundary probability must lie in [0, 1]");
  const double beta = spec.beta.value();
  if (k == 0) {
    // Every step after the first starts from a fresh innovation.
    const double p0 = spec.pmf(0);
    PerfPoint out{0.0, (1.0 - beta) * q + beta * ((1.0 - p0) + p0 * q), std::nullopt, std::nullopt,
                  Provenance::analytic};
    return out;
  }
  if (q == 1.0) return performance(spec, k);
  if (2 * k + 1 > kDefaultMaxDimension) throw CapacityError("randomized system exceeds the dimension cap");
  const long n = 2 * k + 1;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd d(n), keep(n);
  for (long e = -k; e <= k; ++e) {
    const long row = e + k;
    keep(row) = std::abs(e) == k ? 1.0 - q : 1.0;
    d(row) = keep(row) * spec.distortion(static_cast<double>(e));
    for (const auto& [w, p] : spec.pmf.probabilities()) {
      const long next = spec.a * e + w;
      if (next < -k || next > k) continue;
      T(row, next + k) = keep(row) * p;
    }
  }
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - beta * T;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  if (!(lu.rcond() >= 1e-13) || !(lu.matrixLU().diagonal().cwiseAbs().minCoeff() > 0.0))
    throw SingularSystemError("randomized boundary system is singular");
  const Eigen::VectorXd L = detail::refined_solve(A, lu, d);
  // A transmitting step plays the role of the next cycle's e = 0 step, so it
  // is not counted here.
  const Eigen::VectorXd M = detail::refined_solve(A, lu, keep);
  return renewal_performance(L(k), M(k), beta, std::nullopt);
}

/**
 * Per-visit boundary probability q with randomized_performance(k, q) rate
 * equal to alpha, for N^(k+1) <= alpha <= N^(k). The rate is increasing in q;
 * solved by bisection to machine precision.
 */
inline double boundary_probability(const ModelSpecA& spec, long k, double alpha) {
  double lo = 0.0, hi = 1.0;
  const double n_lo = randomized_performance(spec, k, lo).transmission_rate;
  const double n_hi = randomized_performance(spec, k, hi).transmission_rate;
  if (alpha <= n_lo) return 0.0;
  if (alpha >= n_hi) return 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (randomized_performance(spec, k, mid).transmission_rate < alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct ConstrainedSolution {
  RandomizedThresholdPolicy policy;
  double d_star;
  double achieved_rate;
  /// Per-visit transmit probability at |e| == k* that realizes (alpha, d_star)
  /// as a stationary policy. theta* is the mixing weight of the two threshold
  /// policies and differs from it in general.
  double boundary_probability;
};

/**
 * Bernoulli randomized simple policy meeting N = alpha with minimum distortion.
 *
 * k* = sup{k : N^(k) >= alpha}; theta* mixes f^(k*) and f^(k*+1). With
 * `strict` set, alpha >= N^(1) (where zero distortion is already feasible)
 * raises DegenerateError instead of returning D* = 0.
 */
inline ConstrainedSolution optimal_constrained(const ModelSpecA& spec, double alpha, bool strict = false) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  ThresholdFamilyA family(spec);
  if (strict && alpha >= family.N(1))
    throw DegenerateError("alpha >= N^(1) = beta(1-p_0): zero distortion is feasible");
  long k = 0;
  while (family.N(k + 1) >= alpha) {
    ++k;
    if (k + 1 >= family.max_k()) throw CapacityError("alpha below the smallest rate reachable under the dimension cap");
  }
  const double nk = family.N(k), nk1 = family.N(k + 1);
  const double theta = (alpha - nk1) / (nk - nk1);
  const double d_star = theta * family.D(k) + (1.0 - theta) * family.D(k + 1);
  const double rate = theta * nk + (1.0 - theta) * nk1;
  if (std::abs(rate - alpha) > 1e-10) throw ConsistencyError("mixed transmission rate misses alpha");
  return {RandomizedThresholdPolicy(k, std::clamp(theta, 0.0, 1.0)), d_star, rate, boundary_probability(spec, k, alpha)};
}

/// Corner points of C*(lambda) or D*(alpha) for thresholds up to k_max.
inline TradeoffCurve tradeoff_curve(const ModelSpecA& spec, CurveKind kind, long k_max) {
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  ThresholdFamilyA family(spec);
  TradeoffCurve curve;
  curve.kind = kind;
  curve.shape = CurveShape::piecewise_linear;
  if (kind == CurveKind::costly) {
    for (const auto& c : detail::corner_lambdas(family, k_max))
      curve.points.push_back({c.lambda, family.D(c.k) + c.lambda * family.N(c.k), {static_cast<double>(c.k), {}}});
  } else {
    for (long k = k_max; k >= 1; --k)
      curve.points.push_back({family.N(k), family.D(k), {static_cast<double>(k), {}}});
  }
  return curve;
}

}  // namespace remest

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "remest/core_model.hpp"
#include "remest/errors.hpp"

// Value-iteration oracle for the discounted integer-valued problem. It shares
// no code with the renewal solver and serves as an independent check on it.

namespace remest {

/// Converged truncated dynamic program on states -B..B plus a forced-transmit exterior.
struct TruncatedDP {
  long bound = 0;
  double lambda = 0.0;
  double beta = 0.0;
  std::vector<double> values;  // index e + bound
  double exterior_value = 0.0;
  std::vector<int> transmit;   // greedy action, index e + bound
  long iterations = 0;

  std::optional<long> threshold;  // k when the greedy policy is transmit iff |e| >= k
  bool even = false;              // |V(e) - V(-e)| <= tol
  bool monotone = false;          // V nondecreasing on e >= 0 within tol
  double tail_error_bound = 0.0;  // truncated pmf mass times the value bound lambda/(1-beta)

  double value(long e) const { return values.at(static_cast<std::size_t>(e + bound)); }
  bool transmits(long e) const { return transmit.at(static_cast<std::size_t>(e + bound)) != 0; }
};

/// Smallest e >= 0 with d(e) >= lambda/(1-beta): transmitting is optimal from there on.
inline long compactification_radius(const ModelSpecA& spec, double lambda) {
  const double beta = spec.beta.value();
  const double level = lambda / (1.0 - beta);
  constexpr long kCap = 100000000;
  long e = 0;
  if (spec.distortion.kind() == DistortionFn::Kind::absolute) {
    e = static_cast<long>(std::ceil(level));
  } else if (spec.distortion.kind() == DistortionFn::Kind::quadratic) {
    e = static_cast<long>(std::ceil(std::sqrt(level)));
  }
  while (e > 0 && spec.distortion(static_cast<double>(e - 1)) >= level) --e;
  while (spec.distortion(static_cast<double>(e)) < level) {
    if (++e > kCap) throw std::invalid_argument("distortion never reaches lambda/(1-beta); the program cannot be truncated");
  }
  return e;
}

/// Default truncation bound: past the compactification radius by one innovation step.
inline long default_dp_bound(const ModelSpecA& spec, double lambda) {
  const long r = spec.pmf.support_radius();
  const long a = std::max(1L, std::abs(spec.a));
  return std::max(compactification_radius(spec, lambda) + r + 1, 4 * a * (r + 1));
}

namespace detail {

inline void check_dp_spec(const ModelSpecA& spec) {
  if (spec.beta.is_average()) throw std::invalid_argument("the dynamic-program oracle needs beta < 1");
}

inline long dp_index(long e, long bound) { return e + bound; }

}  // namespace detail

/**
 * Value iteration for
 *   V(e) = min{ lambda + beta E V(W),  d(e) + beta E V(a e + W) }
 * truncated to |e| <= B. States leaving the window are beyond the
 * compactification radius, where transmitting is optimal, so they take the
 * transmit value. Iteration stops once successive iterates differ by at most
 * tol (1-beta)/(2 beta) in sup norm. Ties in the greedy policy go to silence.
 */
inline TruncatedDP value_iterate(const ModelSpecA& spec, double lambda, double tol,
                                 std::optional<long> bound = std::nullopt, long max_iterations = 10000000) {
  detail::check_dp_spec(spec);
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be finite and >= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const long B = bound.value_or(default_dp_bound(spec, lambda));
  const long r = spec.pmf.support_radius();
  if (B < r) throw std::invalid_argument("bound must cover the innovation support");

  const double beta = spec.beta.value();
  const long a = spec.a;
  const auto& probs = spec.pmf.probabilities();
  const std::size_t n_states = static_cast<std::size_t>(2 * B + 1);

  std::vector<double> d(n_states);
  for (long e = -B; e <= B; ++e) d[detail::dp_index(e, B)] = spec.distortion(static_cast<double>(e));

  std::vector<double> V(n_states, 0.0), next(n_states, 0.0);
  double exterior = 0.0;
  auto expect_from = [&](const std::vector<double>& v, double ext, long center) {
    double s = 0.0;
    for (const auto& [n, p] : probs) {
      const long to = center + n;
      s += p * (std::abs(to) <= B ? v[detail::dp_index(to, B)] : ext);
    }
    return s;
  };

  const double stop = tol * (1.0 - beta) / (2.0 * beta);
  TruncatedDP out;
  out.bound = B;
  out.lambda = lambda;
  out.beta = beta;
  for (long it = 1;; ++it) {
    if (it > max_iterations) throw ConvergenceError("value iteration did not converge");
    const double transmit_value = lambda + beta * expect_from(V, exterior, 0);
    double diff = std::abs(transmit_value - exterior);
    for (long e = -B; e <= B; ++e) {
      const double silent = d[detail::dp_index(e, B)] + beta * expect_from(V, exterior, a * e);
      const double v = std::min(transmit_value, silent);
      diff = std::max(diff, std::abs(v - V[detail::dp_index(e, B)]));
      next[detail::dp_index(e, B)] = v;
    }
    V.swap(next);
    exterior = transmit_value;
    if (diff <= stop) {
      out.iterations = it;
      break;
    }
  }

  // Greedy policy from the converged values.
  const double transmit_value = lambda + beta * expect_from(V, exterior, 0);
  out.transmit.assign(n_states, 0);
  for (long e = -B; e <= B; ++e) {
    const double silent = d[detail::dp_index(e, B)] + beta * expect_from(V, exterior, a * e);
    out.transmit[detail::dp_index(e, B)] = transmit_value < silent ? 1 : 0;
  }
  if (!out.transmits(-B) || !out.transmits(B))
    throw BoundTooSmallError("greedy policy is silent at the truncation edge |e| = " + std::to_string(B));

  long k = 0;
  while (k <= B && !out.transmits(k)) ++k;
  bool is_threshold = true;
  for (long e = -B; e <= B && is_threshold; ++e) is_threshold = out.transmits(e) == (std::abs(e) >= k);
  if (is_threshold) out.threshold = k;

  out.even = true;
  out.monotone = true;
  for (long e = 0; e <= B; ++e) {
    if (std::abs(V[detail::dp_index(e, B)] - V[detail::dp_index(-e, B)]) > tol) out.even = false;
    if (e > 0 && V[detail::dp_index(e, B)] < V[detail::dp_index(e - 1, B)] - tol) out.monotone = false;
  }
  out.values = std::move(V);
  out.exterior_value = exterior;
  out.tail_error_bound = spec.pmf.truncated_mass() * lambda / (1.0 - beta);
  return out;
}

struct FixedPointPerformance {
  double distortion;
  double transmission_rate;
  long iterations;
};

/**
 * D^(k) and N^(k) as value functions of f^(k):
 *   D(e) = (1-beta) d(e) 1{|e|<k} + beta E D(next),
 *   N(e) = (1-beta) 1{|e|>=k}     + beta E N(next),
 * with next = a e + W when silent and W after a transmission. Iterated on
 * |e| <= bound; states outside are transmitting and share the transmit value.
 */
inline FixedPointPerformance policy_evaluate_fixed_point(const ModelSpecA& spec, long k, long bound, double tol,
                                                         long max_iterations = 10000000) {
  detail::check_dp_spec(spec);
  if (k < 0) throw std::invalid_argument("threshold must be nonnegative");
  if (k == 0) return {0.0, 1.0, 0};
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const long r = spec.pmf.support_radius();
  if (bound < k + r) throw std::invalid_argument("bound must be at least k + support radius");

  const double beta = spec.beta.value();
  const long a = spec.a;
  const auto& probs = spec.pmf.probabilities();
  const long B = bound;
  const std::size_t n_states = static_cast<std::size_t>(2 * B + 1);

  std::vector<double> D(n_states, 0.0), N(n_states, 0.0), D_next(n_states), N_next(n_states);
  auto expect_from = [&](const std::vector<double>& v, double ext, long center) {
    double s = 0.0;
    for (const auto& [n, p] : probs) {
      const long to = center + n;
      s += p * (std::abs(to) <= B ? v[detail::dp_index(to, B)] : ext);
    }
    return s;
  };

  double D_tx = 0.0, N_tx = 0.0;  // common value of every transmitting state
  const double stop = tol * (1.0 - beta) / (2.0 * beta);
  for (long it = 1;; ++it) {
    if (it > max_iterations) throw ConvergenceError("policy evaluation did not converge");
    const double D_tx_new = beta * expect_from(D, D_tx, 0);
    const double N_tx_new = (1.0 - beta) + beta * expect_from(N, N_tx, 0);
    double diff = std::max(std::abs(D_tx_new - D_tx), std::abs(N_tx_new - N_tx));
    for (long e = -B; e <= B; ++e) {
      const std::size_t i = static_cast<std::size_t>(detail::dp_index(e, B));
      if (std::abs(e) >= k) {
        D_next[i] = D_tx_new;
        N_next[i] = N_tx_new;
      } else {
        D_next[i] = (1.0 - beta) * spec.distortion(static_cast<double>(e)) + beta * expect_from(D, D_tx, a * e);
        N_next[i] = beta * expect_from(N, N_tx, a * e);
      }
      diff = std::max({diff, std::abs(D_next[i] - D[i]), std::abs(N_next[i] - N[i])});
    }
    D.swap(D_next);
    N.swap(N_next);
    D_tx = D_tx_new;
    N_tx = N_tx_new;
    if (diff <= stop) return {D[detail::dp_index(0, B)], N[detail::dp_index(0, B)], it};
  }
}

}  // namespace remest

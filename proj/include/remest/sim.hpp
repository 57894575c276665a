#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "remest/core_model.hpp"
#include "remest/errors.hpp"

namespace remest {

struct SimConfig {
  long horizon = 100000;
  long replications = 200;
  std::uint64_t seed = 20190101;
  long burn_in = 1000;                     // beta = 1 only
  double discount_truncation_tol = 1e-10;  // beta < 1 only: run until beta^t < tol
  unsigned threads = 0;                    // 0: hardware concurrency
};

struct SimResult {
  double d_hat = 0.0;
  double n_hat = 0.0;
  double d_se = 0.0;
  double n_se = 0.0;
  long replications_used = 0;
  long steps_per_replication = 0;
  std::uint64_t seed = 0;
  std::string stream_id;
};

// ---------------------------------------------------------------------------
// Policies
// ---------------------------------------------------------------------------

namespace policy {

struct Threshold {
  double k;
};

/// Transmit with probability theta at |e| == k, always above, never below.
struct RandomizedThreshold {
  long k;
  double theta;
};

/// U_t = pattern[t mod period].
struct Periodic {
  long period;
  std::vector<int> pattern;
  long transmissions_per_period;

  /// Silent for T-1 steps, then one transmission (alpha = 1/T).
  static Periodic one_in(long T) {
    if (T < 1) throw std::invalid_argument("period must be >= 1");
    std::vector<int> pat(T, 0);
    pat.back() = 1;
    return {T, std::move(pat), 1};
  }
  /// Silent for one step, then T-1 transmissions (alpha = (T-1)/T).
  static Periodic all_but_one(long T) {
    if (T < 2) throw std::invalid_argument("period must be >= 2");
    std::vector<int> pat(T, 1);
    pat.front() = 0;
    return {T, std::move(pat), T - 1};
  }
};

/// State-independent Bernoulli(alpha) transmissions.
struct IidRandom {
  double alpha;
};

/// Deterministic steering of the boundary action frequency toward theta.
struct Steering {
  long k;
  double theta;
};

/**
 * Alternates f^(k) for a_m cycles and f^(k+1) for b_m cycles, cycling
 * through the schedule. A cycle ends at a transmission.
 */
struct TimeSharing {
  long k;
  std::vector<std::pair<long, long>> schedule;
};

}  // namespace policy

using PolicySpec = std::variant<policy::Threshold, policy::RandomizedThreshold, policy::Periodic, policy::IidRandom,
                                policy::Steering, policy::TimeSharing>;

inline void validate_policy(const PolicySpec& spec) {
  struct Visitor {
    void operator()(const policy::Threshold& p) const {
      if (std::isnan(p.k) || p.k < 0.0) throw std::invalid_argument("threshold must be nonnegative");
    }
    void operator()(const policy::RandomizedThreshold& p) const {
      if (p.k < 0) throw std::invalid_argument("threshold must be nonnegative");
      if (!(p.theta >= 0.0 && p.theta <= 1.0)) throw std::invalid_argument("theta must lie in [0, 1]");
    }
    void operator()(const policy::Periodic& p) const {
      if (p.period < 1 || static_cast<long>(p.pattern.size()) != p.period)
        throw std::invalid_argument("periodic pattern length must equal the period");
      long sum = 0;
      for (int u : p.pattern) {
        if (u != 0 && u != 1) throw std::invalid_argument("periodic pattern entries must be 0 or 1");
        sum += u;
      }
      if (sum != p.transmissions_per_period)
        throw std::invalid_argument("periodic pattern does not match the declared transmissions per period");
    }
    void operator()(const policy::IidRandom& p) const {
      if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
    }
    void operator()(const policy::Steering& p) const {
      if (p.k < 0) throw std::invalid_argument("threshold must be nonnegative");
      if (!(p.theta >= 0.0 && p.theta <= 1.0)) throw std::invalid_argument("theta must lie in [0, 1]");
    }
    void operator()(const policy::TimeSharing& p) const {
      if (p.k < 0) throw std::invalid_argument("threshold must be nonnegative");
      if (p.schedule.empty()) throw std::invalid_argument("time-sharing schedule must be nonempty");
      for (auto [a, b] : p.schedule)
        if (a < 0 || b < 0 || a + b == 0) throw std::invalid_argument("time-sharing schedule entries must be positive");
    }
  };
  std::visit(Visitor{}, spec);
}

// ---------------------------------------------------------------------------
// Steering and time-sharing helpers
// ---------------------------------------------------------------------------

/// Boundary-visit action counts (a^0, a^1).
struct SteeringCounters {
  long silent = 0;
  long transmit = 0;
};

/**
 * One steering decision. Off the boundary |e| == k the action is the
 * deterministic part of the randomized policy. On it, the action with the
 * larger deficit theta^i - (a^i + 1)/(a^0 + a^1 + 1) is taken (ties transmit),
 * which drives the empirical transmit frequency to theta.
 */
inline std::pair<int, SteeringCounters> steering_policy_step(SteeringCounters c, double e, double k, double theta) {
  const double mag = std::abs(e);
  if (mag < k) return {0, c};
  if (mag > k) return {1, c};
  const double visits = static_cast<double>(c.silent + c.transmit) + 1.0;
  const double deficit0 = (1.0 - theta) - (static_cast<double>(c.silent) + 1.0) / visits;
  const double deficit1 = theta - (static_cast<double>(c.transmit) + 1.0) / visits;
  if (deficit1 >= deficit0) {
    ++c.transmit;
    return {1, c};
  }
  ++c.silent;
  return {0, c};
}

/**
 * Constant schedule (a, b) whose cycle fraction a/(a+b) is the best rational
 * approximation, with denominator at most 10^depth, of theta n_k / alpha.
 */
inline std::vector<std::pair<long, long>> time_sharing_schedule(double alpha, double n_k, double n_k1, double theta,
                                                                int depth) {
  if (!(n_k > n_k1)) throw std::invalid_argument("rates must satisfy n_k > n_k1");
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in [0, 1]");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (depth < 0 || depth > 7) throw std::invalid_argument("depth must lie in [0, 7]");
  const double ratio = std::clamp(theta * n_k / alpha, 0.0, 1.0);
  long max_den = 1;
  for (int i = 0; i < depth; ++i) max_den *= 10;
  long best_num = std::lround(ratio), best_den = 1;
  double best_err = std::abs(ratio - static_cast<double>(best_num));
  for (long q = 2; q <= max_den && best_err > 0.0; ++q) {
    const long p = std::lround(ratio * static_cast<double>(q));
    const double err = std::abs(ratio - static_cast<double>(p) / static_cast<double>(q));
    if (err < best_err - 1e-15) {
      best_err = err;
      best_num = p;
      best_den = q;
    }
  }
  return {{best_num, best_den - best_num}};
}

// ---------------------------------------------------------------------------
// Closed-form baselines (a = 1, beta = 1, Gaussian innovations)
// ---------------------------------------------------------------------------

enum class PeriodicFamily { one_in_T, all_but_one };

/// Distortion of the periodic schedule: (sigma^2/2)(1/alpha - 1) or sigma^2 (1 - alpha).
inline double periodic_distortion(double alpha, double sigma, PeriodicFamily family) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  const double s2 = sigma * sigma;
  if (family == PeriodicFamily::one_in_T) {
    const double T = 1.0 / alpha;
    if (std::abs(T - std::round(T)) > 1e-9) throw std::invalid_argument("one_in_T needs alpha = 1/T for integer T");
    return 0.5 * s2 * (T - 1.0);
  }
  if (alpha >= 1.0) throw std::invalid_argument("all_but_one needs alpha < 1");
  const double T = 1.0 / (1.0 - alpha);
  if (std::abs(T - std::round(T)) > 1e-9 || std::round(T) < 2.0)
    throw std::invalid_argument("all_but_one needs alpha = (T-1)/T for integer T >= 2");
  return s2 * (1.0 - alpha);
}

/// Periodic pattern matching a family and rate.
inline policy::Periodic periodic_pattern(double alpha, PeriodicFamily family) {
  if (family == PeriodicFamily::one_in_T) return policy::Periodic::one_in(std::lround(1.0 / alpha));
  return policy::Periodic::all_but_one(std::lround(1.0 / (1.0 - alpha)));
}

/// D = (sigma^2/2)[E(tau^2)/E(tau) - 1] for a state-independent stopping time tau.
inline double stationary_stopping_distortion(double tau_mean, double tau_second_moment, double sigma) {
  if (!(tau_mean >= 1.0)) throw std::invalid_argument("E(tau) must be >= 1");
  if (!(tau_second_moment >= tau_mean * tau_mean * (1.0 - 1e-12)))
    throw std::invalid_argument("E(tau^2) must be >= E(tau)^2");
  return 0.5 * sigma * sigma * (tau_second_moment / tau_mean - 1.0);
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Replication r's stream depends only on (seed, r).
inline std::mt19937_64 replication_stream(std::uint64_t seed, long r) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(r)));
}

inline double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

class PmfSampler {
 public:
  explicit PmfSampler(const IntegerPmf& pmf) {
    double c = 0.0;
    for (const auto& [n, p] : pmf.probabilities()) {
      c += p;
      values_.push_back(static_cast<double>(n));
      cumulative_.push_back(c);
    }
    cumulative_.back() = 1.0;
  }
  double operator()(std::mt19937_64& gen) {
    const double u = uniform01(gen);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return values_[static_cast<std::size_t>(it - cumulative_.begin())];
  }

 private:
  std::vector<double> values_;
  std::vector<double> cumulative_;
};

class PdfSampler {
 public:
  explicit PdfSampler(const SmoothPdf& pdf) : pdf_(pdf) {
    if (pdf.is_gaussian()) normal_.emplace(0.0, pdf.sigma());
  }
  double operator()(std::mt19937_64& gen) {
    if (normal_) return (*normal_)(gen);
    // Rejection from the uniform envelope on the declared support.
    const double w = pdf_.half_width(), peak = pdf_.peak();
    for (;;) {
      const double x = w * (2.0 * uniform01(gen) - 1.0);
      if (uniform01(gen) * peak <= pdf_(x)) return x;
    }
  }

 private:
  SmoothPdf pdf_;
  std::optional<std::normal_distribution<double>> normal_;
};

// Per-replication decision state for every policy kind.
class Transmitter {
 public:
  explicit Transmitter(const PolicySpec& spec) : spec_(spec) {
    if (const auto* ts = std::get_if<policy::TimeSharing>(&spec_)) {
      schedule_index_ = 0;
      phase_upper_ = false;
      cycles_in_phase_ = 0;
      skip_empty_phases(*ts);
    }
  }

  int decide(double e, long t, std::mt19937_64& gen) {
    return std::visit(
        [&](const auto& p) -> int {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, policy::Threshold>) {
            return std::abs(e) >= p.k ? 1 : 0;
          } else if constexpr (std::is_same_v<P, policy::RandomizedThreshold>) {
            const double mag = std::abs(e), k = static_cast<double>(p.k);
            if (mag > k) return 1;
            if (mag < k) return 0;
            return uniform01(gen) < p.theta ? 1 : 0;
          } else if constexpr (std::is_same_v<P, policy::Periodic>) {
            return p.pattern[static_cast<std::size_t>(t % p.period)];
          } else if constexpr (std::is_same_v<P, policy::IidRandom>) {
            return uniform01(gen) < p.alpha ? 1 : 0;
          } else if constexpr (std::is_same_v<P, policy::Steering>) {
            auto [u, c] = steering_policy_step(counters_, e, static_cast<double>(p.k), p.theta);
            counters_ = c;
            return u;
          } else {
            const double k = static_cast<double>(p.k + (phase_upper_ ? 1 : 0));
            const int u = std::abs(e) >= k ? 1 : 0;
            if (u) end_cycle(p);
            return u;
          }
        },
        spec_);
  }

 private:
  void end_cycle(const policy::TimeSharing& ts) {
    ++cycles_in_phase_;
    const auto [a, b] = ts.schedule[schedule_index_];
    if (cycles_in_phase_ >= (phase_upper_ ? b : a)) advance_phase(ts);
  }

  void advance_phase(const policy::TimeSharing& ts) {
    cycles_in_phase_ = 0;
    if (phase_upper_) schedule_index_ = (schedule_index_ + 1) % ts.schedule.size();
    phase_upper_ = !phase_upper_;
    skip_empty_phases(ts);
  }

  void skip_empty_phases(const policy::TimeSharing& ts) {
    // Entries are validated to have a + b > 0, so this terminates.
    for (std::size_t guard = 0; guard < 2 * ts.schedule.size() + 2; ++guard) {
      const auto [a, b] = ts.schedule[schedule_index_];
      if ((phase_upper_ ? b : a) > 0) return;
      if (phase_upper_) schedule_index_ = (schedule_index_ + 1) % ts.schedule.size();
      phase_upper_ = !phase_upper_;
    }
  }

  const PolicySpec& spec_;
  SteeringCounters counters_;
  std::size_t schedule_index_ = 0;
  bool phase_upper_ = false;
  long cycles_in_phase_ = 0;
};

struct ReplicationOutcome {
  double distortion;
  double rate;
};

inline constexpr double kOverflowGuard = 1e100;

/**
 * One replication of the closed loop. The state is kept in the frame where
 * the receiver's prediction a*X^_{t-1} is zero, so X_t equals the error E_t
 * and the recursion E_{t+1} = a (X_t - X^_t) + W_t stays bounded under any
 * transmitting policy.
 */
template <class Sampler, class Distortion>
ReplicationOutcome run_replication(double a, Sampler& sample, const Distortion& d, const PolicySpec& policy,
                                   double beta, long steps, long burn_in, std::mt19937_64& gen) {
  Transmitter tx(policy);
  double e = 0.0;
  double sum_d = 0.0, sum_u = 0.0;
  double weight = 1.0 - beta;
  const bool average = beta == 1.0;
  for (long t = 0; t < steps; ++t) {
    const int u = tx.decide(e, t, gen);
    const double xhat = estimator_step(0.0, u ? std::optional<double>(e) : std::nullopt, a);
    const double err = e - xhat;
    if (average) {
      if (t >= burn_in) {
        sum_d += d(err);
        sum_u += u;
      }
    } else {
      sum_d += weight * d(err);
      sum_u += weight * u;
      weight *= beta;
    }
    e = a * err + sample(gen);
    if (!(std::abs(e) < kOverflowGuard)) throw DivergenceError("simulated error process overflowed");
  }
  if (average) {
    const double n = static_cast<double>(steps - burn_in);
    return {sum_d / n, sum_u / n};
  }
  return {sum_d, sum_u};
}

// Order-independent summation.
inline double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

inline std::pair<double, double> mean_and_se(const std::vector<double>& x) {
  const std::size_t n = x.size();
  const double mean = pairwise_sum(x.data(), n) / static_cast<double>(n);
  if (n < 2) return {mean, 0.0};
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = (x[i] - mean) * (x[i] - mean);
  const double var = pairwise_sum(sq.data(), n) / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

template <class MakeSampler>
SimResult simulate_impl(double a, const DistortionFn& d, double beta, const PolicySpec& policy, const SimConfig& cfg,
                        MakeSampler make_sampler) {
  validate_policy(policy);
  if (cfg.horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (cfg.replications < 1) throw std::invalid_argument("replications must be >= 1");
  long steps = cfg.horizon;
  long burn_in = 0;
  if (beta == 1.0) {
    burn_in = cfg.burn_in;
    if (burn_in < 0 || burn_in >= steps) throw std::invalid_argument("burn_in must lie in [0, horizon)");
  } else {
    if (!(cfg.discount_truncation_tol > 0.0 && cfg.discount_truncation_tol < 1.0))
      throw std::invalid_argument("discount_truncation_tol must lie in (0, 1)");
    steps = static_cast<long>(std::ceil(std::log(cfg.discount_truncation_tol) / std::log(beta))) + 1;
  }

  const long R = cfg.replications;
  std::vector<double> dist(R), rate(R);
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    auto sampler = make_sampler();
    for (long r = next++; r < R; r = next++) {
      try {
        auto gen = replication_stream(cfg.seed, r);
        auto sample_copy = sampler;  // fresh sampler state per replication
        const auto out = run_replication(a, sample_copy, d, policy, beta, steps, burn_in, gen);
        dist[r] = out.distortion;
        rate[r] = out.rate;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = R;
      }
    }
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<long>(threads, R));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  SimResult res;
  std::tie(res.d_hat, res.d_se) = mean_and_se(dist);
  std::tie(res.n_hat, res.n_se) = mean_and_se(rate);
  res.replications_used = R;
  res.steps_per_replication = steps;
  res.seed = cfg.seed;
  res.stream_id = "mt19937_64/splitmix64(seed,replication)";
  return res;
}

}  // namespace detail

/// Monte-Carlo estimate of (D, N) for an integer-valued instance under `policy`.
inline SimResult simulate(const ModelSpecA& spec, const PolicySpec& policy, const SimConfig& cfg) {
  if (const auto* th = std::get_if<policy::Threshold>(&policy);
      th && std::isinf(th->k) && spec.beta.is_average() && std::abs(spec.a) >= 2)
    throw DivergenceError("never transmitting an |a| >= 2 source overflows");
  const IntegerPmf& pmf = spec.pmf;
  return detail::simulate_impl(static_cast<double>(spec.a), spec.distortion, spec.beta.value(), policy, cfg,
                               [&pmf] { return detail::PmfSampler(pmf); });
}

/// Monte-Carlo estimate of (D, N) for a real-valued instance under `policy`.
inline SimResult simulate(const ModelSpecB& spec, const PolicySpec& policy, const SimConfig& cfg) {
  if (const auto* th = std::get_if<policy::Threshold>(&policy);
      th && std::isinf(th->k) && spec.beta.is_average() && std::abs(spec.a) >= 2.0)
    throw DivergenceError("never transmitting an |a| >= 2 source overflows");
  const SmoothPdf& pdf = spec.pdf;
  return detail::simulate_impl(spec.a, spec.distortion, spec.beta.value(), policy, cfg,
                               [&pdf] { return detail::PdfSampler(pdf); });
}

}  // namespace remest

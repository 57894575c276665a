#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "remest/quadrature.hpp"

namespace remest {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Discount factor
// ---------------------------------------------------------------------------

/// beta in (0, 1]; beta == 1 selects the long-term average criterion.
class DiscountFactor {
 public:
  explicit DiscountFactor(double beta) : beta_(beta) {
    if (!(beta > 0.0 && beta <= 1.0))
      throw std::invalid_argument("discount factor must lie in (0, 1]");
  }

  double value() const { return beta_; }
  bool is_average() const { return beta_ == 1.0; }
  operator double() const { return beta_; }

 private:
  double beta_;
};

// ---------------------------------------------------------------------------
// Innovation laws
// ---------------------------------------------------------------------------

/**
 * Probability mass function on the integers with finite stored support.
 *
 * Countably supported laws are truncated by the caller; the stored mass must
 * be at least 1 - 1e-10 and is renormalized to one. Symmetry, unimodality and
 * p_0 < 1 are not enforced here; validate_spec() reports them.
 */
class IntegerPmf {
 public:
  static constexpr double kMassTolerance = 1e-10;

  explicit IntegerPmf(std::map<long, double> probs) {
    double total = 0.0;
    for (const auto& [n, p] : probs) {
      if (!std::isfinite(p) || p < 0.0)
        throw std::invalid_argument("pmf entries must be finite and nonnegative");
      total += p;
    }
    if (total < 1.0 - kMassTolerance || total > 1.0 + kMassTolerance)
      throw std::invalid_argument("pmf mass must be 1 within 1e-10 (got " + std::to_string(total) + ")");
    truncated_mass_ = std::max(0.0, 1.0 - total);
    for (auto& [n, p] : probs) {
      if (p == 0.0) continue;
      probs_.emplace(n, p / total);
      radius_ = std::max(radius_, std::abs(n));
    }
  }

  /// Example 1 innovations: p at +-1, 1-2p at 0.
  static IntegerPmf birth_death(double p) {
    if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("birth-death parameter must lie in (0, 1/2)");
    return IntegerPmf({{-1, p}, {0, 1.0 - 2.0 * p}, {1, p}});
  }

  double operator()(long n) const {
    auto it = probs_.find(n);
    return it == probs_.end() ? 0.0 : it->second;
  }

  const std::map<long, double>& probabilities() const { return probs_; }

  /// Largest |n| carrying positive mass.
  long support_radius() const { return radius_; }

  /// Mass dropped by truncation before renormalization.
  double truncated_mass() const { return truncated_mass_; }

 private:
  std::map<long, double> probs_;
  long radius_ = 0;
  double truncated_mass_ = 0.0;
};

/**
 * Symmetric unimodal density on the real line: either Gaussian or a
 * user-supplied density with declared support half-width.
 */
class SmoothPdf {
 public:
  struct Gaussian {
    double sigma;
  };
  struct Tabulated {
    std::function<double(double)> density;
    double half_width;
  };

  static SmoothPdf gaussian(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("gaussian sigma must be positive");
    return SmoothPdf(Gaussian{sigma});
  }

  static SmoothPdf tabulated(std::function<double(double)> density, double half_width) {
    if (!density) throw std::invalid_argument("tabulated density must be callable");
    if (!(half_width > 0.0) || !std::isfinite(half_width))
      throw std::invalid_argument("tabulated density needs a finite positive support half-width");
    return SmoothPdf(Tabulated{std::move(density), half_width});
  }

  double operator()(double w) const {
    if (const auto* g = std::get_if<Gaussian>(&kind_)) {
      const double z = w / g->sigma;
      return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * g->sigma);
    }
    const auto& t = std::get<Tabulated>(kind_);
    if (std::abs(w) > t.half_width) return 0.0;
    return t.density(w);
  }

  bool is_gaussian() const { return std::holds_alternative<Gaussian>(kind_); }

  /// Gaussian sigma; throws for tabulated densities.
  double sigma() const {
    if (const auto* g = std::get_if<Gaussian>(&kind_)) return g->sigma;
    throw std::logic_error("sigma() is only defined for gaussian densities");
  }

  /// Support half-width: +infinity for the Gaussian.
  double half_width() const {
    if (is_gaussian()) return kInfinity;
    return std::get<Tabulated>(kind_).half_width;
  }

  /// Natural length scale (sigma, or the standard deviation of a tabulated law).
  double scale() const {
    if (const auto* g = std::get_if<Gaussian>(&kind_)) return g->sigma;
    const double w = std::get<Tabulated>(kind_).half_width;
    const double var = integrate_split([this](double x) { return x * x * (*this)(x); }, w, 401);
    return std::sqrt(var);
  }

  /// Half-width outside of which the density is negligible (< 1e-300 for the Gaussian).
  double effective_half_width() const {
    if (const auto* g = std::get_if<Gaussian>(&kind_)) return 38.0 * g->sigma;
    return std::get<Tabulated>(kind_).half_width;
  }

  /// Maximum of the density (at zero, by unimodality).
  double peak() const { return (*this)(0.0); }

 private:
  explicit SmoothPdf(std::variant<Gaussian, Tabulated> kind) : kind_(std::move(kind)) {}
  std::variant<Gaussian, Tabulated> kind_;
};

// ---------------------------------------------------------------------------
// Distortion
// ---------------------------------------------------------------------------

class DistortionFn {
 public:
  enum class Kind { absolute, quadratic, custom };

  static DistortionFn absolute() { return DistortionFn(Kind::absolute, {}, "abs"); }
  static DistortionFn quadratic() { return DistortionFn(Kind::quadratic, {}, "quad"); }
  static DistortionFn custom(std::function<double(double)> fn, std::string name = "custom") {
    if (!fn) throw std::invalid_argument("custom distortion must be callable");
    return DistortionFn(Kind::custom, std::move(fn), std::move(name));
  }

  double operator()(double e) const {
    switch (kind_) {
      case Kind::absolute: return std::abs(e);
      case Kind::quadratic: return e * e;
      case Kind::custom: return fn_(e);
    }
    return 0.0;
  }

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

 private:
  DistortionFn(Kind kind, std::function<double(double)> fn, std::string name)
      : kind_(kind), fn_(std::move(fn)), name_(std::move(name)) {}

  Kind kind_;
  std::function<double(double)> fn_;
  std::string name_;
};

// ---------------------------------------------------------------------------
// Problem instances
// ---------------------------------------------------------------------------

/// Integer-valued source X_{t+1} = a X_t + W_t with W ~ pmf.
struct ModelSpecA {
  long a;
  IntegerPmf pmf;
  DistortionFn distortion;
  DiscountFactor beta;
};

/// Real-valued source X_{t+1} = a X_t + W_t with W ~ pdf.
struct ModelSpecB {
  double a;
  SmoothPdf pdf;
  DistortionFn distortion;
  DiscountFactor beta;
};

/// Example 1: birth-death innovations with d(e) = |e| and a = 1.
inline ModelSpecA birth_death_spec(double p, double beta, long a = 1) {
  return ModelSpecA{a, IntegerPmf::birth_death(p), DistortionFn::absolute(), DiscountFactor(beta)};
}

/// Gaussian innovations with quadratic distortion.
inline ModelSpecB gauss_markov_spec(double sigma, double beta, double a = 1.0) {
  return ModelSpecB{a, SmoothPdf::gaussian(sigma), DistortionFn::quadratic(), DiscountFactor(beta)};
}

inline bool is_gauss_markov(const ModelSpecB& spec) {
  return spec.pdf.is_gaussian() && spec.distortion.kind() == DistortionFn::Kind::quadratic;
}

// ---------------------------------------------------------------------------
// Policies
// ---------------------------------------------------------------------------

/// f^(k): transmit iff |E_t| >= k. k = 0 always transmits, k = +inf never does.
class ThresholdPolicy {
 public:
  explicit ThresholdPolicy(double k) : k_(k) {
    if (std::isnan(k) || k < 0.0) throw std::invalid_argument("threshold must be nonnegative");
  }
  static ThresholdPolicy never() { return ThresholdPolicy(kInfinity); }
  static ThresholdPolicy always() { return ThresholdPolicy(0.0); }

  double k() const { return k_; }
  bool is_never() const { return std::isinf(k_); }
  bool transmits(double error) const { return std::abs(error) >= k_; }

 private:
  double k_;
};

/// (f^(k), f^(k+1), theta): at |e| == k transmit with probability theta.
class RandomizedThresholdPolicy {
 public:
  RandomizedThresholdPolicy(long k_star, double theta_star) : k_(k_star), theta_(theta_star) {
    if (k_star < 0) throw std::invalid_argument("randomized threshold must be nonnegative");
    if (!(theta_star >= 0.0 && theta_star <= 1.0)) throw std::invalid_argument("theta must lie in [0, 1]");
  }

  long k_star() const { return k_; }
  double theta_star() const { return theta_; }

 private:
  long k_;
  double theta_;
};

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

enum class Provenance { analytic, closed_form, simulated };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::analytic: return "analytic";
    case Provenance::closed_form: return "closed_form";
    case Provenance::simulated: return "simulated";
  }
  return "?";
}

/// (D, N, C) for one policy.
struct PerfPoint {
  double distortion = 0.0;
  double transmission_rate = 0.0;
  std::optional<double> lambda;
  std::optional<double> cost;
  Provenance provenance = Provenance::analytic;

  /// Copy with C = D + lambda*N attached.
  PerfPoint with_cost(double lam) const {
    PerfPoint out = *this;
    out.lambda = lam;
    out.cost = distortion + lam * transmission_rate;
    return out;
  }
};

enum class CurveKind { costly, constrained };
enum class CurveShape { piecewise_linear, sampled };

inline const char* to_string(CurveKind k) { return k == CurveKind::costly ? "costly" : "constrained"; }

struct PolicyDescriptor {
  double k = 0.0;
  std::optional<double> theta;
};

struct CurvePoint {
  double abscissa;
  double ordinate;
  PolicyDescriptor policy;
};

/// Instance a curve was computed for; gauss_markov_rescale() requires it.
struct CurveOrigin {
  bool gauss_markov = false;
  double sigma = 1.0;
  double a = 1.0;
  double beta = 1.0;
};

/// C*(lambda) (costly) or D*(alpha) (constrained), as ordered points.
struct TradeoffCurve {
  CurveKind kind = CurveKind::costly;
  CurveShape shape = CurveShape::piecewise_linear;
  std::vector<CurvePoint> points;
  std::optional<CurveOrigin> origin;

  /// Shape violations: strict abscissa order, monotonicity, and concavity
  /// (costly) or convexity (constrained) via successive slopes.
  std::vector<std::string> violations(double tol = 1e-9) const {
    std::vector<std::string> out;
    const auto& p = points;
    for (std::size_t i = 1; i < p.size(); ++i) {
      if (!(p[i].abscissa > p[i - 1].abscissa)) {
        out.push_back("abscissas not strictly increasing at index " + std::to_string(i));
        return out;
      }
      const double scale = tol * (1.0 + std::abs(p[i].ordinate) + std::abs(p[i - 1].ordinate));
      if (kind == CurveKind::costly && p[i].ordinate < p[i - 1].ordinate - scale)
        out.push_back("costly curve decreases at index " + std::to_string(i));
      if (kind == CurveKind::constrained && p[i].ordinate > p[i - 1].ordinate + scale)
        out.push_back("constrained curve increases at index " + std::to_string(i));
    }
    for (std::size_t i = 2; i < p.size(); ++i) {
      const double s0 = (p[i - 1].ordinate - p[i - 2].ordinate) / (p[i - 1].abscissa - p[i - 2].abscissa);
      const double s1 = (p[i].ordinate - p[i - 1].ordinate) / (p[i].abscissa - p[i - 1].abscissa);
      const double slack = tol * (1.0 + std::abs(s0) + std::abs(s1));
      if (kind == CurveKind::costly && s1 > s0 + slack)
        out.push_back("costly curve not concave at index " + std::to_string(i - 1));
      if (kind == CurveKind::constrained && s1 < s0 - slack)
        out.push_back("constrained curve not convex at index " + std::to_string(i - 1));
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace detail {

template <class Grid>
void check_distortion(const DistortionFn& d, const Grid& probes, std::vector<std::string>& out) {
  if (d(0.0) != 0.0) out.push_back("distortion: d(0) = 0 required");
  double prev = 0.0;
  for (double e : probes) {
    if (e <= 0.0) continue;
    const double v = d(e);
    if (!(v > 0.0)) {
      out.push_back("distortion: d(e) > 0 for e != 0 violated at e=" + std::to_string(e));
      break;
    }
    if (v != d(-e)) {
      out.push_back("distortion: evenness d(e) = d(-e) violated at e=" + std::to_string(e));
      break;
    }
    if (v < prev) {
      out.push_back("distortion: nondecreasing on e >= 0 violated at e=" + std::to_string(e));
      break;
    }
    prev = v;
  }
}

}  // namespace detail

/// Every violated modelling assumption of an integer instance (empty when valid).
inline std::vector<std::string> validate_spec(const ModelSpecA& spec) {
  std::vector<std::string> out;
  const auto& pmf = spec.pmf;
  if (!(pmf(0) < 1.0)) out.push_back("p_0 < 1 required");
  for (const auto& [n, p] : pmf.probabilities()) {
    if (std::abs(p - pmf(-n)) > 1e-15) {
      out.push_back("symmetry p_n = p_{-n} violated at n=" + std::to_string(n));
      break;
    }
  }
  for (long n = 0; n < pmf.support_radius(); ++n) {
    if (pmf(n) < pmf(n + 1)) {
      out.push_back("unimodality p_n >= p_{n+1} violated at n=" + std::to_string(n));
      break;
    }
  }
  std::vector<double> probes;
  const long reach = std::max<long>(64, 4 * pmf.support_radius());
  for (long e = 1; e <= reach; ++e) probes.push_back(static_cast<double>(e));
  detail::check_distortion(spec.distortion, probes, out);
  return out;
}

/// Every violated modelling assumption of a real-valued instance (empty when valid).
inline std::vector<std::string> validate_spec(const ModelSpecB& spec) {
  std::vector<std::string> out;
  const auto& pdf = spec.pdf;
  const double w = pdf.effective_half_width();
  const int samples = 400;
  double prev = pdf(0.0);
  if (!(prev > 0.0)) out.push_back("density must be positive at 0");
  for (int i = 1; i <= samples; ++i) {
    const double x = w * i / samples;
    const double v = pdf(x);
    if (!(v >= 0.0)) {
      out.push_back("density must be nonnegative");
      break;
    }
    if (std::abs(v - pdf(-x)) > 1e-12 * (1.0 + v)) {
      out.push_back("symmetry phi(w) = phi(-w) violated at w=" + std::to_string(x));
      break;
    }
    if (v > prev + 1e-15) {
      out.push_back("unimodality phi(w) >= phi(w+delta) violated at w=" + std::to_string(x));
      break;
    }
    prev = v;
  }
  const double mass = pdf.is_gaussian() ? integrate(pdf, 12.0 * pdf.sigma(), 401) : integrate_split(pdf, w, 801);
  if (std::abs(mass - 1.0) > 1e-8) out.push_back("density must integrate to 1 (got " + std::to_string(mass) + ")");

  std::vector<double> probes;
  const double reach = 8.0 * pdf.scale();
  for (int i = 1; i <= 256; ++i) probes.push_back(reach * i / 256.0);
  detail::check_distortion(spec.distortion, probes, out);
  return out;
}

// ---------------------------------------------------------------------------
// Estimator
// ---------------------------------------------------------------------------

/// g*: adopt the received state, otherwise predict a * previous estimate.
inline double estimator_step(double prev_estimate, std::optional<double> received, double a) {
  return received ? *received : a * prev_estimate;
}

}  // namespace remest

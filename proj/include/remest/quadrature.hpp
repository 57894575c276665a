#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace remest {

/// Quadrature rule on a symmetric interval (-half_width, half_width).
struct QuadratureGrid {
  double half_width = 0.0;
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;  // positive, sum to 2*half_width

  std::size_t order() const { return nodes.size(); }
};

namespace detail {

// Legendre P_n(x) and its derivative by the three-term recurrence.
inline void legendre_with_derivative(int n, double x, double& p, double& dp) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int j = 2; j <= n; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace detail

/**
 * Gauss-Legendre rule with `n` nodes on (-half_width, half_width).
 *
 * Roots are found by Newton iteration from the Tricomi initial guess and
 * mirrored, so the returned nodes are exactly symmetric about zero.
 */
inline QuadratureGrid gauss_legendre(int n, double half_width) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("gauss_legendre: half_width must be positive and finite");

  std::vector<double> x(n), w(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p = 0.0, dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      detail::legendre_with_derivative(n, z, p, dp);
      const double dz = p / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    detail::legendre_with_derivative(n, z, p, dp);
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = wi;
    w[n - 1 - i] = wi;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;

  QuadratureGrid grid;
  grid.half_width = half_width;
  grid.nodes.resize(n);
  grid.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    grid.nodes[i] = half_width * x[i];
    grid.weights[i] = half_width * w[i];
  }
  return grid;
}

/// Integrates f over (-half_width, half_width) with an n-point Gauss-Legendre rule.
template <class F>
double integrate(F&& f, double half_width, int n = 201) {
  const auto grid = gauss_legendre(n, half_width);
  double s = 0.0;
  for (std::size_t i = 0; i < grid.order(); ++i) s += grid.weights[i] * f(grid.nodes[i]);
  return s;
}

/// Same over (-w, 0) and (0, w) separately, so a kink at 0 costs no accuracy.
template <class F>
double integrate_split(F&& f, double half_width, int n = 201) {
  const double h = 0.5 * half_width;
  return integrate([&](double x) { return f(x - h); }, h, n) + integrate([&](double x) { return f(x + h); }, h, n);
}

}  // namespace remest

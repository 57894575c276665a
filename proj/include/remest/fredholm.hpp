#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "remest/core_model.hpp"
#include "remest/errors.hpp"
#include "remest/quadrature.hpp"

namespace remest {

using Kernel = std::function<double(double e, double n)>;
using RightHandSide = std::function<double(double e)>;

struct FredholmOptions {
  double tolerance = 1e-10;
  int initial_nodes = 65;
  int max_doublings = 12;
  int max_nodes = 16385;
  /// Solve once on this many nodes instead of doubling to convergence.
  std::optional<int> fixed_nodes;
};

/**
 * Nystrom solution of v = rhs + beta * int_{-k}^{k} kernel(e, n) v(n) dn.
 *
 * Off the grid the solution is evaluated by the Nystrom interpolant, which
 * reuses the quadrature sum with the node values.
 */
class FredholmSolution {
 public:
  FredholmSolution(Kernel kernel, RightHandSide rhs, double beta, QuadratureGrid grid, Eigen::VectorXd values,
                   double last_change)
      : kernel_(std::move(kernel)),
        rhs_(std::move(rhs)),
        beta_(beta),
        grid_(std::move(grid)),
        values_(std::move(values)),
        last_change_(last_change) {}

  double operator()(double e) const {
    double s = 0.0;
    for (std::size_t j = 0; j < grid_.order(); ++j) s += grid_.weights[j] * kernel_(e, grid_.nodes[j]) * values_(j);
    return rhs_(e) + beta_ * s;
  }

  double half_width() const { return grid_.half_width; }
  const QuadratureGrid& grid() const { return grid_; }
  const Eigen::VectorXd& values_at_nodes() const { return values_; }
  std::size_t order() const { return grid_.order(); }

  /// |v(0)| change between the last two node counts (0 for a fixed-node solve).
  double last_change() const { return last_change_; }

  /**
   * Largest relative residual of the integral equation at `probes` points
   * strictly between the nodes, with the integral evaluated on an
   * independent finer Gauss-Legendre rule.
   */
  double residual(int probes = 64) const {
    const auto fine = gauss_legendre(static_cast<int>(2 * grid_.order() + 1), grid_.half_width);
    std::vector<double> v_fine(fine.order());
    for (std::size_t i = 0; i < fine.order(); ++i) v_fine[i] = (*this)(fine.nodes[i]);
    double worst = 0.0;
    for (int i = 0; i < probes; ++i) {
      const double e = grid_.half_width * (-1.0 + (2.0 * i + 1.0) / probes) * 0.999;
      double integral = 0.0;
      for (std::size_t j = 0; j < fine.order(); ++j) integral += fine.weights[j] * kernel_(e, fine.nodes[j]) * v_fine[j];
      const double v = (*this)(e);
      const double r = std::abs(v - rhs_(e) - beta_ * integral) / (1.0 + std::abs(v));
      worst = std::max(worst, r);
    }
    return worst;
  }

 private:
  Kernel kernel_;
  RightHandSide rhs_;
  double beta_;
  QuadratureGrid grid_;
  Eigen::VectorXd values_;
  double last_change_;
};

/**
 * Solves the integral equation for several right-hand sides sharing one
 * kernel. Nodes start at `initial_nodes` and double (n -> 2n-1, keeping a
 * node at 0) until every solution's value at 0 changes by less than
 * tolerance * max(1, |v(0)|).
 */
inline std::vector<FredholmSolution> fredholm_solve_many(const Kernel& kernel, const std::vector<RightHandSide>& rhs,
                                                         double k, DiscountFactor beta,
                                                         const FredholmOptions& opts = {}) {
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("fredholm half-width must be positive and finite");
  if (rhs.empty()) throw std::invalid_argument("fredholm_solve needs at least one right-hand side");
  const double b = beta.value();

  std::vector<double> prev(rhs.size(), 0.0);
  int n = opts.fixed_nodes.value_or(opts.initial_nodes);
  const int rounds = opts.fixed_nodes ? 1 : opts.max_doublings + 1;
  for (int round = 0; round < rounds && n <= opts.max_nodes; ++round, n = 2 * n - 1) {
    auto grid = gauss_legendre(n, k);
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = (i == j ? 1.0 : 0.0) - b * grid.weights[j] * kernel(grid.nodes[i], grid.nodes[j]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    if (!(lu.rcond() >= 1e-13) || !(lu.matrixLU().diagonal().cwiseAbs().minCoeff() > 0.0))
      throw SingularSystemError("discretized integral operator is singular (no escape mass from (-k, k))");

    std::vector<Eigen::VectorXd> values;
    values.reserve(rhs.size());
    bool converged = true;
    double worst_change = 0.0;
    for (std::size_t r = 0; r < rhs.size(); ++r) {
      Eigen::VectorXd f(n);
      for (int i = 0; i < n; ++i) f(i) = rhs[r](grid.nodes[i]);
      Eigen::VectorXd v = lu.solve(f);
      v += lu.solve(f - A * v);
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += grid.weights[j] * kernel(0.0, grid.nodes[j]) * v(j);
      const double v0 = rhs[r](0.0) + b * s;
      const double change = std::abs(v0 - prev[r]);
      worst_change = std::max(worst_change, change);
      if (round == 0 || change > opts.tolerance * std::max(1.0, std::abs(v0))) converged = false;
      prev[r] = v0;
      values.push_back(std::move(v));
    }
    if (opts.fixed_nodes || converged) {
      std::vector<FredholmSolution> out;
      out.reserve(rhs.size());
      for (std::size_t r = 0; r < rhs.size(); ++r)
        out.emplace_back(kernel, rhs[r], b, grid, std::move(values[r]), opts.fixed_nodes ? 0.0 : worst_change);
      return out;
    }
  }
  throw ConvergenceError("Nystrom iteration did not converge within " + std::to_string(opts.max_doublings) +
                         " doublings (max " + std::to_string(opts.max_nodes) + " nodes)");
}

inline FredholmSolution fredholm_solve(const Kernel& kernel, const RightHandSide& rhs, double k, DiscountFactor beta,
                                       const FredholmOptions& opts = {}) {
  return std::move(fredholm_solve_many(kernel, {rhs}, k, beta, opts).front());
}

}  // namespace remest

// Optimal thresholds for the birth-death chain and the Gauss-Markov source.
#include <cstdio>

#include "remest/sim.hpp"
#include "remest/solver_a.hpp"
#include "remest/solver_b.hpp"

int main() {
  using namespace remest;

  const auto chain = birth_death_spec(0.3, 0.9);
  const auto costly = optimal_costly(chain, 20.0);
  std::printf("birth-death, lambda=20: k*=%ld C*=%.4f\n", costly.k_star, costly.cost);

  const auto constrained = optimal_constrained(chain, 0.1);
  std::printf("birth-death, alpha=0.1: k*=%ld theta*=%.4f D*=%.4f (per-visit probability %.4f)\n",
              constrained.policy.k_star(), constrained.policy.theta_star(), constrained.d_star,
              constrained.boundary_probability);

  const auto gm = gauss_markov_spec(1.0, 1.0);
  const auto sol = algorithm2_constrained(gm, 0.2, 1e-6);
  std::printf("gauss-markov, alpha=0.2: k=%.4f D*=%.4f\n", sol.k_circ, sol.value);

  SimConfig cfg;
  cfg.horizon = 20000;
  cfg.replications = 20;
  const auto r = simulate(gm, policy::Threshold{sol.k_circ}, cfg);
  std::printf("simulated: D=%.4f +- %.4f, N=%.4f +- %.4f\n", r.d_hat, r.d_se, r.n_hat, r.n_se);
}

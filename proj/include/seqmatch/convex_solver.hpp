#pragma once

#include <vector>

#include "seqmatch/core_types.hpp"

namespace seqmatch::solver {

// One free distribution x_b contributing weight * D(x_b || target) to the
// objective. x_b lives on the support of its target.
struct Block {
  Distribution target;
  double weight;
};

// GJS(x_omega, x_psi, alpha): omega carries the alpha weight.
struct Edge {
  int omega;
  int psi;
};

// minimize sum_b w_b D(x_b || t_b)
// subject to sum_{e in C_k} GJS(x_e.omega, x_e.psi, alpha) <= lambda for every k.
struct Problem {
  std::vector<Block> blocks;
  std::vector<std::vector<Edge>> constraints;
  double alpha = 1.0;
  double lambda = 0.0;
};

struct Options {
  double tau0 = 1.0;
  double tau_growth = 10.0;
  double gap_tol = 1e-10;       // stop once (#constraints) / tau falls below this
  double newton_tol = 1e-12;    // half squared Newton decrement over max(1, tau)
  int max_newton_per_stage = 200;
  int max_stages = 40;
};

struct Result {
  double value = 0.0;
  std::vector<Distribution> x;
  bool converged = false;
  bool no_feasible_start = false;
  int iterations = 0;
};

double objective(const Problem& p, const std::vector<Distribution>& x);
double constraint_value(const Problem& p, std::size_t k, const std::vector<Distribution>& x);

// Log-barrier interior-point Newton method; needs lambda > 0.
Result solve(const Problem& p, const Options& opt = {});

// The lambda = 0 problem: every constraint edge forces equality, so blocks
// joined by edges share one distribution. Solved by Newton's method on the
// shared distributions.
Result solve_equal(const Problem& p, const Options& opt = {});

// Connected components of the blocks under the constraint edges.
std::vector<int> components(const Problem& p, int* count = nullptr);

}  // namespace seqmatch::solver

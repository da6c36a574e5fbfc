#pragma once

#include <vector>

#include "seqmatch/core_types.hpp"

namespace seqmatch {

// All logarithms are natural; values are in nats.

// D(p||q); +inf when p puts mass where q does not.
double kl(const Distribution& p, const Distribution& q);

// alpha D(p||m) + D(q||m) with m = (alpha p + q) / (1 + alpha).
double gjs(const Distribution& p, const Distribution& q, double alpha);
double gjs(const std::vector<double>& p, const std::vector<double>& q, double alpha);

// (1/(gamma-1)) log sum p^gamma q^(1-gamma); gamma == 1 is rejected.
double renyi(const Distribution& p, const Distribution& q, double gamma);

// log((1+alpha) p(x) / (alpha p(x) + q(x))); needs p(x) > 0.
double info_density_1(int x, const Distribution& p, const Distribution& q, double alpha);
// log((1+alpha) q(x) / (alpha p(x) + q(x))); needs q(x) > 0.
double info_density_2(int x, const Distribution& p, const Distribution& q, double alpha);

struct WeightedKlProblem {
  std::vector<Distribution> targets;
  std::vector<double> weights;
};

struct WeightedKlResult {
  double value = 0.0;
  Distribution argmin{1.0};
  bool empty_support = false;  // no common support; value is +inf
};

// min over Psi of sum_i w_i D(Psi || R_i), solved by the normalized weighted
// geometric mean of the targets.
WeightedKlResult min_weighted_kl(const WeightedKlProblem& problem);

}  // namespace seqmatch

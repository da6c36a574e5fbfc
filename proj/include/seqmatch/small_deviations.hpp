#pragma once

#include <cstdint>
#include <vector>

#include "seqmatch/core_types.hpp"
#include "seqmatch/exponents.hpp"
#include "seqmatch/hypothesis_space.hpp"
#include "seqmatch/mvn.hpp"

namespace seqmatch {

// Exact covariance of the second-order fluctuations of the scores of t1 and
// t2: alpha Cov(i1, i1) over pairs sharing a first index plus Cov(i2, i2)
// over pairs sharing a second index, by summation over the alphabet.
double covariance_entry(const DistList& P, const DistList& Q, const MatchHypothesis& t1, const MatchHypothesis& t2,
                        double alpha);
Matrix covariance_matrix(const DistList& P, const DistList& Q, const HypothesisSpace& space,
                         const std::vector<long>& indices, double alpha);

inline constexpr double kDefaultTieTolerance = 1e-9;

// Hypotheses t != l whose population score is within rel_tol (relative) of
// Lambda_l, ascending.
std::vector<long> tie_set(const DistList& P, const DistList& Q, const HypothesisSpace& space, long l, double alpha,
                          double rel_tol = kDefaultTieTolerance);

struct NuResult {
  double value = 0.0;
  bool psd_projected = false;
};

// inf{L : Phi(L 1; 0, V) >= 1 - epsilon}, by bisection to 1e-8.
NuResult nu_star(const Matrix& V, double epsilon);
// Lambda_l - nu / sqrt(n).
double chi_star(double big_lambda, double nu, std::int64_t n);

struct SmallDevAnalysis {
  double big_lambda = 0.0;
  std::vector<long> tie_set;
  int tau = 0;
  Matrix cov_matrix;
  double nu_star = 0.0;
  double chi_star = 0.0;
  std::int64_t n = 0;
  double epsilon = 0.0;
  bool psd_projected = false;
};

SmallDevAnalysis analyze_small_deviations(const DistList& P, const DistList& Q, const HypothesisSpace& space, long l,
                                          double alpha, double epsilon, std::int64_t n,
                                          double tie_rel_tol = kDefaultTieTolerance);

struct ConverseSlack {
  double delta = 0.0;
  double lambda_tilde = 0.0;
  bool negative = false;  // lambda_tilde < 0
};

// delta = M1 |X| log(N+1)/N + M2 |X| log(n+1)/n; lambda_tilde = lambda - delta - log(n)/n.
ConverseSlack converse_slack(std::int64_t n, std::int64_t N, int M1, int M2, int alphabet_size, double lambda);

}  // namespace seqmatch

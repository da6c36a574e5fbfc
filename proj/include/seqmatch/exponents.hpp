#pragma once

#include <vector>

#include "seqmatch/convex_solver.hpp"
#include "seqmatch/core_types.hpp"
#include "seqmatch/hypothesis_space.hpp"

namespace seqmatch {

using DistList = std::vector<Distribution>;

// Throws InputError unless P_i == Q_sigma(i) (within 1e-12) on every matched pair.
void check_consistent(const DistList& P, const DistList& Q, const MatchHypothesis& h);
// Index of the lowest hypothesis consistent with (P, Q), or -1.
long consistent_hypothesis(const DistList& P, const DistList& Q, const HypothesisSpace& space, double tol = 1e-12);

// Population score sum_{(i,j) in M_t} GJS(P_i, Q_j, alpha).
double population_score(const DistList& P, const DistList& Q, const MatchHypothesis& h, double alpha);

// sum_i alpha D(Omega_i||P_i) + sum_{j in B} D(Psi_j||P_{sigma^-1(j)}) + sum_{j not in B} D(Psi_j||Q_j)
double e_l(const DistList& P, const DistList& Q, const MatchHypothesis& h_l, const DistList& Omega,
           const DistList& Psi, double alpha);

struct LambdaResult {
  double value = 0.0;  // +inf when the space holds a single hypothesis
  long argmin = -1;
  bool single_hypothesis = false;
};

// min over t != l of the population score of hypothesis t.
LambdaResult lambda_l(const DistList& P, const DistList& Q, const HypothesisSpace& space, long l, double alpha);

struct ExponentSolution {
  double value = 0.0;
  DistList argmin_omegas;
  DistList argmin_psis;
  long active_t = -1;
  long active_s = -1;
  bool converged = true;
  bool infinite = false;
  int iterations = 0;
  double max_violation = 0.0;  // constraint excess at the returned argmin
};

struct ExponentOptions {
  solver::Options solver;
  double feasibility_tol = 1e-7;
};

// False-reject exponent: min over t < s of min E_l subject to G_t <= lambda and G_s <= lambda.
ExponentSolution f_l(const DistList& P, const DistList& Q, const HypothesisSpace& space, long l, double lambda,
                     double alpha, const ExponentOptions& opt = {});

// The lambda = 0 value of f_l in closed form: per (t, s) the union graph of
// the two match sets splits into components, each collapsing to one
// weighted geometric mean.
double upsilon_l(const DistList& P, const DistList& Q, const HypothesisSpace& space, long l, double alpha);
// The per-column f_j / g_j sum. Agrees with upsilon_l when no first-database
// index links to two different second-database indices across M_t and M_s.
double upsilon_l_per_column(const DistList& P, const DistList& Q, const HypothesisSpace& space, long l, double alpha);

// Unknown-K exponent over unmatched pairs (all pairs when h_l is null):
// min_{(i,j)} min_{GJS(Omega,Psi) <= lambda1} alpha D(Omega||P_i) + D(Psi||Q_j). +inf when no pair is eligible.
ExponentSolution f_lK(const DistList& P, const DistList& Q, const MatchHypothesis* h_l, double lambda1, double alpha,
                      const ExponentOptions& opt = {});
inline ExponentSolution f_0(const DistList& P, const DistList& Q, double lambda1, double alpha,
                            const ExponentOptions& opt = {}) {
  return f_lK(P, Q, nullptr, lambda1, alpha, opt);
}

// min GJS(P_i, Q_j) over unmatched (all, when h_l is null) pairs; +inf if none.
double g_min(const DistList& P, const DistList& Q, const MatchHypothesis* h_l, double alpha);

struct Theorem4Exponents {
  double mismatch_exp = 0.0;
  double false_reject_exp = 0.0;
  double false_alarm_exp = 0.0;
};

// mismatch >= min{l1, l2, f_lK(l1)}, false reject >= min{l1, f_lK(l1), F_l(l2)}, false alarm >= f_0(l1).
Theorem4Exponents theorem4_exponents(const DistList& P, const DistList& Q, const HypothesisSpace& space, long l,
                                     double lambda1, double lambda2, double alpha, const ExponentOptions& opt = {});

// min over j of the K=1 false-reject exponent against Q_j alone.
double simple_test_floor(const DistList& P, const DistList& Q, const HypothesisSpace& space, long l, double lambda,
                         double alpha, const ExponentOptions& opt = {});

}  // namespace seqmatch

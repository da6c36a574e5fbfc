#include "seqmatch/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "seqmatch/divergences.hpp"
#include "seqmatch/errors.hpp"

namespace seqmatch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool same(const Distribution& a, const Distribution& b, double tol) {
  if (a.size() != b.size()) return false;
  for (int x = 0; x < a.size(); ++x)
    if (std::abs(a[x] - b[x]) > tol) return false;
  return true;
}

void check_lists(const DistList& P, const DistList& Q, int M1, int M2) {
  if (static_cast<int>(P.size()) != M1 || static_cast<int>(Q.size()) != M2)
    throw InputError("distribution lists do not match the hypothesis space dimensions");
  const int k = P.front().size();
  for (const auto& d : P)
    if (d.size() != k) throw InputError("distributions over different alphabets");
  for (const auto& d : Q)
    if (d.size() != k) throw InputError("distributions over different alphabets");
}

// Target of the objective term for Psi_j under hypothesis l.
const Distribution& psi_target(const DistList& P, const DistList& Q, const MatchHypothesis& h_l, int j) {
  const int i = h_l.sigma_inverse(j);
  return i >= 0 ? P[i] : Q[j];
}

// Free blocks for a set of constraint hypotheses: Omega_i for each i and
// Psi_j for each j touched by any of them.
struct Subproblem {
  solver::Problem prob;
  std::vector<int> omega_of;  // block -> i or -1
  std::vector<int> psi_of;    // block -> j or -1
};

Subproblem build(const DistList& P, const DistList& Q, const MatchHypothesis& h_l,
                 const std::vector<const MatchHypothesis*>& cons, double alpha, double lambda) {
  Subproblem sp;
  sp.prob.alpha = alpha;
  sp.prob.lambda = lambda;
  std::map<int, int> ob, pb;
  auto omega = [&](int i) {
    auto [it, fresh] = ob.emplace(i, static_cast<int>(sp.prob.blocks.size()));
    if (fresh) {
      sp.prob.blocks.push_back({P[i], alpha});
      sp.omega_of.push_back(i);
      sp.psi_of.push_back(-1);
    }
    return it->second;
  };
  auto psi = [&](int j) {
    auto [it, fresh] = pb.emplace(j, static_cast<int>(sp.prob.blocks.size()));
    if (fresh) {
      sp.prob.blocks.push_back({psi_target(P, Q, h_l, j), 1.0});
      sp.omega_of.push_back(-1);
      sp.psi_of.push_back(j);
    }
    return it->second;
  };
  for (const auto* h : cons) {
    std::vector<solver::Edge> edges;
    for (const auto& [i, j] : h->pairs()) {
      const int a = omega(i);
      const int b = psi(j);
      edges.push_back({a, b});
    }
    sp.prob.constraints.push_back(std::move(edges));
  }
  return sp;
}

void scatter(const Subproblem& sp, const std::vector<Distribution>& x, DistList& Omega, DistList& Psi) {
  for (std::size_t b = 0; b < x.size(); ++b) {
    if (sp.omega_of[b] >= 0) Omega[sp.omega_of[b]] = x[b];
    if (sp.psi_of[b] >= 0) Psi[sp.psi_of[b]] = x[b];
  }
}

}  // namespace

void check_consistent(const DistList& P, const DistList& Q, const MatchHypothesis& h) {
  h.check_bounds(static_cast<int>(P.size()), static_cast<int>(Q.size()));
  for (const auto& [i, j] : h.pairs())
    if (!same(P[i], Q[j], 1e-12))
      throw InputError("distributions are not consistent with the hypothesis: P_" + std::to_string(i) +
                       " != Q_" + std::to_string(j));
}

long consistent_hypothesis(const DistList& P, const DistList& Q, const HypothesisSpace& space, double tol) {
  for (std::size_t l = 0; l < space.size(); ++l) {
    bool ok = true;
    for (const auto& [i, j] : space[l].pairs()) ok = ok && same(P[i], Q[j], tol);
    if (ok) return static_cast<long>(l);
  }
  return -1;
}

double population_score(const DistList& P, const DistList& Q, const MatchHypothesis& h, double alpha) {
  double s = 0.0;
  for (const auto& [i, j] : h.pairs()) s += gjs(P[i], Q[j], alpha);
  return s;
}

double e_l(const DistList& P, const DistList& Q, const MatchHypothesis& h_l, const DistList& Omega,
           const DistList& Psi, double alpha) {
  if (Omega.size() != P.size() || Psi.size() != Q.size()) throw InputError("argument lists have wrong lengths");
  double v = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i) v += alpha * kl(Omega[i], P[i]);
  for (std::size_t j = 0; j < Q.size(); ++j) v += kl(Psi[j], psi_target(P, Q, h_l, static_cast<int>(j)));
  return v;
}

LambdaResult lambda_l(const DistList& P, const DistList& Q, const HypothesisSpace& space, long l, double alpha) {
  check_lists(P, Q, space.M1(), space.M2());
  if (l < 0 || static_cast<std::size_t>(l) >= space.size()) throw InputError("hypothesis index out of range");
  LambdaResult r;
  r.value = kInf;
  r.single_hypothesis = space.size() == 1;
  for (std::size_t t = 0; t < space.size(); ++t) {
    if (static_cast<long>(t) == l) continue;
    const double g = population_score(P, Q, space[t], alpha);
    if (g < r.value) {
      r.value = g;
      r.argmin = static_cast<long>(t);
    }
  }
  return r;
}

ExponentSolution f_l(const DistList& P, const DistList& Q, const HypothesisSpace& space, long l, double lambda,
                     double alpha, const ExponentOptions& opt) {
  check_lists(P, Q, space.M1(), space.M2());
  if (l < 0 || static_cast<std::size_t>(l) >= space.size()) throw InputError("hypothesis index out of range");
  if (!(lambda >= 0.0)) throw InputError("lambda must be non-negative");
  const MatchHypothesis& hl = space[static_cast<std::size_t>(l)];
  check_consistent(P, Q, hl);

  ExponentSolution best;
  best.value = kInf;
  best.infinite = true;
  best.converged = true;
  if (space.size() < 2) {
    best.argmin_omegas = P;
    best.argmin_psis = Q;
    return best;
  }
  const std::size_t T = space.size();
  for (std::size_t t = 0; t < T && best.value > 0.0; ++t)
    for (std::size_t s = t + 1; s < T && best.value > 0.0; ++s) {
      Subproblem sp = build(P, Q, hl, {&space[t], &space[s]}, alpha, lambda);
      solver::Result r = lambda > 0.0 ? solver::solve(sp.prob, opt.solver) : solver::solve_equal(sp.prob, opt.solver);
      best.iterations += r.iterations;
      if (!r.converged && std::isfinite(r.value)) best.converged = false;
      if (!std::isfinite(r.value)) continue;

      // Certify through the full objective and constraint functions.
      DistList Omega = P, Psi = Q;
      for (std::size_t j = 0; j < Q.size(); ++j) Psi[j] = psi_target(P, Q, hl, static_cast<int>(j));
      scatter(sp, r.x, Omega, Psi);
      const double value = e_l(P, Q, hl, Omega, Psi, alpha);
      const double viol = std::max({0.0, population_score(Omega, Psi, space[t], alpha) - lambda,
                                    population_score(Omega, Psi, space[s], alpha) - lambda});
      if (value < best.value) {
        best.value = value;
        best.infinite = false;
        best.argmin_omegas = std::move(Omega);
        best.argmin_psis = std::move(Psi);
        best.active_t = static_cast<long>(t);
        best.active_s = static_cast<long>(s);
        best.max_violation = viol;
      }
    }
  if (best.max_violation > opt.feasibility_tol) best.converged = false;
  return best;
}

double upsilon_l(const DistList& P, const DistList& Q, const HypothesisSpace& space, long l, double alpha) {
  check_lists(P, Q, space.M1(), space.M2());
  const MatchHypothesis& hl = space[static_cast<std::size_t>(l)];
  check_consistent(P, Q, hl);
  double best = kInf;
  for (std::size_t t = 0; t < space.size(); ++t)
    for (std::size_t s = t + 1; s < space.size(); ++s) {
      Subproblem sp = build(P, Q, hl, {&space[t], &space[s]}, alpha, 0.0);
      int C = 0;
      const auto comp = solver::components(sp.prob, &C);
      double v = 0.0;
      for (int c = 0; c < C && std::isfinite(v); ++c) {
        WeightedKlProblem wk;
        for (std::size_t b = 0; b < comp.size(); ++b)
          if (comp[b] == c) {
            wk.targets.push_back(sp.prob.blocks[b].target);
            wk.weights.push_back(sp.prob.blocks[b].weight);
          }
        v += min_weighted_kl(wk).value;
      }
      best = std::min(best, v);
    }
  return best;
}

double upsilon_l_per_column(const DistList& P, const DistList& Q, const HypothesisSpace& space, long l,
                            double alpha) {
  check_lists(P, Q, space.M1(), space.M2());
  const MatchHypothesis& hl = space[static_cast<std::size_t>(l)];
  double best = kInf;
  for (std::size_t t = 0; t < space.size(); ++t)
    for (std::size_t s = t + 1; s < space.size(); ++s) {
      const auto& ht = space[t];
      const auto& hs = space[s];
      double v = 0.0;
      for (int j = 0; j < space.M2(); ++j) {
        std::vector<int> is;
        for (int i = 0; i < space.M1(); ++i)
          if (ht.sigma(i) == j || hs.sigma(i) == j) is.push_back(i);
        if (is.empty()) continue;
        WeightedKlProblem wk;
        wk.targets.push_back(psi_target(P, Q, hl, j));
        wk.weights.push_back(1.0);
        for (int i : is) {
          wk.targets.push_back(P[i]);
          wk.weights.push_back(alpha);
        }
        v += min_weighted_kl(wk).value;
      }
      best = std::min(best, v);
    }
  return best;
}

ExponentSolution f_lK(const DistList& P, const DistList& Q, const MatchHypothesis* h_l, double lambda1, double alpha,
                      const ExponentOptions& opt) {
  if (P.empty() || Q.empty()) throw InputError("distribution lists must be non-empty");
  if (!(lambda1 >= 0.0)) throw InputError("lambda1 must be non-negative");
  if (h_l) check_consistent(P, Q, *h_l);
  const std::vector<int> A = h_l ? h_l->A() : std::vector<int>{};
  const std::vector<int> B = h_l ? h_l->B() : std::vector<int>{};
  ExponentSolution best;
  best.value = kInf;
  best.infinite = true;
  for (int i = 0; i < static_cast<int>(P.size()); ++i) {
    if (std::find(A.begin(), A.end(), i) != A.end()) continue;
    for (int j = 0; j < static_cast<int>(Q.size()); ++j) {
      if (std::find(B.begin(), B.end(), j) != B.end()) continue;
      solver::Problem prob;
      prob.alpha = alpha;
      prob.lambda = lambda1;
      prob.blocks = {{P[i], alpha}, {Q[j], 1.0}};
      prob.constraints = {{{0, 1}}};
      solver::Result r = lambda1 > 0.0 ? solver::solve(prob, opt.solver) : solver::solve_equal(prob, opt.solver);
      best.iterations += r.iterations;
      if (!std::isfinite(r.value)) continue;
      const double value = alpha * kl(r.x[0], P[i]) + kl(r.x[1], Q[j]);
      if (value < best.value) {
        best.value = value;
        best.infinite = false;
        best.converged = r.converged;
        best.argmin_omegas = {r.x[0]};
        best.argmin_psis = {r.x[1]};
        best.active_t = i;
        best.active_s = j;
        best.max_violation = std::max(0.0, gjs(r.x[0], r.x[1], alpha) - lambda1);
      }
    }
  }
  if (best.max_violation > opt.feasibility_tol) best.converged = false;
  return best;
}

double g_min(const DistList& P, const DistList& Q, const MatchHypothesis* h_l, double alpha) {
  const std::vector<int> A = h_l ? h_l->A() : std::vector<int>{};
  const std::vector<int> B = h_l ? h_l->B() : std::vector<int>{};
  double best = kInf;
  for (int i = 0; i < static_cast<int>(P.size()); ++i) {
    if (std::find(A.begin(), A.end(), i) != A.end()) continue;
    for (int j = 0; j < static_cast<int>(Q.size()); ++j) {
      if (std::find(B.begin(), B.end(), j) != B.end()) continue;
      best = std::min(best, gjs(P[i], Q[j], alpha));
    }
  }
  return best;
}

Theorem4Exponents theorem4_exponents(const DistList& P, const DistList& Q, const HypothesisSpace& space, long l,
                                     double lambda1, double lambda2, double alpha, const ExponentOptions& opt) {
  const MatchHypothesis& hl = space[static_cast<std::size_t>(l)];
  const double flk = f_lK(P, Q, &hl, lambda1, alpha, opt).value;
  const double Fl = f_l(P, Q, space, l, lambda2, alpha, opt).value;
  Theorem4Exponents r;
  r.mismatch_exp = std::min({lambda1, lambda2, flk});
  r.false_reject_exp = std::min({lambda1, flk, Fl});
  r.false_alarm_exp = f_0(P, Q, lambda1, alpha, opt).value;
  return r;
}

double simple_test_floor(const DistList& P, const DistList& Q, const HypothesisSpace& space, long l, double lambda,
                         double alpha, const ExponentOptions& opt) {
  if (space.K() != space.M2()) throw InputError("the simple test needs K = M2");
  const MatchHypothesis& hl = space[static_cast<std::size_t>(l)];
  check_consistent(P, Q, hl);
  const HypothesisSpace single(space.M1(), 1, 1);
  double best = kInf;
  for (int j = 0; j < space.M2(); ++j) {
    const MatchHypothesis hj({{hl.sigma_inverse(j), 0}});
    const long lj = single.index_of(hj);
    best = std::min(best, f_l(P, DistList{Q[j]}, single, lj, lambda, alpha, opt).value);
  }
  return best;
}

}  // namespace seqmatch

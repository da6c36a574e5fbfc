#include "seqmatch/small_deviations.hpp"

#include <cmath>
#include <limits>

#include "seqmatch/divergences.hpp"
#include "seqmatch/errors.hpp"

namespace seqmatch {

namespace {

// Cov(f(X), g(X)) for X ~ w, over the support of w.
template <class F, class G>
double cov_under(const Distribution& w, F f, G g) {
  double ef = 0.0, eg = 0.0;
  for (int x = 0; x < w.size(); ++x)
    if (w[x] > 0.0) {
      ef += w[x] * f(x);
      eg += w[x] * g(x);
    }
  double c = 0.0;
  for (int x = 0; x < w.size(); ++x)
    if (w[x] > 0.0) c += w[x] * (f(x) - ef) * (g(x) - eg);
  return c;
}

}  // namespace

double covariance_entry(const DistList& P, const DistList& Q, const MatchHypothesis& t1, const MatchHypothesis& t2,
                        double alpha) {
  // Canonical argument order makes the entry exactly symmetric.
  const MatchHypothesis& a = t2 < t1 ? t2 : t1;
  const MatchHypothesis& b = t2 < t1 ? t1 : t2;
  a.check_bounds(static_cast<int>(P.size()), static_cast<int>(Q.size()));
  b.check_bounds(static_cast<int>(P.size()), static_cast<int>(Q.size()));
  double v = 0.0;
  for (const auto& [i, j] : a.pairs())
    for (const auto& [ib, jb] : b.pairs()) {
      if (ib == i) {
        v += alpha * cov_under(
                         P[i], [&](int x) { return info_density_1(x, P[i], Q[j], alpha); },
                         [&](int x) { return info_density_1(x, P[i], Q[jb], alpha); });
      }
      if (jb == j) {
        v += cov_under(
            Q[j], [&](int y) { return info_density_2(y, P[i], Q[j], alpha); },
            [&](int y) { return info_density_2(y, P[ib], Q[j], alpha); });
      }
    }
  return v;
}

Matrix covariance_matrix(const DistList& P, const DistList& Q, const HypothesisSpace& space,
                         const std::vector<long>& indices, double alpha) {
  const std::size_t d = indices.size();
  Matrix V(d, std::vector<double>(d, 0.0));
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = r; c < d; ++c) {
      V[r][c] = covariance_entry(P, Q, space[static_cast<std::size_t>(indices[r])],
                                 space[static_cast<std::size_t>(indices[c])], alpha);
      V[c][r] = V[r][c];
    }
  return V;
}

std::vector<long> tie_set(const DistList& P, const DistList& Q, const HypothesisSpace& space, long l, double alpha,
                          double rel_tol) {
  const LambdaResult lam = lambda_l(P, Q, space, l, alpha);
  std::vector<long> out;
  if (lam.single_hypothesis) return out;
  const double tol = rel_tol * std::abs(lam.value);
  for (std::size_t t = 0; t < space.size(); ++t) {
    if (static_cast<long>(t) == l) continue;
    if (std::abs(population_score(P, Q, space[t], alpha) - lam.value) <= tol || static_cast<long>(t) == lam.argmin)
      out.push_back(static_cast<long>(t));
  }
  return out;
}

NuResult nu_star(const Matrix& V, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0, 1)");
  const std::size_t d = V.size();
  if (d == 0) throw InputError("nu_star needs a non-empty covariance matrix");
  NuResult res;
  const std::vector<double> zero(d, 0.0);
  double smax = 0.0;
  for (std::size_t i = 0; i < d; ++i) smax = std::max(smax, std::sqrt(std::max(0.0, V[i][i])));
  const double span = 12.0 * std::max(smax, 1e-5);
  auto F = [&](double L) {
    const MvnResult r = mvn_cdf(std::vector<double>(d, L), zero, V);
    res.psd_projected = res.psd_projected || r.psd_projected;
    return r.prob;
  };
  double lo = -span, hi = span;
  const double target = 1.0 - epsilon;
  if (F(lo) >= target || F(hi) < target) throw NumericError("nu_star bisection could not bracket the quantile");
  while (hi - lo > 1e-8 * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (F(mid) >= target)
      hi = mid;
    else
      lo = mid;
  }
  res.value = hi;
  return res;
}

double chi_star(double big_lambda, double nu, std::int64_t n) {
  if (n < 1) throw InputError("n must be positive");
  return big_lambda - nu / std::sqrt(static_cast<double>(n));
}

SmallDevAnalysis analyze_small_deviations(const DistList& P, const DistList& Q, const HypothesisSpace& space, long l,
                                          double alpha, double epsilon, std::int64_t n, double tie_rel_tol) {
  SmallDevAnalysis a;
  a.n = n;
  a.epsilon = epsilon;
  const LambdaResult lam = lambda_l(P, Q, space, l, alpha);
  if (lam.single_hypothesis) throw InputError("second-order analysis needs at least two hypotheses");
  a.big_lambda = lam.value;
  a.tie_set = tie_set(P, Q, space, l, alpha, tie_rel_tol);
  a.tau = static_cast<int>(a.tie_set.size());
  a.cov_matrix = covariance_matrix(P, Q, space, a.tie_set, alpha);
  const NuResult nu = nu_star(a.cov_matrix, epsilon);
  a.nu_star = nu.value;
  a.psd_projected = nu.psd_projected;
  a.chi_star = chi_star(a.big_lambda, a.nu_star, n);
  return a;
}

ConverseSlack converse_slack(std::int64_t n, std::int64_t N, int M1, int M2, int alphabet_size, double lambda) {
  if (n < 1 || N < 1) throw InputError("n and N must be positive");
  const double nd = static_cast<double>(n), Nd = static_cast<double>(N);
  ConverseSlack s;
  s.delta = M1 * alphabet_size * std::log(Nd + 1.0) / Nd + M2 * alphabet_size * std::log(nd + 1.0) / nd;
  s.lambda_tilde = lambda - s.delta - std::log(nd) / nd;
  s.negative = s.lambda_tilde < 0.0;
  return s;
}

}  // namespace seqmatch

#include "seqmatch/glrt.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "seqmatch/errors.hpp"
#include "seqmatch/kernels.hpp"

namespace seqmatch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct MinPair {
  double min = kInf;
  double second = kInf;
  long index = -1;
};

// Lowest index wins ties; second is the smallest score over t != index.
template <class ScoreAt>
MinPair two_smallest(std::size_t T, ScoreAt score_at, std::vector<double>* keep) {
  MinPair r;
  if (keep) keep->resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    const double s = score_at(t);
    if (keep) (*keep)[t] = s;
    if (s < r.min) {
      r.second = r.min;
      r.min = s;
      r.index = static_cast<long>(t);
    } else if (s < r.second) {
      r.second = s;
    }
  }
  return r;
}

TestContext context_of(const Database& x_db, const Database& y_db, double alpha) {
  if (!(x_db.alphabet() == y_db.alphabet())) throw InputError("databases use different alphabets");
  return TestContext{y_db.alphabet().size(), static_cast<std::int64_t>(y_db.seq_len()), alpha};
}

double threshold_for(double lambda, int K, const TestContext& ctx, bool corrected) {
  return corrected ? effective_threshold(lambda, K, ctx.alphabet_size, ctx.n, ctx.alpha) : lambda;
}

}  // namespace

GjsMatrix gjs_matrix(const std::vector<Distribution>& x, const std::vector<Distribution>& y, double alpha) {
  if (x.empty() || y.empty()) throw InputError("both databases must be non-empty");
  const int k = x.front().size();
  for (const auto& d : x)
    if (d.size() != k) throw InputError("types over different alphabets");
  for (const auto& d : y)
    if (d.size() != k) throw InputError("types over different alphabets");
  const int M1 = static_cast<int>(x.size()), M2 = static_cast<int>(y.size());
  const std::size_t m = static_cast<std::size_t>(M1) * M2;
  std::vector<double> p(static_cast<std::size_t>(k) * m), q(static_cast<std::size_t>(k) * m), out(m);
  for (int i = 0; i < M1; ++i)
    for (int j = 0; j < M2; ++j) {
      const std::size_t r = static_cast<std::size_t>(i) * M2 + j;
      for (int a = 0; a < k; ++a) {
        p[static_cast<std::size_t>(a) * m + r] = x[i][a];
        q[static_cast<std::size_t>(a) * m + r] = y[j][a];
      }
    }
  kernels::gjs_batch(p.data(), q.data(), m, k, alpha, out.data());
  GjsMatrix g(M1, M2);
  for (int i = 0; i < M1; ++i)
    for (int j = 0; j < M2; ++j) g(i, j) = std::max(0.0, out[static_cast<std::size_t>(i) * M2 + j]);
  return g;
}

GjsMatrix gjs_matrix(const Database& x_db, const Database& y_db, double alpha) {
  std::vector<Distribution> x, y;
  for (const auto& t : x_db.types()) x.push_back(t.as_distribution());
  for (const auto& t : y_db.types()) y.push_back(t.as_distribution());
  return gjs_matrix(x, y, alpha);
}

double score(const GjsMatrix& g, const MatchHypothesis& h) {
  double s = 0.0;
  for (const auto& [i, j] : h.pairs()) s += g(i, j);
  return s;
}

double score(const Database& x_db, const Database& y_db, const MatchHypothesis& h, double alpha) {
  h.check_bounds(static_cast<int>(x_db.count()), static_cast<int>(y_db.count()));
  return score(gjs_matrix(x_db, y_db, alpha), h);
}

double effective_threshold(double lambda, int K, int alphabet_size, std::int64_t n, double alpha) {
  if (n < 1) throw InputError("n must be positive");
  const double nd = static_cast<double>(n);
  return lambda + K * alphabet_size * std::log1p((1.0 + alpha) * nd) / nd;
}

void validate(const TestConfig& cfg) {
  for (double v : {cfg.lambda, cfg.lambda1, cfg.lambda2})
    if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("thresholds must be finite and non-negative");
  if (cfg.K && *cfg.K < 1) throw InputError("K must be positive");
  if (cfg.threshold_k == ThresholdK::fixed && cfg.fixed_k < 1) throw InputError("fixed threshold K must be positive");
}

Verdict unnikrishnan_test(const GjsMatrix& g, const HypothesisSpace& space, const TestContext& ctx,
                          const TestConfig& cfg) {
  Verdict v;
  auto& d = v.diagnostics;
  const auto& H = space.hypotheses();
  const MinPair mp = two_smallest(H.size(), [&](std::size_t t) { return score(g, H[t]); },
                                  cfg.keep_scores ? &d.scores : nullptr);
  d.min_score = mp.min;
  d.second_min_score = mp.second;
  d.min_index = mp.index;
  d.single_hypothesis = H.size() == 1;
  d.threshold = threshold_for(cfg.lambda, space.K(), ctx, cfg.rate_correction);
  if (mp.second > d.threshold) {
    v.decision = Decision::match;
    v.hypothesis = H[static_cast<std::size_t>(mp.index)];
    v.K = space.K();
  }
  return v;
}

Verdict unnikrishnan_test(const Database& x_db, const Database& y_db, int K, double lambda, double alpha,
                          const TestConfig& extra) {
  TestConfig cfg = extra;
  cfg.lambda = lambda;
  cfg.K = K;
  validate(cfg);
  HypothesisSpace space(static_cast<int>(x_db.count()), static_cast<int>(y_db.count()), K);
  return unnikrishnan_test(gjs_matrix(x_db, y_db, alpha), space, context_of(x_db, y_db, alpha), cfg);
}

Verdict simple_test(const GjsMatrix& g, const HypothesisSpace& single, const TestContext& ctx, const TestConfig& cfg) {
  if (single.K() != 1 || single.M2() != 1 || single.M1() != g.M1())
    throw InputError("simple test needs the K=1 space over the first database");
  Verdict v;
  auto& d = v.diagnostics;
  d.threshold = threshold_for(cfg.lambda, 1, ctx, cfg.rate_correction);
  d.single_hypothesis = g.M1() == 1;
  d.min_score = kInf;
  d.second_min_score = kInf;
  std::vector<IndexPair> pairs;
  std::vector<bool> taken(static_cast<std::size_t>(g.M1()), false);
  bool reject = false;
  for (int j = 0; j < g.M2(); ++j) {
    const MinPair mp = two_smallest(static_cast<std::size_t>(g.M1()), [&](std::size_t i) {
      return g(static_cast<int>(i), j);
    }, nullptr);
    // Report the weakest per-column evidence.
    if (mp.second < d.second_min_score) {
      d.second_min_score = mp.second;
      d.min_score = mp.min;
      d.min_index = j;
    }
    if (!(mp.second > d.threshold)) {
      reject = true;
      continue;
    }
    const int i = static_cast<int>(mp.index);
    if (taken[i]) d.inconsistent_assignment = true;
    taken[i] = true;
    pairs.emplace_back(i, j);
  }
  if (!reject && !d.inconsistent_assignment) {
    v.decision = Decision::match;
    v.hypothesis = MatchHypothesis(pairs);
    v.K = g.M2();
  }
  return v;
}

Verdict simple_test(const Database& x_db, const Database& y_db, double lambda, double alpha, const TestConfig& extra) {
  TestConfig cfg = extra;
  cfg.lambda = lambda;
  validate(cfg);
  HypothesisSpace single(static_cast<int>(x_db.count()), 1, 1);
  return simple_test(gjs_matrix(x_db, y_db, alpha), single, context_of(x_db, y_db, alpha), cfg);
}

Verdict two_phase_test(const GjsMatrix& g, const FullHypothesisSpace& full, const TestContext& ctx,
                       const TestConfig& cfg) {
  if (full.M1() != g.M1() || full.M2() != g.M2()) throw InputError("hypothesis space does not match the databases");
  double weakest = kInf;
  for (int Khat = g.M2(); Khat >= 1; --Khat) {
    const HypothesisSpace& space = full.at(Khat);
    int kthr = Khat;
    if (cfg.threshold_k == ThresholdK::m2) kthr = g.M2();
    if (cfg.threshold_k == ThresholdK::fixed) kthr = cfg.fixed_k;
    double smin = kInf;
    for (const auto& h : space.hypotheses()) smin = std::min(smin, score(g, h));
    weakest = std::min(weakest, smin);
    const double t1 = cfg.rate_correction ? effective_threshold(cfg.lambda1, kthr, ctx.alphabet_size, ctx.n, ctx.alpha)
                                          : cfg.lambda1;
    if (smin > t1) continue;
    // Phase two: the known-K test at the estimated count.
    TestConfig inner = cfg;
    inner.rate_correction = false;
    inner.lambda = cfg.rate_correction ? effective_threshold(cfg.lambda2, kthr, ctx.alphabet_size, ctx.n, ctx.alpha)
                                       : cfg.lambda2;
    Verdict v = unnikrishnan_test(g, space, ctx, inner);
    v.diagnostics.estimated_K = Khat;
    return v;
  }
  Verdict v;
  v.diagnostics.estimated_K = 0;
  v.diagnostics.min_score = weakest;
  v.diagnostics.second_min_score = kInf;
  v.diagnostics.threshold = cfg.lambda1;
  return v;
}

Verdict two_phase_test(const Database& x_db, const Database& y_db, double lambda1, double lambda2, double alpha,
                       const TestConfig& extra) {
  TestConfig cfg = extra;
  cfg.lambda1 = lambda1;
  cfg.lambda2 = lambda2;
  validate(cfg);
  FullHypothesisSpace full(static_cast<int>(x_db.count()), static_cast<int>(y_db.count()));
  return two_phase_test(gjs_matrix(x_db, y_db, alpha), full, context_of(x_db, y_db, alpha), cfg);
}

}  // namespace seqmatch

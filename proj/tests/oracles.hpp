#pragma once

// Reference solutions for binary-alphabet exponent problems, built from
// one-dimensional searches only. They share no code with the library solver.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "seqmatch/convex_solver.hpp"
#include "test_util.hpp"

namespace oracle {

inline constexpr double kEdge = 1e-12;

// Minimizer of a convex function on [lo, hi].
inline double golden(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  const double r = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi, c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int k = 0; k < iters && b - a > 1e-15; ++k) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

// Coarse scan then golden refinement of a convex function on [lo, hi].
inline double scan_min(const std::function<double(double)>& f, double lo, double hi, int cells = 1000) {
  double best = std::numeric_limits<double>::infinity();
  int arg = 0;
  for (int c = 0; c <= cells; ++c) {
    const double v = f(lo + (hi - lo) * c / cells);
    if (v < best) best = v, arg = c;
  }
  const double a = lo + (hi - lo) * std::max(0, arg - 1) / cells;
  const double b = lo + (hi - lo) * std::min(cells, arg + 1) / cells;
  return std::min(best, f(golden(f, a, b)));
}

// min alpha D(w || p) over Bernoulli w with GJS(w, psi, alpha) <= lambda.
inline double project_omega(double p, double psi, double lambda, double alpha) {
  if (testutil::gjs2(p, psi, alpha) <= lambda) return 0.0;
  double in = psi, out = p;  // gjs is zero at psi and grows toward p
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (in + out);
    (testutil::gjs2(mid, psi, alpha) <= lambda ? in : out) = mid;
  }
  return alpha * testutil::kl2(in, p);
}

// min D(v || q) over Bernoulli v with GJS(omega, v, alpha) <= lambda.
inline double project_psi(double q, double omega, double lambda, double alpha) {
  if (testutil::gjs2(omega, q, alpha) <= lambda) return 0.0;
  double in = omega, out = q;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (in + out);
    (testutil::gjs2(omega, mid, alpha) <= lambda ? in : out) = mid;
  }
  return testutil::kl2(in, q);
}

// Single pair: min alpha D(W||Bern p) + D(V||Bern q) s.t. GJS(W, V) <= lambda.
inline double pair_exponent(double p, double q, double lambda, double alpha) {
  if (testutil::gjs2(p, q, alpha) <= lambda) return 0.0;
  auto h = [&](double v) { return testutil::kl2(v, q) + project_omega(p, v, lambda, alpha); };
  return scan_min(h, kEdge, 1 - kEdge);
}

// Classification case (M2 = K = 1, Q = Bern(p[l])): false-reject exponent of the
// pair (t, s). Psi is shared by both constraints; each Omega is projected.
inline double classify_pair_exponent(const std::vector<double>& p, int l, int t, int s, double lambda,
                                     double alpha) {
  auto h = [&](double v) {
    return testutil::kl2(v, p[l]) + project_omega(p[t], v, lambda, alpha) + project_omega(p[s], v, lambda, alpha);
  };
  return scan_min(h, kEdge, 1 - kEdge);
}

inline double classify_exponent(const std::vector<double>& p, int l, double lambda, double alpha) {
  double best = std::numeric_limits<double>::infinity();
  const int M = static_cast<int>(p.size());
  for (int t = 0; t < M; ++t)
    for (int s = t + 1; s < M; ++s) best = std::min(best, classify_pair_exponent(p, l, t, s, lambda, alpha));
  return best;
}

// Lagrangian dual of a binary solver::Problem: max over multipliers of the
// unconstrained inner minimum, found by cyclic golden-section coordinate
// searches. Strong duality holds for lambda > 0 (the common-mixture point is
// strictly feasible).
struct DualOracle {
  const seqmatch::solver::Problem& p;

  double lagrangian(const std::vector<double>& th, const std::vector<double>& mu) const {
    double v = 0.0;
    for (std::size_t b = 0; b < p.blocks.size(); ++b) v += p.blocks[b].weight * testutil::kl2(th[b], p.blocks[b].target[1]);
    for (std::size_t k = 0; k < p.constraints.size(); ++k) {
      double g = 0.0;
      for (const auto& e : p.constraints[k]) g += testutil::gjs2(th[e.omega], th[e.psi], p.alpha);
      v += mu[k] * (g - p.lambda);
    }
    return v;
  }

  double inner(const std::vector<double>& mu) const {
    std::vector<double> th(p.blocks.size());
    for (std::size_t b = 0; b < th.size(); ++b) th[b] = p.blocks[b].target[1];
    double prev = lagrangian(th, mu);
    for (int sweep = 0; sweep < 400; ++sweep) {
      for (std::size_t b = 0; b < th.size(); ++b) {
        auto f = [&](double x) {
          const double keep = th[b];
          th[b] = x;
          const double v = lagrangian(th, mu);
          th[b] = keep;
          return v;
        };
        th[b] = golden(f, kEdge, 1 - kEdge);
      }
      const double cur = lagrangian(th, mu);
      if (prev - cur < 1e-15) break;
      prev = cur;
    }
    return lagrangian(th, mu);
  }

  double value() const {
    std::vector<double> mu(p.constraints.size(), 0.0);
    double best = inner(mu);
    for (int cycle = 0; cycle < 12; ++cycle) {
      for (std::size_t k = 0; k < mu.size(); ++k) {
        auto f = [&](double m) {
          auto mm = mu;
          mm[k] = m;
          return -inner(mm);
        };
        mu[k] = golden(f, 0.0, 200.0, 80);
      }
      const double v = inner(mu);
      if (std::abs(v - best) < 1e-12) {
        best = std::max(best, v);
        break;
      }
      best = std::max(best, v);
    }
    return best;
  }
};

}  // namespace oracle

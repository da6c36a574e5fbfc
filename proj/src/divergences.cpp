#include "seqmatch/divergences.hpp"

#include <cmath>
#include <limits>

#include "seqmatch/errors.hpp"

namespace seqmatch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_size(int a, int b) {
  if (a != b) throw InputError("distributions are over alphabets of different size");
}

}  // namespace

double kl(const Distribution& p, const Distribution& q) {
  require_same_size(p.size(), q.size());
  double s = 0.0;
  for (int a = 0; a < p.size(); ++a) {
    if (p[a] <= 0.0) continue;
    if (q[a] <= 0.0) return kInf;
    s += p[a] * std::log(p[a] / q[a]);
  }
  return std::max(s, 0.0);
}

double gjs(const std::vector<double>& p, const std::vector<double>& q, double alpha) {
  require_same_size(static_cast<int>(p.size()), static_cast<int>(q.size()));
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  const double c = 1.0 + alpha;
  double s = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    const double mix = alpha * p[a] + q[a];
    if (p[a] > 0.0) s += alpha * p[a] * std::log(c * p[a] / mix);
    if (q[a] > 0.0) s += q[a] * std::log(c * q[a] / mix);
  }
  return std::max(s, 0.0);
}

double gjs(const Distribution& p, const Distribution& q, double alpha) { return gjs(p.probs(), q.probs(), alpha); }

double renyi(const Distribution& p, const Distribution& q, double gamma) {
  require_same_size(p.size(), q.size());
  if (gamma == 1.0) throw InputError("Renyi order 1 is the KL divergence; call kl()");
  if (!(gamma > 0.0)) throw InputError("Renyi order must be positive");
  double s = 0.0;
  for (int a = 0; a < p.size(); ++a) {
    if (p[a] <= 0.0 || q[a] <= 0.0) {
      if (gamma > 1.0 && p[a] > 0.0) return kInf;
      continue;
    }
    s += std::pow(p[a], gamma) * std::pow(q[a], 1.0 - gamma);
  }
  if (s <= 0.0) return kInf;
  return std::log(s) / (gamma - 1.0);
}

double info_density_1(int x, const Distribution& p, const Distribution& q, double alpha) {
  require_same_size(p.size(), q.size());
  if (x < 0 || x >= p.size()) throw InputError("symbol out of range");
  if (!(p[x] > 0.0)) throw NumericError("first information density undefined where p(x) = 0");
  return std::log((1.0 + alpha) * p[x] / (alpha * p[x] + q[x]));
}

double info_density_2(int x, const Distribution& p, const Distribution& q, double alpha) {
  require_same_size(p.size(), q.size());
  if (x < 0 || x >= p.size()) throw InputError("symbol out of range");
  if (!(q[x] > 0.0)) throw NumericError("second information density undefined where q(x) = 0");
  return std::log((1.0 + alpha) * q[x] / (alpha * p[x] + q[x]));
}

WeightedKlResult min_weighted_kl(const WeightedKlProblem& problem) {
  const auto& R = problem.targets;
  const auto& w = problem.weights;
  if (R.empty() || R.size() != w.size()) throw InputError("weighted KL needs matching non-empty targets and weights");
  double W = 0.0;
  for (double v : w) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError("weighted KL weights must be positive");
    W += v;
  }
  const int k = R.front().size();
  for (const auto& r : R) require_same_size(r.size(), k);

  // Work in logs so products of many small probabilities stay representable.
  std::vector<double> logg(static_cast<std::size_t>(k), 0.0);
  std::vector<bool> live(static_cast<std::size_t>(k), true);
  double mx = -kInf;
  for (int a = 0; a < k; ++a) {
    for (std::size_t i = 0; i < R.size(); ++i) {
      if (R[i][a] <= 0.0) {
        live[a] = false;
        break;
      }
      logg[a] += (w[i] / W) * std::log(R[i][a]);
    }
    if (live[a]) mx = std::max(mx, logg[a]);
  }
  WeightedKlResult out;
  if (mx == -kInf) {
    out.value = kInf;
    out.empty_support = true;
    out.argmin = R.front();
    return out;
  }
  double z = 0.0;
  for (int a = 0; a < k; ++a)
    if (live[a]) z += std::exp(logg[a] - mx);
  std::vector<double> psi(static_cast<std::size_t>(k), 0.0);
  for (int a = 0; a < k; ++a)
    if (live[a]) psi[a] = std::exp(logg[a] - mx) / z;
  out.value = std::max(0.0, -W * (mx + std::log(z)));
  out.argmin = Distribution(std::move(psi));
  return out;
}

}  // namespace seqmatch

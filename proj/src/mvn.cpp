#include "seqmatch/mvn.hpp"

#include <Eigen/Dense>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "seqmatch/errors.hpp"

namespace seqmatch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kRidge = 1e-10;

// P(X > h, Y > k), correlation r (Drezner-Wesolowsky with Genz's refinements).
double bvnu(double h, double k, double r) {
  if (h == kInf || k == kInf) return 0.0;
  if (h == -kInf) return k == -kInf ? 1.0 : normal_cdf(-k);
  if (k == -kInf) return normal_cdf(-h);
  if (r == 0.0) return normal_cdf(-h) * normal_cdf(-k);

  static const std::array<double, 3> w6 = {0.1713244923791705, 0.3607615730481384, 0.4679139345726904};
  static const std::array<double, 3> x6 = {0.9324695142031522, 0.6612093864662647, 0.2386191860831970};
  static const std::array<double, 6> w12 = {0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
                                            0.2031674267230659,  0.2334925365383547, 0.2491470458134029};
  static const std::array<double, 6> x12 = {0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
                                            0.5873179542866171, 0.3678314989981802, 0.1252334085114692};
  static const std::array<double, 10> w20 = {0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                                             0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
                                             0.1316886384491766,  0.1420961093183821,  0.1491729864726037,
                                             0.1527533871307259};
  static const std::array<double, 10> x20 = {0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
                                             0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
                                             0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
                                             0.07652652113349733};
  const double* w;
  const double* x;
  int ng;
  if (std::abs(r) < 0.3) {
    w = w6.data(), x = x6.data(), ng = 3;
  } else if (std::abs(r) < 0.75) {
    w = w12.data(), x = x12.data(), ng = 6;
  } else {
    w = w20.data(), x = x20.data(), ng = 10;
  }
  double hk = h * k;
  double bvn = 0.0;
  if (std::abs(r) < 0.925) {
    const double hs = (h * h + k * k) / 2.0;
    const double asr = std::asin(r) / 2.0;
    for (int i = 0; i < ng; ++i)
      for (double sgn : {-1.0, 1.0}) {
        const double sn = std::sin(asr * (1.0 + sgn * x[i]));
        bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      }
    bvn = bvn * asr / kTwoPi + normal_cdf(-h) * normal_cdf(-k);
  } else {
    if (r < 0.0) {
      k = -k;
      hk = -hk;
    }
    if (std::abs(r) < 1.0) {
      const double as = 1.0 - r * r;
      double a = std::sqrt(as);
      const double bs = (h - k) * (h - k);
      double asr = -(bs / as + hk) / 2.0;
      const double c = (4.0 - hk) / 8.0;
      const double d = (12.0 - hk) / 80.0;
      if (asr > -100.0) bvn = a * std::exp(asr) * (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
      if (hk > -100.0) {
        const double b = std::sqrt(bs);
        const double sp = std::sqrt(kTwoPi) * normal_cdf(-b / a);
        bvn -= std::exp(-hk / 2.0) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
      }
      a /= 2.0;
      double acc = 0.0;
      for (int i = 0; i < ng; ++i)
        for (double sgn : {-1.0, 1.0}) {
          const double xs = std::pow(a * (1.0 + sgn * x[i]), 2);
          const double asr2 = -(bs / xs + hk) / 2.0;
          if (asr2 <= -100.0) continue;
          const double sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
          const double rs = std::sqrt(1.0 - xs);
          const double ep = std::exp(-(hk / 2.0) * xs / ((1.0 + rs) * (1.0 + rs))) / rs;
          acc += w[i] * std::exp(asr2) * (sp - ep);
        }
      bvn = (a * acc - bvn) / kTwoPi;
    }
    if (r > 0.0) {
      bvn += normal_cdf(-std::max(h, k));
    } else if (h >= k) {
      bvn = -bvn;
    } else {
      const double L = h < 0.0 ? normal_cdf(k) - normal_cdf(h) : normal_cdf(-h) - normal_cdf(-k);
      bvn = L - bvn;
    }
  }
  return std::clamp(bvn, 0.0, 1.0);
}

void check_shape(const std::vector<double>& u, const std::vector<double>& mu, const Matrix& cov) {
  const std::size_t d = u.size();
  if (d == 0) throw InputError("mvn_cdf needs at least one dimension");
  if (mu.size() != d || cov.size() != d) throw InputError("mvn_cdf argument dimensions disagree");
  for (const auto& row : cov)
    if (row.size() != d) throw InputError("covariance must be square");
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      if (!std::isfinite(cov[i][j])) throw NumericError("covariance has non-finite entries");
      const double scale = std::max({1.0, std::abs(cov[i][j]), std::abs(cov[j][i])});
      if (std::abs(cov[i][j] - cov[j][i]) > 1e-12 * scale) throw InputError("covariance must be symmetric");
    }
}

// Three dimensions: condition on the coordinate least correlated with the
// others and integrate the conditional bivariate cdf against its density.
MvnResult trivariate(const std::vector<double>& a, const Eigen::Matrix3d& R) {
  int c = 0;
  double best = kInf;
  for (int k = 0; k < 3; ++k) {
    double m = 0.0;
    for (int j = 0; j < 3; ++j)
      if (j != k) m = std::max(m, std::abs(R(k, j)));
    if (m < best) best = m, c = k;
  }
  const int u = (c + 1) % 3, v = (c + 2) % 3;
  const double ru = R(c, u), rv = R(c, v);
  const double su = std::sqrt(std::max(1.0 - ru * ru, 1e-300)), sv = std::sqrt(std::max(1.0 - rv * rv, 1e-300));
  const double rho = std::clamp((R(u, v) - ru * rv) / (su * sv), -1.0, 1.0);
  auto f = [&](double z) {
    const double dens = std::exp(-0.5 * z * z) / std::sqrt(kTwoPi);
    return dens * bvnu(-(a[u] - ru * z) / su, -(a[v] - rv * z) / sv, rho);
  };
  constexpr double kTail = 40.0;  // the normal density is below 1e-300 past this
  MvnResult res;
  const double hi = std::min(a[c], kTail);
  if (hi <= -kTail) return res;
  double err = 0.0;
  res.prob = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -kTail, hi, 20, 1e-13, &err);
  res.prob = std::clamp(res.prob, 0.0, 1.0);
  res.error = err;
  return res;
}

// Four or more dimensions: randomized Kronecker lattice over the
// separation-of-variables integrand. The shifts come from a fixed-seed
// generator so results are reproducible.
MvnResult lattice_mvn(const std::vector<double>& b, const Eigen::MatrixXd& Lc) {
  const int d = static_cast<int>(b.size());
  static const std::array<double, 12> primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  std::vector<double> z(static_cast<std::size_t>(d));
  for (int i = 0; i < d - 1; ++i) z[i] = std::sqrt(primes[i % primes.size()]);
  constexpr int kShifts = 12;
  constexpr double kTarget = 1e-6;
  std::mt19937_64 gen(0x5eedULL);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<std::vector<double>> shifts(kShifts, std::vector<double>(static_cast<std::size_t>(d)));
  for (auto& s : shifts)
    for (auto& v : s) v = U(gen);

  std::vector<double> y(static_cast<std::size_t>(d), 0.0), w(static_cast<std::size_t>(d));
  auto integrand = [&]() {
    double e = normal_cdf(b[0] / Lc(0, 0));
    double f = e;
    for (int i = 1; i < d && f > 0.0; ++i) {
      const double uw = std::clamp(w[i - 1] * e, 1e-300, 1.0 - 1e-16);
      y[i - 1] = normal_quantile(uw);
      double s = 0.0;
      for (int j = 0; j < i; ++j) s += Lc(i, j) * y[j];
      e = normal_cdf((b[i] - s) / Lc(i, i));
      f *= e;
    }
    return f;
  };

  MvnResult res;
  for (long npts = 1024; npts <= (1L << 18); npts *= 2) {
    double mean = 0.0, m2 = 0.0;
    for (int s = 0; s < kShifts; ++s) {
      double acc = 0.0;
      for (long p = 0; p < npts; ++p) {
        for (int i = 0; i < d - 1; ++i) {
          const double x = std::fmod(static_cast<double>(p) * z[i] + shifts[s][i], 1.0);
          w[i] = std::abs(2.0 * x - 1.0);  // tent periodization
        }
        acc += integrand();
      }
      acc /= static_cast<double>(npts);
      const double delta = acc - mean;
      mean += delta / (s + 1);
      m2 += delta * (acc - mean);
    }
    res.prob = mean;
    res.error = 3.0 * std::sqrt(m2 / (kShifts - 1) / kShifts);
    if (res.error < kTarget) break;
  }
  res.prob = std::clamp(res.prob, 0.0, 1.0);
  return res;
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -kInf;
    if (p == 1.0) return kInf;
    throw InputError("normal quantile needs p in [0, 1]");
  }
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

double bivariate_normal_cdf(double a, double b, double r) {
  if (!(r >= -1.0 && r <= 1.0)) throw InputError("correlation must lie in [-1, 1]");
  return bvnu(-a, -b, r);
}

Matrix project_psd(const Matrix& cov, bool* projected) {
  const int d = static_cast<int>(cov.size());
  Eigen::MatrixXd V(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) V(i, j) = cov[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(V);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  const bool negative = ev.minCoeff() < -1e-14 * scale;
  if (projected) *projected = negative;
  if (!negative) return cov;
  if (ev.maxCoeff() <= 0.0) {
    std::ostringstream os;
    os << "covariance has no positive eigenvalue (min " << ev.minCoeff() << ", max " << ev.maxCoeff()
       << "); cannot regularize";
    throw NumericError(os.str());
  }
  const Eigen::VectorXd clipped = ev.cwiseMax(0.0).array() + kRidge;
  const Eigen::MatrixXd W = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
  Matrix out(static_cast<std::size_t>(d), std::vector<double>(static_cast<std::size_t>(d)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out[i][j] = 0.5 * (W(i, j) + W(j, i));
  return out;
}

MvnResult mvn_cdf(const std::vector<double>& upper, const std::vector<double>& mean, const Matrix& cov) {
  check_shape(upper, mean, cov);
  MvnResult res;
  Matrix V = project_psd(cov, &res.psd_projected);
  const std::size_t d = upper.size();
  std::vector<double> b(d);
  for (std::size_t i = 0; i < d; ++i) b[i] = upper[i] - mean[i];
  for (std::size_t i = 0; i < d; ++i)
    if (b[i] == -kInf) return res;

  // Zero-variance coordinates are deterministic; a tiny ridge keeps the
  // remaining formulas finite.
  for (std::size_t i = 0; i < d; ++i)
    if (V[i][i] <= 0.0) V[i][i] = kRidge;

  if (d == 1) {
    res.prob = normal_cdf(b[0] / std::sqrt(V[0][0]));
    return res;
  }
  if (d == 2) {
    const double s0 = std::sqrt(V[0][0]), s1 = std::sqrt(V[1][1]);
    const double r = std::clamp(V[0][1] / (s0 * s1), -1.0, 1.0);
    res.prob = bivariate_normal_cdf(b[0] / s0, b[1] / s1, r);
    return res;
  }
  if (d == 3) {
    Eigen::Matrix3d R;
    std::vector<double> a(3);
    for (int i = 0; i < 3; ++i) {
      a[i] = b[i] / std::sqrt(V[i][i]);
      for (int j = 0; j < 3; ++j) R(i, j) = V[i][j] / std::sqrt(V[i][i] * V[j][j]);
    }
    const bool projected = res.psd_projected;
    res = trivariate(a, R);
    res.psd_projected = projected;
    return res;
  }
  Eigen::MatrixXd M(static_cast<int>(d), static_cast<int>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) M(static_cast<int>(i), static_cast<int>(j)) = V[i][j];
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) {
    M += kRidge * Eigen::MatrixXd::Identity(static_cast<int>(d), static_cast<int>(d));
    llt.compute(M);
    if (llt.info() != Eigen::Success) throw NumericError("covariance is not positive definite after regularization");
  }
  const bool projected = res.psd_projected;
  res = lattice_mvn(b, llt.matrixL());
  res.psd_projected = projected;
  return res;
}

}  // namespace seqmatch

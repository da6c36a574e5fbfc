#pragma once

#include <vector>

namespace seqmatch {

using Matrix = std::vector<std::vector<double>>;

struct MvnResult {
  double prob = 0.0;
  double error = 0.0;          // absolute error estimate (0 for the closed forms)
  bool psd_projected = false;  // covariance had negative eigenvalues and was clipped
};

// Standard normal cdf and quantile.
double normal_cdf(double z);
double normal_quantile(double p);

// P(Z <= upper componentwise), Z ~ N(mean, cov). One dimension uses erfc,
// two use bivariate Gauss-Legendre quadrature, three integrate the
// conditional bivariate cdf by adaptive Gauss-Kronrod, and more use a
// randomized lattice rule over the separation-of-variables transform. A covariance with negative
// eigenvalues is projected by clipping them at zero and adding a 1e-10 ridge.
MvnResult mvn_cdf(const std::vector<double>& upper, const std::vector<double>& mean, const Matrix& cov);

// P(X <= a, Y <= b) for standard normals with correlation r.
double bivariate_normal_cdf(double a, double b, double r);

// Returns the projected matrix; sets *projected when eigenvalues were clipped.
Matrix project_psd(const Matrix& cov, bool* projected);

}  // namespace seqmatch

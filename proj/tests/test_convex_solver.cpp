#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "seqmatch/convex_solver.hpp"
#include "seqmatch/divergences.hpp"
#include "seqmatch/errors.hpp"
#include "test_util.hpp"

using namespace seqmatch;
using namespace seqmatch::solver;

namespace {

Problem single_edge(double p, double q, double alpha, double lambda) {
  Problem pr;
  pr.blocks = {{Distribution::bernoulli(p), alpha}, {Distribution::bernoulli(q), 1.0}};
  pr.constraints = {{{0, 1}}};
  pr.alpha = alpha;
  pr.lambda = lambda;
  return pr;
}

// Two crossing 2-matches over Omega_0, Omega_1, Psi_0, Psi_1: constraint one
// pairs (0,0),(1,1); constraint two pairs (0,1),(1,0).
Problem crossing(const double* w, const double* v, double alpha, double lambda) {
  Problem pr;
  for (int i = 0; i < 2; ++i) pr.blocks.push_back({Distribution::bernoulli(w[i]), alpha});
  for (int j = 0; j < 2; ++j) pr.blocks.push_back({Distribution::bernoulli(v[j]), 1.0});
  pr.constraints = {{{0, 2}, {1, 3}}, {{0, 3}, {1, 2}}};
  pr.alpha = alpha;
  pr.lambda = lambda;
  return pr;
}

void check_feasible(const Problem& p, const Result& r, double tol = 1e-7) {
  for (std::size_t k = 0; k < p.constraints.size(); ++k) CHECK(constraint_value(p, k, r.x) <= p.lambda + tol);
  CHECK(objective(p, r.x) == doctest::Approx(r.value).epsilon(1e-12).scale(1e-14));
}

}  // namespace

TEST_CASE("single constraint against nested one-dimensional oracle") {
  std::mt19937_64 g(1);
  for (int trial = 0; trial < 40; ++trial) {
    const double p = std::uniform_real_distribution<double>(0.03, 0.97)(g);
    const double q = std::uniform_real_distribution<double>(0.03, 0.97)(g);
    const double alpha = std::exp(std::uniform_real_distribution<double>(-1.5, 1.5)(g));
    const double lambda = testutil::gjs2(p, q, alpha) * std::uniform_real_distribution<double>(0.02, 1.2)(g);
    const auto pr = single_edge(p, q, alpha, lambda);
    const auto r = solve(pr);
    CHECK(r.converged);
    check_feasible(pr, r);
    CHECK(std::abs(r.value - oracle::pair_exponent(p, q, lambda, alpha)) < 1e-7);
  }
}

TEST_CASE("coupled constraints against the dual oracle") {
  std::mt19937_64 g(2);
  for (int trial = 0; trial < 6; ++trial) {
    double w[2], v[2];
    for (auto* a : {w, v})
      for (int i = 0; i < 2; ++i) a[i] = std::uniform_real_distribution<double>(0.05, 0.95)(g);
    const double alpha = 2.0;
    const double lambda = std::uniform_real_distribution<double>(0.002, 0.05)(g);
    const auto pr = crossing(w, v, alpha, lambda);
    const auto r = solve(pr);
    check_feasible(pr, r);
    const double d = oracle::DualOracle{pr}.value();
    CHECK(r.value >= d - 1e-7);
    CHECK(std::abs(r.value - d) < 1e-6);
  }
}

TEST_CASE("returned value is no worse than random feasible points") {
  std::mt19937_64 g(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 3 + static_cast<int>(g() % 3);
    Problem pr;
    pr.alpha = 1.5;
    for (int b = 0; b < 3; ++b) pr.blocks.push_back({testutil::random_dist(g, k), b < 2 ? pr.alpha : 1.0});
    pr.constraints = {{{0, 2}}, {{1, 2}}};
    pr.lambda = 0.02;
    const auto r = solve(pr);
    CHECK(r.converged);
    check_feasible(pr, r);
    int tested = 0;
    for (int s = 0; s < 4000 && tested < 300; ++s) {
      std::vector<Distribution> x;
      const auto base = testutil::random_dist(g, k);
      for (int b = 0; b < 3; ++b) {
        std::vector<double> v(k);
        const double t = std::uniform_real_distribution<double>(0.0, 0.4)(g);
        for (int a = 0; a < k; ++a) v[a] = (1 - t) * base[a] + t * pr.blocks[b].target[a];
        x.emplace_back(v);
      }
      if (constraint_value(pr, 0, x) > pr.lambda || constraint_value(pr, 1, x) > pr.lambda) continue;
      ++tested;
      CHECK(objective(pr, x) >= r.value - 1e-9);
    }
    CHECK(tested > 0);
  }
}

TEST_CASE("equality problem collapses each component to a geometric mean") {
  std::mt19937_64 g(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 2 + static_cast<int>(g() % 4);
    Problem pr;
    pr.alpha = 0.7;
    for (int b = 0; b < 4; ++b) pr.blocks.push_back({testutil::random_dist(g, k), 0.3 + b});
    pr.constraints = {{{0, 1}, {2, 3}}};
    const auto r = solve_equal(pr);
    const double want = min_weighted_kl({{pr.blocks[0].target, pr.blocks[1].target}, {0.3, 1.3}}).value +
                        min_weighted_kl({{pr.blocks[2].target, pr.blocks[3].target}, {2.3, 3.3}}).value;
    CHECK(r.value == doctest::Approx(want).epsilon(1e-9));
    int count = 0;
    const auto c = components(pr, &count);
    CHECK(count == 2);
    CHECK(c[0] == c[1]);
    CHECK(c[2] == c[3]);
    CHECK(c[0] != c[2]);
  }
}

TEST_CASE("feasible targets return zero and lambda must be positive") {
  const auto pr = single_edge(0.3, 0.31, 2.0, 0.01);
  const auto r = solve(pr);
  CHECK(r.value == 0.0);
  CHECK(r.converged);
  auto z = pr;
  z.lambda = 0.0;
  CHECK_THROWS_AS(solve(z), InputError);
}

TEST_CASE("solution decreases with lambda") {
  double prev = INFINITY;
  for (double lam : {1e-4, 1e-3, 5e-3, 1e-2, 2e-2, 4e-2}) {
    const double v = solve(single_edge(0.1, 0.6, 2.0, lam)).value;
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
}

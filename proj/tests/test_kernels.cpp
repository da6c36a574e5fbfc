#include <doctest.h>

#include <cfloat>
#include <cmath>
#include <random>
#include <vector>

#include "seqmatch/kernels.hpp"

using namespace seqmatch::kernels;

namespace {

bool have_avx2() { return detected_isa() == Isa::avx2; }

std::vector<double> random_planes(std::mt19937_64& g, std::size_t m, int k, double zero_rate) {
  std::vector<double> p(m * k);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t r = 0; r < m; ++r) {
    double s = 0.0;
    for (int a = 0; a < k; ++a) {
      double v = u(g) < zero_rate ? 0.0 : std::exp(-8.0 * u(g));
      p[a * m + r] = v;
      s += v;
    }
    if (s == 0.0) {
      p[r] = 1.0;
      s = 1.0;
    }
    for (int a = 0; a < k; ++a) p[a * m + r] /= s;
  }
  return p;
}

}  // namespace

TEST_CASE("scalar gjs kernel matches the defining formula") {
  std::mt19937_64 g(1);
  const std::size_t m = 37;
  const int k = 3;
  const auto p = random_planes(g, m, k, 0.2), q = random_planes(g, m, k, 0.2);
  std::vector<double> out(m);
  scalar::gjs_batch(p.data(), q.data(), m, k, 1.7, out.data());
  for (std::size_t r = 0; r < m; ++r) {
    double want = 0.0;
    for (int a = 0; a < k; ++a) {
      const double x = p[a * m + r], y = q[a * m + r], mix = (1.7 * x + y) / 2.7;
      if (x > 0) want += 1.7 * x * std::log(x / mix);
      if (y > 0) want += y * std::log(y / mix);
    }
    CHECK(out[r] == doctest::Approx(want).epsilon(1e-12).scale(1e-14));
  }
}

TEST_CASE("avx2 log matches std::log") {
  if (!have_avx2()) return;
  std::mt19937_64 g(2);
  std::vector<double> x;
  for (int e = -1070; e <= 1020; e += 3) x.push_back(std::ldexp(1.0 + (g() % 1000) / 1000.0, e));
  for (int i = 0; i < 5000; ++i) x.push_back(std::uniform_real_distribution<double>(1e-6, 10.0)(g));
  x.push_back(DBL_MIN);
  x.push_back(DBL_MAX);
  x.push_back(1.0);
  x.push_back(DBL_TRUE_MIN);
  x.push_back(std::nextafter(1.0, 0.0));
  std::vector<double> out(x.size());
  avx2::log_batch(x.data(), x.size(), out.data());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double want = std::log(x[i]);
    CHECK(std::abs(out[i] - want) <= 4e-16 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("avx2 gjs kernel equals scalar reference") {
  if (!have_avx2()) return;
  std::mt19937_64 g(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + g() % 70;
    const int k = 2 + static_cast<int>(g() % 12);
    const double alpha = std::exp(std::uniform_real_distribution<double>(-3.0, 3.0)(g));
    const double zr = trial % 3 == 0 ? 0.0 : 0.3;
    const auto p = random_planes(g, m, k, zr), q = random_planes(g, m, k, zr);
    std::vector<double> a(m), b(m);
    scalar::gjs_batch(p.data(), q.data(), m, k, alpha, a.data());
    avx2::gjs_batch(p.data(), q.data(), m, k, alpha, b.data());
    for (std::size_t r = 0; r < m; ++r) CHECK(std::abs(a[r] - b[r]) <= 1e-13 * std::max(1.0, std::abs(a[r])));
  }
  // Identical rows give (numerically) zero on both paths.
  const std::size_t m = 9;
  const auto p = random_planes(g, m, 4, 0.0);
  std::vector<double> a(m), b(m);
  scalar::gjs_batch(p.data(), p.data(), m, 4, 2.0, a.data());
  avx2::gjs_batch(p.data(), p.data(), m, 4, 2.0, b.data());
  for (std::size_t r = 0; r < m; ++r) {
    CHECK(std::abs(a[r]) < 1e-15);
    CHECK(std::abs(b[r]) < 1e-15);
  }
}

TEST_CASE("symbol counting agrees across kernels") {
  std::mt19937_64 g(4);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 2 + static_cast<int>(g() % (trial % 2 ? 15 : 255));
    const std::size_t len = g() % 5000;
    std::vector<std::uint8_t> s(len);
    std::size_t oob = 0;
    for (auto& c : s) {
      c = static_cast<std::uint8_t>(g() % (k + 1));
      if (c >= k) ++oob;
    }
    std::vector<std::int64_t> naive(k, 0), a(k, 0), b(k, 0);
    for (auto c : s)
      if (c < k) ++naive[c];
    CHECK(scalar::count_symbols(s.data(), len, k, a.data()) == oob);
    CHECK(a == naive);
    if (have_avx2()) {
      CHECK(avx2::count_symbols(s.data(), len, k, b.data()) == oob);
      CHECK(b == naive);
    }
  }
  // Long runs of one symbol exercise the byte-counter flush.
  std::vector<std::uint8_t> run(100000, 3);
  std::vector<std::int64_t> c(4, 0);
  CHECK(count_symbols(run.data(), run.size(), 4, c.data()) == 0);
  CHECK(c[3] == 100000);
}

TEST_CASE("dispatch selection") {
  const Isa prev = set_active_isa(Isa::scalar);
  CHECK(active_isa() == Isa::scalar);
  set_active_isa(Isa::avx2);
  CHECK(active_isa() == (have_avx2() ? Isa::avx2 : Isa::scalar));
  set_active_isa(prev);
  CHECK(isa_name(Isa::scalar) == "scalar");
  CHECK(isa_name(Isa::avx2) == "avx2");
}

#include <doctest.h>

#include <cmath>

#include "seqmatch/errors.hpp"
#include "seqmatch/simulation.hpp"

using namespace seqmatch;

namespace {

DistList bern(std::initializer_list<double> ps) {
  DistList d;
  for (double p : ps) d.push_back(Distribution::bernoulli(p));
  return d;
}

SimulationSpec base_spec() {
  SimulationSpec s;
  s.P = bern({0.1, 0.11, 0.12, 0.13});
  s.Q = {s.P[0], s.P[1]};
  s.alpha = 2.0;
  s.truth = MatchHypothesis({{0, 0}, {1, 1}});
  s.cfg.K = 2;
  s.cfg.lambda = 1e-4;
  s.trials = 700;
  s.seed = 5;
  s.n_grid = {50, 120};
  return s;
}

bool same_rows(const SimulationResult& a, const SimulationResult& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    const auto &x = a.rows[r], &y = b.rows[r];
    if (x.n != y.n || x.mismatch_count != y.mismatch_count || x.reject_count != y.reject_count ||
        x.alarm_count != y.alarm_count || x.correct_k_count != y.correct_k_count || x.events.size() != y.events.size())
      return false;
    for (std::size_t e = 0; e < x.events.size(); ++e)
      if (x.events[e].p_hat != y.events[e].p_hat || x.events[e].exponent != y.events[e].exponent) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("drawn databases") {
  auto s = base_spec();
  s.P = {Distribution({0.0, 1.0}), Distribution::bernoulli(0.5)};
  s.Q = {s.P[0]};
  s.truth = MatchHypothesis({{0, 0}});
  s.cfg.K = 1;
  const auto [x, y] = draw_databases(s, 100000, 3);
  CHECK(x.seq_len() == 200000);
  CHECK(y.seq_len() == 100000);
  for (Symbol c : x[0]) REQUIRE(c == 1);
  const auto f = x.types()[1].as_distribution()[1];
  CHECK(std::abs(f - 0.5) < 0.005);
  const auto [x2, y2] = draw_databases(s, 100000, 3);
  CHECK(x2.sequences() == x.sequences());
  CHECK(y2.sequences() == y.sequences());
  const auto [x3, y3] = draw_databases(s, 100000, 4);
  CHECK(x3.sequences() != x.sequences());
}

TEST_CASE("type draws match sequence draws in distribution") {
  auto s = base_spec();
  s.P = {Distribution({0.2, 0.3, 0.5})};
  s.Q = {s.P[0]};
  s.truth = MatchHypothesis({{0, 0}});
  s.cfg.K = 1;
  const std::int64_t n = 40;
  double mt[3] = {}, ms[3] = {}, vt = 0, vs = 0;
  const int T = 20000;
  for (int t = 0; t < T; ++t) {
    s.mode = SampleMode::types;
    const auto a = draw_types(s, n, t).second[0].counts();
    s.mode = SampleMode::sequences;
    const auto b = draw_types(s, n, t).second[0].counts();
    for (int k = 0; k < 3; ++k) mt[k] += a[k], ms[k] += b[k];
    vt += a[0] * a[0];
    vs += b[0] * b[0];
  }
  for (int k = 0; k < 3; ++k) {
    const double p = s.P[0][k];
    const double se = std::sqrt(n * p * (1 - p) / T);
    CHECK(std::abs(mt[k] / T - n * p) < 4 * se);
    CHECK(std::abs(ms[k] / T - n * p) < 4 * se);
  }
  const double second = n * 0.2 * 0.8 + (n * 0.2) * (n * 0.2);
  CHECK(std::abs(vt / T - second) < 0.03 * second);
  CHECK(std::abs(vs / T - second) < 0.03 * second);
}

TEST_CASE("estimates are deterministic and independent of thread count") {
  auto s = base_spec();
  s.threads = 1;
  const auto a = estimate_errors(s);
  s.threads = 5;
  const auto b = estimate_errors(s);
  CHECK(same_rows(a, b));
  const auto c = estimate_errors(s);
  CHECK(same_rows(b, c));
  for (const auto& r : a.rows) {
    CHECK(r.mismatch_count + r.reject_count <= r.trials);
    CHECK(r.events.size() == 2);
    CHECK(r.events[0].event == "mismatch");
    CHECK(r.events[1].event == "false_reject");
  }
  s.mode = SampleMode::sequences;
  const auto d = estimate_errors(s);
  CHECK(d.rows.size() == a.rows.size());
}

TEST_CASE("huge threshold always rejects") {
  auto s = base_spec();
  s.cfg.lambda = 50.0;
  for (auto kind : {TestKind::unnikrishnan, TestKind::simple}) {
    s.test = kind;
    for (const auto& r : estimate_errors(s).rows) CHECK(r.reject_count == r.trials);
  }
}

TEST_CASE("event statistics") {
  const auto z = event_stats("mismatch", 0, 1000, 200);
  CHECK(z.zero_count);
  CHECK(z.p_hat == 0.0);
  CHECK(z.exponent == doctest::Approx(-std::log(3.0 / 1000) / 200).epsilon(1e-14));
  const auto e = event_stats("false_reject", 250, 1000, 100);
  CHECK(e.p_hat == 0.25);
  CHECK(e.stderr_p == doctest::Approx(std::sqrt(0.25 * 0.75 / 1000)).epsilon(1e-14));
  CHECK(e.exponent == doctest::Approx(-std::log(0.25) / 100).epsilon(1e-14));
  const double sd = e.stderr_p / (e.p_hat * 100);
  CHECK(e.exp_lo == doctest::Approx(e.exponent - 2 * sd).epsilon(1e-14));
  CHECK(e.exp_hi == doctest::Approx(e.exponent + 2 * sd).epsilon(1e-14));
}

TEST_CASE("worst-case sweep") {
  auto s = base_spec();
  s.cfg.lambda = 0.01;
  const auto one = worst_case_sweep(s, {{s.P, s.Q}});
  CHECK(same_rows(one, estimate_errors(s)));
  // A member whose unmatched sequences are nearly copies of the matched ones
  // dominates the mismatch maximum.
  const auto P2 = bern({0.1, 0.11, 0.1001, 0.1101});
  const DistList Q2{P2[0], P2[1]};
  const auto wc = worst_case_sweep(s, {{s.P, s.Q}, {P2, Q2}});
  auto s2 = s;
  s2.P = P2;
  s2.Q = Q2;
  const auto r2 = estimate_errors(s2);
  for (std::size_t r = 0; r < wc.rows.size(); ++r) CHECK(wc.rows[r].events[0].p_hat == r2.rows[r].events[0].p_hat);
}

TEST_CASE("spec validation") {
  auto s = base_spec();
  s.truth.reset();
  s.test = TestKind::two_phase;
  CHECK_THROWS_AS(validate(s), InputError);  // P_1 = Q_1 under the null
  auto t = base_spec();
  t.Q = bern({0.5, 0.11});
  CHECK_THROWS_AS(validate(t), InputError);
  auto u = base_spec();
  u.test = TestKind::simple;
  u.cfg.K = 1;
  CHECK_THROWS_AS(validate(u), InputError);
  auto v = base_spec();
  v.trials = 0;
  CHECK_THROWS_AS(validate(v), InputError);
}

TEST_CASE("two-phase test under the null raises fewer alarms as n grows") {
  SimulationSpec s;
  s.P = bern({0.1, 0.5, 0.9});
  s.Q = bern({0.2, 0.7});
  s.alpha = 2.0;
  s.test = TestKind::two_phase;
  s.cfg.lambda1 = 0.005;
  s.cfg.lambda2 = 1e-4;
  s.trials = 2000;
  s.seed = 11;
  s.n_grid = {500, 1000, 2000};
  s.threads = 4;
  const auto r = estimate_errors(s);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].events[0].event == "false_alarm");
  CHECK(r.rows[1].alarm_count < r.rows[0].alarm_count);
  CHECK(r.rows[2].alarm_count < r.rows[1].alarm_count);
}

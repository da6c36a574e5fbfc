#include <doctest.h>

#include <random>

#include "seqmatch/core_types.hpp"
#include "seqmatch/errors.hpp"
#include "test_util.hpp"

using namespace seqmatch;

TEST_CASE("empirical type counts symbols") {
  const Alphabet bin(2);
  const Sequence s{0, 1, 1, 0};
  const auto t = empirical_type(s, bin);
  CHECK(t.counts() == std::vector<std::int64_t>{2, 2});
  CHECK(t.as_distribution().probs() == std::vector<double>{0.5, 0.5});

  const auto d = empirical_type(Sequence{0, 0, 0}, bin);
  CHECK(d.counts() == std::vector<std::int64_t>{3, 0});
  CHECK(d.as_distribution()[0] == 1.0);

  const auto h = empirical_type(Sequence{0, 0, 1, 0, 1, 1, 1, 0, 1, 1}, bin).as_distribution();
  CHECK(h[0] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(h[1] == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("symbol out of range is an input error") {
  CHECK_THROWS_AS(empirical_type(Sequence{0, 2}, Alphabet(2)), InputError);
  CHECK_THROWS_AS(Alphabet(1), InputError);
}

TEST_CASE("concatenation adds counts and types are valid distributions") {
  std::mt19937_64 g(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + static_cast<int>(g() % 30);
    const Alphabet ab(k);
    auto rnd = [&](std::size_t len) {
      Sequence s(len);
      for (auto& c : s) c = static_cast<Symbol>(g() % k);
      return s;
    };
    const Sequence a = rnd(1 + g() % 700), b = rnd(1 + g() % 700);
    Sequence ab_seq = a;
    ab_seq.insert(ab_seq.end(), b.begin(), b.end());
    const auto ta = empirical_type(a, ab), tb = empirical_type(b, ab), tab = empirical_type(ab_seq, ab);
    for (int x = 0; x < k; ++x) CHECK(tab.counts()[x] == ta.counts()[x] + tb.counts()[x]);
    std::vector<std::int64_t> naive(k, 0);
    for (Symbol c : a) ++naive[c];
    CHECK(ta.counts() == naive);
    CHECK_NOTHROW((void)tab.as_distribution());
  }
}

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(Distribution({0.5, 0.6}), InputError);
  CHECK_THROWS_AS(Distribution({-0.1, 1.1}), InputError);
  const Distribution r({0.5, 0.5 + 5e-10});
  CHECK(r[0] + r[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(Distribution::bernoulli(0.3)[1] == 0.3);
  CHECK(Distribution::bernoulli(0.3)[0] == doctest::Approx(0.7));
}

TEST_CASE("database requires equal lengths and valid symbols") {
  CHECK_THROWS_AS(Database({{0, 1}, {0}}, Alphabet(2)), InputError);
  CHECK_THROWS_AS(Database({{0, 3}}, Alphabet(2)), InputError);
  const Database db({{0, 1, 1}, {1, 1, 1}}, Alphabet(2));
  CHECK(db.count() == 2);
  CHECK(db.seq_len() == 3);
  CHECK(db.types()[1].counts()[1] == 3);
}

TEST_CASE("match hypothesis is a bijection") {
  CHECK_THROWS_AS(MatchHypothesis({{0, 0}, {0, 1}}), InputError);
  CHECK_THROWS_AS(MatchHypothesis({{0, 1}, {2, 1}}), InputError);
  const MatchHypothesis h({{2, 1}, {0, 0}});
  CHECK(h.K() == 2);
  CHECK(h.pairs().front() == IndexPair{0, 0});
  CHECK(h.A() == std::vector<int>{0, 2});
  CHECK(h.B() == std::vector<int>{0, 1});
  CHECK(h.sigma(2) == 1);
  CHECK(h.sigma(1) == -1);
  CHECK(h.sigma_inverse(1) == 2);
  CHECK_THROWS_AS(h.check_bounds(2, 2), InputError);
}

TEST_CASE("long length and effective alpha") {
  const auto c = make_config(4, 2, 2, 2.0, 500);
  CHECK(c.N == 1000);
  CHECK_FALSE(c.alpha_adjusted);
  const auto d = make_config(4, 2, 2, 1.3333, 7);
  CHECK(d.N == 9);
  CHECK(d.alpha_adjusted);
  CHECK(d.effective_alpha == doctest::Approx(9.0 / 7.0));
  CHECK_THROWS_AS(make_config(1, 2, 2, 1.0, 10), InputError);
}

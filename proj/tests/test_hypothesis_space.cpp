#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "seqmatch/errors.hpp"
#include "seqmatch/hypothesis_space.hpp"

using namespace seqmatch;

namespace {

// Brute force: every injective partial map of size K from [M1] to [M2].
std::set<std::vector<IndexPair>> brute_force(int M1, int M2, int K) {
  std::set<std::vector<IndexPair>> out;
  std::vector<int> assign(M1, -1);
  auto rec = [&](auto&& self, int i, int used_mask, int k) -> void {
    if (i == M1) {
      if (k != K) return;
      std::vector<IndexPair> p;
      for (int a = 0; a < M1; ++a)
        if (assign[a] >= 0) p.emplace_back(a, assign[a]);
      out.insert(p);
      return;
    }
    assign[i] = -1;
    self(self, i + 1, used_mask, k);
    for (int j = 0; j < M2; ++j)
      if (!(used_mask >> j & 1)) {
        assign[i] = j;
        self(self, i + 1, used_mask | (1 << j), k + 1);
        assign[i] = -1;
      }
  };
  rec(rec, 0, 0, 0);
  return out;
}

}  // namespace

TEST_CASE("hypothesis counts") {
  CHECK(enumerate(4, 2, 2).size() == 12);
  for (int M = 1; M <= 9; ++M) {
    const auto s = enumerate(M, 1, 1);
    REQUIRE(s.size() == static_cast<std::size_t>(M));
    for (int l = 0; l < M; ++l) CHECK(s[l].pairs() == std::vector<IndexPair>{{l, 0}});
  }
  CHECK(enumerate(3, 2, 1).size() == 6);
  CHECK(hypothesis_count(3, 2, 1) == 6);
  CHECK(hypothesis_count(6, 4, 3) == 20 * 4 * 6);
}

TEST_CASE("enumeration matches brute force and is sorted") {
  for (int M1 = 1; M1 <= 5; ++M1)
    for (int M2 = 1; M2 <= std::min(M1, 4); ++M2)
      for (int K = 1; K <= M2; ++K) {
        const auto s = enumerate(M1, M2, K);
        const auto bf = brute_force(M1, M2, K);
        REQUIRE(s.size() == bf.size());
        CHECK(s.size() == hypothesis_count(M1, M2, K));
        std::size_t l = 0;
        for (const auto& p : bf) {
          CHECK(s[l].pairs() == p);
          CHECK(s.index_of(s[l]) == static_cast<long>(l));
          ++l;
        }
        if (K == M2)
          for (const auto& h : s.hypotheses()) {
            std::vector<int> all(M2);
            for (int j = 0; j < M2; ++j) all[j] = j;
            CHECK(h.B() == all);
          }
      }
}

TEST_CASE("errors and caps") {
  CHECK_THROWS_AS(enumerate(4, 2, 3), InputError);
  CHECK_THROWS_AS(enumerate(4, 2, 0), InputError);
  CHECK_THROWS_AS(enumerate(10, 8, 8, 1000), CapacityError);
  CHECK(enumerate(4, 2, 2).index_of(MatchHypothesis({{0, 0}})) == -1);
}

TEST_CASE("full space totals") {
  const FullHypothesisSpace f(4, 2);
  CHECK(f.total() == 8 + 12);
  CHECK(f.at(1).size() == 8);
  CHECK(f.at(2).size() == 12);
}

TEST_CASE("match set operations") {
  const MatchHypothesis a({{0, 0}, {1, 1}}), b({{0, 0}, {2, 1}});
  CHECK(match_set_ops(a, a).difference.empty());
  const auto r = match_set_ops(a, b);
  CHECK(r.intersection == std::vector<IndexPair>{{0, 0}});
  CHECK(r.difference == std::vector<IndexPair>{{1, 1}});

  const auto s = enumerate(4, 2, 2);
  std::mt19937_64 g(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto& x = s[g() % s.size()];
    const auto& y = s[g() % s.size()];
    std::vector<IndexPair> in, diff;
    for (const auto& p : x.pairs())
      (std::find(y.pairs().begin(), y.pairs().end(), p) != y.pairs().end() ? in : diff).push_back(p);
    const auto o = match_set_ops(x, y);
    CHECK(o.intersection == in);
    CHECK(o.difference == diff);
  }
}

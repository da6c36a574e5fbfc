#include "seqmatch/hypothesis_space.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "seqmatch/errors.hpp"

namespace seqmatch {

namespace {

std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t binom(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    // Exact at every step: r * (n-k+i) is divisible by i.
    const std::uint64_t num = mul_sat(r, static_cast<std::uint64_t>(n - k + i));
    if (num == std::numeric_limits<std::uint64_t>::max()) return num;
    r = num / static_cast<std::uint64_t>(i);
  }
  return r;
}

// Emits every (increasing i-tuple, injective j-assignment); the caller sorts.
void build(int M1, int M2, int K, std::vector<MatchHypothesis>& out) {
  std::vector<int> is(static_cast<std::size_t>(K));
  std::vector<int> js(static_cast<std::size_t>(K));
  std::vector<bool> used(static_cast<std::size_t>(M2), false);
  std::vector<IndexPair> pairs(static_cast<std::size_t>(K));

  auto assign = [&](auto&& self, int pos) -> void {
    if (pos == K) {
      for (int p = 0; p < K; ++p) pairs[p] = {is[p], js[p]};
      out.emplace_back(pairs);
      return;
    }
    for (int j = 0; j < M2; ++j) {
      if (used[j]) continue;
      used[j] = true;
      js[pos] = j;
      self(self, pos + 1);
      used[j] = false;
    }
  };
  auto choose = [&](auto&& self, int pos, int start) -> void {
    if (pos == K) {
      assign(assign, 0);
      return;
    }
    for (int i = start; i <= M1 - (K - pos); ++i) {
      is[pos] = i;
      self(self, pos + 1, i + 1);
    }
  };
  choose(choose, 0, 0);
}

}  // namespace

std::uint64_t hypothesis_count(int M1, int M2, int K) {
  std::uint64_t r = mul_sat(binom(M1, K), binom(M2, K));
  for (int i = 2; i <= K; ++i) r = mul_sat(r, static_cast<std::uint64_t>(i));
  return r;
}

HypothesisSpace::HypothesisSpace(int M1, int M2, int K, std::size_t cap) : M1_(M1), M2_(M2), K_(K) {
  if (M2 < 1 || M1 < M2) throw InputError("need 1 <= M2 <= M1");
  if (K < 1 || K > M2) throw InputError("need 1 <= K <= M2, got K=" + std::to_string(K));
  const std::uint64_t T = hypothesis_count(M1, M2, K);
  if (T > cap)
    throw CapacityError("T_K = " + std::to_string(T) + " exceeds the enumeration cap " + std::to_string(cap));
  hyps_.reserve(static_cast<std::size_t>(T));
  build(M1, M2, K, hyps_);
  std::sort(hyps_.begin(), hyps_.end());
}

long HypothesisSpace::index_of(const MatchHypothesis& h) const {
  auto it = std::lower_bound(hyps_.begin(), hyps_.end(), h);
  if (it == hyps_.end() || !(*it == h)) return -1;
  return static_cast<long>(it - hyps_.begin());
}

FullHypothesisSpace::FullHypothesisSpace(int M1, int M2, std::size_t cap) : M1_(M1), M2_(M2) {
  for (int K = 1; K <= M2; ++K) {
    auto it = per_k_.emplace(K, HypothesisSpace(M1, M2, K, cap)).first;
    total_ += it->second.size();
  }
}

MatchSetOps match_set_ops(const MatchHypothesis& a, const MatchHypothesis& b) {
  MatchSetOps r;
  std::set_intersection(a.pairs().begin(), a.pairs().end(), b.pairs().begin(), b.pairs().end(),
                        std::back_inserter(r.intersection));
  std::set_difference(a.pairs().begin(), a.pairs().end(), b.pairs().begin(), b.pairs().end(),
                      std::back_inserter(r.difference));
  return r;
}

}  // namespace seqmatch

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "seqmatch/core_types.hpp"

namespace seqmatch {

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

// C(M1,K) C(M2,K) K!, saturating at UINT64_MAX.
std::uint64_t hypothesis_count(int M1, int M2, int K);

// All K-matches between [M1] and [M2], sorted lexicographically by their
// sorted pair lists; position in that order is the hypothesis index.
class HypothesisSpace {
 public:
  HypothesisSpace(int M1, int M2, int K, std::size_t cap = kDefaultEnumerationCap);

  int M1() const noexcept { return M1_; }
  int M2() const noexcept { return M2_; }
  int K() const noexcept { return K_; }
  std::size_t size() const noexcept { return hyps_.size(); }
  const MatchHypothesis& operator[](std::size_t l) const noexcept { return hyps_[l]; }
  const std::vector<MatchHypothesis>& hypotheses() const noexcept { return hyps_; }
  // Index of h, or -1.
  long index_of(const MatchHypothesis& h) const;

 private:
  int M1_, M2_, K_;
  std::vector<MatchHypothesis> hyps_;
};

inline HypothesisSpace enumerate(int M1, int M2, int K, std::size_t cap = kDefaultEnumerationCap) {
  return HypothesisSpace(M1, M2, K, cap);
}

// Spaces for every K in [1, M2].
class FullHypothesisSpace {
 public:
  FullHypothesisSpace(int M1, int M2, std::size_t cap = kDefaultEnumerationCap);
  int M1() const noexcept { return M1_; }
  int M2() const noexcept { return M2_; }
  const HypothesisSpace& at(int K) const { return per_k_.at(K); }
  std::size_t total() const noexcept { return total_; }

 private:
  int M1_, M2_;
  std::map<int, HypothesisSpace> per_k_;
  std::size_t total_ = 0;
};

struct MatchSetOps {
  std::vector<IndexPair> intersection;
  std::vector<IndexPair> difference;  // a \ b
};

MatchSetOps match_set_ops(const MatchHypothesis& a, const MatchHypothesis& b);

}  // namespace seqmatch

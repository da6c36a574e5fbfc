#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace seqmatch {

using Symbol = std::uint8_t;
using Sequence = std::vector<Symbol>;

// Symbols are dense indices 0..size-1. Sequences store one byte per symbol,
// which caps the alphabet at 256 letters.
class Alphabet {
 public:
  static constexpr int kMaxSize = 256;
  explicit Alphabet(int size);
  int size() const noexcept { return size_; }
  bool operator==(const Alphabet&) const = default;

 private:
  int size_;
};

class Distribution {
 public:
  static constexpr double kSumTolerance = 1e-12;
  static constexpr double kRenormalizeTolerance = 1e-9;

  // Rejects negative or non-finite entries. A sum within 1e-12 of one is kept
  // as is; within 1e-9 the vector is renormalized; anything else is rejected.
  explicit Distribution(std::vector<double> probs);
  Distribution(std::initializer_list<double> probs) : Distribution(std::vector<double>(probs)) {}

  static Distribution bernoulli(double p);
  static Distribution uniform(int size);

  int size() const noexcept { return static_cast<int>(p_.size()); }
  double operator[](std::size_t a) const noexcept { return p_[a]; }
  const std::vector<double>& probs() const noexcept { return p_; }
  bool operator==(const Distribution&) const = default;

 private:
  std::vector<double> p_;
};

class EmpiricalType {
 public:
  EmpiricalType(std::vector<std::int64_t> counts, std::int64_t length);

  const std::vector<std::int64_t>& counts() const noexcept { return counts_; }
  std::int64_t length() const noexcept { return length_; }
  int size() const noexcept { return static_cast<int>(counts_.size()); }
  Distribution as_distribution() const;

 private:
  std::vector<std::int64_t> counts_;
  std::int64_t length_;
};

EmpiricalType empirical_type(std::span<const Symbol> seq, const Alphabet& alphabet);

class Database {
 public:
  Database(std::vector<Sequence> sequences, Alphabet alphabet);

  std::size_t count() const noexcept { return seqs_.size(); }
  std::size_t seq_len() const noexcept { return seq_len_; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const Sequence& operator[](std::size_t i) const noexcept { return seqs_[i]; }
  const std::vector<Sequence>& sequences() const noexcept { return seqs_; }
  std::vector<EmpiricalType> types() const;

 private:
  std::vector<Sequence> seqs_;
  std::size_t seq_len_ = 0;
  Alphabet alphabet_;
};

using IndexPair = std::pair<int, int>;

// A K-match: pairs (i, j) with distinct i's and distinct j's, stored sorted.
class MatchHypothesis {
 public:
  MatchHypothesis() = default;
  explicit MatchHypothesis(std::vector<IndexPair> pairs);

  const std::vector<IndexPair>& pairs() const noexcept { return pairs_; }
  int K() const noexcept { return static_cast<int>(pairs_.size()); }
  std::vector<int> A() const;
  std::vector<int> B() const;
  // sigma(i) for i in A, otherwise -1.
  int sigma(int i) const noexcept;
  // sigma^{-1}(j) for j in B, otherwise -1.
  int sigma_inverse(int j) const noexcept;
  bool contains(const IndexPair& p) const noexcept;
  // Throws InputError when an index falls outside [0, M1) x [0, M2).
  void check_bounds(int M1, int M2) const;

  bool operator==(const MatchHypothesis&) const = default;
  auto operator<=>(const MatchHypothesis&) const = default;

 private:
  std::vector<IndexPair> pairs_;
};

struct ProblemConfig {
  int M1 = 0;
  int M2 = 0;
  int alphabet_size = 0;
  double alpha = 1.0;            // requested ratio N/n
  std::int64_t n = 0;
  std::int64_t N = 0;            // round(n * alpha)
  double effective_alpha = 1.0;  // N / n, used downstream
  bool alpha_adjusted = false;   // rounding moved alpha by more than 1e-9 relative
};

ProblemConfig make_config(int M1, int M2, int alphabet_size, double alpha, std::int64_t n);

// Sequence length N = round(n * alpha) of the first database.
std::int64_t long_length(std::int64_t n, double alpha);

}  // namespace seqmatch

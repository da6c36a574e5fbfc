#include "seqmatch/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "seqmatch/errors.hpp"
#include "seqmatch/kernels.hpp"

namespace seqmatch {

Alphabet::Alphabet(int size) : size_(size) {
  if (size < 2 || size > kMaxSize)
    throw InputError("alphabet size must be in [2, 256], got " + std::to_string(size));
}

Distribution::Distribution(std::vector<double> probs) : p_(std::move(probs)) {
  if (p_.empty()) throw InputError("distribution must have at least one entry");
  double sum = 0.0;
  for (double v : p_) {
    if (!std::isfinite(v) || v < 0.0) throw InputError("distribution entries must be finite and non-negative");
    sum += v;
  }
  const double err = std::abs(sum - 1.0);
  if (err <= kSumTolerance) return;
  if (err > kRenormalizeTolerance)
    throw InputError("distribution sums to " + std::to_string(sum) + ", not 1");
  for (double& v : p_) v /= sum;
}

Distribution Distribution::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("Bernoulli parameter must lie in [0, 1]");
  return Distribution(std::vector<double>{1.0 - p, p});
}

Distribution Distribution::uniform(int size) {
  if (size < 1) throw InputError("uniform distribution needs a positive size");
  return Distribution(std::vector<double>(static_cast<std::size_t>(size), 1.0 / size));
}

EmpiricalType::EmpiricalType(std::vector<std::int64_t> counts, std::int64_t length)
    : counts_(std::move(counts)), length_(length) {
  if (length_ <= 0) throw InputError("empirical type needs a positive length");
  std::int64_t sum = 0;
  for (auto c : counts_) {
    if (c < 0) throw InputError("negative symbol count");
    sum += c;
  }
  if (sum != length_) throw InputError("symbol counts do not sum to the sequence length");
}

Distribution EmpiricalType::as_distribution() const {
  std::vector<double> p(counts_.size());
  const double inv = 1.0 / static_cast<double>(length_);
  for (std::size_t a = 0; a < counts_.size(); ++a) p[a] = static_cast<double>(counts_[a]) * inv;
  return Distribution(std::move(p));
}

EmpiricalType empirical_type(std::span<const Symbol> seq, const Alphabet& alphabet) {
  if (seq.empty()) throw InputError("cannot take the type of an empty sequence");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(alphabet.size()), 0);
  const std::size_t bad = kernels::count_symbols(seq.data(), seq.size(), alphabet.size(), counts.data());
  if (bad != 0) throw InputError("symbol out of range for alphabet of size " + std::to_string(alphabet.size()));
  return EmpiricalType(std::move(counts), static_cast<std::int64_t>(seq.size()));
}

Database::Database(std::vector<Sequence> sequences, Alphabet alphabet)
    : seqs_(std::move(sequences)), alphabet_(alphabet) {
  if (seqs_.empty()) throw InputError("database must contain at least one sequence");
  seq_len_ = seqs_.front().size();
  if (seq_len_ == 0) throw InputError("sequences must be non-empty");
  for (const auto& s : seqs_) {
    if (s.size() != seq_len_) throw InputError("all sequences in a database must share one length");
    for (Symbol c : s)
      if (c >= alphabet_.size()) throw InputError("symbol out of range for alphabet of size " + std::to_string(alphabet_.size()));
  }
}

std::vector<EmpiricalType> Database::types() const {
  std::vector<EmpiricalType> out;
  out.reserve(seqs_.size());
  for (const auto& s : seqs_) out.push_back(empirical_type(s, alphabet_));
  return out;
}

MatchHypothesis::MatchHypothesis(std::vector<IndexPair> pairs) : pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end());
  std::vector<int> is, js;
  for (const auto& [i, j] : pairs_) {
    if (i < 0 || j < 0) throw InputError("hypothesis indices must be non-negative");
    is.push_back(i);
    js.push_back(j);
  }
  std::sort(is.begin(), is.end());
  std::sort(js.begin(), js.end());
  if (std::adjacent_find(is.begin(), is.end()) != is.end() || std::adjacent_find(js.begin(), js.end()) != js.end())
    throw InputError("hypothesis pairs must use distinct first and distinct second indices");
}

std::vector<int> MatchHypothesis::A() const {
  std::vector<int> out;
  for (const auto& pr : pairs_) out.push_back(pr.first);
  return out;
}

std::vector<int> MatchHypothesis::B() const {
  std::vector<int> out;
  for (const auto& pr : pairs_) out.push_back(pr.second);
  std::sort(out.begin(), out.end());
  return out;
}

int MatchHypothesis::sigma(int i) const noexcept {
  for (const auto& [a, b] : pairs_)
    if (a == i) return b;
  return -1;
}

int MatchHypothesis::sigma_inverse(int j) const noexcept {
  for (const auto& [a, b] : pairs_)
    if (b == j) return a;
  return -1;
}

bool MatchHypothesis::contains(const IndexPair& p) const noexcept {
  return std::binary_search(pairs_.begin(), pairs_.end(), p);
}

void MatchHypothesis::check_bounds(int M1, int M2) const {
  for (const auto& [i, j] : pairs_)
    if (i >= M1 || j >= M2)
      throw InputError("hypothesis pair (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
}

std::int64_t long_length(std::int64_t n, double alpha) {
  return static_cast<std::int64_t>(std::llround(static_cast<double>(n) * alpha));
}

ProblemConfig make_config(int M1, int M2, int alphabet_size, double alpha, std::int64_t n) {
  if (M2 < 1 || M1 < M2) throw InputError("need 1 <= M2 <= M1");
  Alphabet check(alphabet_size);
  (void)check;
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InputError("alpha must be positive");
  if (n < 1) throw InputError("n must be positive");
  ProblemConfig c;
  c.M1 = M1;
  c.M2 = M2;
  c.alphabet_size = alphabet_size;
  c.alpha = alpha;
  c.n = n;
  c.N = long_length(n, alpha);
  if (c.N < 1) throw InputError("round(n * alpha) must be at least 1");
  c.effective_alpha = static_cast<double>(c.N) / static_cast<double>(n);
  c.alpha_adjusted = std::abs(c.effective_alpha - alpha) > 1e-9 * alpha;
  if (!c.alpha_adjusted) c.effective_alpha = alpha;
  return c;
}

}  // namespace seqmatch

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "seqmatch/core_types.hpp"
#include "seqmatch/hypothesis_space.hpp"

namespace seqmatch {

// GJS(T_x_i, T_y_j, alpha) for every pair, row-major in i.
class GjsMatrix {
 public:
  GjsMatrix(int M1, int M2) : M1_(M1), M2_(M2), v_(static_cast<std::size_t>(M1) * M2, 0.0) {}
  int M1() const noexcept { return M1_; }
  int M2() const noexcept { return M2_; }
  double operator()(int i, int j) const noexcept { return v_[static_cast<std::size_t>(i) * M2_ + j]; }
  double& operator()(int i, int j) noexcept { return v_[static_cast<std::size_t>(i) * M2_ + j]; }

 private:
  int M1_, M2_;
  std::vector<double> v_;
};

GjsMatrix gjs_matrix(const std::vector<Distribution>& x, const std::vector<Distribution>& y, double alpha);
GjsMatrix gjs_matrix(const Database& x_db, const Database& y_db, double alpha);

double score(const GjsMatrix& g, const MatchHypothesis& h);
double score(const Database& x_db, const Database& y_db, const MatchHypothesis& h, double alpha);

// lambda + K |X| log((1+alpha) n + 1) / n
double effective_threshold(double lambda, int K, int alphabet_size, std::int64_t n, double alpha);

enum class Decision { match, reject };

struct VerdictDiagnostics {
  double min_score = 0.0;
  double second_min_score = 0.0;  // +inf when the space has one hypothesis
  long min_index = -1;
  double threshold = 0.0;         // threshold the second score was compared with
  std::optional<int> estimated_K;
  std::vector<double> scores;     // filled when requested
  bool single_hypothesis = false;
  bool inconsistent_assignment = false;  // simple test mapped two y's to one x
};

struct Verdict {
  Decision decision = Decision::reject;
  MatchHypothesis hypothesis;
  int K = 0;
  VerdictDiagnostics diagnostics;
  bool is_match() const noexcept { return decision == Decision::match; }
};

// Which K enters lambda_{i,n} in the two-phase test.
enum class ThresholdK { estimated, m2, fixed };

struct TestConfig {
  double lambda = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::optional<int> K;
  ThresholdK threshold_k = ThresholdK::estimated;
  int fixed_k = 1;
  // Off: compare against lambda itself rather than lambda_n.
  bool rate_correction = true;
  bool keep_scores = false;
};

// Sample-size facts the thresholds need.
struct TestContext {
  int alphabet_size = 2;
  std::int64_t n = 1;
  double alpha = 1.0;
};

void validate(const TestConfig& cfg);

Verdict unnikrishnan_test(const GjsMatrix& g, const HypothesisSpace& space, const TestContext& ctx,
                          const TestConfig& cfg);
Verdict unnikrishnan_test(const Database& x_db, const Database& y_db, int K, double lambda, double alpha,
                          const TestConfig& extra = {});

// Runs the K=1 test of every y_j against the whole first database.
Verdict simple_test(const GjsMatrix& g, const HypothesisSpace& single, const TestContext& ctx, const TestConfig& cfg);
Verdict simple_test(const Database& x_db, const Database& y_db, double lambda, double alpha,
                    const TestConfig& extra = {});

Verdict two_phase_test(const GjsMatrix& g, const FullHypothesisSpace& full, const TestContext& ctx,
                       const TestConfig& cfg);
Verdict two_phase_test(const Database& x_db, const Database& y_db, double lambda1, double lambda2, double alpha,
                       const TestConfig& extra = {});

}  // namespace seqmatch

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seqmatch/core_types.hpp"
#include "seqmatch/exponents.hpp"
#include "seqmatch/glrt.hpp"

namespace seqmatch {

enum class TestKind { unnikrishnan, simple, two_phase };
// Tests see the data only through types, so drawing multinomial counts is
// equivalent in distribution to drawing full sequences and counting.
enum class SampleMode { types, sequences };

struct SimulationSpec {
  DistList P, Q;
  double alpha = 1.0;
  std::optional<MatchHypothesis> truth;  // nullopt: no matched pairs
  TestKind test = TestKind::unnikrishnan;
  TestConfig cfg;                        // cfg.K is required by the known-K test
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  std::vector<std::int64_t> n_grid;
  int threads = 1;
  SampleMode mode = SampleMode::types;
};

void validate(const SimulationSpec& spec);

struct EventStats {
  std::string event;
  std::uint64_t trials = 0;
  std::uint64_t count = 0;
  double p_hat = 0.0;
  double stderr_p = 0.0;
  double exponent = 0.0;  // -log(p_hat)/n, or -log(3/trials)/n for a zero count
  double exp_lo = 0.0;    // exponent -/+ two delta-method standard deviations
  double exp_hi = 0.0;
  bool zero_count = false;
};

EventStats event_stats(std::string event, std::uint64_t count, std::uint64_t trials, std::int64_t n);

struct SimulationRow {
  std::int64_t n = 0;
  std::int64_t N = 0;
  double effective_alpha = 1.0;
  std::uint64_t trials = 0;
  std::uint64_t mismatch_count = 0;
  std::uint64_t reject_count = 0;
  std::uint64_t alarm_count = 0;
  std::uint64_t correct_k_count = 0;  // two-phase test: estimated K equals the true K
  // Mismatch and false reject under a match truth; false alarm under the null.
  std::vector<EventStats> events;
};

struct SimulationResult {
  std::vector<SimulationRow> rows;
};

using TypeDraw = std::pair<std::vector<EmpiricalType>, std::vector<EmpiricalType>>;

// The databases of one trial: x_i ~ P_i^N, y_j ~ Q_j^n, N = round(n alpha).
std::pair<Database, Database> draw_databases(const SimulationSpec& spec, std::int64_t n, std::uint64_t trial);
// The types of one trial's databases under spec.mode.
TypeDraw draw_types(const SimulationSpec& spec, std::int64_t n, std::uint64_t trial);

SimulationResult estimate_errors(const SimulationSpec& spec);

// Per n and event, the family member with the largest p_hat.
SimulationResult worst_case_sweep(const SimulationSpec& spec, const std::vector<std::pair<DistList, DistList>>& family);

}  // namespace seqmatch

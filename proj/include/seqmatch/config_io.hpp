#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "seqmatch/core_types.hpp"
#include "seqmatch/exponents.hpp"
#include "seqmatch/simulation.hpp"

namespace seqmatch::io {

// {"alphabet_size": k, "P": [...], "Q": [...], "truth": [[i, j], ...]?}
// Each distribution is a probability list or {"bern": p}.
struct DistsConfig {
  int alphabet_size = 2;
  DistList P, Q;
  std::optional<MatchHypothesis> truth;
};

Distribution parse_distribution(const nlohmann::json& j, int alphabet_size);
DistsConfig parse_dists(const nlohmann::json& j);
nlohmann::json parse_json_file(const std::string& path);

// One sequence per line, whitespace-separated symbol indices; blank lines skipped.
std::vector<Sequence> parse_sequences(const std::string& text);
std::vector<Sequence> load_sequences(const std::string& path);

// Simulation spec JSON: the dists fields plus "alpha", "test" {"kind",
// "K", "lambda", "lambda1", "lambda2", "rate_correction", "threshold_k",
// "fixed_k"}, "trials", "seed", "n_grid", "mode", and optional "family"
// (list of {"P", "Q"}) for a worst-case sweep.
struct SimulationConfig {
  SimulationSpec spec;
  std::vector<std::pair<DistList, DistList>> family;
};
SimulationConfig parse_simulation(const nlohmann::json& j);

nlohmann::json hypothesis_json(const MatchHypothesis& h);
MatchHypothesis parse_hypothesis(const nlohmann::json& j);

// "a:b:step" (inclusive of b up to rounding) or a comma list.
std::vector<double> parse_real_grid(const std::string& s);
std::vector<std::int64_t> parse_int_grid(const std::string& s);

// printf %.12g; infinities as "inf"/"-inf", NaN as "nan".
std::string fmt(double v);

// Writes to path.tmp.<pid> then renames over path.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace seqmatch::io

#include "seqmatch/config_io.hpp"

#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "seqmatch/errors.hpp"

namespace seqmatch::io {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw InputError("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw InputError("not a number: '" + s + "'");
  return v;
}

DistList parse_list(const json& j, int k, const char* name) {
  if (!j.is_array() || j.empty()) throw InputError(std::string("'") + name + "' must be a non-empty list");
  DistList out;
  for (const auto& d : j) out.push_back(parse_distribution(d, k));
  return out;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

Distribution parse_distribution(const json& j, int k) {
  if (j.is_object()) {
    if (!j.contains("bern") || j.size() != 1 || !j["bern"].is_number())
      throw InputError("distribution objects must be {\"bern\": p}");
    if (k != 2) throw InputError("Bernoulli shorthand needs alphabet_size 2");
    return Distribution::bernoulli(j["bern"].get<double>());
  }
  if (!j.is_array()) throw InputError("a distribution must be a list of probabilities or {\"bern\": p}");
  std::vector<double> p;
  for (const auto& v : j) {
    if (!v.is_number()) throw InputError("distribution entries must be numbers");
    p.push_back(v.get<double>());
  }
  if (static_cast<int>(p.size()) != k) throw InputError("distribution length differs from alphabet_size");
  return Distribution(std::move(p));
}

DistsConfig parse_dists(const json& j) {
  if (!j.is_object()) throw InputError("distribution config must be a JSON object");
  DistsConfig c;
  if (!j.contains("alphabet_size") || !j["alphabet_size"].is_number_integer())
    throw InputError("'alphabet_size' must be an integer");
  c.alphabet_size = j["alphabet_size"].get<int>();
  Alphabet check(c.alphabet_size);
  (void)check;
  if (!j.contains("P") || !j.contains("Q")) throw InputError("config needs 'P' and 'Q'");
  c.P = parse_list(j["P"], c.alphabet_size, "P");
  c.Q = parse_list(j["Q"], c.alphabet_size, "Q");
  if (c.Q.size() > c.P.size()) throw InputError("need |Q| <= |P|");
  if (j.contains("truth") && !j["truth"].is_null()) c.truth = parse_hypothesis(j["truth"]);
  return c;
}

json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

std::vector<Sequence> parse_sequences(const std::string& text) {
  std::vector<Sequence> out;
  std::istringstream lines(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    std::istringstream tok(line);
    Sequence s;
    std::string w;
    while (tok >> w) {
      std::size_t pos = 0;
      long v = -1;
      try {
        v = std::stol(w, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != w.size() || v < 0 || v >= Alphabet::kMaxSize)
        throw InputError("line " + std::to_string(lineno) + ": bad symbol '" + w + "'");
      s.push_back(static_cast<Symbol>(v));
    }
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

std::vector<Sequence> load_sequences(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_sequences(ss.str());
}

json hypothesis_json(const MatchHypothesis& h) {
  json a = json::array();
  for (const auto& [i, j] : h.pairs()) a.push_back({i, j});
  return a;
}

MatchHypothesis parse_hypothesis(const json& j) {
  if (!j.is_array()) throw InputError("a hypothesis must be a list of [i, j] pairs");
  std::vector<IndexPair> pairs;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
      throw InputError("hypothesis pairs must be [i, j] integer lists");
    pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
  }
  return MatchHypothesis(std::move(pairs));
}

SimulationConfig parse_simulation(const json& j) {
  const DistsConfig d = parse_dists(j);
  SimulationConfig c;
  SimulationSpec& s = c.spec;
  s.P = d.P;
  s.Q = d.Q;
  s.truth = d.truth;
  s.alpha = get_or<double>(j, "alpha", 1.0);
  s.trials = get_or<std::uint64_t>(j, "trials", 1000);
  s.seed = get_or<std::uint64_t>(j, "seed", 1);
  if (!j.contains("n_grid") || !j["n_grid"].is_array()) throw InputError("'n_grid' must be a list of integers");
  for (const auto& v : j["n_grid"]) {
    if (!v.is_number_integer()) throw InputError("'n_grid' entries must be integers");
    s.n_grid.push_back(v.get<std::int64_t>());
  }
  const std::string mode = get_or<std::string>(j, "mode", "types");
  if (mode == "types")
    s.mode = SampleMode::types;
  else if (mode == "sequences")
    s.mode = SampleMode::sequences;
  else
    throw InputError("'mode' must be 'types' or 'sequences'");

  if (!j.contains("test") || !j["test"].is_object()) throw InputError("'test' must be an object");
  const json& t = j["test"];
  const std::string kind = get_or<std::string>(t, "kind", "unnikrishnan");
  if (kind == "unnikrishnan")
    s.test = TestKind::unnikrishnan;
  else if (kind == "simple")
    s.test = TestKind::simple;
  else if (kind == "two_phase")
    s.test = TestKind::two_phase;
  else
    throw InputError("test kind must be 'unnikrishnan', 'simple' or 'two_phase'");
  if (t.contains("K")) s.cfg.K = get_or<int>(t, "K", 1);
  s.cfg.lambda = get_or<double>(t, "lambda", 0.0);
  s.cfg.lambda1 = get_or<double>(t, "lambda1", 0.0);
  s.cfg.lambda2 = get_or<double>(t, "lambda2", 0.0);
  s.cfg.rate_correction = get_or<bool>(t, "rate_correction", true);
  const std::string tk = get_or<std::string>(t, "threshold_k", "estimated");
  if (tk == "estimated")
    s.cfg.threshold_k = ThresholdK::estimated;
  else if (tk == "m2")
    s.cfg.threshold_k = ThresholdK::m2;
  else if (tk == "fixed")
    s.cfg.threshold_k = ThresholdK::fixed;
  else
    throw InputError("'threshold_k' must be 'estimated', 'm2' or 'fixed'");
  s.cfg.fixed_k = get_or<int>(t, "fixed_k", 1);

  if (j.contains("family")) {
    if (!j["family"].is_array()) throw InputError("'family' must be a list");
    for (const auto& f : j["family"]) {
      if (!f.is_object() || !f.contains("P") || !f.contains("Q"))
        throw InputError("family members need 'P' and 'Q'");
      c.family.emplace_back(parse_list(f["P"], d.alphabet_size, "P"), parse_list(f["Q"], d.alphabet_size, "Q"));
    }
  }
  return c;
}

std::vector<double> parse_real_grid(const std::string& s) {
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw InputError("grid must be start:stop:step");
    const double a = parse_double(parts[0]), b = parse_double(parts[1]), h = parse_double(parts[2]);
    if (!(h > 0.0) || !(b >= a) || !std::isfinite(a) || !std::isfinite(b))
      throw InputError("grid needs start <= stop and step > 0");
    const double count = std::floor((b - a) / h + 1e-9);
    if (count > 1e7) throw InputError("grid too large");
    for (long i = 0; i <= static_cast<long>(count); ++i) out.push_back(a + static_cast<double>(i) * h);
    return out;
  }
  for (const auto& p : split(s, ',')) out.push_back(parse_double(p));
  if (out.empty()) throw InputError("empty grid");
  return out;
}

std::vector<std::int64_t> parse_int_grid(const std::string& s) {
  std::vector<std::int64_t> out;
  for (double v : parse_real_grid(s)) {
    if (v != std::floor(v) || v < 1) throw InputError("integer grid values must be positive integers");
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp + "'");
    out << content;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw InputError("write to '" + tmp + "' failed");
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    const std::string why = std::strerror(errno);
    std::remove(tmp.c_str());
    throw InputError("cannot rename onto '" + path + "': " + why);
  }
}

}  // namespace seqmatch::io

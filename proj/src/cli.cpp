#include "seqmatch/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <json.hpp>
#include <algorithm>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <variant>

#include "seqmatch/config_io.hpp"
#include "seqmatch/errors.hpp"
#include "seqmatch/exponents.hpp"
#include "seqmatch/glrt.hpp"
#include "seqmatch/hypothesis_space.hpp"
#include "seqmatch/simulation.hpp"
#include "seqmatch/small_deviations.hpp"

namespace seqmatch::cli {

namespace {

using ojson = nlohmann::ordered_json;
using Cell = std::variant<double, std::int64_t, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return io::fmt(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  return std::get<std::string>(c);
}

// JSON numbers carry exactly the value the CSV text denotes.
ojson cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return io::fmt(*d);
    return std::stod(io::fmt(*d));
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* b = std::get_if<bool>(&c)) return *b;
  return std::get<std::string>(c);
}

std::string render(const Table& t, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    ojson arr = ojson::array();
    for (const auto& r : t.rows) {
      ojson o = ojson::object();
      for (std::size_t c = 0; c < t.columns.size(); ++c) o[t.columns[c]] = cell_json(r[c]);
      arr.push_back(std::move(o));
    }
    os << arr.dump(2) << "\n";
    return os.str();
  }
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << cell_text(r[c]);
    os << "\n";
  }
  return os.str();
}

std::string pairs_text(const MatchHypothesis& h) { return io::hypothesis_json(h).dump(); }

struct Globals {
  std::uint64_t seed = 1;
  bool seed_given = false;
  int threads = 1;
  std::string out;
  std::string format = "csv";
};

void emit(const Globals& g, const std::string& content, std::ostream& out) {
  if (g.out.empty())
    out << content;
  else
    io::write_atomic(g.out, content);
}

long resolve_truth(const io::DistsConfig& d, const HypothesisSpace& space) {
  if (d.truth) {
    const long l = space.index_of(*d.truth);
    if (l < 0) throw InputError("'truth' is not a hypothesis of the requested K");
    check_consistent(d.P, d.Q, *d.truth);
    return l;
  }
  const long l = consistent_hypothesis(d.P, d.Q, space);
  if (l < 0) throw InputError("no K-match is consistent with P and Q; give 'truth' explicitly");
  return l;
}

// --- subcommands -----------------------------------------------------------

struct EnumerateArgs {
  int m1 = 0, m2 = 0, k = 0;
  std::size_t cap = kDefaultEnumerationCap;
};

std::string do_enumerate(const EnumerateArgs& a, const Globals& g) {
  const HypothesisSpace space(a.m1, a.m2, a.k, a.cap);
  std::ostringstream os;
  if (g.format == "json") {
    ojson o;
    o["M1"] = a.m1;
    o["M2"] = a.m2;
    o["K"] = a.k;
    o["count"] = space.size();
    o["hypotheses"] = ojson::array();
    for (const auto& h : space.hypotheses()) o["hypotheses"].push_back(ojson::parse(pairs_text(h)));
    os << o.dump(2) << "\n";
    return os.str();
  }
  os << space.size() << "\n";
  for (std::size_t l = 0; l < space.size(); ++l) os << l << " " << pairs_text(space[l]) << "\n";
  return os.str();
}

struct TestArgs {
  std::string x, y, method = "unnikrishnan", threshold_k = "estimated";
  int alphabet = 0;
  double alpha = 1.0;
  std::optional<int> k;
  std::optional<double> lambda, lambda1, lambda2;
  int fixed_k = 1;
  bool no_rate_correction = false;
  bool scores = false;
};

std::string do_test(const TestArgs& a, const Globals& g) {
  const auto xs = io::load_sequences(a.x);
  const auto ys = io::load_sequences(a.y);
  if (xs.empty() || ys.empty()) throw InputError("sequence files must contain at least one sequence");
  int k = a.alphabet;
  if (k == 0) {
    int mx = 1;
    for (const auto* db : {&xs, &ys})
      for (const auto& s : *db)
        for (Symbol c : s) mx = std::max(mx, static_cast<int>(c));
    k = mx + 1;
  }
  const Database X(xs, Alphabet(k)), Y(ys, Alphabet(k));
  TestConfig cfg;
  cfg.rate_correction = !a.no_rate_correction;
  cfg.keep_scores = a.scores;
  cfg.fixed_k = a.fixed_k;
  if (a.threshold_k == "m2")
    cfg.threshold_k = ThresholdK::m2;
  else if (a.threshold_k == "fixed")
    cfg.threshold_k = ThresholdK::fixed;
  const std::int64_t n = static_cast<std::int64_t>(Y.seq_len());
  const std::int64_t N = long_length(n, a.alpha);
  if (N != static_cast<std::int64_t>(X.seq_len()))
    throw InputError("first-database sequences have length " + std::to_string(X.seq_len()) +
                     " but round(n * alpha) = " + std::to_string(N));

  Verdict v;
  std::string method = a.method;
  if (a.k) {
    if (!a.lambda) throw InputError("--k needs --lambda");
    cfg.lambda = *a.lambda;
    if (method == "simple") {
      if (*a.k != static_cast<int>(Y.count())) throw InputError("the simple test assumes K = M2");
      v = simple_test(X, Y, cfg.lambda, a.alpha, cfg);
    } else {
      v = unnikrishnan_test(X, Y, *a.k, cfg.lambda, a.alpha, cfg);
    }
  } else {
    if (!a.lambda1 || !a.lambda2) throw InputError("give --k with --lambda, or --lambda1 and --lambda2");
    method = "two_phase";
    v = two_phase_test(X, Y, *a.lambda1, *a.lambda2, a.alpha, cfg);
  }

  Table t;
  t.columns = {"method", "decision", "K", "hypothesis", "min_score", "second_min_score", "threshold", "estimated_K",
               "single_hypothesis", "inconsistent_assignment"};
  const auto& d = v.diagnostics;
  t.rows.push_back({method, std::string(v.is_match() ? "match" : "reject"), static_cast<std::int64_t>(v.K),
                    pairs_text(v.hypothesis), d.min_score, d.second_min_score, d.threshold,
                    static_cast<std::int64_t>(d.estimated_K.value_or(-1)), d.single_hypothesis,
                    d.inconsistent_assignment});
  if (g.format == "json") {
    ojson o;
    o["method"] = method;
    o["decision"] = v.is_match() ? "match" : "reject";
    o["K"] = v.K;
    o["hypothesis"] = ojson::parse(pairs_text(v.hypothesis));
    o["diagnostics"] = {{"min_score", cell_json(d.min_score)},
                        {"second_min_score", cell_json(d.second_min_score)},
                        {"threshold", cell_json(d.threshold)},
                        {"estimated_K", d.estimated_K ? ojson(*d.estimated_K) : ojson(nullptr)},
                        {"single_hypothesis", d.single_hypothesis},
                        {"inconsistent_assignment", d.inconsistent_assignment}};
    if (a.scores) {
      ojson sc = ojson::array();
      for (double s : d.scores) sc.push_back(cell_json(s));
      o["diagnostics"]["scores"] = sc;
    }
    return o.dump(2) + "\n";
  }
  return render(t, "csv");
}

struct ExponentArgs {
  std::string dists, grid;
  int k = 1;
  double alpha = 1.0;
};

std::string do_exponent(const ExponentArgs& a, const Globals& g) {
  const auto d = io::parse_dists(io::parse_json_file(a.dists));
  const std::vector<double> grid = io::parse_real_grid(a.grid);
  for (double v : grid)
    if (v < 0.0) throw InputError("lambda grid must be non-negative");
  const HypothesisSpace space(static_cast<int>(d.P.size()), static_cast<int>(d.Q.size()), a.k);
  const long l = resolve_truth(d, space);
  Table t;
  t.columns = {"lambda", "F_l", "converged", "active_t", "active_s"};
  for (double lam : grid) {
    const ExponentSolution s = f_l(d.P, d.Q, space, l, lam, a.alpha);
    t.rows.push_back({lam, s.value, s.converged, static_cast<std::int64_t>(s.active_t),
                      static_cast<std::int64_t>(s.active_s)});
  }
  return render(t, g.format);
}

struct SmallDevArgs {
  std::string dists, grid;
  int k = 1;
  double alpha = 1.0, epsilon = 0.1, tie_tol = kDefaultTieTolerance;
};

std::string do_small_dev(const SmallDevArgs& a, const Globals& g) {
  const auto d = io::parse_dists(io::parse_json_file(a.dists));
  const std::vector<std::int64_t> grid = io::parse_int_grid(a.grid);
  if (!(a.epsilon > 0.0 && a.epsilon < 1.0)) throw InputError("--epsilon must lie in (0, 1)");
  const HypothesisSpace space(static_cast<int>(d.P.size()), static_cast<int>(d.Q.size()), a.k);
  const long l = resolve_truth(d, space);
  Table t;
  t.columns = {"n", "Lambda_l", "tau", "nu_star", "chi_star", "psd_projected"};
  // Everything but chi* is independent of n.
  const SmallDevAnalysis base = analyze_small_deviations(d.P, d.Q, space, l, a.alpha, a.epsilon, 1, a.tie_tol);
  for (std::int64_t n : grid)
    t.rows.push_back({n, base.big_lambda, static_cast<std::int64_t>(base.tau), base.nu_star,
                      chi_star(base.big_lambda, base.nu_star, n), base.psd_projected});
  return render(t, g.format);
}

struct SimulateArgs {
  std::string spec;
};

std::string do_simulate(const SimulateArgs& a, const Globals& g) {
  io::SimulationConfig c = io::parse_simulation(io::parse_json_file(a.spec));
  if (g.seed_given) c.spec.seed = g.seed;
  c.spec.threads = g.threads;
  validate(c.spec);
  const SimulationResult r = c.family.empty() ? estimate_errors(c.spec) : worst_case_sweep(c.spec, c.family);
  Table t;
  t.columns = {"n", "event", "trials", "count", "p_hat", "stderr", "exponent", "exp_lo", "exp_hi"};
  for (const auto& row : r.rows)
    for (const auto& e : row.events)
      t.rows.push_back({row.n, e.event, static_cast<std::int64_t>(e.trials), static_cast<std::int64_t>(e.count),
                        e.p_hat, e.stderr_p, e.exponent, e.exp_lo, e.exp_hi});
  return render(t, g.format);
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Statistical sequence matching: tests, error exponents, second-order analysis, Monte Carlo"};
  app.require_subcommand(1);
  Globals g;
  g.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* seed_opt = app.add_option("--seed", g.seed, "Random seed (overrides the spec file)");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output file (written atomically); stdout when omitted");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  EnumerateArgs ea;
  auto* en = app.add_subcommand("enumerate", "List the K-match hypotheses");
  en->add_option("--m1", ea.m1, "First database size")->required();
  en->add_option("--m2", ea.m2, "Second database size")->required();
  en->add_option("--k", ea.k, "Number of matches")->required();
  en->add_option("--cap", ea.cap, "Enumeration cap");

  TestArgs ta;
  auto* te = app.add_subcommand("test", "Run a matching test on two sequence files");
  te->add_option("--x", ta.x, "First database: one sequence per line")->required()->check(CLI::ExistingFile);
  te->add_option("--y", ta.y, "Second database: one sequence per line")->required()->check(CLI::ExistingFile);
  te->add_option("--alpha", ta.alpha, "Length ratio N/n")->required()->check(CLI::PositiveNumber);
  te->add_option("--alphabet", ta.alphabet, "Alphabet size (default: largest symbol + 1)");
  te->add_option("--k", ta.k, "Known number of matches");
  te->add_option("--lambda", ta.lambda, "Threshold for the known-K tests");
  te->add_option("--lambda1", ta.lambda1, "Phase-one threshold (unknown K)");
  te->add_option("--lambda2", ta.lambda2, "Phase-two threshold (unknown K)");
  te->add_option("--method", ta.method, "Known-K test")->check(CLI::IsMember({"unnikrishnan", "simple"}));
  te->add_option("--threshold-k", ta.threshold_k, "K used in the unknown-K thresholds")
      ->check(CLI::IsMember({"estimated", "m2", "fixed"}));
  te->add_option("--fixed-k", ta.fixed_k, "K for --threshold-k fixed");
  te->add_flag("--no-rate-correction", ta.no_rate_correction, "Compare against lambda instead of lambda_n");
  te->add_flag("--scores", ta.scores, "Include every hypothesis score (json)");

  ExponentArgs xa;
  auto* ex = app.add_subcommand("exponent", "False-reject exponent F_l over a lambda grid");
  ex->add_option("--dists", xa.dists, "Distribution config (JSON)")->required()->check(CLI::ExistingFile);
  ex->add_option("--k", xa.k, "Number of matches")->required();
  ex->add_option("--alpha", xa.alpha, "Length ratio N/n")->required()->check(CLI::PositiveNumber);
  ex->add_option("--lambda-grid", xa.grid, "start:stop:step or comma list")->required();

  SmallDevArgs sa;
  auto* sd = app.add_subcommand("small-dev", "Second-order threshold chi* over an n grid");
  sd->add_option("--dists", sa.dists, "Distribution config (JSON)")->required()->check(CLI::ExistingFile);
  sd->add_option("--k", sa.k, "Number of matches")->required();
  sd->add_option("--alpha", sa.alpha, "Length ratio N/n")->required()->check(CLI::PositiveNumber);
  sd->add_option("--epsilon", sa.epsilon, "Target false-reject probability")->required();
  sd->add_option("--n-grid", sa.grid, "start:stop:step or comma list")->required();
  sd->add_option("--tie-tol", sa.tie_tol, "Relative tolerance for near-ties")->check(CLI::NonNegativeNumber);

  SimulateArgs ma;
  auto* si = app.add_subcommand("simulate", "Monte Carlo error probabilities");
  si->add_option("--spec", ma.spec, "Simulation spec (JSON)")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: config: " << one_line(e.what()) << "\n";
    return kExitConfig;
  }
  g.seed_given = seed_opt->count() > 0;

  try {
    std::string content;
    if (*en)
      content = do_enumerate(ea, g);
    else if (*te)
      content = do_test(ta, g);
    else if (*ex)
      content = do_exponent(xa, g);
    else if (*sd)
      content = do_small_dev(sa, g);
    else
      content = do_simulate(ma, g);
    emit(g, content, out);
  } catch (const InputError& e) {
    err << "error: config: " << one_line(e.what()) << "\n";
    return kExitConfig;
  } catch (const CapacityError& e) {
    err << "error: capacity: " << one_line(e.what()) << "\n";
    return kExitNumeric;
  } catch (const NumericError& e) {
    err << "error: numeric: " << one_line(e.what()) << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: internal: " << one_line(e.what()) << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

}  // namespace seqmatch::cli

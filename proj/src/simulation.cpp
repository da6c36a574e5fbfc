#include "seqmatch/simulation.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "seqmatch/errors.hpp"
#include "seqmatch/kernels.hpp"
#include "seqmatch/rng.hpp"

namespace seqmatch {

namespace {

constexpr std::uint64_t kBlock = 256;

std::vector<std::int64_t> multinomial(std::int64_t N, const Distribution& p, CounterRng& rng) {
  const int k = p.size();
  std::vector<double> rest(static_cast<std::size_t>(k) + 1, 0.0);
  for (int a = k - 1; a >= 0; --a) rest[a] = rest[a + 1] + p[a];
  std::vector<std::int64_t> c(static_cast<std::size_t>(k), 0);
  std::int64_t rem = N;
  for (int a = 0; a < k - 1 && rem > 0; ++a) {
    if (p[a] <= 0.0) continue;
    const double q = rest[a] > 0.0 ? std::min(1.0, p[a] / rest[a]) : 1.0;
    if (q >= 1.0) {
      c[a] = rem;
      rem = 0;
      break;
    }
    std::binomial_distribution<std::int64_t> bin(rem, q);
    c[a] = bin(rng);
    rem -= c[a];
  }
  c[static_cast<std::size_t>(k) - 1] += rem;
  return c;
}

Sequence draw_sequence(std::int64_t len, const Distribution& p, CounterRng& rng) {
  const int k = p.size();
  std::vector<double> cum(static_cast<std::size_t>(k));
  double s = 0.0;
  int last = 0;
  for (int a = 0; a < k; ++a) {
    s += p[a];
    cum[a] = s;
    if (p[a] > 0.0) last = a;
  }
  Sequence seq(static_cast<std::size_t>(len));
  for (auto& sym : seq) {
    const double u = rng.uniform() * s;
    int a = 0;
    while (a < last && !(u < cum[a])) ++a;
    sym = static_cast<Symbol>(a);
  }
  return seq;
}

int known_k(const SimulationSpec& spec) {
  if (spec.cfg.K) return *spec.cfg.K;
  if (spec.truth) return spec.truth->K();
  throw InputError("the known-K test needs K");
}

struct Counts {
  std::uint64_t mismatch = 0, reject = 0, alarm = 0, correct_k = 0;
  void add(const Counts& o) {
    mismatch += o.mismatch;
    reject += o.reject;
    alarm += o.alarm;
    correct_k += o.correct_k;
  }
};

}  // namespace

void validate(const SimulationSpec& spec) {
  if (spec.P.empty() || spec.Q.empty()) throw InputError("simulation needs non-empty P and Q");
  if (spec.Q.size() > spec.P.size()) throw InputError("need M2 <= M1");
  const int k = spec.P.front().size();
  for (const auto& d : spec.P)
    if (d.size() != k) throw InputError("distributions over different alphabets");
  for (const auto& d : spec.Q)
    if (d.size() != k) throw InputError("distributions over different alphabets");
  (void)Alphabet(k);  // throws on an unsupported size
  if (!(spec.alpha > 0.0)) throw InputError("alpha must be positive");
  if (spec.trials < 1) throw InputError("trials must be positive");
  if (spec.trials > std::numeric_limits<std::uint32_t>::max()) throw InputError("too many trials");
  if (spec.n_grid.empty()) throw InputError("n_grid must be non-empty");
  for (auto n : spec.n_grid)
    if (n < 1 || n > std::numeric_limits<std::uint32_t>::max()) throw InputError("n must be a positive 32-bit value");
  if (spec.threads < 1) throw InputError("threads must be positive");
  validate(spec.cfg);
  const int M1 = static_cast<int>(spec.P.size()), M2 = static_cast<int>(spec.Q.size());
  if (spec.truth) {
    spec.truth->check_bounds(M1, M2);
    if (spec.truth->K() < 1) throw InputError("a match truth needs at least one pair");
    check_consistent(spec.P, spec.Q, *spec.truth);
  } else {
    for (const auto& p : spec.P)
      for (const auto& q : spec.Q)
        if (p == q) throw InputError("under the null hypothesis no P_i may equal a Q_j");
  }
  if (spec.test == TestKind::unnikrishnan) {
    const int K = known_k(spec);
    if (K < 1 || K > M2) throw InputError("K must lie in [1, M2]");
  }
  if (spec.test == TestKind::simple &&
      ((spec.truth && spec.truth->K() != M2) || (spec.cfg.K && *spec.cfg.K != M2)))
    throw InputError("the simple test assumes K = M2");
}

EventStats event_stats(std::string event, std::uint64_t count, std::uint64_t trials, std::int64_t n) {
  EventStats e;
  e.event = std::move(event);
  e.trials = trials;
  e.count = count;
  const double T = static_cast<double>(trials), nd = static_cast<double>(n);
  e.p_hat = static_cast<double>(count) / T;
  e.stderr_p = std::sqrt(e.p_hat * (1.0 - e.p_hat) / T);
  if (count == 0) {
    e.zero_count = true;
    e.exponent = -std::log(3.0 / T) / nd;
    e.exp_lo = e.exponent;
    e.exp_hi = e.exponent;
    return e;
  }
  e.exponent = -std::log(e.p_hat) / nd;
  const double sd = e.stderr_p / (e.p_hat * nd);
  e.exp_lo = e.exponent - 2.0 * sd;
  e.exp_hi = e.exponent + 2.0 * sd;
  return e;
}

TypeDraw draw_types(const SimulationSpec& spec, std::int64_t n, std::uint64_t trial) {
  const std::int64_t N = long_length(n, spec.alpha);
  if (N < 1) throw InputError("round(n * alpha) must be at least 1");
  const int M1 = static_cast<int>(spec.P.size());
  const int k = spec.P.front().size();
  const Alphabet alphabet(k);
  TypeDraw out;
  auto one = [&](const Distribution& p, std::int64_t len, std::uint32_t stream) {
    CounterRng rng(spec.seed, stream, static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(n));
    if (spec.mode == SampleMode::types) return EmpiricalType(multinomial(len, p, rng), len);
    return empirical_type(draw_sequence(len, p, rng), alphabet);
  };
  for (int i = 0; i < M1; ++i) out.first.push_back(one(spec.P[i], N, static_cast<std::uint32_t>(i)));
  for (std::size_t j = 0; j < spec.Q.size(); ++j)
    out.second.push_back(one(spec.Q[j], n, static_cast<std::uint32_t>(M1 + j)));
  return out;
}

std::pair<Database, Database> draw_databases(const SimulationSpec& spec, std::int64_t n, std::uint64_t trial) {
  const std::int64_t N = long_length(n, spec.alpha);
  if (N < 1) throw InputError("round(n * alpha) must be at least 1");
  const int M1 = static_cast<int>(spec.P.size());
  const Alphabet alphabet(spec.P.front().size());
  std::vector<Sequence> xs, ys;
  for (int i = 0; i < M1; ++i) {
    CounterRng rng(spec.seed, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(trial),
                   static_cast<std::uint32_t>(n));
    xs.push_back(draw_sequence(N, spec.P[i], rng));
  }
  for (std::size_t j = 0; j < spec.Q.size(); ++j) {
    CounterRng rng(spec.seed, static_cast<std::uint32_t>(M1 + j), static_cast<std::uint32_t>(trial),
                   static_cast<std::uint32_t>(n));
    ys.push_back(draw_sequence(n, spec.Q[j], rng));
  }
  return {Database(std::move(xs), alphabet), Database(std::move(ys), alphabet)};
}

SimulationResult estimate_errors(const SimulationSpec& spec) {
  validate(spec);
  const int M1 = static_cast<int>(spec.P.size()), M2 = static_cast<int>(spec.Q.size());
  const int k = spec.P.front().size();
  std::optional<HypothesisSpace> known, single;
  std::optional<FullHypothesisSpace> full;
  if (spec.test == TestKind::unnikrishnan) known.emplace(M1, M2, known_k(spec));
  if (spec.test == TestKind::simple) single.emplace(M1, 1, 1);
  if (spec.test == TestKind::two_phase) full.emplace(M1, M2);

  SimulationResult result;
  for (const std::int64_t n : spec.n_grid) {
    const ProblemConfig pc = make_config(M1, M2, k, spec.alpha, n);
    const TestContext ctx{k, n, pc.effective_alpha};
    const std::uint64_t nblocks = (spec.trials + kBlock - 1) / kBlock;
    std::vector<Counts> per_block(nblocks);
    std::atomic<std::uint64_t> next{0};

    auto worker = [&] {
      const std::size_t pairs = static_cast<std::size_t>(M1) * M2;
      std::vector<double> p, q, g;
      for (std::uint64_t b = next++; b < nblocks; b = next++) {
        const std::uint64_t t0 = b * kBlock;
        const std::uint64_t t1 = std::min(spec.trials, t0 + kBlock);
        const std::size_t B = static_cast<std::size_t>(t1 - t0);
        const std::size_t m = B * pairs;
        p.assign(static_cast<std::size_t>(k) * m, 0.0);
        q.assign(static_cast<std::size_t>(k) * m, 0.0);
        g.assign(m, 0.0);
        // Symbol-major planes over (trial, i, j) so one batched call scores the block.
        for (std::size_t r = 0; r < B; ++r) {
          const TypeDraw d = draw_types(spec, n, t0 + r);
          const double invN = 1.0 / static_cast<double>(pc.N), invn = 1.0 / static_cast<double>(n);
          for (int i = 0; i < M1; ++i)
            for (int j = 0; j < M2; ++j) {
              const std::size_t col = r * pairs + static_cast<std::size_t>(i) * M2 + j;
              for (int a = 0; a < k; ++a) {
                p[static_cast<std::size_t>(a) * m + col] = static_cast<double>(d.first[i].counts()[a]) * invN;
                q[static_cast<std::size_t>(a) * m + col] = static_cast<double>(d.second[j].counts()[a]) * invn;
              }
            }
        }
        kernels::gjs_batch(p.data(), q.data(), m, k, pc.effective_alpha, g.data());
        Counts c;
        for (std::size_t r = 0; r < B; ++r) {
          GjsMatrix G(M1, M2);
          for (int i = 0; i < M1; ++i)
            for (int j = 0; j < M2; ++j) G(i, j) = std::max(0.0, g[r * pairs + static_cast<std::size_t>(i) * M2 + j]);
          Verdict v;
          if (spec.test == TestKind::unnikrishnan) {
            TestConfig cfg = spec.cfg;
            cfg.keep_scores = false;
            v = unnikrishnan_test(G, *known, ctx, cfg);
          } else if (spec.test == TestKind::simple) {
            v = simple_test(G, *single, ctx, spec.cfg);
          } else {
            v = two_phase_test(G, *full, ctx, spec.cfg);
          }
          if (spec.truth) {
            if (!v.is_match())
              ++c.reject;
            else if (!(v.hypothesis == *spec.truth))
              ++c.mismatch;
            if (v.diagnostics.estimated_K && *v.diagnostics.estimated_K == spec.truth->K()) ++c.correct_k;
          } else if (v.is_match()) {
            ++c.alarm;
          }
        }
        per_block[b] = c;
      }
    };

    const int nthreads = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(spec.threads), nblocks));
    if (nthreads <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    Counts total;
    for (const auto& c : per_block) total.add(c);

    SimulationRow row;
    row.n = n;
    row.N = pc.N;
    row.effective_alpha = pc.effective_alpha;
    row.trials = spec.trials;
    row.mismatch_count = total.mismatch;
    row.reject_count = total.reject;
    row.alarm_count = total.alarm;
    row.correct_k_count = total.correct_k;
    if (spec.truth) {
      row.events.push_back(event_stats("mismatch", total.mismatch, spec.trials, n));
      row.events.push_back(event_stats("false_reject", total.reject, spec.trials, n));
    } else {
      row.events.push_back(event_stats("false_alarm", total.alarm, spec.trials, n));
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

SimulationResult worst_case_sweep(const SimulationSpec& spec, const std::vector<std::pair<DistList, DistList>>& family) {
  if (family.empty()) throw InputError("worst-case sweep needs a non-empty family");
  SimulationResult worst;
  for (std::size_t f = 0; f < family.size(); ++f) {
    SimulationSpec s = spec;
    s.P = family[f].first;
    s.Q = family[f].second;
    SimulationResult r = estimate_errors(s);
    if (f == 0) {
      worst = std::move(r);
      continue;
    }
    for (std::size_t row = 0; row < r.rows.size(); ++row)
      for (std::size_t e = 0; e < r.rows[row].events.size(); ++e)
        if (r.rows[row].events[e].p_hat > worst.rows[row].events[e].p_hat)
          worst.rows[row].events[e] = r.rows[row].events[e];
  }
  return worst;
}

}  // namespace seqmatch

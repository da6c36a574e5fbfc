#include "seqmatch/convex_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "seqmatch/divergences.hpp"
#include "seqmatch/errors.hpp"

namespace seqmatch::solver {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Maps each block's support onto a slice of one flat variable vector.
struct Layout {
  int k = 0;
  std::vector<std::vector<int>> supp;
  std::vector<int> offset;
  std::vector<std::vector<int>> var;  // var[b][a] = flat index or -1
  int n = 0;

  explicit Layout(const std::vector<std::vector<int>>& supports, int alphabet) : k(alphabet), supp(supports) {
    for (const auto& s : supp) {
      offset.push_back(n);
      std::vector<int> v(static_cast<std::size_t>(k), -1);
      for (std::size_t p = 0; p < s.size(); ++p) v[s[p]] = n + static_cast<int>(p);
      var.push_back(std::move(v));
      n += static_cast<int>(s.size());
    }
  }
  int blocks() const { return static_cast<int>(supp.size()); }
  double at(const Eigen::VectorXd& z, int b, int a) const {
    const int i = var[b][a];
    return i < 0 ? 0.0 : z[i];
  }
  std::vector<Distribution> unpack(const Eigen::VectorXd& z) const {
    std::vector<Distribution> out;
    for (int b = 0; b < blocks(); ++b) {
      std::vector<double> p(static_cast<std::size_t>(k), 0.0);
      double s = 0.0;
      for (int a : supp[b]) s += std::max(0.0, z[var[b][a]]);
      for (int a : supp[b]) p[a] = std::max(0.0, z[var[b][a]]) / s;
      out.emplace_back(std::move(p));
    }
    return out;
  }
};

std::vector<int> support_of(const Distribution& d) {
  std::vector<int> s;
  for (int a = 0; a < d.size(); ++a)
    if (d[a] > 0.0) s.push_back(a);
  return s;
}

void check_problem(const Problem& p) {
  if (p.blocks.empty()) throw InputError("solver problem has no blocks");
  const int k = p.blocks.front().target.size();
  for (const auto& b : p.blocks) {
    if (b.target.size() != k) throw InputError("solver blocks over different alphabets");
    if (!(b.weight > 0.0)) throw InputError("solver block weights must be positive");
  }
  const int B = static_cast<int>(p.blocks.size());
  for (const auto& c : p.constraints)
    for (const auto& e : c)
      if (e.omega < 0 || e.omega >= B || e.psi < 0 || e.psi >= B) throw InputError("constraint edge out of range");
  if (!(p.alpha > 0.0)) throw InputError("alpha must be positive");
}

struct Evaluator {
  const Problem& p;
  const Layout& L;
  std::vector<std::vector<double>> logt;  // log targets on the support

  Evaluator(const Problem& prob, const Layout& lay) : p(prob), L(lay) {
    for (int b = 0; b < L.blocks(); ++b) {
      std::vector<double> lt(static_cast<std::size_t>(L.k), 0.0);
      for (int a : L.supp[b]) lt[a] = std::log(p.blocks[b].target[a]);
      logt.push_back(std::move(lt));
    }
  }

  double f(const Eigen::VectorXd& z, Eigen::VectorXd* g, Eigen::MatrixXd* H) const {
    double v = 0.0;
    for (int b = 0; b < L.blocks(); ++b) {
      const double w = p.blocks[b].weight;
      for (int a : L.supp[b]) {
        const int i = L.var[b][a];
        const double x = z[i];
        const double lr = std::log(x) - logt[b][a];
        v += w * x * lr;
        if (g) (*g)[i] += w * (lr + 1.0);
        if (H) (*H)(i, i) += w / x;
      }
    }
    return v;
  }

  double c(std::size_t k, const Eigen::VectorXd& z, Eigen::VectorXd* g, Eigen::MatrixXd* H) const {
    const double al = p.alpha, cc = 1.0 + al;
    double v = 0.0;
    for (const auto& e : p.constraints[k]) {
      for (int a = 0; a < L.k; ++a) {
        const int ix = L.var[e.omega][a], iy = L.var[e.psi][a];
        const double x = ix < 0 ? 0.0 : z[ix];
        const double y = iy < 0 ? 0.0 : z[iy];
        const double s = al * x + y;
        if (s <= 0.0) continue;
        const double lx = x > 0.0 ? std::log(cc * x / s) : 0.0;
        const double ly = y > 0.0 ? std::log(cc * y / s) : 0.0;
        v += al * x * lx + y * ly;
        if (g) {
          if (ix >= 0) (*g)[ix] += al * lx;
          if (iy >= 0) (*g)[iy] += ly;
        }
        if (H) {
          if (ix >= 0) (*H)(ix, ix) += al / x - al * al / s;
          if (iy >= 0) (*H)(iy, iy) += 1.0 / y - 1.0 / s;
          if (ix >= 0 && iy >= 0) {
            (*H)(ix, iy) -= al / s;
            (*H)(iy, ix) -= al / s;
          }
        }
      }
    }
    return v;
  }

  // Barrier objective; +inf outside the strict interior.
  double phi(const Eigen::VectorXd& z, double tau) const {
    for (int i = 0; i < L.n; ++i)
      if (!(z[i] > 0.0)) return kInf;
    double v = tau * f(z, nullptr, nullptr);
    for (std::size_t k = 0; k < p.constraints.size(); ++k) {
      const double slack = p.lambda - c(k, z, nullptr, nullptr);
      if (!(slack > 0.0)) return kInf;
      v -= std::log(slack);
    }
    return v;
  }

  bool strictly_feasible(const Eigen::VectorXd& z) const {
    for (int i = 0; i < L.n; ++i)
      if (!(z[i] > 0.0)) return false;
    for (std::size_t k = 0; k < p.constraints.size(); ++k)
      if (!(c(k, z, nullptr, nullptr) < p.lambda)) return false;
    return true;
  }
};

// Equality-constrained Newton step: [H A'; A 0] [dz; w] = [-g; 0].
Eigen::VectorXd newton_step(const Eigen::MatrixXd& H, const Eigen::VectorXd& g, const Layout& L) {
  const int n = L.n, B = L.blocks();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + B, n + B);
  K.topLeftCorner(n, n) = H;
  for (int b = 0; b < B; ++b)
    for (int a : L.supp[b]) {
      K(n + b, L.var[b][a]) = 1.0;
      K(L.var[b][a], n + b) = 1.0;
    }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + B);
  rhs.head(n) = -g;
  Eigen::VectorXd sol = K.partialPivLu().solve(rhs);
  return sol.head(n);
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<int> components(const Problem& p, int* count) {
  const int B = static_cast<int>(p.blocks.size());
  UnionFind uf(B);
  for (const auto& c : p.constraints)
    for (const auto& e : c) uf.unite(e.omega, e.psi);
  std::vector<int> label(static_cast<std::size_t>(B), -1), root_label(static_cast<std::size_t>(B), -1);
  int next = 0;
  for (int b = 0; b < B; ++b) {
    const int r = uf.find(b);
    if (root_label[r] < 0) root_label[r] = next++;
    label[b] = root_label[r];
  }
  if (count) *count = next;
  return label;
}

double objective(const Problem& p, const std::vector<Distribution>& x) {
  double v = 0.0;
  for (std::size_t b = 0; b < p.blocks.size(); ++b) v += p.blocks[b].weight * kl(x[b], p.blocks[b].target);
  return v;
}

double constraint_value(const Problem& p, std::size_t k, const std::vector<Distribution>& x) {
  double v = 0.0;
  for (const auto& e : p.constraints[k]) v += gjs(x[e.omega], x[e.psi], p.alpha);
  return v;
}

Result solve_equal(const Problem& p, const Options& opt) {
  check_problem(p);
  const int k = p.blocks.front().target.size();
  int C = 0;
  const std::vector<int> comp = components(p, &C);

  Result res;
  res.converged = true;
  std::vector<std::vector<double>> shared(static_cast<std::size_t>(C));
  for (int c = 0; c < C; ++c) {
    std::vector<int> members;
    for (std::size_t b = 0; b < comp.size(); ++b)
      if (comp[b] == c) members.push_back(static_cast<int>(b));
    std::vector<int> S;
    for (int a = 0; a < k; ++a) {
      bool all = true;
      for (int b : members) all = all && p.blocks[b].target[a] > 0.0;
      if (all) S.push_back(a);
    }
    if (S.empty()) {
      res.value = kInf;
      res.no_feasible_start = true;
      res.converged = false;
      shared[c] = p.blocks[members.front()].target.probs();
      continue;
    }
    // One shared distribution over S carrying the summed objective.
    Layout L({S}, k);
    Eigen::VectorXd z = Eigen::VectorXd::Constant(L.n, 1.0 / static_cast<double>(S.size()));
    auto fval = [&](const Eigen::VectorXd& v, Eigen::VectorXd* g, Eigen::MatrixXd* H) {
      double s = 0.0;
      for (int b : members) {
        const double w = p.blocks[b].weight;
        for (std::size_t q = 0; q < S.size(); ++q) {
          const double x = v[static_cast<int>(q)];
          const double lr = std::log(x) - std::log(p.blocks[b].target[S[q]]);
          s += w * x * lr;
          if (g) (*g)[static_cast<int>(q)] += w * (lr + 1.0);
          if (H) (*H)(static_cast<int>(q), static_cast<int>(q)) += w / x;
        }
      }
      return s;
    };
    bool done = false;
    for (int it = 0; it < opt.max_newton_per_stage * 4 && !done; ++it) {
      ++res.iterations;
      Eigen::VectorXd g = Eigen::VectorXd::Zero(L.n);
      Eigen::MatrixXd H = Eigen::MatrixXd::Zero(L.n, L.n);
      const double f0 = fval(z, &g, &H);
      const Eigen::VectorXd dz = newton_step(H, g, L);
      const double dec = -g.dot(dz);
      if (dec / 2.0 <= opt.newton_tol) {
        done = true;
        break;
      }
      double t = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 80; ++ls, t *= 0.5) {
        const Eigen::VectorXd zn = z + t * dz;
        if ((zn.array() <= 0.0).any()) continue;
        if (fval(zn, nullptr, nullptr) <= f0 - 0.25 * t * dec) {
          z = zn;
          moved = true;
          break;
        }
      }
      if (!moved) done = dec / 2.0 < 1e-9;
      if (!moved) break;
    }
    res.converged = res.converged && done;
    std::vector<double> full(static_cast<std::size_t>(k), 0.0);
    double s = z.sum();
    for (std::size_t q = 0; q < S.size(); ++q) full[S[q]] = z[static_cast<int>(q)] / s;
    shared[c] = std::move(full);
  }
  for (std::size_t b = 0; b < comp.size(); ++b) res.x.emplace_back(shared[comp[b]]);
  if (std::isfinite(res.value)) res.value = objective(p, res.x);
  return res;
}

Result solve(const Problem& p, const Options& opt) {
  check_problem(p);
  if (!(p.lambda > 0.0)) throw InputError("barrier solver needs lambda > 0; use solve_equal for lambda = 0");
  const int k = p.blocks.front().target.size();
  std::vector<std::vector<int>> supports;
  for (const auto& b : p.blocks) supports.push_back(support_of(b.target));
  Layout L(supports, k);
  Evaluator ev(p, L);

  // The targets themselves may already be feasible.
  Result res;
  {
    std::vector<Distribution> t;
    for (const auto& b : p.blocks) t.push_back(b.target);
    bool ok = true;
    for (std::size_t c = 0; c < p.constraints.size(); ++c) ok = ok && constraint_value(p, c, t) <= p.lambda;
    if (ok) {
      res.x = std::move(t);
      res.value = 0.0;
      res.converged = true;
      return res;
    }
  }

  // Strictly feasible start: each component's shared optimum, blended with
  // the uniform distribution on each block's own support where supports differ.
  const Result eq = solve_equal(p, opt);
  res.iterations = eq.iterations;
  Eigen::VectorXd z(L.n);
  bool found = false;
  for (double eta : {0.0, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-10, 1e-12}) {
    for (int b = 0; b < L.blocks(); ++b) {
      const double u = 1.0 / static_cast<double>(L.supp[b].size());
      double s = 0.0;
      for (int a : L.supp[b]) s += eq.x[b][a];
      for (int a : L.supp[b]) {
        const double base = s > 0.0 ? eq.x[b][a] / s : u;
        z[L.var[b][a]] = (1.0 - eta) * base + eta * u;
      }
    }
    if (ev.strictly_feasible(z)) {
      found = true;
      break;
    }
  }
  if (!found) {
    res.no_feasible_start = true;
    res.value = kInf;
    res.x = eq.x;
    return res;
  }

  const double m = static_cast<double>(p.constraints.size());
  double tau = opt.tau0;
  bool last_centered = false, reached_gap = false;
  for (int stage = 0; stage < opt.max_stages; ++stage) {
    last_centered = false;
    for (int it = 0; it < opt.max_newton_per_stage; ++it) {
      ++res.iterations;
      Eigen::VectorXd g = Eigen::VectorXd::Zero(L.n);
      Eigen::MatrixXd H = Eigen::MatrixXd::Zero(L.n, L.n);
      ev.f(z, &g, &H);
      g *= tau;
      H *= tau;
      for (std::size_t c = 0; c < p.constraints.size(); ++c) {
        Eigen::VectorXd gc = Eigen::VectorXd::Zero(L.n);
        Eigen::MatrixXd Hc = Eigen::MatrixXd::Zero(L.n, L.n);
        const double slack = p.lambda - ev.c(c, z, &gc, &Hc);
        g += gc / slack;
        H += Hc / slack + gc * gc.transpose() / (slack * slack);
      }
      const Eigen::VectorXd dz = newton_step(H, g, L);
      // Centering error in objective units is the half decrement over tau.
      const double dec = -g.dot(dz);
      const double gap = dec / (2.0 * std::max(1.0, tau));
      if (!(dec >= 0.0) || gap <= opt.newton_tol) {
        last_centered = true;
        break;
      }
      const double phi0 = ev.phi(z, tau);
      double t = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 80; ++ls, t *= 0.5) {
        const Eigen::VectorXd zn = z + t * dz;
        const double phin = ev.phi(zn, tau);
        if (!std::isfinite(phin)) continue;
        if (phin <= phi0 - 0.25 * t * dec) {
          z = zn;
          moved = true;
          break;
        }
      }
      if (!moved) {
        // Rounding noise in phi dominates; accept as centered when close.
        last_centered = gap < 1e-9;
        break;
      }
    }
    if (m / tau < opt.gap_tol) {
      reached_gap = true;
      break;
    }
    tau *= opt.tau_growth;
  }
  res.x = L.unpack(z);
  res.value = std::max(0.0, objective(p, res.x));
  res.converged = last_centered && reached_gap;
  return res;
}

}  // namespace seqmatch::solver

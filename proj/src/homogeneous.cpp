#include "monodyn/homogeneous.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace monodyn {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

double max_row_sum(const HomogeneousMap& h) {
  double m = 0.0;
  for (const auto& gens : h.generators().rows())
    for (const auto& g : gens) {
      double s = 0.0;
      for (double v : g) s += v;
      m = std::max(m, s);
    }
  return m;
}

// Selection attaining the maximum in every row of h at x.
std::vector<int> greedy_choice(const HomogeneousMap& h, std::span<const double> x) {
  std::vector<int> choice;
  for (const auto& gens : h.generators().rows()) {
    int best = 0;
    double bv = dot(gens[0], x);
    for (std::size_t g = 1; g < gens.size(); ++g) {
      const double v = dot(gens[g], x);
      if (v > bv) {
        bv = v;
        best = static_cast<int>(g);
      }
    }
    choice.push_back(best);
  }
  return choice;
}

double max_selection_radius(const HomogeneousMap& h, const AnalysisConfig& cfg) {
  const auto& r = h.generators();
  const int n = r.n();
  std::vector<int> choice(idx(n), 0);
  double best = 0.0;
  for (;;) {
    best = std::max(best, spectral_radius(r.selection(choice), cfg));
    int i = 0;
    for (; i < n; ++i) {
      if (++choice[idx(i)] < static_cast<int>(r.generators(i).size())) break;
      choice[idx(i)] = 0;
    }
    if (i == n) return best;
  }
}

// Shifted nonlinear power iteration: brackets tau(h) between the
// Collatz-Wielandt upper ratio and the radius of the greedy selection.
std::optional<double> cw_iteration(const HomogeneousMap& h, const AnalysisConfig& cfg) {
  const int n = h.n();
  const double shift = 0.5 * max_row_sum(h);
  if (shift == 0.0) return 0.0;
  Vector x(idx(n), 1.0);
  double lower = 0.0;
  for (std::int64_t it = 0; it < cfg.caps.iteration_cap; ++it) {
    Vector y = h(x);
    double upper = 0.0, low_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) {
      y[i] += shift * x[i];
      upper = std::max(upper, y[i] / x[i]);
      low_ratio = std::min(low_ratio, y[i] / x[i]);
    }
    upper -= shift;
    lower = std::max(lower, low_ratio - shift);
    if (it % 16 == 0 || upper - lower <= cfg.tol.eps_rho)
      lower = std::max(lower, spectral_radius(h.generators().selection(greedy_choice(h, x)), cfg));
    if (upper - lower <= cfg.tol.eps_rho / 10.0 * std::max(1.0, upper)) return 0.5 * (upper + lower);
    const double m = *std::max_element(y.begin(), y.end());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::max(y[i] / m, 1e-300);
  }
  return std::nullopt;
}

}  // namespace

double WeightedNorm::operator()(std::span<const double> x) const {
  double a = 0.0, b = 0.0;
  for (int i : A) a = std::max(a, std::abs(x[idx(i)] / v[idx(i)]));
  for (int i : B) b = std::max(b, std::abs(x[idx(i)] / v[idx(i)]));
  return a + alpha * b;
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Certified: return "Certified";
    case Outcome::NecessaryOnly: return "NecessaryOnly";
    case Outcome::Unstable: return "Unstable";
  }
  return "?";
}

ABSplit ab_split(const HomogeneousMap& h, const AnalysisConfig& cfg) {
  const auto& gens = h.generators();
  CriticalWitness w = critical_graph_witness(gens, cfg);
  const Digraph g = digraph(graph_union_witness(gens), cfg.tol.arc_tol);
  const auto reaches = backward_reachable(g, w.critical_nodes);

  ABSplit s{{}, {}, w.critical_nodes, w.critical_graph, w};
  for (int i = 0; i < h.n(); ++i) (reaches[idx(i)] ? s.A : s.B).push_back(i);
  for (int i : s.B)
    for (const auto& row : gens.generators(i))
      for (int j : s.A)
        if (row[idx(j)] > cfg.tol.arc_tol)
          throw InternalError("block_structure", "a B row has weight on A");
  return s;
}

Vector positive_eigenvector(const HomogeneousMap& h, const ABSplit& split, const AnalysisConfig& cfg) {
  if (split.critical_nodes.empty()) throw PreconditionError("no_critical_nodes", "map has no critical nodes");
  const int n = h.n();
  const NonnegMatrix& m = split.witness.matrix;
  const auto dec = decompose(m, cfg);

  Vector u(idx(n), 0.0);
  for (const NodeSet& cls : dec.critical_classes()) {
    const Vector pv = right_perron(m, cls, cfg);
    for (std::size_t a = 0; a < cls.size(); ++a) u[idx(cls[a])] = pv[a];
  }

  // h^k(u) increases to a fixed point. Once the step is below eps_fix keep
  // polishing for a bounded number of steps and return the best iterate.
  constexpr int kPolishSteps = 1000;
  bool converged = false;
  int polish = 0;
  Vector best;
  double best_step = std::numeric_limits<double>::infinity();
  for (std::int64_t it = 0; it < cfg.caps.iteration_cap && polish < kPolishSteps; ++it) {
    Vector next = h(u);
    for (int i : split.B) next[idx(i)] = 0.0;
    const double step = sup_dist(next, u);
    const double scale = std::max(1.0, sup_norm(next));
    if (step <= cfg.tol.eps_fix * scale) converged = true;
    if (converged) {
      ++polish;
      if (step < best_step) {
        best_step = step;
        best = u;
      }
      if (step <= 1e-15 * scale) break;
    }
    u = std::move(next);
  }
  if (!converged) throw InconclusiveError("eigenvector_no_convergence", "positive eigenvector iteration did not converge");
  u = std::move(best);
  for (int i : split.A)
    if (!(u[idx(i)] >= cfg.tol.delta))
      throw InternalError("eigenvector_not_positive", "eigenvector vanishes on A");
  return u;
}

double cw_radius(const HomogeneousMap& h, const AnalysisConfig& cfg) {
  const bool enumerable = h.generators().selection_count() <= cfg.caps.selection_cap;
  const auto iter = cw_iteration(h, cfg);
  if (!enumerable) {
    if (!iter) throw InconclusiveError("cw_no_convergence", "Collatz-Wielandt iteration did not converge");
    return *iter;
  }
  const double exact = max_selection_radius(h, cfg);
  if (iter && std::abs(*iter - exact) > 2.0 * cfg.tol.eps_rho * std::max(1.0, exact))
    throw InternalError("cw_mismatch", "Collatz-Wielandt iteration disagrees with the selection maximum");
  return exact;
}

SubEigenpair sub_eigenpair(const HomogeneousMap& hB, const AnalysisConfig& cfg) {
  const double tau = cw_radius(hB, cfg);
  if (tau >= 1.0 - cfg.tol.eps_rho) throw PreconditionError("tau_not_below_one", "tau(hB) >= 1");
  const double lambda = 0.5 * (1.0 + tau);
  const auto n = static_cast<std::size_t>(hB.n());

  auto step = [&](const Vector& w) {
    Vector next = hB(w);
    for (double& v : next) v = 1.0 + v / lambda;
    return next;
  };
  Vector w(n, 1.0);
  for (std::int64_t it = 0; it < cfg.caps.iteration_cap; ++it) {
    Vector next = step(w);
    const double d = sup_dist(next, w);
    w = std::move(next);
    if (d <= cfg.tol.eps_fix * std::max(1.0, sup_norm(w))) return {lambda, w};
  }

  // Slow contraction (tau close to one): switch to policy iteration, solving
  // (I - Q/lambda) w = 1 for the selection Q active at the current w.
  for (std::int64_t it = 0; it < 1000; ++it) {
    const NonnegMatrix q = hB.generators().selection(greedy_choice(hB, w));
    Matrix a = Matrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) -= q.entries()(i, j) / lambda;
    Vector next;
    try {
      next = solve(a, Vector(n, 1.0));
    } catch (const std::domain_error&) {
      break;
    }
    const double d = sup_dist(next, w);
    w = std::move(next);
    if (d <= cfg.tol.eps_fix * std::max(1.0, sup_norm(w))) {
      if (sup_dist(step(w), w) <= 10.0 * cfg.tol.eps_fix * std::max(1.0, sup_norm(w))) return {lambda, w};
      break;
    }
  }
  throw InconclusiveError("sub_eigenpair_no_convergence", "sub-eigenvector iteration did not converge");
}

double max_expansion_excess(const std::function<Vector(std::span<const double>)>& map, const WeightedNorm& norm,
                            std::int64_t pairs, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const std::size_t n = norm.v.size();
  double worst = -std::numeric_limits<double>::infinity();
  for (std::int64_t k = 0; k < pairs; ++k) {
    Vector x(n), y(n);
    // Alternate independent pairs with nearby pairs to probe local slopes.
    const double spread = (k % 2 == 0) ? scale : 1e-2 * scale;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = scale * unit(rng);
      y[i] = x[i] + spread * unit(rng);
    }
    const double before = norm(sub(x, y));
    const double after = norm(sub(map(x), map(y)));
    worst = std::max(worst, (after - before) / std::max(1.0, before));
  }
  return worst;
}

WeightedNorm build_norm(const HomogeneousMap& h, const AnalysisConfig& cfg) {
  return build_norm(h, ab_split(h, cfg), cfg);
}

WeightedNorm build_norm(const HomogeneousMap& h, const ABSplit& split, const AnalysisConfig& cfg) {
  const int n = h.n();
  WeightedNorm norm{Vector(idx(n), 1.0), split.A, split.B, 1.0};
  double lambda = 0.0;
  if (!split.A.empty()) {
    const Vector vhat = positive_eigenvector(h, split, cfg);
    for (int i : split.A) norm.v[idx(i)] = vhat[idx(i)];
  }
  if (!split.B.empty()) {
    const auto pair = sub_eigenpair(h.restricted(split.B), cfg);
    lambda = pair.lambda;
    for (std::size_t b = 0; b < split.B.size(); ++b) norm.v[idx(split.B[b])] = pair.w[b];
  }
  if (!split.A.empty() && !split.B.empty()) {
    // C = max_{i in A} g(0_A, 1_B)_i with g = W^-1 h W.
    Vector x(idx(n), 0.0);
    for (int i : split.B) x[idx(i)] = norm.v[idx(i)];
    const Vector hx = h(x);
    double c = 0.0;
    for (int i : split.A) c = std::max(c, hx[idx(i)] / norm.v[idx(i)]);
    if (c > 0.0) norm.alpha = 2.0 * c / (1.0 - lambda);
  }

  const double excess = max_expansion_excess([&](std::span<const double> z) { return h(z); }, norm,
                                             cfg.caps.norm_check_pairs, cfg.seed);
  if (excess > 1e-10)
    throw InternalError("certificate_failed", "norm certificate failed the sampled non-expansiveness check");
  return norm;
}

Certification certify_tstable(const HomogeneousMap& h, const AnalysisConfig& cfg) {
  Certification cert;
  std::optional<ABSplit> split;
  try {
    split.emplace(ab_split(h, cfg));
  } catch (const UnstableSelectionError& e) {
    cert.outcome = Outcome::Unstable;
    cert.unstable_witness = e.witness();
    cert.note = "unstable selection found";
    return cert;
  }
  cert.selections_checked = split->witness.selections_checked;
  const bool full = split->witness.fully_verified;
  try {
    cert.norm = build_norm(h, *split, cfg);
    cert.verified_pairs = cfg.caps.norm_check_pairs;
    cert.outcome = full ? Outcome::Certified : Outcome::NecessaryOnly;
    if (!full) cert.note = "selection enumeration capped; selections were sampled";
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Schema) throw;
    cert.outcome = Outcome::NecessaryOnly;
    cert.note = std::string("norm construction failed: ") + e.what();
  }
  return cert;
}

}  // namespace monodyn

#include "monodyn/nonneg_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace monodyn {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

void check_entries(const Matrix& m, const char* what) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (double v : m.row(i))
      if (!std::isfinite(v) || v < 0.0) throw SchemaError(std::string(what) + " has a negative or non-finite entry");
}

struct PerronResult {
  double rho = 0.0;
  Vector vec;  // max entry 1
};

// Collatz-Wielandt bracket [lo, hi] of t at a positive vector x.
std::pair<double, double> cw_bracket(const Matrix& t, const Vector& x) {
  const Vector y = t * x;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0) return {0.0, std::numeric_limits<double>::infinity()};
    const double r = y[i] / x[i];
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo, hi};
}

void normalize_max(Vector& x) {
  const double m = *std::max_element(x.begin(), x.end());
  if (m > 0.0)
    for (double& v : x) v /= m;
}

// Power iteration on t + shift*I for an irreducible block. Repeated squaring
// pulls the iterate close to the Perron direction before the plain loop.
PerronResult perron_block(const Matrix& t, const AnalysisConfig& cfg) {
  const std::size_t k = t.rows();
  if (k == 1) return {t(0, 0), Vector{1.0}};

  const double shift = cfg.tol.rho_shift;
  Matrix b = t;
  for (std::size_t i = 0; i < k; ++i) b(i, i) += shift;

  auto converged = [&](double lo, double hi) {
    return hi - lo <= cfg.tol.eps_rho / 10.0 * std::max(1.0, hi);
  };
  auto finish = [&](Vector x, double lo, double hi) {
    normalize_max(x);
    return PerronResult{std::max(0.0, 0.5 * (lo + hi) - shift), std::move(x)};
  };

  Matrix s = b;
  Vector x(k, 1.0);
  for (int sq = 0; sq < 64; ++sq) {
    double m = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      for (double v : s.row(i)) m = std::max(m, v);
    if (m <= 0.0) break;
    for (std::size_t i = 0; i < k; ++i)
      for (double& v : s.row(i)) v /= m;
    Vector cand = s * Vector(k, 1.0);
    normalize_max(cand);
    auto [lo, hi] = cw_bracket(b, cand);
    if (std::isfinite(hi)) {
      x = cand;
      if (converged(lo, hi)) return finish(x, lo, hi);
    }
    s = s * s;
  }

  for (std::int64_t it = 0; it < cfg.caps.iteration_cap; ++it) {
    auto [lo, hi] = cw_bracket(b, x);
    if (std::isfinite(hi) && converged(lo, hi)) return finish(x, lo, hi);
    x = b * x;
    normalize_max(x);
  }
  throw InconclusiveError("perron_no_convergence", "Perron iteration did not converge within the iteration cap");
}

Matrix class_block(const NonnegMatrix& p, const NodeSet& cls, double arc_tol) {
  Matrix t = p.entries().submatrix(cls, cls);
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (double& v : t.row(i))
      if (v <= arc_tol) v = 0.0;
  return t;
}

bool is_critical_radius(double rho, const AnalysisConfig& cfg) {
  return std::abs(rho - 1.0) <= cfg.tol.eps_rho;
}

}  // namespace

NonnegMatrix::NonnegMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0) throw SchemaError("matrix dimension must be at least 1");
  if (entries_.rows() != entries_.cols()) throw SchemaError("matrix must be square");
  check_entries(entries_, "matrix");
}

NonnegMatrix NonnegMatrix::principal(const NodeSet& nodes) const {
  return NonnegMatrix(entries_.submatrix(nodes, nodes));
}

NodeSet ClassDecomposition::critical_nodes() const {
  NodeSet out;
  for (std::size_t c = 0; c < classes.size(); ++c)
    if (critical[c]) out.insert(out.end(), classes[c].begin(), classes[c].end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeSet> ClassDecomposition::critical_classes() const {
  std::vector<NodeSet> out;
  for (std::size_t c = 0; c < classes.size(); ++c)
    if (critical[c]) out.push_back(classes[c]);
  std::sort(out.begin(), out.end());
  return out;
}

RectangularSet::RectangularSet(int n, std::vector<std::vector<Vector>> row_generators)
    : n_(n), rows_(std::move(row_generators)) {
  if (n < 1) throw SchemaError("rectangular set dimension must be at least 1");
  if (rows_.size() != idx(n)) throw SchemaError("rectangular set needs one generator list per row");
  for (const auto& gens : rows_) {
    if (gens.empty()) throw SchemaError("rectangular set row has no generators");
    for (const auto& g : gens) {
      if (g.size() != idx(n)) throw SchemaError("generator row has wrong length");
      for (double v : g)
        if (!std::isfinite(v) || v < 0.0) throw SchemaError("generator row has a negative or non-finite entry");
    }
  }
}

std::int64_t RectangularSet::selection_count() const {
  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
  std::int64_t c = 1;
  for (const auto& gens : rows_) {
    const auto g = static_cast<std::int64_t>(gens.size());
    if (c > kMax / g) return kMax;
    c *= g;
  }
  return c;
}

NonnegMatrix RectangularSet::selection(const std::vector<int>& choice) const {
  std::vector<Vector> rows;
  rows.reserve(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) rows.push_back(rows_[i].at(idx(choice.at(i))));
  return NonnegMatrix(Matrix::from_rows(rows));
}

RectangularSet RectangularSet::singleton(const NonnegMatrix& p) {
  std::vector<std::vector<Vector>> rows;
  for (int i = 0; i < p.n(); ++i) {
    auto r = p.row(i);
    rows.push_back({Vector(r.begin(), r.end())});
  }
  return RectangularSet(p.n(), std::move(rows));
}

Digraph digraph(const NonnegMatrix& p, double tol) {
  if (tol < 0.0) throw PreconditionError("negative_tolerance", "arc tolerance must be nonnegative");
  Digraph g(p.n());
  for (int i = 0; i < p.n(); ++i)
    for (int j = 0; j < p.n(); ++j)
      if (p(i, j) > tol) g.add_arc(i, j);
  return g;
}

ClassDecomposition decompose(const NonnegMatrix& p, const AnalysisConfig& cfg) {
  const Digraph g = digraph(p, cfg.tol.arc_tol);
  ClassDecomposition dec;
  dec.classes = strongly_connected_components(g);
  const int nc = static_cast<int>(dec.classes.size());
  dec.class_of.assign(idx(p.n()), -1);
  for (int c = 0; c < nc; ++c)
    for (int v : dec.classes[idx(c)]) dec.class_of[idx(v)] = c;

  Digraph direct(nc);
  for (auto [i, j] : g.arcs())
    if (dec.class_of[idx(i)] != dec.class_of[idx(j)]) direct.add_arc(dec.class_of[idx(i)], dec.class_of[idx(j)]);
  dec.condensation = Digraph(nc);
  for (int c = 0; c < nc; ++c) {
    const auto reach = forward_reachable(direct, {c});
    for (int d = 0; d < nc; ++d)
      if (d != c && reach[idx(d)]) dec.condensation.add_arc(c, d);
  }

  for (const NodeSet& cls : dec.classes) {
    const double rho = perron_block(class_block(p, cls, cfg.tol.arc_tol), cfg).rho;
    dec.class_radii.push_back(rho);
    dec.critical.push_back(is_critical_radius(rho, cfg));
  }
  return dec;
}

double spectral_radius(const NonnegMatrix& p, const AnalysisConfig& cfg) {
  const auto dec = decompose(p, cfg);
  return *std::max_element(dec.class_radii.begin(), dec.class_radii.end());
}

bool is_stable(const ClassDecomposition& dec, const AnalysisConfig& cfg) {
  for (double r : dec.class_radii)
    if (r > 1.0 + cfg.tol.eps_rho) return false;
  for (auto [c, d] : dec.condensation.arcs())
    if (dec.critical[idx(c)] && dec.critical[idx(d)]) return false;
  return true;
}

bool is_stable(const NonnegMatrix& p, const AnalysisConfig& cfg) { return is_stable(decompose(p, cfg), cfg); }

namespace {

NormalForm normal_form_from(const NonnegMatrix& p, const ClassDecomposition& dec, const AnalysisConfig& cfg) {
  if (!is_stable(dec, cfg)) throw PreconditionError("not_stable", "matrix is not stable");
  const int n = p.n();
  const int nc = static_cast<int>(dec.classes.size());
  std::vector<bool> up(idx(nc), false), down(idx(nc), false);
  for (auto [c, d] : dec.condensation.arcs()) {
    if (dec.critical[idx(d)] && !dec.critical[idx(c)]) up[idx(c)] = true;
    if (dec.critical[idx(c)] && !dec.critical[idx(d)]) down[idx(d)] = true;
  }

  NormalForm nf;
  for (int c = 0; c < nc; ++c) {
    const NodeSet& cls = dec.classes[idx(c)];
    NodeSet* target = dec.critical[idx(c)] ? &nf.C : up[idx(c)] ? &nf.U : down[idx(c)] ? &nf.D : &nf.I;
    if (up[idx(c)] && down[idx(c)]) throw InternalError("normal_form", "node both upstream and downstream");
    target->insert(target->end(), cls.begin(), cls.end());
    if (dec.critical[idx(c)]) nf.critical_classes.push_back(cls);
  }
  for (NodeSet* s : {&nf.U, &nf.C, &nf.D, &nf.I}) std::sort(s->begin(), s->end());
  std::sort(nf.critical_classes.begin(), nf.critical_classes.end());

  nf.permutation = nf.U;
  for (const auto& cls : nf.critical_classes) nf.permutation.insert(nf.permutation.end(), cls.begin(), cls.end());
  nf.permutation.insert(nf.permutation.end(), nf.D.begin(), nf.D.end());
  nf.permutation.insert(nf.permutation.end(), nf.I.begin(), nf.I.end());

  // Zero blocks of the block-triangular form, including off-diagonal
  // blocks between distinct critical classes.
  std::vector<char> part(idx(n));
  for (int v : nf.U) part[idx(v)] = 'U';
  for (int v : nf.C) part[idx(v)] = 'C';
  for (int v : nf.D) part[idx(v)] = 'D';
  for (int v : nf.I) part[idx(v)] = 'I';
  const std::string forbidden[] = {"CU", "DU", "DC", "IU", "IC", "CI", "DI"};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (p(i, j) <= cfg.tol.arc_tol) continue;
      const std::string pair{part[idx(i)], part[idx(j)]};
      bool bad = std::find(std::begin(forbidden), std::end(forbidden), pair) != std::end(forbidden);
      if (pair == "CC" && dec.class_of[idx(i)] != dec.class_of[idx(j)]) bad = true;
      if (bad) throw InternalError("normal_form", "block pattern violated at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    }
  return nf;
}

}  // namespace

NormalForm normal_form(const NonnegMatrix& p, const AnalysisConfig& cfg) {
  return normal_form_from(p, decompose(p, cfg), cfg);
}

NodeSet critical_nodes(const NonnegMatrix& p, const AnalysisConfig& cfg) {
  const auto dec = decompose(p, cfg);
  if (!is_stable(dec, cfg)) throw PreconditionError("not_stable", "matrix is not stable");
  return dec.critical_nodes();
}

Digraph critical_graph(const NonnegMatrix& p, const AnalysisConfig& cfg) {
  return digraph(p, cfg.tol.arc_tol).restricted_to(critical_nodes(p, cfg));
}

SubinvariantReport check_subinvariant(const NonnegMatrix& p, std::span<const double> z, const AnalysisConfig& cfg) {
  if (z.size() != idx(p.n())) throw SchemaError("vector length does not match matrix dimension");
  const auto dec = decompose(p, cfg);
  const double tol = cfg.tol.eps_order * std::max(1.0, sup_norm(z));
  const Vector pz = p.apply(z);
  if (max_excess(pz, z) > tol) throw PreconditionError("not_subinvariant", "Pz <= z does not hold");

  SubinvariantReport rep;
  rep.partition = normal_form_from(p, dec, cfg);
  const auto& nf = rep.partition;

  // (i) each critical block fixes z_C
  if (!nf.C.empty()) {
    const Vector zc = restrict(z, nf.C);
    const Vector pcc_zc = p.entries().submatrix(nf.C, nf.C) * zc;
    rep.critical_residual = sup_dist(pcc_zc, zc);
  }
  rep.downstream_residual = sup_norm(restrict(z, nf.D));
  NodeSet cd = nf.C;
  cd.insert(cd.end(), nf.D.begin(), nf.D.end());
  std::sort(cd.begin(), cd.end());
  rep.fixed_residual = sup_dist(restrict(pz, cd), restrict(z, cd));
  for (int i : nf.I) rep.independent_deficit = std::max(rep.independent_deficit, -z[idx(i)]);

  rep.critical_ok = rep.critical_residual <= tol;
  rep.downstream_ok = rep.downstream_residual <= tol && rep.fixed_residual <= tol;
  rep.independent_ok = rep.independent_deficit <= tol;
  if (!rep.critical_ok) rep.violations.push_back("P_CC z_C != z_C");
  if (rep.downstream_residual > tol) rep.violations.push_back("z_D != 0");
  if (rep.fixed_residual > tol) rep.violations.push_back("(Pz)_{C u D} != z_{C u D}");
  if (!rep.independent_ok) rep.violations.push_back("z_I has a negative entry");
  return rep;
}

NonnegMatrix graph_union_witness(const RectangularSet& r) {
  Matrix m(idx(r.n()), idx(r.n()));
  for (int i = 0; i < r.n(); ++i) {
    const auto& gens = r.generators(i);
    auto row = m.row(idx(i));
    for (const auto& g : gens)
      for (std::size_t j = 0; j < g.size(); ++j) row[j] += g[j];
    for (double& v : row) v /= static_cast<double>(gens.size());
  }
  return NonnegMatrix(std::move(m));
}

namespace {

// Generators not dominated componentwise by another generator of the same row
// (among equal ones the first is kept). A dominated selection is stable when
// its dominating selection is, and its critical classes are critical classes
// of the dominating one with identical blocks, so enumeration can skip it.
std::vector<std::vector<int>> undominated(const RectangularSet& r, double tol) {
  std::vector<std::vector<int>> out;
  for (const auto& gens : r.rows()) {
    std::vector<int> keep;
    for (std::size_t a = 0; a < gens.size(); ++a) {
      bool dominated = false;
      for (std::size_t b = 0; b < gens.size() && !dominated; ++b) {
        if (a == b) continue;
        bool le = true, equal = true;
        for (std::size_t j = 0; j < gens[a].size(); ++j) {
          if (gens[a][j] > gens[b][j] + tol) le = false;
          if (std::abs(gens[a][j] - gens[b][j]) > tol) equal = false;
        }
        dominated = le && (!equal || b < a);
      }
      if (!dominated) keep.push_back(static_cast<int>(a));
    }
    out.push_back(std::move(keep));
  }
  return out;
}

}  // namespace

CriticalWitness critical_graph_witness(const RectangularSet& r, const AnalysisConfig& cfg) {
  const int n = r.n();
  const auto cand = undominated(r, cfg.tol.arc_tol);
  std::int64_t count = 1;
  for (const auto& c : cand) {
    const auto k = static_cast<std::int64_t>(c.size());
    count = count > std::numeric_limits<std::int64_t>::max() / k ? std::numeric_limits<std::int64_t>::max() : count * k;
  }
  const bool full = count <= cfg.caps.selection_cap;

  std::vector<std::vector<bool>> realizing(idx(n));  // Q_k as generator flags
  for (int i = 0; i < n; ++i) realizing[idx(i)].assign(r.generators(i).size(), false);
  Digraph united(n);
  std::int64_t checked = 0;

  auto visit = [&](const std::vector<int>& choice) {
    const NonnegMatrix q = r.selection(choice);
    const auto dec = decompose(q, cfg);
    if (!is_stable(dec, cfg)) throw UnstableSelectionError(choice, q);
    const NodeSet crit = dec.critical_nodes();
    for (int k : crit) realizing[idx(k)][idx(choice[idx(k)])] = true;
    united = united.united_with(digraph(q, cfg.tol.arc_tol).restricted_to(crit));
    ++checked;
  };

  std::vector<int> pos(idx(n), 0), choice(idx(n));
  auto select = [&] {
    for (int i = 0; i < n; ++i) choice[idx(i)] = cand[idx(i)][idx(pos[idx(i)])];
    visit(choice);
  };
  if (full) {
    for (;;) {
      select();
      int i = 0;
      for (; i < n; ++i) {
        if (++pos[idx(i)] < static_cast<int>(cand[idx(i)].size())) break;
        pos[idx(i)] = 0;
      }
      if (i == n) break;
    }
  } else {
    std::mt19937_64 rng(cfg.seed);
    for (std::int64_t s = 0; s < cfg.caps.selection_cap; ++s) {
      for (int i = 0; i < n; ++i) {
        std::uniform_int_distribution<int> pick(0, static_cast<int>(cand[idx(i)].size()) - 1);
        pos[idx(i)] = pick(rng);
      }
      select();
    }
    const NonnegMatrix avg = graph_union_witness(r);
    if (!is_stable(avg, cfg)) throw UnstableSelectionError({}, avg);
  }

  Matrix m(idx(n), idx(n));
  for (int k = 0; k < n; ++k) {
    const auto& gens = r.generators(k);
    auto row = m.row(idx(k));
    int used = 0;
    for (std::size_t g = 0; g < gens.size(); ++g) {
      if (!realizing[idx(k)][g]) continue;
      for (std::size_t j = 0; j < gens[g].size(); ++j) row[j] += gens[g][j];
      ++used;
    }
    if (used == 0) {
      std::copy(gens[0].begin(), gens[0].end(), row.begin());
    } else {
      for (double& v : row) v /= used;
    }
  }

  CriticalWitness w{NonnegMatrix(std::move(m)), Digraph(n), {}, full, checked};
  const auto dec = decompose(w.matrix, cfg);
  if (!is_stable(dec, cfg)) {
    if (full) throw InternalError("witness_unstable", "critical graph witness is not stable");
    throw UnstableSelectionError({}, w.matrix);
  }
  w.critical_nodes = dec.critical_nodes();
  w.critical_graph = digraph(w.matrix, cfg.tol.arc_tol).restricted_to(w.critical_nodes);
  if (full && !(w.critical_graph == united))
    throw InternalError("witness_mismatch", "witness critical graph differs from the union over selections");
  return w;
}

namespace {

Vector perron_for_class(const Matrix& t, const NonnegMatrix& p, const NodeSet& cls, const AnalysisConfig& cfg) {
  if (cls.empty() || !is_strongly_connected(digraph(p, cfg.tol.arc_tol), cls))
    throw PreconditionError("not_irreducible_class", "node set is not an irreducible class");
  if (cls.size() == 1 && !(p(cls[0], cls[0]) > cfg.tol.arc_tol))
    throw PreconditionError("not_irreducible_class", "node set is not an irreducible class");
  const auto res = perron_block(t, cfg);
  if (!is_critical_radius(res.rho, cfg)) throw PreconditionError("not_critical", "class spectral radius is not one");
  return res.vec;
}

}  // namespace

Vector left_perron(const NonnegMatrix& p, const NodeSet& cls, const AnalysisConfig& cfg) {
  return perron_for_class(class_block(p, cls, cfg.tol.arc_tol).transpose(), p, cls, cfg);
}

Vector right_perron(const NonnegMatrix& p, const NodeSet& cls, const AnalysisConfig& cfg) {
  return perron_for_class(class_block(p, cls, cfg.tol.arc_tol), p, cls, cfg);
}

}  // namespace monodyn

#include "monodyn/map_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "simplex.hpp"

namespace monodyn {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

void check_row_vector(const Vector& v, int n, const char* what) {
  if (v.size() != idx(n)) throw SchemaError(std::string(what) + " has wrong length");
  for (double x : v)
    if (!std::isfinite(x) || x < 0.0) throw SchemaError(std::string(what) + " has a negative or non-finite entry");
}

void check_dim(std::span<const double> x, int n) {
  if (x.size() != idx(n)) throw SchemaError("vector length does not match map dimension");
  for (double v : x)
    if (!std::isfinite(v)) throw SchemaError("vector has a non-finite entry");
}

bool same_slope(const Vector& a, const Vector& b) {
  for (std::size_t j = 0; j < a.size(); ++j)
    if (std::abs(a[j] - b[j]) > 1e-12 * (1.0 + std::max(std::abs(a[j]), std::abs(b[j])))) return false;
  return true;
}

// Is (t.p, t.r) on or below the upper hull of the kept terms, that is, some
// convex combination of them has slope t.p and constant at least t.r?
bool dominated(const std::vector<AffineTerm>& terms, const std::vector<std::size_t>& kept, const AffineTerm& t) {
  if (kept.empty()) return false;
  const std::size_t n = t.p.size();
  Matrix a(n + 1, kept.size());
  Vector c(kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const AffineTerm& u = terms[kept[k]];
    for (std::size_t j = 0; j < n; ++j) a(j, k) = u.p[j];
    a(n, k) = 1.0;
    c[k] = u.r;
  }
  Vector b = t.p;
  b.push_back(1.0);
  const auto best = detail::lp_maximize(a, b, c);
  return best && *best >= t.r - 1e-12 * (1.0 + std::abs(t.r));
}

}  // namespace

MapSpec::MapSpec(int n, MaxAffineRows rows) : n_(n), rows_(std::move(rows)) {
  if (n < 1) throw SchemaError("map dimension must be at least 1");
  const auto& rs = affine_rows();
  if (rs.size() != idx(n)) throw SchemaError("map needs one term list per coordinate");
  for (const auto& row : rs) {
    if (row.empty()) throw SchemaError("map coordinate has no terms");
    for (const auto& t : row) {
      if (!std::isfinite(t.r)) throw SchemaError("term constant is not finite");
      check_row_vector(t.p, n, "slope row");
    }
  }
}

MapSpec::MapSpec(int n, LogExpRows rows) : n_(n), rows_(std::move(rows)) {
  if (n < 1) throw SchemaError("map dimension must be at least 1");
  const auto& rs = exp_rows();
  if (rs.size() != idx(n)) throw SchemaError("map needs one term list per coordinate");
  for (const auto& row : rs) {
    if (row.empty()) throw SchemaError("map coordinate has no terms");
    for (const auto& t : row) {
      if (!std::isfinite(t.a) || t.a <= 0.0) throw SchemaError("log-exp coefficient must be positive");
      check_row_vector(t.j, n, "exponent row");
    }
  }
}

MapSpec MapSpec::linear(const NonnegMatrix& p, std::span<const double> shift) {
  if (!shift.empty() && shift.size() != idx(p.n())) throw SchemaError("shift length does not match matrix");
  MaxAffineRows rows;
  for (int i = 0; i < p.n(); ++i) {
    auto r = p.row(i);
    rows.push_back({AffineTerm{shift.empty() ? 0.0 : shift[idx(i)], Vector(r.begin(), r.end())}});
  }
  return MapSpec(p.n(), std::move(rows));
}

MapSpec MapSpec::identity(int n) { return linear(NonnegMatrix(Matrix::identity(idx(n)))); }

std::size_t MapSpec::max_terms() const {
  std::size_t m = 0;
  if (is_max_affine())
    for (const auto& r : affine_rows()) m = std::max(m, r.size());
  else
    for (const auto& r : exp_rows()) m = std::max(m, r.size());
  return m;
}

HomogeneousMap::HomogeneousMap(RectangularSet generators) : gens_(std::move(generators)) {}

HomogeneousMap HomogeneousMap::linear(const NonnegMatrix& p) { return HomogeneousMap(RectangularSet::singleton(p)); }

Vector HomogeneousMap::operator()(std::span<const double> x) const {
  check_dim(x, n());
  Vector y(idx(n()));
  for (int i = 0; i < n(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& g : gens_.generators(i)) best = std::max(best, dot(g, x));
    y[idx(i)] = best;
  }
  return y;
}

HomogeneousMap HomogeneousMap::restricted(const NodeSet& nodes) const {
  std::vector<std::vector<Vector>> rows;
  for (int i : nodes) {
    std::vector<Vector> gens;
    for (const auto& g : gens_.generators(i)) {
      Vector r = restrict(g, nodes);
      if (std::find(gens.begin(), gens.end(), r) == gens.end()) gens.push_back(std::move(r));
    }
    rows.push_back(std::move(gens));
  }
  return HomogeneousMap(RectangularSet(static_cast<int>(nodes.size()), std::move(rows)));
}

MapSpec HomogeneousMap::as_map() const {
  MaxAffineRows rows;
  for (const auto& gens : gens_.rows()) {
    std::vector<AffineTerm> terms;
    for (const auto& g : gens) terms.push_back({0.0, g});
    rows.push_back(std::move(terms));
  }
  return MapSpec(n(), std::move(rows));
}

Vector eval(const MapSpec& f, std::span<const double> x) {
  check_dim(x, f.n());
  Vector y(idx(f.n()));
  if (f.is_max_affine()) {
    const auto& rows = f.affine_rows();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& t : rows[i]) best = std::max(best, t.r + dot(t.p, x));
      y[i] = best;
    }
  } else {
    const auto& rows = f.exp_rows();
    Vector args;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      args.clear();
      for (const auto& t : rows[i]) args.push_back(std::log(t.a) + dot(t.j, x));
      const double m = *std::max_element(args.begin(), args.end());
      double s = 0.0;
      for (double a : args) s += std::exp(a - m);
      y[i] = m + std::log(s);
    }
  }
  return y;
}

std::vector<Vector> iterate(const MapSpec& f, std::span<const double> x0, std::int64_t k, const AnalysisConfig& cfg) {
  if (k < 0) throw PreconditionError("negative_count", "iteration count must be nonnegative");
  check_dim(x0, f.n());
  std::vector<Vector> out{Vector(x0.begin(), x0.end())};
  for (std::int64_t s = 0; s < k; ++s) {
    Vector next = eval(f, out.back());
    if (!(sup_norm(next) <= cfg.caps.magnitude_bound))
      throw PreconditionError("divergence", "iterate exceeded the magnitude bound at step " + std::to_string(s + 1));
    out.push_back(std::move(next));
  }
  return out;
}

Subdiff subdifferential(const MapSpec& f, std::span<const double> v, const AnalysisConfig& cfg) {
  check_dim(v, f.n());
  std::vector<std::vector<Vector>> rows;
  if (f.is_max_affine()) {
    for (const auto& terms : f.affine_rows()) {
      Vector vals;
      for (const auto& t : terms) vals.push_back(t.r + dot(t.p, v));
      const double fi = *std::max_element(vals.begin(), vals.end());
      const double band = cfg.tol.eps_active * (std::abs(fi) + 1.0);
      std::vector<Vector> gens;
      for (std::size_t j = 0; j < terms.size(); ++j)
        if (vals[j] >= fi - band && std::find(gens.begin(), gens.end(), terms[j].p) == gens.end())
          gens.push_back(terms[j].p);
      rows.push_back(std::move(gens));
    }
  } else {
    for (const auto& terms : f.exp_rows()) {
      Vector args;
      for (const auto& t : terms) args.push_back(std::log(t.a) + dot(t.j, v));
      const double m = *std::max_element(args.begin(), args.end());
      Vector grad(idx(f.n()), 0.0);
      double total = 0.0;
      for (std::size_t j = 0; j < terms.size(); ++j) {
        const double w = std::exp(args[j] - m);
        total += w;
        for (std::size_t c = 0; c < grad.size(); ++c) grad[c] += w * terms[j].j[c];
      }
      for (double& g : grad) g /= total;
      rows.push_back({std::move(grad)});
    }
  }
  return Subdiff{Vector(v.begin(), v.end()), RectangularSet(f.n(), std::move(rows))};
}

HomogeneousMap directional_derivative(const MapSpec& f, std::span<const double> v, const AnalysisConfig& cfg) {
  return HomogeneousMap(subdifferential(f, v, cfg).generators);
}

HomogeneousMap recession(const MapSpec& f) {
  std::vector<std::vector<Vector>> rows;
  auto add = [](std::vector<Vector>& gens, const Vector& g) {
    if (std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);
  };
  if (f.is_max_affine()) {
    for (const auto& terms : f.affine_rows()) {
      std::vector<Vector> gens;
      for (const auto& t : terms) add(gens, t.p);
      rows.push_back(std::move(gens));
    }
  } else {
    for (const auto& terms : f.exp_rows()) {
      std::vector<Vector> gens;
      for (const auto& t : terms) add(gens, t.j);
      rows.push_back(std::move(gens));
    }
  }
  return HomogeneousMap(RectangularSet(f.n(), std::move(rows)));
}

std::vector<AffineTerm> prune_terms(std::vector<AffineTerm> terms) {
  // Same slope: keep the largest constant.
  std::vector<AffineTerm> uniq;
  for (auto& t : terms) {
    auto it = std::find_if(uniq.begin(), uniq.end(), [&](const AffineTerm& u) { return same_slope(u.p, t.p); });
    if (it == uniq.end())
      uniq.push_back(std::move(t));
    else
      it->r = std::max(it->r, t.r);
  }
  if (uniq.size() < 3) return uniq;

  // Terms that win strictly at a probe point are certainly needed; seed the
  // kept set with them so the hull tests run against few terms.
  const std::size_t n = uniq.front().p.size();
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss;
  std::vector<bool> seeded(uniq.size(), false);
  for (int probe = 0; probe < 64; ++probe) {
    Vector x(n);
    const double scale = probe < 16 ? 1.0 : probe < 40 ? 10.0 : 1000.0;
    for (double& v : x) v = scale * gauss(rng);
    std::size_t arg = 0;
    double top = -std::numeric_limits<double>::infinity(), second = top;
    for (std::size_t t = 0; t < uniq.size(); ++t) {
      const double v = uniq[t].r + dot(uniq[t].p, x);
      if (v > top) {
        second = top;
        top = v;
        arg = t;
      } else if (v > second) {
        second = v;
      }
    }
    if (top - second > 1e-9 * (1.0 + std::abs(top))) seeded[arg] = true;
  }
  std::vector<std::size_t> order(uniq.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (seeded[a] != seeded[b]) return static_cast<bool>(seeded[a]);
    return uniq[a].r > uniq[b].r;
  });

  std::vector<std::size_t> kept;
  for (std::size_t t : order)
    if (!dominated(uniq, kept, uniq[t])) kept.push_back(t);
  // A term kept early may be covered by later ones.
  for (std::size_t k = kept.size(); k-- > 0;) {
    std::vector<std::size_t> others = kept;
    others.erase(others.begin() + static_cast<std::ptrdiff_t>(k));
    if (dominated(uniq, others, uniq[kept[k]])) kept = std::move(others);
  }
  std::sort(kept.begin(), kept.end());
  std::vector<AffineTerm> out;
  for (std::size_t t : kept) out.push_back(std::move(uniq[t]));
  return out;
}

MapSpec compose(const MapSpec& f, const MapSpec& g, const AnalysisConfig& cfg) {
  if (!f.is_max_affine() || !g.is_max_affine())
    throw PreconditionError("unsupported_variant", "composition is only available for max-affine maps");
  if (f.n() != g.n()) throw SchemaError("composed maps have different dimensions");
  const int n = f.n();
  const auto& grows = g.affine_rows();

  MaxAffineRows rows;
  for (const auto& fterms : f.affine_rows()) {
    // Count the candidate terms before generating any.
    double count = 0.0;
    for (const auto& a : fterms) {
      double c = 1.0;
      for (int j = 0; j < n; ++j)
        if (a.p[idx(j)] > 0.0) c *= static_cast<double>(grows[idx(j)].size());
      count += c;
    }
    if (count > static_cast<double>(cfg.caps.term_cap))
      throw InconclusiveError("term_blowup", "composition exceeds the term cap");

    std::vector<AffineTerm> terms;
    for (const auto& a : fterms) {
      NodeSet support;
      for (int j = 0; j < n; ++j)
        if (a.p[idx(j)] > 0.0) support.push_back(j);
      std::vector<std::size_t> choice(support.size(), 0);
      for (;;) {
        AffineTerm t{a.r, Vector(idx(n), 0.0)};
        for (std::size_t s = 0; s < support.size(); ++s) {
          const double w = a.p[idx(support[s])];
          const AffineTerm& b = grows[idx(support[s])][choice[s]];
          t.r += w * b.r;
          for (int c = 0; c < n; ++c) t.p[idx(c)] += w * b.p[idx(c)];
        }
        terms.push_back(std::move(t));
        std::size_t s = 0;
        for (; s < support.size(); ++s) {
          if (++choice[s] < grows[idx(support[s])].size()) break;
          choice[s] = 0;
        }
        if (s == support.size()) break;
      }
    }
    rows.push_back(prune_terms(std::move(terms)));
  }
  return MapSpec(n, std::move(rows));
}

MapSpec power_map(const MapSpec& f, int k, const AnalysisConfig& cfg) {
  if (!f.is_max_affine()) throw PreconditionError("unsupported_variant", "power_map requires a max-affine map");
  if (k < 1) throw PreconditionError("bad_power", "power must be at least 1");
  MapSpec out = f;
  for (int s = 1; s < k; ++s) out = compose(out, f, cfg);
  return out;
}

}  // namespace monodyn

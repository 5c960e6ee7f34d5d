#include "monodyn/fixed_points.hpp"

#include <algorithm>
#include <cmath>

namespace monodyn {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

double scale_of(std::span<const double> v) { return std::max(1.0, sup_norm(v)); }

void require_fixed(const MapSpec& f, std::span<const double> v, const AnalysisConfig& cfg) {
  if (v.size() != idx(f.n())) throw SchemaError("vector length does not match map dimension");
  if (!is_fixed(f, v, cfg)) throw PreconditionError("not_fixed", "point is not a fixed point of the map");
}

}  // namespace

double fixed_residual(const MapSpec& f, std::span<const double> v) { return sup_dist(eval(f, v), v); }

bool is_fixed(const MapSpec& f, std::span<const double> v, const AnalysisConfig& cfg) {
  return fixed_residual(f, v) <= cfg.tol.eps_fix * scale_of(v);
}

Vector omega_limit(const MapFn& f, std::span<const double> z, const AnalysisConfig& cfg) {
  Vector x(z.begin(), z.end());
  Vector fx = f(x);
  if (max_excess(fx, x) > cfg.tol.eps_order * scale_of(x))
    throw PreconditionError("not_subfixed", "f(z) <= z does not hold");

  // A decreasing orbit whose step does not shrink over a whole window drifts
  // linearly, which for piecewise-affine maps means it is unbounded below.
  constexpr std::int64_t kDriftWindow = 1000;
  double prev_step = std::numeric_limits<double>::infinity();
  double window_step = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (std::int64_t it = 0; it < cfg.caps.omega_iteration_cap; ++it) {
    const double step = sup_dist(fx, x);
    x = std::move(fx);
    if (!(sup_norm(x) <= cfg.caps.magnitude_bound))
      throw PreconditionError("unbounded_below", "iterates from the sub-fixed point are unbounded below");
    const double scale = scale_of(x);
    if (step <= cfg.tol.eps_fix * scale) converged = true;
    if (!converged && it > 0 && it % kDriftWindow == 0) {
      if (step >= (1.0 - 1e-9) * window_step)
        throw PreconditionError("unbounded_below", "iterates from the sub-fixed point drift without converging");
      window_step = step;
    }
    // After convergence, continue while the step still shrinks.
    if (converged && (step == 0.0 || step >= prev_step || step <= 1e-15 * scale)) return x;
    prev_step = step;
    fx = f(x);
  }
  if (converged) return x;
  throw InconclusiveError("omega_no_convergence", "omega limit iteration reached the iteration cap");
}

Vector omega_limit(const MapSpec& f, std::span<const double> z, const AnalysisConfig& cfg,
                   const std::optional<NodeSet>& critical) {
  if (z.size() != idx(f.n())) throw SchemaError("vector length does not match map dimension");
  Vector x = omega_limit([&](std::span<const double> y) { return eval(f, y); }, z, cfg);
  const double scale = scale_of(x);
  if (fixed_residual(f, x) > cfg.tol.eps_fix * scale)
    throw InternalError("omega_not_fixed", "omega limit is not a fixed point");
  if (critical)
    for (int i : *critical)
      if (std::abs(x[idx(i)] - z[idx(i)]) > cfg.tol.eps_order * scale)
        throw InternalError("omega_moved_critical", "omega limit differs from z on a critical node");
  return x;
}

Vector meet(const MapSpec& f, std::span<const double> x, std::span<const double> y, const AnalysisConfig& cfg) {
  require_fixed(f, x, cfg);
  require_fixed(f, y, cfg);
  return omega_limit(f, componentwise_min(x, y), cfg);
}

MapCriticalGraph map_critical_graph(const MapSpec& f, std::span<const double> v, const AnalysisConfig& cfg) {
  require_fixed(f, v, cfg);
  try {
    const auto w = critical_graph_witness(subdifferential(f, v, cfg).generators, cfg);
    return {w.critical_graph, w.critical_nodes, cyclicity(w.critical_graph), w.fully_verified};
  } catch (const UnstableSelectionError&) {
    throw PreconditionError("unstable_fixed_point", "subdifferential contains an unstable selection");
  }
}

bool uniqueness_check(const MapSpec& f, std::span<const double> v, const AnalysisConfig& cfg) {
  return map_critical_graph(f, v, cfg).nodes.empty();
}

ComparisonCheck compare_fixed_points(const MapSpec& f, std::span<const double> v, std::span<const double> w,
                                     const NodeSet& S, const AnalysisConfig& cfg) {
  require_fixed(f, w, cfg);
  const auto cg = map_critical_graph(f, v, cfg);
  const double tol = cfg.tol.eps_order * std::max(scale_of(v), scale_of(w));

  // Components of G^c: strongly connected components restricted to its nodes.
  std::vector<bool> in_s(idx(f.n()), false);
  for (int i : S) in_s[idx(i)] = true;
  bool meets_all = true;
  for (const NodeSet& comp : strongly_connected_components(cg.graph)) {
    if (!std::binary_search(cg.nodes.begin(), cg.nodes.end(), comp.front())) continue;
    meets_all = meets_all && std::any_of(comp.begin(), comp.end(), [&](int i) { return in_s[idx(i)]; });
  }
  bool below_on_s = true;
  for (int i : S) below_on_s = below_on_s && v[idx(i)] <= w[idx(i)] + tol;

  ComparisonCheck out;
  out.hypothesis = meets_all && below_on_s;
  out.conclusion = max_excess(v, w) <= tol;
  return out;
}

Certification is_tstable_fixed(const MapSpec& f, std::span<const double> v, const AnalysisConfig& cfg) {
  require_fixed(f, v, cfg);
  return certify_tstable(directional_derivative(f, v, cfg), cfg);
}

Vector fixed_from_periodic(const MapSpec& f, const std::vector<Vector>& orbit, const AnalysisConfig& cfg) {
  if (orbit.empty()) throw PreconditionError("empty_orbit", "orbit has no points");
  const std::size_t p = orbit.size();
  for (std::size_t k = 0; k < p; ++k) {
    if (orbit[k].size() != idx(f.n())) throw SchemaError("orbit point length does not match map dimension");
    const Vector img = eval(f, orbit[k]);
    if (sup_dist(img, orbit[(k + 1) % p]) > cfg.tol.eps_fix * scale_of(img))
      throw PreconditionError("not_periodic", "points do not form a periodic orbit");
  }

  Vector z = orbit[0];
  for (const auto& x : orbit) z = componentwise_min(z, x);

  Vector u;
  if (f.is_max_affine()) {
    const MapSpec fp = power_map(f, static_cast<int>(p), cfg);
    const auto cert = is_tstable_fixed(fp, orbit[0], cfg);
    if (cert.outcome == Outcome::Unstable)
      throw PreconditionError("unstable_periodic_point", "orbit point is not t-stable for the power map");
    u = omega_limit(fp, z, cfg);
  } else {
    u = omega_limit(
        [&](std::span<const double> x) {
          Vector y(x.begin(), x.end());
          for (std::size_t k = 0; k < p; ++k) y = eval(f, y);
          return y;
        },
        z, cfg);
  }
  if (fixed_residual(f, u) > cfg.tol.eps_fix * scale_of(u))
    throw InternalError("periodic_fixed_failed", "point derived from the periodic orbit is not fixed by f");
  return u;
}

FixedPointReport fixed_point_report(const MapSpec& f, std::span<const double> v, const AnalysisConfig& cfg) {
  FixedPointReport rep{Vector(v.begin(), v.end()), fixed_residual(f, v), is_tstable_fixed(f, v, cfg), {}, Digraph(f.n()), 1};
  if (rep.tstable.outcome != Outcome::Unstable) {
    const auto cg = map_critical_graph(f, v, cfg);
    rep.critical_nodes = cg.nodes;
    rep.critical_graph = cg.graph;
    rep.cyclicity = cg.cyclicity;
  }
  return rep;
}

}  // namespace monodyn

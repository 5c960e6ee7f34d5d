#include "monodyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace monodyn {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

double scale_of(std::span<const double> v) { return std::max(1.0, sup_norm(v)); }

Vector apply_times(const MapSpec& f, Vector x, int times) {
  for (int s = 0; s < times; ++s) x = eval(f, x);
  return x;
}

}  // namespace

std::string to_string(OrbitStatus s) {
  switch (s) {
    case OrbitStatus::Converged: return "converged";
    case OrbitStatus::Periodic: return "periodic";
    case OrbitStatus::Diverged: return "diverged";
    case OrbitStatus::Capped: return "capped";
  }
  return "?";
}

OrbitRecord simulate(const MapFn& f, std::span<const double> x0, std::int64_t kmax, const AnalysisConfig& cfg) {
  if (kmax < 1) throw PreconditionError("bad_step_count", "kmax must be at least 1");
  OrbitRecord rec{Vector(x0.begin(), x0.end()), {Vector(x0.begin(), x0.end())}, OrbitStatus::Capped, cfg.tol.eps_fix, 0};
  for (std::int64_t k = 1; k <= kmax; ++k) {
    Vector next = f(rec.states.back());
    const bool finite = std::all_of(next.begin(), next.end(), [](double v) { return std::isfinite(v); });
    if (!finite || sup_norm(next) > cfg.caps.magnitude_bound) {
      if (finite) rec.states.push_back(std::move(next));
      rec.status = OrbitStatus::Diverged;
      return rec;
    }
    const double tol = cfg.tol.eps_fix * scale_of(next);
    const double step = sup_dist(next, rec.states.back());
    rec.states.push_back(std::move(next));
    if (step < tol) {
      rec.status = OrbitStatus::Converged;
      rec.period = 1;
      return rec;
    }
    const auto& cur = rec.states.back();
    const std::int64_t pmax = std::min<std::int64_t>(cfg.caps.pmax, k);
    for (std::int64_t p = 2; p <= pmax; ++p)
      if (sup_dist(cur, rec.states[static_cast<std::size_t>(k - p)]) < tol) {
        rec.status = OrbitStatus::Periodic;
        rec.period = static_cast<int>(p);
        return rec;
      }
  }
  return rec;
}

OrbitRecord simulate(const MapSpec& f, std::span<const double> x0, std::int64_t kmax, const AnalysisConfig& cfg) {
  if (x0.size() != idx(f.n())) throw SchemaError("start vector length does not match map dimension");
  return simulate([&](std::span<const double> x) { return eval(f, x); }, x0, kmax, cfg);
}

PeriodReport detect_period(const MapSpec& f, const std::vector<Vector>& tail, const AnalysisConfig& cfg,
                           const std::optional<Vector>& fixed_point) {
  if (tail.empty()) throw PreconditionError("empty_orbit", "orbit tail is empty");
  const int len = static_cast<int>(tail.size());
  double scale = 1.0;
  for (const auto& x : tail) scale = std::max(scale, sup_norm(x));
  const double tol = cfg.tol.eps_cycle * scale;

  auto direct_residual = [&](int p) {
    double r = 0.0;
    for (int k = len - p; k < len; ++k) r = std::max(r, sup_dist(apply_times(f, tail[idx(k)], p), tail[idx(k)]));
    return r;
  };

  int found = 0;
  if (len == 1) {
    if (direct_residual(1) <= tol) found = 1;
  } else {
    const int pmax = static_cast<int>(std::min<std::int64_t>(cfg.caps.pmax, len - 1));
    for (int p = 1; p <= pmax && found == 0; ++p)
      if (sup_dist(tail[idx(len - 1 - p)], tail[idx(len - 1)]) <= tol) found = p;
  }
  if (found == 0 || direct_residual(found) > tol)
    throw InconclusiveError("no_period", "no period up to pmax detected");
  // Reject the candidate in favour of a proper divisor that already closes the orbit.
  for (int d = 1; d < found; ++d)
    if (found % d == 0 && direct_residual(d) <= tol) {
      found = d;
      break;
    }

  PeriodReport rep;
  rep.period = found;
  rep.orbit_points.assign(tail.end() - found, tail.end());
  rep.residual = direct_residual(found);
  if (fixed_point) {
    rep.cyclicity = map_critical_graph(f, *fixed_point, cfg).cyclicity;
    rep.divides = (*rep.cyclicity % found) == 0;
  }
  return rep;
}

bool verify_power_identity(const MapSpec& f, std::span<const double> v, int k, const AnalysisConfig& cfg) {
  const auto base = map_critical_graph(f, v, cfg);
  const MapSpec fk = power_map(f, k, cfg);
  const auto powered = map_critical_graph(fk, v, cfg);
  if (!base.fully_verified || !powered.fully_verified)
    throw InconclusiveError("sampled_witness", "selection enumeration capped; critical graphs were sampled");
  const Digraph expected = k == 1 ? base.graph : base.graph.walk_power(k);
  return powered.graph == expected;
}

GlobalReport classify_global(const MapSpec& f, const AnalysisConfig& cfg) {
  GlobalReport rep;
  rep.recession = certify_tstable(recession(f), cfg);
  rep.certified = rep.recession.outcome == Outcome::Certified;
  if (rep.recession.outcome == Outcome::Unstable) {
    rep.conclusion = "no global-convergence certificate";
    return rep;
  }
  if (rep.recession.norm) {
    rep.nonexpansive_excess = max_expansion_excess([&](std::span<const double> x) { return eval(f, x); },
                                                   *rep.recession.norm, cfg.caps.norm_check_pairs, cfg.seed);
    rep.nonexpansive_ok = rep.nonexpansive_excess <= 1e-10;
  }

  // Look for a fixed point along the orbit of 0.
  const Vector zero(idx(f.n()), 0.0);
  const auto orbit = simulate(f, zero, cfg.caps.iteration_cap, cfg);
  try {
    if (orbit.status == OrbitStatus::Converged) {
      rep.fixed_point = omega_limit(f, orbit.states.back(), cfg);
    } else if (orbit.status == OrbitStatus::Periodic) {
      const std::vector<Vector> cyc(orbit.states.end() - orbit.period, orbit.states.end());
      rep.fixed_point = fixed_from_periodic(f, cyc, cfg);
    } else if (orbit.status == OrbitStatus::Capped) {
      for (auto it = orbit.states.rbegin(); it != orbit.states.rend() && !rep.fixed_point; ++it)
        if (max_excess(eval(f, *it), *it) <= cfg.tol.eps_order * scale_of(*it))
          rep.fixed_point = omega_limit(f, *it, cfg);
    }
  } catch (const Error&) {
    rep.fixed_point.reset();
  }

  if (!rep.fixed_point) {
    rep.conclusion = "no fixed point found";
    return rep;
  }
  try {
    rep.cyclicity = map_critical_graph(f, *rep.fixed_point, cfg).cyclicity;
  } catch (const PreconditionError&) {
    rep.conclusion = "fixed point found but it is not t-stable";
    return rep;
  }
  rep.conclusion = rep.certified ? "every orbit converges to a periodic orbit whose period divides c(f)"
                                 : "selections sampled only; convergence not certified";
  return rep;
}

RotationInstance rotation_counterexample(int p, double b) {
  if (p < 1) throw PreconditionError("bad_period", "period must be positive");
  const double theta = 2.0 * std::numbers::pi / p;
  const Matrix a{{std::cos(theta), std::sin(theta), 0.0}, {-std::sin(theta), std::cos(theta), 0.0}, {0.0, 0.0, b}};
  // Entries below this are rounding residue of analytically zero entries.
  constexpr double kZeroBand = 1e-12;

  for (double alpha = theta; alpha > 1e-6; alpha *= 0.98) {
    const Matrix pm{{1.0, 0.0, 1.0}, {0.0, 1.0, 1.0}, {-alpha, -alpha, 1.0}};
    Matrix inv(3, 3);
    for (std::size_t c = 0; c < 3; ++c) {
      Vector e(3, 0.0);
      e[c] = 1.0;
      const Vector col = solve(pm, e);
      for (std::size_t r = 0; r < 3; ++r) inv(r, c) = col[r];
    }
    Matrix bm = pm * a * inv;
    bool nonneg = true;
    for (std::size_t i = 0; i < 3; ++i)
      for (double& v : bm.row(i)) {
        if (v < -kZeroBand) nonneg = false;
        if (v < 0.0) v = 0.0;
      }
    if (!nonneg) continue;
    return RotationInstance{p, b, alpha, NonnegMatrix(std::move(bm)), Vector{1.0, 0.0, -alpha}};
  }
  throw InconclusiveError("no_nonnegative_alpha", "no alpha made the conjugated matrix nonnegative");
}

}  // namespace monodyn

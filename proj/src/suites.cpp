#include "monodyn/suites.hpp"

#include <cmath>

#include "monodyn/corpus.hpp"

namespace monodyn::suites {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

void fail(Result& res, int index, std::string reason, std::optional<MapSpec> map = std::nullopt,
          std::optional<NonnegMatrix> matrix = std::nullopt) {
  ++res.failed;
  res.failures.push_back({index, std::move(reason), std::move(map), std::move(matrix)});
}

}  // namespace

namespace {

MapSpec next_origin_map(corpus::Rng& rng, const AnalysisConfig& cfg) {
  for (;;) {
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    MapSpec f = corpus::origin_fixed_map(rng, n);
    const Vector zero(idx(n), 0.0);
    if (is_tstable_fixed(f, zero, cfg).outcome == Outcome::Certified) return f;
  }
}

}  // namespace

std::vector<MapSpec> origin_corpus(std::uint64_t seed, int count, const AnalysisConfig& cfg) {
  corpus::Rng rng(seed);
  std::vector<MapSpec> maps;
  while (static_cast<int>(maps.size()) < count) maps.push_back(next_origin_map(rng, cfg));
  return maps;
}

Result power_identity(std::uint64_t seed, int count, const AnalysisConfig& cfg) {
  Result res{"thm81", 0, 0, 0, {}, {}};
  corpus::Rng rng(seed);
  // Maps whose powers have too many selections to enumerate cannot be
  // decided exactly; they are skipped and further maps are drawn.
  for (int i = 0; res.passed + res.failed < count; ++i) {
    const MapSpec f = next_origin_map(rng, cfg);
    const Vector zero(idx(f.n()), 0.0);
    try {
      std::string bad;
      for (int k = 1; k <= 4; ++k)
        if (!verify_power_identity(f, zero, k, cfg)) bad += (bad.empty() ? "" : ",") + std::to_string(k);
      if (bad.empty())
        ++res.passed;
      else
        fail(res, i, "power identity fails for k=" + bad, f);
    } catch (const InconclusiveError&) {
      ++res.skipped;
    } catch (const Error& e) {
      fail(res, i, std::string("error: ") + e.what(), f);
    }
  }
  if (res.skipped > 0) res.notes.push_back(std::to_string(res.skipped) + " maps skipped: selection enumeration capped");
  return res;
}

Result period_divides(std::uint64_t seed, int count, const AnalysisConfig& cfg) {
  Result res{"thm86", 0, 0, 0, {}, {}};
  const auto maps = origin_corpus(seed, count, cfg);
  corpus::Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> start(-5.0, 5.0);
  int orbits = 0;
  for (int i = 0; i < count; ++i) {
    const MapSpec& f = maps[idx(i)];
    const int n = f.n();
    const Vector zero(idx(n), 0.0);
    try {
      const int c = map_critical_graph(f, zero, cfg).cyclicity;
      std::string bad;
      if (c > corpus::landau(n)) bad = "cyclicity " + std::to_string(c) + " exceeds Landau bound";
      for (int s = 0; s < 5 && bad.empty(); ++s) {
        Vector x0(idx(n));
        for (double& v : x0) v = start(rng);
        const auto orbit = simulate(f, x0, 20000, cfg);
        if (orbit.status == OrbitStatus::Diverged) {
          bad = "orbit diverged";
          break;
        }
        if (orbit.status == OrbitStatus::Capped) continue;
        const std::size_t keep = std::min<std::size_t>(orbit.states.size(), 2 * idx(static_cast<int>(cfg.caps.pmax)) + 2);
        const std::vector<Vector> tail(orbit.states.end() - static_cast<std::ptrdiff_t>(keep), orbit.states.end());
        const auto rep = detect_period(f, tail, cfg, zero);
        const MapSpec fp = power_map(f, rep.period, cfg);
        Vector point = rep.orbit_points.back();
        for (int it = 0; it < 1000 && !is_fixed(fp, point, cfg); ++it) point = eval(fp, point);
        if (!is_fixed(fp, point, cfg)) {
          ++res.skipped;
          continue;
        }
        if (is_tstable_fixed(fp, point, cfg).outcome != Outcome::Certified) continue;
        ++orbits;
        if (!*rep.divides)
          bad = "period " + std::to_string(rep.period) + " does not divide c(f)=" + std::to_string(c);
        else if (rep.period > corpus::landau(n))
          bad = "period " + std::to_string(rep.period) + " exceeds Landau bound";
      }
      if (bad.empty())
        ++res.passed;
      else
        fail(res, i, bad, f);
    } catch (const Error& e) {
      fail(res, i, std::string("error: ") + e.what(), f);
    }
  }
  res.notes.push_back(std::to_string(orbits) + " t-stable periodic orbits checked");
  return res;
}

Result norm_certificates(std::uint64_t seed, int count, const AnalysisConfig& cfg) {
  Result res{"norm", 0, 0, 0, {}, {}};
  corpus::Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    const int n = std::uniform_int_distribution<int>(1, 5)(rng);
    const HomogeneousMap h = corpus::conjugated_max_linear(rng, n);
    try {
      const WeightedNorm norm = build_norm(h, cfg);
      const double excess = max_expansion_excess([&](std::span<const double> x) { return h(x); }, norm,
                                                 cfg.caps.norm_check_pairs, seed + static_cast<std::uint64_t>(i) + 1);
      if (excess <= 1e-10)
        ++res.passed;
      else
        fail(res, i, "non-expansiveness violated by " + std::to_string(excess), h.as_map());
    } catch (const Error& e) {
      fail(res, i, std::string("error: ") + e.what(), h.as_map());
    }
  }
  return res;
}

Result rotation(const AnalysisConfig& cfg) {
  Result res{"rotation", 0, 0, 0, {}, {}};
  for (int p = 3; p <= 6; ++p) {
    try {
      const auto inst = rotation_counterexample(p);
      const MapSpec f = MapSpec::linear(inst.matrix);
      std::string bad;
      if (is_stable(inst.matrix, cfg)) bad = "matrix reported stable";
      const auto states = iterate(f, inst.point, 2 * p + 1, cfg);
      const auto rep = detect_period(f, states, cfg);
      if (rep.period != p) bad = "detected period " + std::to_string(rep.period);
      if (sup_dist(states[idx(p)], inst.point) > 1e-8) bad = "B^p x differs from x";
      for (int m = 1; m < p; ++m)
        if (sup_dist(states[idx(m)], inst.point) <= 1e-4) bad = "B^m x returns early for m=" + std::to_string(m);
      res.notes.push_back("p=" + std::to_string(p) + " alpha=" + std::to_string(inst.alpha));
      if (bad.empty())
        ++res.passed;
      else
        fail(res, p, bad, std::nullopt, inst.matrix);
    } catch (const Error& e) {
      fail(res, p, std::string("error: ") + e.what());
    }
  }
  return res;
}

}  // namespace monodyn::suites

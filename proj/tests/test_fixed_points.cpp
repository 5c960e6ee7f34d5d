#include <doctest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "monodyn/corpus.hpp"
#include "monodyn/fixed_points.hpp"

using namespace monodyn;

namespace {

const MapSpec swap_map = MapSpec::linear(NonnegMatrix{{0, 1}, {1, 0}});

Vector mix(double lam, std::span<const double> x, std::span<const double> y) {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = lam * x[i] + (1.0 - lam) * y[i];
  return out;
}

std::vector<corpus::SemilatticeInstance> semilattice_corpus(std::uint64_t seed, int count) {
  corpus::Rng rng(seed);
  std::vector<corpus::SemilatticeInstance> out;
  for (int t = 0; t < count; ++t) out.push_back(corpus::semilattice_map(rng, 2 + t % 4, 3));
  return out;
}

}  // namespace

TEST_SUITE("fixed_points") {
  TEST_CASE("omega limit examples") {
    const MapSpec proj = fixture::projection_map();
    CHECK(omega_limit(proj, Vector{0.5, 0, 0}) == Vector{0, 0, 0});
    CHECK(omega_limit(proj, Vector{1, 1, 1}) == Vector{1, 1, 1});
    try {
      omega_limit(MapSpec::linear(NonnegMatrix{{1}}, Vector{-1.0}), Vector{0.0});
      FAIL("expected an error");
    } catch (const PreconditionError& e) {
      CHECK(e.code() == "unbounded_below");
    }
    try {
      omega_limit(proj, Vector{0, 1, 1});
      FAIL("expected an error");
    } catch (const PreconditionError& e) {
      CHECK(e.code() == "not_subfixed");
    }
  }

  TEST_CASE("meet examples") {
    const MapSpec proj = fixture::projection_map();
    CHECK(sup_norm(meet(proj, Vector{0.5, 1, 0}, Vector{0.5, 0, 1})) <= 1e-9);
    CHECK(meet(proj, Vector{0.5, 1, 0}, Vector{0.5, 1, 0}) == Vector{0.5, 1, 0});
    CHECK(meet(MapSpec::identity(2), Vector{1, -2}, Vector{0, 3}) == Vector{0, -2});
    CHECK_THROWS_AS(meet(proj, Vector{1, 0, 0}, Vector{0.5, 1, 0}), PreconditionError);
  }

  TEST_CASE("critical graph of a map examples") {
    const auto proj = map_critical_graph(fixture::projection_map(), Vector{0.5, 1, 0});
    CHECK(proj.graph.arcs() == std::vector<Arc>{{1, 1}, {2, 2}});
    CHECK(proj.nodes == NodeSet{1, 2});
    CHECK(proj.cyclicity == 1);

    const auto swap = map_critical_graph(swap_map, Vector{0, 0});
    CHECK(swap.nodes == NodeSet{0, 1});
    CHECK(swap.cyclicity == 2);

    const auto half = map_critical_graph(MapSpec::linear(NonnegMatrix{{0.5}}), Vector{0});
    CHECK(half.graph.arc_count() == 0);
    CHECK(half.cyclicity == 1);

    try {
      map_critical_graph(fixture::hinge(2.0), Vector{0});
      FAIL("expected an error");
    } catch (const PreconditionError& e) {
      CHECK(e.code() == "unstable_fixed_point");
    }
  }

  TEST_CASE("uniqueness examples") {
    CHECK(uniqueness_check(MapSpec::linear(NonnegMatrix{{0.5}}), Vector{0}));
    CHECK_FALSE(uniqueness_check(fixture::projection_map(), Vector{1, 1, 1}));
    CHECK_FALSE(uniqueness_check(MapSpec::identity(1), Vector{4}));
  }

  TEST_CASE("t-stability of fixed points examples") {
    CHECK(is_tstable_fixed(fixture::projection_map(), Vector{0.5, 1, 0}).outcome == Outcome::Certified);
    CHECK(is_tstable_fixed(fixture::hinge(2.0), Vector{0}).outcome == Outcome::Unstable);
    CHECK(is_tstable_fixed(MapSpec::identity(3), Vector{1, -1, 2}).outcome == Outcome::Certified);
    CHECK_THROWS_AS(is_tstable_fixed(fixture::hinge(2.0), Vector{1}), PreconditionError);
  }

  TEST_CASE("fixed points from periodic orbits") {
    const MapSpec proj = fixture::projection_map();
    CHECK(fixed_from_periodic(proj, {{0.5, 1, 0}}) == Vector{0.5, 1, 0});
    CHECK(fixed_from_periodic(swap_map, {{1, 2}, {2, 1}}) == Vector{1, 1});
    CHECK(fixed_from_periodic(MapSpec::linear(NonnegMatrix{{0, 1}, {1, 0}}, Vector{0, 0}), {{0, 1}, {1, 0}}) == Vector{0, 0});
    CHECK_THROWS_AS(fixed_from_periodic(swap_map, {{1, 2}, {1, 2}}), PreconditionError);
  }

  TEST_CASE("reports marked fixed have small residuals") {
    const auto rep = fixed_point_report(fixture::projection_map(), Vector{0.5, 1, 0});
    CHECK(rep.residual <= 1e-10);
    CHECK(rep.tstable.outcome == Outcome::Certified);
    CHECK(rep.critical_nodes == NodeSet{1, 2});
    CHECK(is_fixed(fixture::projection_map(), Vector{0.5, 1, 0}));
    CHECK_FALSE(is_fixed(fixture::projection_map(), Vector{1, 1, 0}));
  }

  TEST_CASE("the meet is a semilattice operation on certified fixed points") {
    for (const auto& inst : semilattice_corpus(41, 40)) {
      const auto& f = inst.map;
      const auto& x = inst.fixed_points[0];
      const auto& y = inst.fixed_points[1];
      const auto& z = inst.fixed_points[2];
      for (const auto& p : inst.fixed_points) REQUIRE(is_tstable_fixed(f, p).outcome == Outcome::Certified);
      CHECK(sup_dist(meet(f, x, x), x) <= 1e-9);
      const Vector xy = meet(f, x, y);
      CHECK(sup_dist(xy, meet(f, y, x)) <= 1e-9);
      CHECK(sup_dist(meet(f, xy, z), meet(f, x, meet(f, y, z))) <= 1e-9);
      CHECK(is_tstable_fixed(f, xy).outcome == Outcome::Certified);
      CHECK(sup_dist(restrict(xy, inst.critical), componentwise_min(restrict(x, inst.critical), restrict(y, inst.critical))) == 0.0);
    }
  }

  TEST_CASE("convex combinations project to fixed points agreeing on the critical nodes") {
    for (const auto& inst : semilattice_corpus(42, 40)) {
      const auto& x = inst.fixed_points[0];
      const auto& y = inst.fixed_points[1];
      for (double lam : {0.25, 0.5, 0.75}) {
        const Vector c = mix(lam, x, y);
        const Vector u = omega_limit(inst.map, c);
        CHECK(is_fixed(inst.map, u));
        CHECK(is_tstable_fixed(inst.map, u).outcome == Outcome::Certified);
        CHECK(sup_dist(restrict(u, inst.critical), restrict(c, inst.critical)) <= 1e-9);
      }
    }
  }

  TEST_CASE("critical graph does not depend on the fixed point") {
    for (const auto& inst : semilattice_corpus(43, 40)) {
      const auto a = map_critical_graph(inst.map, inst.fixed_points[0]);
      const auto b = map_critical_graph(inst.map, inst.fixed_points[1]);
      CHECK(a.graph == b.graph);
      CHECK(a.nodes == inst.critical);
    }
  }

  TEST_CASE("fixed points below a certified fixed point are certified") {
    for (const auto& inst : semilattice_corpus(44, 40)) {
      const auto& v = inst.fixed_points[0];
      const Vector w = meet(inst.map, v, inst.fixed_points[1]);
      REQUIRE(max_excess(w, v) <= 1e-9);
      CHECK(is_tstable_fixed(inst.map, w).outcome == Outcome::Certified);
    }
  }

  TEST_CASE("omega limit is monotone") {
    for (const auto& inst : semilattice_corpus(45, 40)) {
      const auto& f = inst.map;
      const Vector hi = componentwise_min(inst.fixed_points[0], inst.fixed_points[1]);
      const Vector lo = componentwise_min(hi, inst.fixed_points[2]);
      CHECK(max_excess(omega_limit(f, lo), omega_limit(f, hi)) <= 1e-9);
    }
  }

  TEST_CASE("fixed points are ordered by their values on the critical nodes") {
    for (const auto& inst : semilattice_corpus(46, 40)) {
      const auto& f = inst.map;
      const Vector v = meet(f, inst.fixed_points[0], inst.fixed_points[1]);
      const auto& w = inst.fixed_points[0];
      const auto check = compare_fixed_points(f, v, w, inst.critical);
      CHECK(check.hypothesis);
      CHECK(check.conclusion);
      const auto rev = compare_fixed_points(f, w, v, inst.critical);
      if (rev.hypothesis) CHECK(rev.conclusion);
    }
  }
}

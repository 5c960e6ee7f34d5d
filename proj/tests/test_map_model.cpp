#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "generators.hpp"

using namespace monodyn;

namespace {

MapSpec softplus() { return MapSpec(1, LogExpRows{{{1.0, {0.0}}, {1.0, {1.0}}}}); }

MapSpec random_map(gen::Rng& rng, int n, bool log_exp) {
  return log_exp ? gen::random_log_exp(rng, n) : gen::random_max_affine(rng, n);
}

Vector axpby(double a, std::span<const double> x, double b, std::span<const double> y) {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

Vector add(std::span<const double> x, std::span<const double> y) { return axpby(1.0, x, 1.0, y); }

double same_on_samples(const HomogeneousMap& a, const HomogeneousMap& b, gen::Rng& rng) {
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Vector y = gen::random_vector(rng, a.n(), -3.0, 3.0);
    worst = std::max(worst, sup_dist(a(y), b(y)));
  }
  return worst;
}

// Smallest distance between a row's value and its inactive terms at v.
double active_gap(const MapSpec& f, std::span<const double> v) {
  double gap = 1e300;
  const Vector fv = eval(f, v);
  for (std::size_t i = 0; i < fv.size(); ++i)
    for (const AffineTerm& t : f.affine_rows()[i]) {
      const double d = fv[i] - (t.r + dot(t.p, v));
      if (d > 1e-9 * (1.0 + std::abs(fv[i]))) gap = std::min(gap, d);
    }
  return gap;
}

}  // namespace

TEST_SUITE("map_model") {
  TEST_CASE("evaluation examples") {
    const MapSpec hinge = fixture::hinge(2.0);
    CHECK(eval(hinge, Vector{-1.0}) == Vector{0.0});
    CHECK(eval(hinge, Vector{1.0}) == Vector{2.0});
    CHECK(eval(softplus(), Vector{0.0})[0] == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(eval(MapSpec::identity(3), Vector{1.5, -2.0, 7.0}) == Vector{1.5, -2.0, 7.0});
  }

  TEST_CASE("map construction validates its input") {
    CHECK_THROWS_AS(MapSpec(1, MaxAffineRows{{}}), SchemaError);
    CHECK_THROWS_AS(MapSpec(1, MaxAffineRows{{{0.0, {-1.0}}}}), SchemaError);
    CHECK_THROWS_AS(MapSpec(2, MaxAffineRows{{{0.0, {1.0, 0.0}}}}), SchemaError);
    CHECK_THROWS_AS(MapSpec(1, LogExpRows{{{0.0, {1.0}}}}), SchemaError);
    CHECK_THROWS_AS(eval(fixture::hinge(2.0), Vector{1.0, 2.0}), SchemaError);
  }

  TEST_CASE("iteration examples") {
    CHECK(iterate(fixture::hinge(2.0), Vector{-1.0}, 3) == std::vector<Vector>{{-1}, {0}, {0}, {0}});
    const MapSpec swap = MapSpec::linear(NonnegMatrix{{0, 1}, {1, 0}});
    CHECK(iterate(swap, Vector{1, 2}, 2) == std::vector<Vector>{{1, 2}, {2, 1}, {1, 2}});
    try {
      iterate(fixture::hinge(2.0), Vector{1.0}, 100);
      FAIL("expected divergence");
    } catch (const PreconditionError& e) {
      CHECK(e.code() == "divergence");
    }
  }

  TEST_CASE("subdifferential examples") {
    const auto hinge = subdifferential(fixture::hinge(2.0), Vector{0.0});
    CHECK(hinge.generators.generators(0) == std::vector<Vector>{{0.0}, {2.0}});
    const auto soft = subdifferential(softplus(), Vector{0.0});
    REQUIRE(soft.generators.generators(0).size() == 1);
    CHECK(soft.generators.generators(0)[0][0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(subdifferential(fixture::hinge(2.0), Vector{1.0}).generators.generators(0) == std::vector<Vector>{{2.0}});
  }

  TEST_CASE("directional derivative examples") {
    gen::Rng rng(21);
    const HomogeneousMap h = directional_derivative(fixture::hinge(2.0), Vector{0.0});
    CHECK(h(Vector{-1.0}) == Vector{0.0});
    CHECK(h(Vector{3.0}) == Vector{6.0});

    const NonnegMatrix shear{{1, 1}, {0, 1}};
    CHECK(same_on_samples(directional_derivative(MapSpec::linear(shear), Vector{0, 0}), HomogeneousMap::linear(shear), rng) == 0.0);
    const NonnegMatrix p{{0.2, 0.7}, {0.4, 0.1}};
    CHECK(same_on_samples(directional_derivative(MapSpec::linear(p, Vector{1, -1}), Vector{3, 4}), HomogeneousMap::linear(p), rng) == 0.0);
  }

  TEST_CASE("recession examples") {
    gen::Rng rng(22);
    const HomogeneousMap h = recession(fixture::hinge(2.0));
    CHECK(h(Vector{-2.0}) == Vector{0.0});
    CHECK(h(Vector{2.0}) == Vector{4.0});
    const HomogeneousMap soft = recession(softplus());
    CHECK(soft(Vector{-2.0}) == Vector{0.0});
    CHECK(soft(Vector{2.0}) == Vector{2.0});
    const NonnegMatrix p{{0.2, 0.7}, {0.4, 0.1}};
    CHECK(same_on_samples(recession(MapSpec::linear(p, Vector{5, -5})), HomogeneousMap::linear(p), rng) == 0.0);
  }

  TEST_CASE("power map examples") {
    const MapSpec hinge = fixture::hinge(2.0);
    CHECK(power_map(hinge, 1) == hinge);
    const MapSpec sq = power_map(hinge, 2);
    REQUIRE(sq.affine_rows()[0].size() == 2);
    for (double x : {-3.0, -0.5, 0.0, 0.25, 2.0}) CHECK(eval(sq, Vector{x})[0] == std::max(0.0, 4.0 * x));

    const NonnegMatrix p{{0.2, 0.7}, {0.4, 0.1}};
    const MapSpec p2 = power_map(MapSpec::linear(p), 2);
    const Matrix want = p.entries() * p.entries();
    for (int i = 0; i < 2; ++i) {
      REQUIRE(p2.affine_rows()[static_cast<std::size_t>(i)].size() == 1);
      const auto& slope = p2.affine_rows()[static_cast<std::size_t>(i)][0].p;
      for (int j = 0; j < 2; ++j) CHECK(slope[static_cast<std::size_t>(j)] == doctest::Approx(want(static_cast<std::size_t>(i), static_cast<std::size_t>(j))).epsilon(1e-15));
    }
    CHECK_THROWS_AS(power_map(softplus(), 2), PreconditionError);
    CHECK_THROWS_AS(power_map(hinge, 0), PreconditionError);
  }

  TEST_CASE("pruning keeps every term that attains the maximum") {
    // max{0, 2x} is not dominated pointwise by either term alone.
    const auto kept = prune_terms({{0.0, {0.0}}, {0.0, {2.0}}, {-1.0, {1.0}}, {-0.5, {2.0}}});
    CHECK(kept.size() == 2);
    gen::Rng rng(23);
    for (int t = 0; t < 200; ++t) {
      const int n = gen::uniform_int(rng, 1, 3);
      std::vector<AffineTerm> terms;
      for (int k = gen::uniform_int(rng, 1, 12); k > 0; --k) {
        AffineTerm term{gen::uniform(rng, -2.0, 2.0), gen::random_vector(rng, n, 0.0, 2.0)};
        if (gen::coin(rng, 0.3)) term.p[0] = 0.0;
        terms.push_back(term);
      }
      const auto pruned = prune_terms(terms);
      CHECK(pruned.size() <= terms.size());
      for (int s = 0; s < 50; ++s) {
        const Vector x = gen::random_vector(rng, n, -20.0, 20.0);
        double full = -1e300, part = -1e300;
        for (const auto& term : terms) full = std::max(full, term.r + dot(term.p, x));
        for (const auto& term : pruned) part = std::max(part, term.r + dot(term.p, x));
        CHECK(std::abs(full - part) <= 1e-10 * (1.0 + std::abs(full)));
      }
    }
  }

  TEST_CASE("maps are monotone and convex") {
    gen::Rng rng(24);
    for (int t = 0; t < 200; ++t) {
      const int n = gen::uniform_int(rng, 1, 4);
      const MapSpec f = random_map(rng, n, t % 2 == 1);
      const Vector x = gen::random_vector(rng, n, -3.0, 3.0);
      Vector y = x;
      for (double& v : y) v += gen::uniform(rng, 0.0, 2.0);
      CHECK(max_excess(eval(f, x), eval(f, y)) <= 1e-12);

      const Vector z = gen::random_vector(rng, n, -3.0, 3.0);
      const double lam = gen::uniform(rng, 0.0, 1.0);
      const Vector mid = eval(f, axpby(lam, x, 1.0 - lam, z));
      const Vector chord = axpby(lam, eval(f, x), 1.0 - lam, eval(f, z));
      CHECK(max_excess(mid, chord) <= 1e-9);
    }
  }

  TEST_CASE("subdifferential generators satisfy the subgradient inequality") {
    gen::Rng rng(25);
    for (int t = 0; t < 200; ++t) {
      const int n = gen::uniform_int(rng, 1, 4);
      const MapSpec f = random_map(rng, n, t % 2 == 1);
      const Vector v = gen::random_vector(rng, n, -2.0, 2.0);
      const Subdiff sd = subdifferential(f, v);
      const Vector fv = eval(f, v);
      for (int s = 0; s < 10; ++s) {
        const Vector x = gen::random_vector(rng, n, -5.0, 5.0);
        const Vector fx = eval(f, x);
        const Vector d = sub(x, v);
        for (int i = 0; i < n; ++i)
          for (const Vector& g : sd.generators.generators(i))
            CHECK(fx[static_cast<std::size_t>(i)] - fv[static_cast<std::size_t>(i)] >= dot(g, d) - 1e-9);
      }
    }
  }

  TEST_CASE("directional derivative matches finite differences") {
    gen::Rng rng(26);
    int compared = 0;
    for (int t = 0; t < 300; ++t) {
      const int n = gen::uniform_int(rng, 1, 4);
      const bool log_exp = t % 2 == 1;
      const MapSpec f = random_map(rng, n, log_exp);
      // Max-affine maps at 0 often have ties between constant-zero terms.
      const Vector v = !log_exp && gen::coin(rng, 0.5) ? Vector(static_cast<std::size_t>(n), 0.0) : gen::random_vector(rng, n, -2.0, 2.0);
      const HomogeneousMap h = directional_derivative(f, v);
      const Vector y = gen::random_vector(rng, n, -1.0, 1.0);
      for (double eps : {1e-4, 1e-5}) {
        const Vector step = axpby(1.0, v, eps, y);
        const Vector fd = axpby(1.0 / eps, eval(f, step), -1.0 / eps, eval(f, v));
        const double err = sup_dist(fd, h(y));
        if (log_exp) {
          CHECK(err <= static_cast<double>(n * n) * eps);
          ++compared;
        } else if (active_gap(f, v) > 4.0 * eps * n) {
          // Piecewise linear: exact up to rounding once no new term activates.
          CHECK(err <= 1e-9);
          ++compared;
        }
      }
    }
    CHECK(compared >= 400);
  }

  TEST_CASE("recession map bounds every increment") {
    gen::Rng rng(27);
    for (int t = 0; t < 200; ++t) {
      const int n = gen::uniform_int(rng, 1, 4);
      const MapSpec f = random_map(rng, n, t % 2 == 1);
      const HomogeneousMap h = recession(f);
      const Vector x = gen::random_vector(rng, n, -5.0, 5.0);
      const Vector y = gen::random_vector(rng, n, -5.0, 5.0);
      CHECK(max_excess(sub(eval(f, add(y, x)), eval(f, y)), h(x)) <= 1e-9);
    }
  }

  TEST_CASE("power map agrees with repeated evaluation") {
    gen::Rng rng(28);
    for (int t = 0; t < 60; ++t) {
      const int n = gen::uniform_int(rng, 1, 3);
      const MapSpec f = gen::random_max_affine(rng, n);
      for (int k = 1; k <= 4; ++k) {
        const MapSpec fk = power_map(f, k);
        for (int s = 0; s < 20; ++s) {
          const Vector x = gen::random_vector(rng, n, -10.0, 10.0);
          const Vector want = iterate(f, x, k).back();
          CHECK(sup_dist(eval(fk, x), want) <= 1e-12 * (1.0 + sup_norm(want)));
        }
      }
    }
  }

  TEST_CASE("derivative of a power is the composition of derivatives along the orbit") {
    gen::Rng rng(29);
    for (int t = 0; t < 60; ++t) {
      const int n = gen::uniform_int(rng, 1, 3);
      const MapSpec f = gen::random_max_affine(rng, n);
      const Vector v = gen::coin(rng, 0.5) ? Vector(static_cast<std::size_t>(n), 0.0) : gen::random_vector(rng, n, -2.0, 2.0);
      const int k = gen::uniform_int(rng, 1, 3);
      const HomogeneousMap hk = directional_derivative(power_map(f, k), v);
      const auto orbit = iterate(f, v, k - 1);
      for (int s = 0; s < 20; ++s) {
        Vector y = gen::random_vector(rng, n, -3.0, 3.0);
        const Vector direct = hk(y);
        for (const Vector& x : orbit) y = directional_derivative(f, x)(y);
        CHECK(sup_dist(direct, y) <= 1e-9 * (1.0 + sup_norm(y)));
      }
    }
  }

  TEST_CASE("homogeneous maps are positively homogeneous and fix zero") {
    gen::Rng rng(30);
    for (int t = 0; t < 100; ++t) {
      const int n = gen::uniform_int(rng, 1, 4);
      const HomogeneousMap h = recession(gen::random_max_affine(rng, n));
      const Vector x = gen::random_vector(rng, n, -3.0, 3.0);
      const double lam = gen::uniform(rng, 0.1, 10.0);
      Vector scaled = x;
      for (double& v : scaled) v *= lam;
      Vector want = h(x);
      for (double& v : want) v *= lam;
      CHECK(sup_dist(h(scaled), want) <= 1e-12 * (1.0 + sup_norm(want)));
      CHECK(sup_norm(h(Vector(static_cast<std::size_t>(n), 0.0))) == 0.0);
    }
  }
}

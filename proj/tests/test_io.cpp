#include <doctest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "monodyn/io.hpp"

using namespace monodyn;
using io::json;

TEST_SUITE("io") {
  TEST_CASE("matrices round-trip through JSON") {
    gen::Rng rng(61);
    for (int t = 0; t < 50; ++t) {
      const NonnegMatrix p = gen::sparse_random(rng, gen::uniform_int(rng, 1, 6), 0.5);
      CHECK(io::matrix_from_json(json::parse(io::to_json(p).dump())) == p);
    }
  }

  TEST_CASE("maps round-trip through JSON") {
    gen::Rng rng(62);
    for (int t = 0; t < 50; ++t) {
      const int n = gen::uniform_int(rng, 1, 4);
      const MapSpec f = t % 2 ? gen::random_log_exp(rng, n) : gen::random_max_affine(rng, n);
      CHECK(io::map_from_json(json::parse(io::to_json(f).dump())) == f);
    }
  }

  TEST_CASE("malformed input raises schema errors") {
    CHECK_THROWS_AS(io::matrix_from_json(json::parse(R"({"n": 2, "entries": [[1, 0]]})")), SchemaError);
    CHECK_THROWS_AS(io::matrix_from_json(json::parse(R"({"n": 1, "entries": [[-1]]})")), SchemaError);
    CHECK_THROWS_AS(io::matrix_from_json(json::parse(R"({"entries": [[1]]})")), SchemaError);
    CHECK_THROWS_AS(io::map_from_json(json::parse(R"({"n": 1, "kind": "min_affine", "rows": [[]]})")), SchemaError);
    CHECK_THROWS_AS(io::map_from_json(json::parse(R"({"n": 1, "kind": "max_affine", "rows": [[{"r": 0}]]})")), SchemaError);
    CHECK_THROWS_AS(io::parse_vector("1,x,2"), SchemaError);
    CHECK_THROWS_AS(io::load_json("/nonexistent/file.json"), SchemaError);
    CHECK_THROWS_AS(io::config_from_json(json::parse(R"({"tolerances": {"eps_fix": -1}})")), SchemaError);
  }

  TEST_CASE("vectors and configuration parse") {
    CHECK(io::parse_vector("0.5,1,0") == Vector{0.5, 1.0, 0.0});
    const AnalysisConfig cfg = io::config_from_json(json::parse(R"({"tolerances": {"eps_fix": 1e-8}, "caps": {"pmax": 10}, "seed": 9})"));
    CHECK(cfg.tol.eps_fix == 1e-8);
    CHECK(cfg.caps.pmax == 10);
    CHECK(cfg.seed == 9);
    CHECK(cfg.tol.eps_rho == 1e-9);
  }

  TEST_CASE("node sets are written one-based") {
    const json nf = io::to_json(normal_form(fixture::projection()));
    CHECK(nf["C"] == json::array({2, 3}));
    CHECK(nf["U"] == json::array({1}));
    CHECK(io::arcs_json(Digraph(2, {{0, 1}})) == json::parse("[[1, 2]]"));
  }

  TEST_CASE("reports re-parse and are deterministic") {
    const MapSpec proj = fixture::projection_map();
    const auto first = io::to_json(fixed_point_report(proj, Vector{0.5, 1, 0})).dump();
    const auto second = io::to_json(fixed_point_report(proj, Vector{0.5, 1, 0})).dump();
    CHECK(first == second);
    const json back = json::parse(first);
    CHECK(back["tstable"]["outcome"] == "Certified");
    CHECK(back["criticalNodes"] == json::array({2, 3}));

    const auto global = io::to_json(classify_global(MapSpec::linear(NonnegMatrix{{0, 1}, {1, 0}}))).dump();
    CHECK(global == io::to_json(classify_global(MapSpec::linear(NonnegMatrix{{0, 1}, {1, 0}}))).dump());
    CHECK(json::parse(global)["cyclicity"] == 2);

    const auto orbit = io::to_json(simulate(fixture::hinge(0.5), Vector{4.0}, 5));
    CHECK(json::parse(orbit.dump())["states"].size() == 6);
  }

  TEST_CASE("floats survive serialization exactly") {
    gen::Rng rng(63);
    for (int t = 0; t < 200; ++t) {
      const double x = gen::uniform(rng, -1e6, 1e6) * std::pow(10.0, gen::uniform_int(rng, -20, 20));
      CHECK(json::parse(json(x).dump()).get<double>() == x);
    }
  }

  TEST_CASE("DOT and CSV exports") {
    const std::string dot = io::to_dot(critical_graph(fixture::projection()), NodeSet{1, 2});
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("2 -> 2") != std::string::npos);
    const std::string parts = io::to_dot(digraph(fixture::projection(), 0.0), normal_form(fixture::projection()));
    CHECK(parts.find("(U)") != std::string::npos);
    const std::string csv = io::to_csv(simulate(fixture::hinge(0.5), Vector{4.0}, 2));
    CHECK(csv.rfind("step,x1\n", 0) == 0);
    CHECK(csv.find("\n1,2") != std::string::npos);
  }
}

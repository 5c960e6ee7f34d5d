// Command-line front end for the monodyn library.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "monodyn/io.hpp"
#include "monodyn/suites.hpp"

namespace fs = std::filesystem;
using namespace monodyn;
using io::json;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kSchema = 2, kPrecondition = 3, kInconclusive = 4 };

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string format = "json";
  std::string action;
  std::string path;
  std::string start, x, y, v;
  std::optional<std::int64_t> k;
  std::optional<std::int64_t> pmax;
  int count = 100;
};

// Everything a command produces; stdout shows the part selected by --format.
struct Output {
  json report;
  std::optional<std::string> dot;
  std::optional<std::string> csv;
  int code = kOk;
};

AnalysisConfig load_config(const Options& o) {
  AnalysisConfig cfg;
  std::string path = o.config_path;
  if (path.empty())
    if (const char* env = std::getenv("MONODYN_CONFIG")) path = env;
  if (!path.empty()) cfg = io::config_from_json(io::load_json(path));
  if (o.seed) cfg.seed = *o.seed;
  if (o.pmax) cfg.caps.pmax = *o.pmax;
  cfg.validate();
  return cfg;
}

Vector vector_or_zero(const std::string& text, int n) {
  Vector v = text.empty() ? Vector(static_cast<std::size_t>(n), 0.0) : io::parse_vector(text);
  if (v.size() != static_cast<std::size_t>(n)) throw SchemaError("vector length does not match dimension");
  return v;
}

int outcome_code(Outcome o) { return o == Outcome::NecessaryOnly ? kInconclusive : kOk; }

Output run_matrix(const Options& o, const AnalysisConfig& cfg) {
  const NonnegMatrix p = io::matrix_from_json(io::load_json(o.path));
  const Digraph g = digraph(p, cfg.tol.arc_tol);
  Output out;
  if (o.action == "stable") {
    const auto dec = decompose(p, cfg);
    json classes = json::array();
    for (const auto& c : dec.classes) classes.push_back(io::nodes_json(c));
    out.report = {{"stable", is_stable(dec, cfg)},
                  {"spectralRadius", *std::max_element(dec.class_radii.begin(), dec.class_radii.end())},
                  {"classes", classes},
                  {"classRadii", dec.class_radii},
                  {"criticalNodes", io::nodes_json(dec.critical_nodes())}};
  } else if (o.action == "normal-form") {
    const NormalForm nf = normal_form(p, cfg);
    out.report = io::to_json(nf);
    out.dot = io::to_dot(g, nf);
  } else if (o.action == "critical") {
    const NodeSet crit = critical_nodes(p, cfg);
    const Digraph cg = g.restricted_to(crit);
    out.report = {{"criticalNodes", io::nodes_json(crit)}, {"criticalGraph", io::arcs_json(cg)},
                  {"cyclicity", cyclicity(cg)}};
    out.dot = io::to_dot(cg, crit);
  } else {
    out.report = {{"cyclicity", cyclicity(g)}};
    out.dot = io::to_dot(g);
  }
  return out;
}

// A fixed point from --v, or from the orbit of --start (default 0).
Vector find_fixed_point(const MapSpec& f, const Options& o, const AnalysisConfig& cfg) {
  if (!o.v.empty()) return vector_or_zero(o.v, f.n());
  const Vector x0 = vector_or_zero(o.start, f.n());
  const auto orbit = simulate(f, x0, o.k.value_or(cfg.caps.iteration_cap), cfg);
  if (orbit.status == OrbitStatus::Converged) return omega_limit(f, orbit.states.back(), cfg);
  if (orbit.status == OrbitStatus::Periodic)
    return fixed_from_periodic(f, {orbit.states.end() - orbit.period, orbit.states.end()}, cfg);
  throw InconclusiveError("no_fixed_point", "orbit did not settle on a fixed point or periodic orbit");
}

Output run_map(const Options& o, const AnalysisConfig& cfg) {
  const MapSpec f = io::map_from_json(io::load_json(o.path));
  Output out;
  if (o.action == "simulate") {
    const auto orbit = simulate(f, vector_or_zero(o.start, f.n()), o.k.value_or(1000), cfg);
    out.report = io::to_json(orbit);
    out.csv = io::to_csv(orbit);
    if (orbit.status == OrbitStatus::Capped) out.code = kInconclusive;
  } else if (o.action == "fixed-point") {
    const auto rep = fixed_point_report(f, find_fixed_point(f, o, cfg), cfg);
    out.report = io::to_json(rep);
    out.dot = io::to_dot(rep.critical_graph, rep.critical_nodes);
    out.code = outcome_code(rep.tstable.outcome);
  } else if (o.action == "critical-graph") {
    const auto cg = map_critical_graph(f, find_fixed_point(f, o, cfg), cfg);
    out.report = {{"criticalNodes", io::nodes_json(cg.nodes)}, {"criticalGraph", io::arcs_json(cg.graph)},
                  {"cyclicity", cg.cyclicity}, {"fullyVerified", cg.fully_verified}};
    out.dot = io::to_dot(cg.graph, cg.nodes);
    if (!cg.fully_verified) out.code = kInconclusive;
  } else if (o.action == "certify") {
    const auto cert = is_tstable_fixed(f, vector_or_zero(o.v, f.n()), cfg);
    out.report = io::to_json(cert);
    out.code = outcome_code(cert.outcome);
  } else if (o.action == "meet") {
    if (o.x.empty() || o.y.empty()) throw SchemaError("meet needs --x and --y");
    out.report = {{"meet", meet(f, vector_or_zero(o.x, f.n()), vector_or_zero(o.y, f.n()), cfg)}};
  } else if (o.action == "period") {
    const auto orbit = simulate(f, vector_or_zero(o.start, f.n()), o.k.value_or(cfg.caps.iteration_cap), cfg);
    if (orbit.status == OrbitStatus::Diverged) throw PreconditionError("diverged", "orbit diverged");
    const std::size_t keep = std::min<std::size_t>(orbit.states.size(), 2 * static_cast<std::size_t>(cfg.caps.pmax) + 2);
    const std::vector<Vector> tail(orbit.states.end() - static_cast<std::ptrdiff_t>(keep), orbit.states.end());
    std::optional<Vector> fixed;
    if (!o.v.empty()) fixed = vector_or_zero(o.v, f.n());
    out.report = io::to_json(detect_period(f, tail, cfg, fixed));
    out.csv = io::to_csv(orbit);
  } else {
    const auto rep = classify_global(f, cfg);
    out.report = io::to_json(rep);
    out.code = outcome_code(rep.recession.outcome);
  }
  return out;
}

Output run_suite(const Options& o, const AnalysisConfig& cfg) {
  suites::Result res;
  if (o.action == "thm81")
    res = suites::power_identity(cfg.seed, o.count, cfg);
  else if (o.action == "thm86")
    res = suites::period_divides(cfg.seed, o.count, cfg);
  else if (o.action == "norm")
    res = suites::norm_certificates(cfg.seed, o.count, cfg);
  else
    res = suites::rotation(cfg);

  const fs::path dir = o.out_dir.empty() ? fs::path("suite_failures") : fs::path(o.out_dir);
  json failures = json::array();
  for (const auto& fl : res.failures) {
    json fixture = {{"suite", res.name}, {"index", fl.index}, {"seed", cfg.seed}, {"reason", fl.reason}};
    if (fl.map) fixture["map"] = io::to_json(*fl.map);
    if (fl.matrix) fixture["matrix"] = io::to_json(*fl.matrix);
    const fs::path file = dir / (res.name + "_" + std::to_string(fl.index) + ".json");
    io::write_text(file, fixture.dump(2) + "\n");
    failures.push_back({{"index", fl.index}, {"reason", fl.reason}, {"fixture", file.string()}});
  }
  Output out;
  out.report = {{"suite", res.name}, {"seed", cfg.seed},   {"passed", res.passed}, {"failed", res.failed},
                {"skipped", res.skipped}, {"notes", res.notes}, {"failures", failures}};
  out.code = res.ok() ? kOk : kFailure;
  return out;
}

void emit(const Output& out, const Options& o, bool write_files) {
  if (o.format == "dot" && out.dot)
    std::cout << *out.dot;
  else if (o.format == "csv" && out.csv)
    std::cout << *out.csv;
  else
    std::cout << out.report.dump(2) << "\n";
  if (write_files && !o.out_dir.empty()) {
    const fs::path dir(o.out_dir);
    io::write_text(dir / "report.json", out.report.dump(2) + "\n");
    if (out.dot) io::write_text(dir / "graph.dot", *out.dot);
    if (out.csv) io::write_text(dir / "trajectory.csv", *out.csv);
  }
}

int code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Schema: return kSchema;
    case ErrorKind::Precondition: return kPrecondition;
    case ErrorKind::Inconclusive: return kInconclusive;
    case ErrorKind::Internal: return kFailure;
  }
  return kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analysis of convex monotone maps: stability, fixed points, periodic orbits"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config_path, "JSON configuration file (falls back to $MONODYN_CONFIG)");
  app.add_option("--seed", o.seed, "Seed for corpus generation and sampled checks");
  app.add_option("--out", o.out_dir, "Directory for report, DOT and CSV files");
  app.add_option("--format", o.format, "What to print on stdout")->check(CLI::IsMember({"json", "dot", "csv"}));

  auto* matrix = app.add_subcommand("matrix", "Analyse a nonnegative matrix");
  matrix->fallthrough();
  matrix->add_option("action", o.action)->required()->check(CLI::IsMember({"stable", "normal-form", "critical", "cyclicity"}));
  matrix->add_option("path", o.path, "Matrix JSON file")->required();

  auto* map = app.add_subcommand("map", "Analyse a convex monotone map");
  map->fallthrough();
  map->add_option("action", o.action)
      ->required()
      ->check(CLI::IsMember({"simulate", "fixed-point", "critical-graph", "certify", "meet", "period", "global"}));
  map->add_option("path", o.path, "Map JSON file")->required();
  map->add_option("--start", o.start, "Start vector, comma separated");
  map->add_option("--k", o.k, "Number of steps");
  map->add_option("--x", o.x, "First fixed point for meet");
  map->add_option("--y", o.y, "Second fixed point for meet");
  map->add_option("--v", o.v, "Fixed point");
  map->add_option("--pmax", o.pmax, "Largest period searched");

  auto* suite = app.add_subcommand("suite", "Run a property suite");
  suite->fallthrough();
  suite->add_option("name", o.action)->required()->check(CLI::IsMember({"thm81", "thm86", "norm", "rotation"}));
  suite->add_option("--count", o.count, "Corpus size")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kSchema;
  }

  try {
    const AnalysisConfig cfg = load_config(o);
    Output out;
    if (matrix->parsed())
      out = run_matrix(o, cfg);
    else if (map->parsed())
      out = run_map(o, cfg);
    else
      out = run_suite(o, cfg);
    emit(out, o, !suite->parsed());
    return out.code;
  } catch (const Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}

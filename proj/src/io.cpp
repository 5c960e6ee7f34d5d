#include "monodyn/io.hpp"

#include <fstream>
#include <sstream>

namespace monodyn::io {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

template <class F>
auto schema_guard(F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("invalid JSON structure: ") + e.what());
  }
}

Vector number_row(const json& j, const char* what) {
  if (!j.is_array()) throw SchemaError(std::string(what) + " must be an array of numbers");
  Vector v;
  for (const auto& x : j) {
    if (!x.is_number()) throw SchemaError(std::string(what) + " must contain only numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

int read_dimension(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
    throw SchemaError("missing integer field \"n\"");
  const int n = j["n"].get<int>();
  if (n < 1) throw SchemaError("\"n\" must be at least 1");
  return n;
}

json vector_json(std::span<const double> v) { return json(Vector(v.begin(), v.end())); }

}  // namespace

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("cannot parse " + path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

NonnegMatrix matrix_from_json(const json& j) {
  return schema_guard([&] {
    const int n = read_dimension(j);
    if (!j.contains("entries") || !j["entries"].is_array() || j["entries"].size() != idx(n))
      throw SchemaError("\"entries\" must hold n rows");
    std::vector<Vector> rows;
    for (const auto& r : j["entries"]) {
      rows.push_back(number_row(r, "matrix row"));
      if (rows.back().size() != idx(n)) throw SchemaError("matrix row must have n entries");
    }
    return NonnegMatrix(Matrix::from_rows(rows));
  });
}

json to_json(const NonnegMatrix& p) {
  json rows = json::array();
  for (int i = 0; i < p.n(); ++i) rows.push_back(vector_json(p.row(i)));
  return {{"n", p.n()}, {"entries", rows}};
}

MapSpec map_from_json(const json& j) {
  return schema_guard([&] {
    const int n = read_dimension(j);
    if (!j.contains("kind") || !j["kind"].is_string()) throw SchemaError("missing string field \"kind\"");
    if (!j.contains("rows") || !j["rows"].is_array() || j["rows"].size() != idx(n))
      throw SchemaError("\"rows\" must hold n term lists");
    const std::string kind = j["kind"];
    if (kind == "max_affine") {
      MaxAffineRows rows;
      for (const auto& r : j["rows"]) {
        if (!r.is_array()) throw SchemaError("term list must be an array");
        std::vector<AffineTerm> terms;
        for (const auto& t : r) {
          if (!t.is_object() || !t.contains("r") || !t["r"].is_number() || !t.contains("p"))
            throw SchemaError("max-affine term needs numeric \"r\" and array \"p\"");
          terms.push_back({t["r"].get<double>(), number_row(t["p"], "\"p\"")});
        }
        rows.push_back(std::move(terms));
      }
      return MapSpec(n, std::move(rows));
    }
    if (kind == "log_exp") {
      LogExpRows rows;
      for (const auto& r : j["rows"]) {
        if (!r.is_array()) throw SchemaError("term list must be an array");
        std::vector<ExpTerm> terms;
        for (const auto& t : r) {
          if (!t.is_object() || !t.contains("a") || !t["a"].is_number() || !t.contains("j"))
            throw SchemaError("log-exp term needs numeric \"a\" and array \"j\"");
          terms.push_back({t["a"].get<double>(), number_row(t["j"], "\"j\"")});
        }
        rows.push_back(std::move(terms));
      }
      return MapSpec(n, std::move(rows));
    }
    throw SchemaError("unknown map kind \"" + kind + "\"");
  });
}

json to_json(const MapSpec& f) {
  json rows = json::array();
  if (f.is_max_affine()) {
    for (const auto& terms : f.affine_rows()) {
      json r = json::array();
      for (const auto& t : terms) r.push_back({{"r", t.r}, {"p", t.p}});
      rows.push_back(r);
    }
    return {{"n", f.n()}, {"kind", "max_affine"}, {"rows", rows}};
  }
  for (const auto& terms : f.exp_rows()) {
    json r = json::array();
    for (const auto& t : terms) r.push_back({{"a", t.a}, {"j", t.j}});
    rows.push_back(r);
  }
  return {{"n", f.n()}, {"kind", "log_exp"}, {"rows", rows}};
}

AnalysisConfig config_from_json(const json& j, AnalysisConfig base) {
  return schema_guard([&] {
    if (!j.is_object()) throw SchemaError("config must be a JSON object");
    auto num = [](const json& obj, const char* key, double& out) {
      if (obj.contains(key)) out = obj[key].get<double>();
    };
    auto integer = [](const json& obj, const char* key, std::int64_t& out) {
      if (obj.contains(key)) out = obj[key].get<std::int64_t>();
    };
    if (j.contains("tolerances")) {
      const auto& t = j["tolerances"];
      num(t, "eps_rho", base.tol.eps_rho);
      num(t, "eps_fix", base.tol.eps_fix);
      num(t, "eps_order", base.tol.eps_order);
      num(t, "eps_active", base.tol.eps_active);
      num(t, "eps_cycle", base.tol.eps_cycle);
      num(t, "delta", base.tol.delta);
      num(t, "arc_tol", base.tol.arc_tol);
      num(t, "rho_shift", base.tol.rho_shift);
    }
    if (j.contains("caps")) {
      const auto& c = j["caps"];
      integer(c, "selection_cap", base.caps.selection_cap);
      integer(c, "term_cap", base.caps.term_cap);
      integer(c, "iteration_cap", base.caps.iteration_cap);
      integer(c, "omega_iteration_cap", base.caps.omega_iteration_cap);
      integer(c, "pmax", base.caps.pmax);
      num(c, "magnitude_bound", base.caps.magnitude_bound);
      integer(c, "norm_check_pairs", base.caps.norm_check_pairs);
    }
    if (j.contains("seed")) base.seed = j["seed"].get<std::uint64_t>();
    base.validate();
    return base;
  });
}

Vector parse_vector(const std::string& text) {
  Vector v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw SchemaError("cannot parse vector component \"" + item + "\"");
    }
  }
  if (v.empty()) throw SchemaError("empty vector");
  return v;
}

json nodes_json(const NodeSet& nodes) {
  json a = json::array();
  for (int i : nodes) a.push_back(i + 1);
  return a;
}

json arcs_json(const Digraph& g) {
  json a = json::array();
  for (auto [i, j] : g.arcs()) a.push_back({i + 1, j + 1});
  return a;
}

json to_json(const NormalForm& nf) {
  json classes = json::array();
  for (const auto& c : nf.critical_classes) classes.push_back(nodes_json(c));
  return {{"U", nodes_json(nf.U)},
          {"C", nodes_json(nf.C)},
          {"D", nodes_json(nf.D)},
          {"I", nodes_json(nf.I)},
          {"criticalClasses", classes},
          {"permutation", nodes_json(nf.permutation)}};
}

json to_json(const WeightedNorm& w) {
  return {{"v", w.v}, {"A", nodes_json(w.A)}, {"B", nodes_json(w.B)}, {"alpha", w.alpha}};
}

json to_json(const Certification& c) {
  json j = {{"outcome", to_string(c.outcome)},
            {"verified_pairs", c.verified_pairs},
            {"selections_checked", c.selections_checked}};
  j["norm"] = c.norm ? to_json(*c.norm) : json(nullptr);
  if (c.unstable_witness) j["unstable_witness"] = to_json(*c.unstable_witness);
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

json to_json(const FixedPointReport& r) {
  return {{"point", r.point},
          {"residual", r.residual},
          {"tstable", to_json(r.tstable)},
          {"criticalNodes", nodes_json(r.critical_nodes)},
          {"criticalGraph", arcs_json(r.critical_graph)},
          {"cyclicity", r.cyclicity}};
}

json to_json(const OrbitRecord& r) {
  json states = json::array();
  for (const auto& s : r.states) states.push_back(s);
  json j = {{"start", r.start}, {"states", states}, {"status", to_string(r.status)}, {"stepTol", r.step_tol}};
  if (r.period > 0) j["period"] = r.period;
  return j;
}

json to_json(const PeriodReport& r) {
  json pts = json::array();
  for (const auto& s : r.orbit_points) pts.push_back(s);
  return {{"period", r.period},
          {"orbitPoints", pts},
          {"residual", r.residual},
          {"cyclicity", r.cyclicity ? json(*r.cyclicity) : json(nullptr)},
          {"divides", r.divides ? json(*r.divides) : json(nullptr)}};
}

json to_json(const GlobalReport& r) {
  json j = {{"certified", r.certified},
            {"recession", to_json(r.recession)},
            {"nonexpansive", r.nonexpansive_ok},
            {"nonexpansiveExcess", r.nonexpansive_excess},
            {"conclusion", r.conclusion}};
  j["fixedPoint"] = r.fixed_point ? json(*r.fixed_point) : json(nullptr);
  j["cyclicity"] = r.cyclicity ? json(*r.cyclicity) : json(nullptr);
  j["norm"] = r.recession.norm ? to_json(*r.recession.norm) : json(nullptr);
  return j;
}

std::string to_dot(const Digraph& g, const NodeSet& critical) {
  std::ostringstream out;
  out << "digraph G {\n";
  for (int i = 0; i < g.size(); ++i) {
    const bool crit = std::binary_search(critical.begin(), critical.end(), i);
    out << "  " << i + 1 << (crit ? " [style=bold, color=red]" : "") << ";\n";
  }
  for (auto [i, j] : g.arcs()) out << "  " << i + 1 << " -> " << j + 1 << ";\n";
  out << "}\n";
  return out.str();
}

std::string to_dot(const Digraph& g, const NormalForm& nf) {
  std::ostringstream out;
  out << "digraph G {\n";
  auto emit = [&](const NodeSet& nodes, const char* part, const char* color) {
    for (int i : nodes)
      out << "  " << i + 1 << " [label=\"" << i + 1 << " (" << part << ")\", style=filled, fillcolor=" << color
          << "];\n";
  };
  emit(nf.U, "U", "lightblue");
  emit(nf.C, "C", "salmon");
  emit(nf.D, "D", "palegreen");
  emit(nf.I, "I", "lightgray");
  for (auto [i, j] : g.arcs()) out << "  " << i + 1 << " -> " << j + 1 << ";\n";
  out << "}\n";
  return out.str();
}

std::string to_csv(const OrbitRecord& r) {
  std::ostringstream out;
  out.precision(17);
  out << "step";
  for (std::size_t i = 0; i < r.start.size(); ++i) out << ",x" << i + 1;
  out << "\n";
  for (std::size_t k = 0; k < r.states.size(); ++k) {
    out << k;
    for (double v : r.states[k]) out << "," << v;
    out << "\n";
  }
  return out.str();
}

}  // namespace monodyn::io

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "monodyn/dynamics.hpp"

namespace monodyn::io {

using nlohmann::json;

/// Parses a file as JSON; SchemaError on unreadable or malformed input.
json load_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

NonnegMatrix matrix_from_json(const json& j);
json to_json(const NonnegMatrix& p);

MapSpec map_from_json(const json& j);
json to_json(const MapSpec& f);

/// Overrides fields present in `j` ({"tolerances": {...}, "caps": {...}, "seed": n}).
AnalysisConfig config_from_json(const json& j, AnalysisConfig base = {});

/// Comma-separated numbers, e.g. "0.5,1,0".
Vector parse_vector(const std::string& text);

// Node sets are written 1-based.
json nodes_json(const NodeSet& nodes);
json arcs_json(const Digraph& g);
json to_json(const NormalForm& nf);
json to_json(const WeightedNorm& w);
json to_json(const Certification& c);
json to_json(const FixedPointReport& r);
json to_json(const OrbitRecord& r);
json to_json(const PeriodReport& r);
json to_json(const GlobalReport& r);

/// DOT export with nodes labelled 1..n. Critical nodes are drawn bold.
std::string to_dot(const Digraph& g, const NodeSet& critical = {});
/// DOT export colouring nodes by their U/C/D/I part.
std::string to_dot(const Digraph& g, const NormalForm& nf);

/// "step,x1,...,xn" header and one row per state.
std::string to_csv(const OrbitRecord& r);

}  // namespace monodyn::io

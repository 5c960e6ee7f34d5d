#pragma once

#include <functional>
#include <optional>

#include "monodyn/homogeneous.hpp"
#include "monodyn/map_model.hpp"

namespace monodyn {

using MapFn = std::function<Vector(std::span<const double>)>;

struct MapCriticalGraph {
  Digraph graph;
  NodeSet nodes;
  int cyclicity = 1;
  bool fully_verified = true;
};

struct FixedPointReport {
  Vector point;
  double residual = 0.0;
  Certification tstable;
  NodeSet critical_nodes;
  Digraph critical_graph;
  int cyclicity = 1;
};

/// ||f(v) - v||_inf
double fixed_residual(const MapSpec& f, std::span<const double> v);

/// True when the residual is within eps_fix * max(1, ||v||).
bool is_fixed(const MapSpec& f, std::span<const double> v, const AnalysisConfig& cfg = {});

/// Limit of the decreasing sequence f^k(z) from a sub-fixed point z.
/// When `critical` is given, also checks that the limit agrees with z there.
Vector omega_limit(const MapSpec& f, std::span<const double> z, const AnalysisConfig& cfg = {},
                   const std::optional<NodeSet>& critical = std::nullopt);
Vector omega_limit(const MapFn& f, std::span<const double> z, const AnalysisConfig& cfg = {});

/// omega_limit(f, min(x, y)) for fixed points x and y.
Vector meet(const MapSpec& f, std::span<const double> x, std::span<const double> y, const AnalysisConfig& cfg = {});

/// G^c of the subdifferential at a fixed point v. Throws
/// PreconditionError("unstable_fixed_point").
MapCriticalGraph map_critical_graph(const MapSpec& f, std::span<const double> v, const AnalysisConfig& cfg = {});

/// True iff f has no critical nodes at the t-stable fixed point v.
bool uniqueness_check(const MapSpec& f, std::span<const double> v, const AnalysisConfig& cfg = {});

struct ComparisonCheck {
  bool hypothesis = false;  ///< S meets every component of G^c and v <= w on S
  bool conclusion = false;  ///< v <= w everywhere
};

/// Order comparison of two fixed points from their values on a node set S.
ComparisonCheck compare_fixed_points(const MapSpec& f, std::span<const double> v, std::span<const double> w,
                                     const NodeSet& S, const AnalysisConfig& cfg = {});

/// Certification of the directional derivative at a fixed point.
Certification is_tstable_fixed(const MapSpec& f, std::span<const double> v, const AnalysisConfig& cfg = {});

/// Fixed point of f obtained from a periodic orbit: the omega limit under
/// f^p of the componentwise minimum of the orbit.
Vector fixed_from_periodic(const MapSpec& f, const std::vector<Vector>& orbit, const AnalysisConfig& cfg = {});

FixedPointReport fixed_point_report(const MapSpec& f, std::span<const double> v, const AnalysisConfig& cfg = {});

}  // namespace monodyn

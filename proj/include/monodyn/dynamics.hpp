#pragma once

#include <optional>
#include <string>

#include "monodyn/fixed_points.hpp"

namespace monodyn {

enum class OrbitStatus { Converged, Periodic, Diverged, Capped };

std::string to_string(OrbitStatus s);

struct OrbitRecord {
  Vector start;
  std::vector<Vector> states;  ///< states[0] == start
  OrbitStatus status = OrbitStatus::Capped;
  double step_tol = 0.0;
  int period = 0;  ///< set for Periodic (>= 2) and Converged (1)
};

struct PeriodReport {
  int period = 1;
  std::vector<Vector> orbit_points;
  double residual = 0.0;  ///< max_k ||f^p(x_k) - x_k||
  std::optional<int> cyclicity;
  std::optional<bool> divides;
};

OrbitRecord simulate(const MapFn& f, std::span<const double> x0, std::int64_t kmax, const AnalysisConfig& cfg = {});
OrbitRecord simulate(const MapSpec& f, std::span<const double> x0, std::int64_t kmax, const AnalysisConfig& cfg = {});

/// Minimal period of the trailing part of an orbit. When a t-stable fixed
/// point is supplied, also reports c(f) and whether the period divides it.
/// Throws InconclusiveError("no_period").
PeriodReport detect_period(const MapSpec& f, const std::vector<Vector>& orbit_tail, const AnalysisConfig& cfg = {},
                           const std::optional<Vector>& fixed_point = std::nullopt);

/// G^c(f^k) at v equals the k-step walk graph of G^c(f). Throws
/// InconclusiveError("sampled_witness") when either graph rests on sampled
/// selections.
bool verify_power_identity(const MapSpec& f, std::span<const double> v, int k, const AnalysisConfig& cfg = {});

struct GlobalReport {
  Certification recession;
  bool certified = false;
  double nonexpansive_excess = 0.0;  ///< sampled check of f itself, <= 1e-10 expected
  bool nonexpansive_ok = false;
  std::optional<Vector> fixed_point;
  std::optional<int> cyclicity;
  std::string conclusion;
};

GlobalReport classify_global(const MapSpec& f, const AnalysisConfig& cfg = {});

/// B = P A P^-1 with A a rotation by 2 pi / p in the first two coordinates
/// and scaling b in the third; P carries the shape parameter alpha, which is
/// shrunk from 2 pi / p until B is entrywise nonnegative.
struct RotationInstance {
  int p = 0;
  double b = 0.0;
  double alpha = 0.0;
  NonnegMatrix matrix;
  Vector point;  ///< P e_1, a period-p point of B
};

RotationInstance rotation_counterexample(int p, double b = 3.0);

}  // namespace monodyn

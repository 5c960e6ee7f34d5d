#pragma once

#include <optional>
#include <string>
#include <vector>

#include "monodyn/dynamics.hpp"

namespace monodyn::suites {

struct Failure {
  int index = 0;
  std::string reason;
  std::optional<MapSpec> map;
  std::optional<NonnegMatrix> matrix;
};

struct Result {
  std::string name;
  int passed = 0;
  int failed = 0;
  int skipped = 0;  ///< instances whose hypotheses could not be established
  std::vector<Failure> failures;
  std::vector<std::string> notes;

  bool ok() const { return failed == 0; }
};

/// Power identity for k = 1..4 on maps fixing 0 with a certified derivative
/// there. Maps that cannot be decided exactly are skipped and replaced.
Result power_identity(std::uint64_t seed, int count, const AnalysisConfig& cfg = {});

/// Periods of t-stable periodic orbits divide c(f) and stay below Landau(n).
Result period_divides(std::uint64_t seed, int count, const AnalysisConfig& cfg = {});

/// Norm certificates of conjugated max-linear maps are non-expansive.
Result norm_certificates(std::uint64_t seed, int count, const AnalysisConfig& cfg = {});

/// Rotation conjugates for p = 3..6: unstable, with a period-p point.
Result rotation(const AnalysisConfig& cfg = {});

/// The map corpus shared by the power-identity and period suites.
std::vector<MapSpec> origin_corpus(std::uint64_t seed, int count, const AnalysisConfig& cfg = {});

}  // namespace monodyn::suites

#pragma once

#include <cstdint>

namespace monodyn {

/// Numerical tolerances shared by every analysis.
struct Tolerances {
  double eps_rho = 1e-9;     ///< "spectral radius equals one" band
  double eps_fix = 1e-10;    ///< fixed-point residual / step size
  double eps_order = 1e-9;   ///< componentwise order comparisons
  double eps_active = 1e-9;  ///< active-term band, relative to |f_i(v)| + 1
  double eps_cycle = 1e-7;   ///< orbit recurrence matching
  double delta = 1e-12;      ///< strict positivity threshold
  double arc_tol = 1e-12;    ///< entries above this count as arcs
  double rho_shift = 1e-3;   ///< shift added before Perron power iteration
};

/// Iteration and enumeration limits.
struct Caps {
  std::int64_t selection_cap = 4096;
  std::int64_t term_cap = 50000;
  std::int64_t iteration_cap = 10000;
  std::int64_t omega_iteration_cap = 100000;
  std::int64_t pmax = 64;
  double magnitude_bound = 1e12;
  std::int64_t norm_check_pairs = 1000;
};

struct AnalysisConfig {
  Tolerances tol;
  Caps caps;
  std::uint64_t seed = 1;

  /// Throws SchemaError when a tolerance is not positive or a cap is below one.
  void validate() const;
};

}  // namespace monodyn

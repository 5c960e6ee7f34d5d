#include "monodyn/config.hpp"

#include "monodyn/error.hpp"

namespace monodyn {

void AnalysisConfig::validate() const {
  const double tols[] = {tol.eps_rho,    tol.eps_fix,   tol.eps_order, tol.eps_active,
                         tol.eps_cycle,  tol.delta,     tol.rho_shift};
  for (double t : tols)
    if (!(t > 0.0)) throw SchemaError("tolerances must be positive");
  if (!(tol.arc_tol >= 0.0)) throw SchemaError("arc tolerance must be non-negative");
  const std::int64_t caps_[] = {caps.selection_cap, caps.term_cap, caps.iteration_cap,
                                caps.omega_iteration_cap, caps.pmax, caps.norm_check_pairs};
  for (auto c : caps_)
    if (c < 1) throw SchemaError("caps must be at least 1");
  if (!(caps.magnitude_bound >= 1.0)) throw SchemaError("magnitude bound must be at least 1");
}

}  // namespace monodyn

#pragma once

#include <optional>
#include <vector>

#include "monodyn/linalg.hpp"

namespace monodyn::detail {

/// max c.x subject to A x = b, x >= 0, for b >= 0 and a bounded feasible
/// region. Dense two-phase simplex with Bland's rule; intended for a handful
/// of rows. Returns nullopt when infeasible or when the iteration cap is
/// reached before optimality.
std::optional<double> lp_maximize(const Matrix& a, const Vector& b, const Vector& c);

}  // namespace monodyn::detail

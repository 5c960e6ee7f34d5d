#pragma once

#include <cmath>

#include "monodyn/fixed_points.hpp"

namespace monodyn::fixture {

/// Projection with N^c = {1, 2} (0-based): node 0 splits evenly onto two loops.
inline NonnegMatrix projection() { return NonnegMatrix{{0, 0.5, 0.5}, {0, 1, 0}, {0, 0, 1}}; }

inline MapSpec projection_map() { return MapSpec::linear(projection()); }

/// max{0, x + x^2} coordinatewise; not max-affine, so only simulated.
inline Vector square_closure(std::span<const double> x) {
  Vector y(x.begin(), x.end());
  for (double& v : y) v = std::max(0.0, v + v * v);
  return y;
}

/// (e^{x1} + e^{x2} - 2, x2), whose derivative at 0 is [[1,1],[0,1]].
inline Vector exp_shear_closure(std::span<const double> x) {
  return {std::exp(x[0]) + std::exp(x[1]) - 2.0, x[1]};
}

/// max{0, s x} in one dimension.
inline MapSpec hinge(double s) { return MapSpec(1, MaxAffineRows{{{0.0, {0.0}}, {0.0, {s}}}}); }

inline NonnegMatrix permutation(const std::vector<int>& image) {
  const auto n = image.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, static_cast<std::size_t>(image[i])) = 1.0;
  return NonnegMatrix(std::move(m));
}

}  // namespace monodyn::fixture

#pragma once

#include <random>

#include "monodyn/map_model.hpp"

namespace monodyn::corpus {

using Rng = std::mt19937_64;

/// Nonnegative row with entries summing to at most one: a unit vector, or a
/// mix of one or two entries with weights >= 0.05.
Vector substochastic_row(Rng& rng, int n);

/// Max-affine map fixing 0 whose slopes are all substochastic rows. Each
/// row has one or two terms with constant 0 and up to two terms with
/// constants in [-2, -0.1]. Unit rows follow a random permutation, which
/// makes critical cycles likely.
MapSpec origin_fixed_map(Rng& rng, int n);

/// Max-linear map D^-1 h(D x) with h having substochastic generators and
/// D a random positive diagonal in [0.2, 5].
HomogeneousMap conjugated_max_linear(Rng& rng, int n);

struct SemilatticeInstance {
  MapSpec map;
  NodeSet critical;
  std::vector<Vector> fixed_points;
};

/// Map whose fixed points are parameterized freely on `critical`: critical
/// rows are max(x_i, x_j - c) with c >= 2.5, the other rows contract on
/// the non-critical block. Returns `count` fixed points.
SemilatticeInstance semilattice_map(Rng& rng, int n, int count);

/// Largest order of a permutation of n letters.
int landau(int n);

}  // namespace monodyn::corpus

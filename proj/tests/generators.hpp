#pragma once

// Hand-rolled random generators for property tests. Matrices are planted
// block by block so that their class structure is known in advance.

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "monodyn/map_model.hpp"
#include "monodyn/nonneg_matrix.hpp"

namespace monodyn::gen {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
inline int uniform_int(Rng& rng, int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }
inline bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

inline Vector random_vector(Rng& rng, int n, double lo, double hi) {
  Vector v(static_cast<std::size_t>(n));
  for (double& x : v) x = uniform(rng, lo, hi);
  return v;
}

enum class BlockKind { Critical, Subcritical, Supercritical };

/// Irreducible block whose rows sum to `row_sum`, so its spectral radius is
/// exactly `row_sum`. A single node without a loop is allowed for the
/// subcritical kind (radius 0).
inline Matrix planted_block(Rng& rng, int size, BlockKind kind) {
  Matrix b(static_cast<std::size_t>(size), static_cast<std::size_t>(size));
  if (size == 1) {
    const double v = kind == BlockKind::Critical      ? 1.0
                     : kind == BlockKind::Supercritical ? uniform(rng, 1.1, 2.0)
                     : coin(rng, 0.3)                   ? 0.0
                                                        : uniform(rng, 0.05, 0.9);
    b(0, 0) = v;
    return b;
  }
  // A random cyclic order keeps the block irreducible; extra entries vary it.
  std::vector<int> order(static_cast<std::size_t>(size));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (int k = 0; k < size; ++k)
    b(static_cast<std::size_t>(order[static_cast<std::size_t>(k)]),
      static_cast<std::size_t>(order[static_cast<std::size_t>((k + 1) % size)])) = uniform(rng, 0.2, 1.0);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j)
      if (coin(rng, 0.3)) b(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) += uniform(rng, 0.05, 1.0);
  const double target = kind == BlockKind::Critical ? 1.0 : kind == BlockKind::Supercritical ? uniform(rng, 1.1, 2.0) : 0.0;
  for (int i = 0; i < size; ++i) {
    auto row = b.row(static_cast<std::size_t>(i));
    double s = 0.0;
    for (double v : row) s += v;
    const double want = kind == BlockKind::Subcritical ? uniform(rng, 0.2, 0.9) : target;
    for (double& v : row) v *= want / s;
  }
  return b;
}

struct Planted {
  NonnegMatrix matrix;
  bool stable = true;  ///< ground truth from the planted structure
};

/// Random matrix with n <= 6 assembled from planted blocks in a random access
/// order, then relabelled. With `allow_unstable` false the result is stable:
/// no supercritical block and no walk between two critical blocks.
inline Planted planted_matrix(Rng& rng, bool allow_unstable, int max_n = 6) {
  for (;;) {
    const int n = uniform_int(rng, 1, max_n);
    std::vector<int> sizes;
    for (int left = n; left > 0;) {
      const int s = std::min(left, uniform_int(rng, 1, 3));
      sizes.push_back(s);
      left -= s;
    }
    const std::size_t nb = sizes.size();
    std::vector<BlockKind> kinds(nb);
    for (auto& k : kinds) {
      const double u = uniform(rng, 0.0, 1.0);
      k = u < 0.45 ? BlockKind::Critical : BlockKind::Subcritical;
      if (allow_unstable && u > 0.9) k = BlockKind::Supercritical;
    }

    std::vector<int> start(nb, 0);
    for (std::size_t b = 1; b < nb; ++b) start[b] = start[b - 1] + sizes[b - 1];
    Matrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (std::size_t b = 0; b < nb; ++b) {
      const Matrix blk = planted_block(rng, sizes[b], kinds[b]);
      for (int i = 0; i < sizes[b]; ++i)
        for (int j = 0; j < sizes[b]; ++j)
          m(static_cast<std::size_t>(start[b] + i), static_cast<std::size_t>(start[b] + j)) = blk(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
    // Arcs only from earlier to later blocks keep the blocks as the classes.
    std::vector<std::vector<bool>> access(nb, std::vector<bool>(nb, false));
    const double density = uniform(rng, 0.1, 0.5);
    for (std::size_t a = 0; a < nb; ++a)
      for (std::size_t b = a + 1; b < nb; ++b)
        for (int i = 0; i < sizes[a]; ++i)
          for (int j = 0; j < sizes[b]; ++j)
            if (coin(rng, density)) {
              m(static_cast<std::size_t>(start[a] + i), static_cast<std::size_t>(start[b] + j)) = uniform(rng, 0.05, 2.0);
              access[a][b] = true;
            }
    for (std::size_t k = 0; k < nb; ++k)
      for (std::size_t a = 0; a < nb; ++a)
        if (access[a][k])
          for (std::size_t b = 0; b < nb; ++b)
            if (access[k][b]) access[a][b] = true;

    bool chain = false, super = false;
    for (std::size_t a = 0; a < nb; ++a) {
      super = super || kinds[a] == BlockKind::Supercritical;
      for (std::size_t b = 0; b < nb; ++b)
        chain = chain || (access[a][b] && kinds[a] == BlockKind::Critical && kinds[b] == BlockKind::Critical);
    }
    const bool stable = !chain && !super;
    if (!allow_unstable && !stable) continue;

    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix out(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out(static_cast<std::size_t>(perm[static_cast<std::size_t>(i)]), static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])) =
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    return {NonnegMatrix(std::move(out)), stable};
  }
}

/// Dense random matrix rescaled to spectral radius `rho` given its current
/// radius `current` (computed by the caller).
inline NonnegMatrix rescaled(const NonnegMatrix& p, double current, double rho) {
  Matrix m = p.entries();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= rho / current;
  return NonnegMatrix(std::move(m));
}

inline NonnegMatrix sparse_random(Rng& rng, int n, double density) {
  Matrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (coin(rng, density)) m(i, j) = uniform(rng, 0.05, 1.0);
  return NonnegMatrix(std::move(m));
}

/// Max-affine map with 1..3 terms per row, slopes in [0, 1) and constants in
/// [-2, 2]; no structure beyond monotonicity and convexity.
inline MapSpec random_max_affine(Rng& rng, int n) {
  MaxAffineRows rows(static_cast<std::size_t>(n));
  for (auto& row : rows) {
    const int terms = uniform_int(rng, 1, 3);
    for (int t = 0; t < terms; ++t) {
      AffineTerm term{uniform(rng, -2.0, 2.0), Vector(static_cast<std::size_t>(n), 0.0)};
      for (double& v : term.p)
        if (coin(rng, 0.5)) v = uniform(rng, 0.0, 1.0);
      row.push_back(std::move(term));
    }
  }
  return MapSpec(n, std::move(rows));
}

inline MapSpec random_log_exp(Rng& rng, int n) {
  LogExpRows rows(static_cast<std::size_t>(n));
  for (auto& row : rows) {
    const int terms = uniform_int(rng, 1, 3);
    for (int t = 0; t < terms; ++t) {
      ExpTerm term{uniform(rng, 0.1, 2.0), Vector(static_cast<std::size_t>(n), 0.0)};
      for (double& v : term.j)
        if (coin(rng, 0.5)) v = uniform(rng, 0.0, 1.0);
      row.push_back(std::move(term));
    }
  }
  return MapSpec(n, std::move(rows));
}

}  // namespace monodyn::gen

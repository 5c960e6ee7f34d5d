#pragma once

#include <span>
#include <variant>
#include <vector>

#include "monodyn/config.hpp"
#include "monodyn/linalg.hpp"
#include "monodyn/nonneg_matrix.hpp"

namespace monodyn {

/// One affine piece r + p.x of a max-affine coordinate.
struct AffineTerm {
  double r = 0.0;
  Vector p;
  bool operator==(const AffineTerm&) const = default;
};

/// One summand a * exp(j.x) of a log-exp coordinate.
struct ExpTerm {
  double a = 1.0;
  Vector j;
  bool operator==(const ExpTerm&) const = default;
};

using MaxAffineRows = std::vector<std::vector<AffineTerm>>;
using LogExpRows = std::vector<std::vector<ExpTerm>>;

/// Convex monotone map on R^n given by finitely many terms per coordinate:
///   max-affine  f_i(x) = max_j (r_ij + p_ij . x)
///   log-exp     f_i(x) = log sum_j a_ij exp(j_ij . x)
class MapSpec {
 public:
  enum class Kind { MaxAffine, LogExp };

  MapSpec(int n, MaxAffineRows rows);
  MapSpec(int n, LogExpRows rows);

  static MapSpec linear(const NonnegMatrix& p, std::span<const double> shift = {});
  static MapSpec identity(int n);

  int n() const noexcept { return n_; }
  Kind kind() const noexcept { return rows_.index() == 0 ? Kind::MaxAffine : Kind::LogExp; }
  bool is_max_affine() const noexcept { return kind() == Kind::MaxAffine; }

  const MaxAffineRows& affine_rows() const { return std::get<MaxAffineRows>(rows_); }
  const LogExpRows& exp_rows() const { return std::get<LogExpRows>(rows_); }

  /// Largest per-coordinate term count.
  std::size_t max_terms() const;

  bool operator==(const MapSpec&) const = default;

 private:
  int n_;
  std::variant<MaxAffineRows, LogExpRows> rows_;
};

/// Max-of-linear map h(x)_i = max over row-i generators g of g.x.
class HomogeneousMap {
 public:
  explicit HomogeneousMap(RectangularSet generators);
  static HomogeneousMap linear(const NonnegMatrix& p);

  int n() const noexcept { return gens_.n(); }
  const RectangularSet& generators() const noexcept { return gens_; }

  Vector operator()(std::span<const double> x) const;

  /// Rows and columns restricted to `nodes`, generators deduplicated.
  HomogeneousMap restricted(const NodeSet& nodes) const;

  MapSpec as_map() const;

 private:
  RectangularSet gens_;
};

Vector eval(const MapSpec& f, std::span<const double> x);

/// [x0, f(x0), ..., f^k(x0)]. Throws PreconditionError("divergence") once a
/// coordinate exceeds the configured magnitude bound.
std::vector<Vector> iterate(const MapSpec& f, std::span<const double> x0, std::int64_t k,
                            const AnalysisConfig& cfg = {});

struct Subdiff {
  Vector v;
  RectangularSet generators;
};

/// Max-affine: slopes of the terms active at v; log-exp: the gradient.
Subdiff subdifferential(const MapSpec& f, std::span<const double> v, const AnalysisConfig& cfg = {});

HomogeneousMap directional_derivative(const MapSpec& f, std::span<const double> v, const AnalysisConfig& cfg = {});

/// x -> sup_y f(y + x) - f(y).
HomogeneousMap recession(const MapSpec& f);

/// Max-affine representation of f o g.
MapSpec compose(const MapSpec& f, const MapSpec& g, const AnalysisConfig& cfg = {});

/// Max-affine representation of the k-fold composition, k >= 1. Redundant
/// terms are pruned after every composition step.
MapSpec power_map(const MapSpec& f, int k, const AnalysisConfig& cfg = {});

/// Drops max-affine terms that never attain the maximum: repeated slopes
/// (keeping the largest constant) and terms on or below the upper convex hull
/// of the remaining terms.
std::vector<AffineTerm> prune_terms(std::vector<AffineTerm> terms);

}  // namespace monodyn

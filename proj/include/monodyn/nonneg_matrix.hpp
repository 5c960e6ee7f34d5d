#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "monodyn/config.hpp"
#include "monodyn/digraph.hpp"
#include "monodyn/error.hpp"
#include "monodyn/linalg.hpp"

namespace monodyn {

/// Square matrix with nonnegative finite entries, n >= 1.
class NonnegMatrix {
 public:
  explicit NonnegMatrix(Matrix entries);
  NonnegMatrix(std::initializer_list<std::initializer_list<double>> rows)
      : NonnegMatrix(Matrix(rows)) {}

  int n() const noexcept { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const noexcept { return entries_; }
  double operator()(int i, int j) const {
    return entries_(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  std::span<const double> row(int i) const { return entries_.row(static_cast<std::size_t>(i)); }

  NonnegMatrix principal(const NodeSet& nodes) const;
  Vector apply(std::span<const double> x) const { return entries_ * x; }

  bool operator==(const NonnegMatrix&) const = default;

 private:
  Matrix entries_;
};

/// Strongly connected classes of G(P), their access relation and radii.
struct ClassDecomposition {
  std::vector<NodeSet> classes;  ///< topological order of the access relation
  Digraph condensation;          ///< arc c -> c' iff class c accesses class c' (c != c')
  std::vector<double> class_radii;
  std::vector<bool> critical;    ///< |rho(P_cc) - 1| <= eps_rho
  std::vector<int> class_of;     ///< node -> class index

  NodeSet critical_nodes() const;
  /// Sorted by smallest node.
  std::vector<NodeSet> critical_classes() const;
};

/// The (U, C, D, I) partition of a stable matrix.
struct NormalForm {
  NodeSet U, C, D, I;
  std::vector<NodeSet> critical_classes;
  std::vector<int> permutation;  ///< U, then each critical class, then D, then I
};

/// Product of per-row finite generator lists. Represents the product of the
/// convex hulls of each row's generators.
class RectangularSet {
 public:
  RectangularSet(int n, std::vector<std::vector<Vector>> row_generators);

  int n() const noexcept { return n_; }
  const std::vector<Vector>& generators(int row) const { return rows_[static_cast<std::size_t>(row)]; }
  const std::vector<std::vector<Vector>>& rows() const noexcept { return rows_; }

  /// Number of selection matrices, saturating at INT64_MAX.
  std::int64_t selection_count() const;
  NonnegMatrix selection(const std::vector<int>& choice) const;

  static RectangularSet singleton(const NonnegMatrix& p);

 private:
  int n_;
  std::vector<std::vector<Vector>> rows_;
};

/// Raised when a selection matrix of a rectangular set is not stable.
class UnstableSelectionError : public PreconditionError {
 public:
  UnstableSelectionError(std::vector<int> choice, NonnegMatrix witness)
      : PreconditionError("unstable_selection", "unstable selection found"),
        choice_(std::move(choice)),
        witness_(std::move(witness)) {}

  const std::vector<int>& choice() const noexcept { return choice_; }
  const NonnegMatrix& witness() const noexcept { return witness_; }

 private:
  std::vector<int> choice_;
  NonnegMatrix witness_;
};

Digraph digraph(const NonnegMatrix& p, double tol);

ClassDecomposition decompose(const NonnegMatrix& p, const AnalysisConfig& cfg = {});

double spectral_radius(const NonnegMatrix& p, const AnalysisConfig& cfg = {});

/// rho(P) <= 1 and no critical class has access to a different critical class.
bool is_stable(const NonnegMatrix& p, const AnalysisConfig& cfg = {});
bool is_stable(const ClassDecomposition& dec, const AnalysisConfig& cfg = {});

/// Throws PreconditionError("not_stable") for unstable input.
NormalForm normal_form(const NonnegMatrix& p, const AnalysisConfig& cfg = {});

/// N^c(P) and G^c(P) of a stable matrix.
NodeSet critical_nodes(const NonnegMatrix& p, const AnalysisConfig& cfg = {});
Digraph critical_graph(const NonnegMatrix& p, const AnalysisConfig& cfg = {});

/// Outcome of checking the conclusions that follow from Pz <= z for stable P.
struct SubinvariantReport {
  NormalForm partition;
  double critical_residual = 0.0;    ///< ||P_CC z_C - z_C||_inf
  double downstream_residual = 0.0;  ///< ||z_D||_inf
  double fixed_residual = 0.0;       ///< ||(Pz - z)_{C u D}||_inf
  double independent_deficit = 0.0;  ///< max(0, -min z_I)
  bool critical_ok = true;
  bool downstream_ok = true;
  bool independent_ok = true;
  std::vector<std::string> violations;

  bool ok() const { return critical_ok && downstream_ok && independent_ok; }
};

/// Throws PreconditionError("not_subinvariant") when Pz <= z fails beyond eps_order.
SubinvariantReport check_subinvariant(const NonnegMatrix& p, std::span<const double> z,
                                      const AnalysisConfig& cfg = {});

/// Row-wise average of all generators; its graph is the union of the
/// graphs of all selections.
NonnegMatrix graph_union_witness(const RectangularSet& r);

struct CriticalWitness {
  NonnegMatrix matrix;
  Digraph critical_graph;
  NodeSet critical_nodes;
  bool fully_verified = true;  ///< false when selections were sampled
  std::int64_t selections_checked = 0;
};

/// Builds M in the rectangular hull whose critical graph is the union of the
/// critical graphs of all selections. Throws UnstableSelectionError.
CriticalWitness critical_graph_witness(const RectangularSet& r, const AnalysisConfig& cfg = {});

/// Strictly positive left eigenvector m with m P_cls = m, max entry 1.
Vector left_perron(const NonnegMatrix& p, const NodeSet& cls, const AnalysisConfig& cfg = {});
/// Strictly positive right eigenvector u with P_cls u = u, max entry 1.
Vector right_perron(const NonnegMatrix& p, const NodeSet& cls, const AnalysisConfig& cfg = {});

}  // namespace monodyn

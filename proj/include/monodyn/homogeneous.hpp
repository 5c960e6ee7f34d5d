#pragma once

#include <functional>
#include <optional>
#include <string>

#include "monodyn/config.hpp"
#include "monodyn/map_model.hpp"
#include "monodyn/nonneg_matrix.hpp"

namespace monodyn {

/// A = nodes of G(h) with a path to a critical node, B = the rest.
struct ABSplit {
  NodeSet A, B;
  NodeSet critical_nodes;
  Digraph critical_graph;
  CriticalWitness witness;
};

/// max_{i in A} |x_i / v_i| + alpha * max_{i in B} |x_i / v_i|
struct WeightedNorm {
  Vector v;
  NodeSet A, B;
  double alpha = 1.0;

  double operator()(std::span<const double> x) const;
};

enum class Outcome { Certified, NecessaryOnly, Unstable };

std::string to_string(Outcome o);

struct Certification {
  Outcome outcome = Outcome::NecessaryOnly;
  std::optional<WeightedNorm> norm;
  std::int64_t verified_pairs = 0;
  std::int64_t selections_checked = 0;
  std::optional<NonnegMatrix> unstable_witness;
  std::string note;
};

/// Throws UnstableSelectionError, or InternalError("block_structure") when a
/// B row has weight on A.
ABSplit ab_split(const HomogeneousMap& h, const AnalysisConfig& cfg = {});

/// v with h(v) = v, v >> 0 on A and v = 0 on B.
Vector positive_eigenvector(const HomogeneousMap& h, const ABSplit& split, const AnalysisConfig& cfg = {});

/// Collatz-Wielandt radius of a max-of-linear map.
double cw_radius(const HomogeneousMap& h, const AnalysisConfig& cfg = {});

struct SubEigenpair {
  double lambda = 0.0;
  Vector w;
};

/// lambda = (1 + tau) / 2 and w >= 1 with hB(w) = lambda (w - 1).
SubEigenpair sub_eigenpair(const HomogeneousMap& hB, const AnalysisConfig& cfg = {});

/// Polyhedral norm under which h is non-expansive, checked on sampled pairs
/// before returning. Throws InternalError("certificate_failed").
WeightedNorm build_norm(const HomogeneousMap& h, const AnalysisConfig& cfg = {});
WeightedNorm build_norm(const HomogeneousMap& h, const ABSplit& split, const AnalysisConfig& cfg = {});

/// Largest observed ratio ||h(x) - h(y)|| / ||x - y|| excess over sampled
/// pairs; non-positive when no violation was seen.
double max_expansion_excess(const std::function<Vector(std::span<const double>)>& map, const WeightedNorm& norm,
                            std::int64_t pairs, std::uint64_t seed, double scale = 10.0);

Certification certify_tstable(const HomogeneousMap& h, const AnalysisConfig& cfg = {});

}  // namespace monodyn

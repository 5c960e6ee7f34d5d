#pragma once

#include <utility>
#include <vector>

#include "monodyn/linalg.hpp"

namespace monodyn {

using Arc = std::pair<int, int>;

/// Directed graph on nodes 0..n-1 with sorted, duplicate-free successor lists.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(int n);
  Digraph(int n, const std::vector<Arc>& arcs);

  int size() const noexcept { return static_cast<int>(succ_.size()); }
  void add_arc(int from, int to);
  bool has_arc(int from, int to) const;
  const std::vector<int>& successors(int node) const { return succ_[static_cast<std::size_t>(node)]; }

  std::vector<Arc> arcs() const;
  std::size_t arc_count() const;

  /// Nodes incident to at least one arc.
  NodeSet incident_nodes() const;

  /// Same node count, keeping only arcs with both ends in `nodes`.
  Digraph restricted_to(const NodeSet& nodes) const;

  /// Arc (i, j) iff there is a walk of exactly k arcs from i to j. Requires k >= 1.
  Digraph walk_power(int k) const;

  Digraph united_with(const Digraph& other) const;

  bool operator==(const Digraph&) const = default;

 private:
  std::vector<std::vector<int>> succ_;
};

/// Strongly connected components in topological order of the condensation
/// (a component only reaches components listed after it). Nodes sorted inside.
std::vector<NodeSet> strongly_connected_components(const Digraph& g);

/// Nodes reachable from `sources` by walks of length >= 0.
std::vector<bool> forward_reachable(const Digraph& g, const NodeSet& sources);

/// Nodes that reach `targets` by walks of length >= 0.
std::vector<bool> backward_reachable(const Digraph& g, const NodeSet& targets);

/// True if the subgraph induced by `nodes` is strongly connected.
bool is_strongly_connected(const Digraph& g, const NodeSet& nodes);

/// gcd of circuit lengths per strongly connected component, lcm across the
/// components that contain a circuit; 1 for a circuit-free graph.
int cyclicity(const Digraph& g);

}  // namespace monodyn

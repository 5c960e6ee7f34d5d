#include "monodyn/digraph.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace monodyn {

Digraph::Digraph(int n) : succ_(static_cast<std::size_t>(n)) {
  if (n < 0) throw std::invalid_argument("negative node count");
}

Digraph::Digraph(int n, const std::vector<Arc>& arcs) : Digraph(n) {
  for (auto [i, j] : arcs) add_arc(i, j);
}

void Digraph::add_arc(int from, int to) {
  if (from < 0 || to < 0 || from >= size() || to >= size())
    throw std::out_of_range("arc endpoint outside node range");
  auto& s = succ_[static_cast<std::size_t>(from)];
  auto it = std::lower_bound(s.begin(), s.end(), to);
  if (it == s.end() || *it != to) s.insert(it, to);
}

bool Digraph::has_arc(int from, int to) const {
  const auto& s = succ_[static_cast<std::size_t>(from)];
  return std::binary_search(s.begin(), s.end(), to);
}

std::vector<Arc> Digraph::arcs() const {
  std::vector<Arc> out;
  for (int i = 0; i < size(); ++i)
    for (int j : successors(i)) out.emplace_back(i, j);
  return out;
}

std::size_t Digraph::arc_count() const {
  std::size_t c = 0;
  for (const auto& s : succ_) c += s.size();
  return c;
}

NodeSet Digraph::incident_nodes() const {
  std::vector<bool> seen(succ_.size(), false);
  for (int i = 0; i < size(); ++i)
    for (int j : successors(i)) seen[static_cast<std::size_t>(i)] = seen[static_cast<std::size_t>(j)] = true;
  NodeSet out;
  for (int i = 0; i < size(); ++i)
    if (seen[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

Digraph Digraph::restricted_to(const NodeSet& nodes) const {
  std::vector<bool> in(succ_.size(), false);
  for (int i : nodes) in[static_cast<std::size_t>(i)] = true;
  Digraph g(size());
  for (int i : nodes)
    for (int j : successors(i))
      if (in[static_cast<std::size_t>(j)]) g.succ_[static_cast<std::size_t>(i)].push_back(j);
  return g;
}

Digraph Digraph::walk_power(int k) const {
  if (k < 1) throw std::invalid_argument("walk power requires k >= 1");
  const auto n = static_cast<std::size_t>(size());
  Digraph result(size());
  for (std::size_t start = 0; start < n; ++start) {
    std::vector<bool> frontier(n, false);
    frontier[start] = true;
    for (int step = 0; step < k; ++step) {
      std::vector<bool> next(n, false);
      for (std::size_t u = 0; u < n; ++u)
        if (frontier[u])
          for (int v : succ_[u]) next[static_cast<std::size_t>(v)] = true;
      frontier.swap(next);
    }
    for (std::size_t v = 0; v < n; ++v)
      if (frontier[v]) result.succ_[start].push_back(static_cast<int>(v));
  }
  return result;
}

Digraph Digraph::united_with(const Digraph& other) const {
  if (other.size() != size()) throw std::invalid_argument("graph union size mismatch");
  Digraph g = *this;
  for (auto [i, j] : other.arcs()) g.add_arc(i, j);
  return g;
}

namespace {

struct Tarjan {
  const Digraph& g;
  std::vector<int> index, low;
  std::vector<bool> on_stack;
  std::vector<int> stack;
  std::vector<NodeSet> components;
  int counter = 0;

  explicit Tarjan(const Digraph& graph)
      : g(graph),
        index(static_cast<std::size_t>(graph.size()), -1),
        low(static_cast<std::size_t>(graph.size()), -1),
        on_stack(static_cast<std::size_t>(graph.size()), false) {}

  void visit(int v) {
    const auto vi = static_cast<std::size_t>(v);
    index[vi] = low[vi] = counter++;
    stack.push_back(v);
    on_stack[vi] = true;
    for (int w : g.successors(v)) {
      const auto wi = static_cast<std::size_t>(w);
      if (index[wi] == -1) {
        visit(w);
        low[vi] = std::min(low[vi], low[wi]);
      } else if (on_stack[wi]) {
        low[vi] = std::min(low[vi], index[wi]);
      }
    }
    if (low[vi] == index[vi]) {
      NodeSet comp;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[static_cast<std::size_t>(w)] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      components.push_back(std::move(comp));
    }
  }
};

}  // namespace

std::vector<NodeSet> strongly_connected_components(const Digraph& g) {
  Tarjan t(g);
  for (int v = 0; v < g.size(); ++v)
    if (t.index[static_cast<std::size_t>(v)] == -1) t.visit(v);
  // Tarjan emits sinks first.
  std::reverse(t.components.begin(), t.components.end());
  return std::move(t.components);
}

std::vector<bool> forward_reachable(const Digraph& g, const NodeSet& sources) {
  std::vector<bool> seen(static_cast<std::size_t>(g.size()), false);
  std::deque<int> queue;
  for (int s : sources)
    if (!seen[static_cast<std::size_t>(s)]) {
      seen[static_cast<std::size_t>(s)] = true;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : g.successors(u))
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = true;
        queue.push_back(v);
      }
  }
  return seen;
}

std::vector<bool> backward_reachable(const Digraph& g, const NodeSet& targets) {
  Digraph reversed(g.size());
  for (auto [i, j] : g.arcs()) reversed.add_arc(j, i);
  return forward_reachable(reversed, targets);
}

bool is_strongly_connected(const Digraph& g, const NodeSet& nodes) {
  if (nodes.empty()) return false;
  const Digraph sub = g.restricted_to(nodes);
  const auto fwd = forward_reachable(sub, {nodes.front()});
  const auto bwd = backward_reachable(sub, {nodes.front()});
  return std::all_of(nodes.begin(), nodes.end(), [&](int v) {
    return fwd[static_cast<std::size_t>(v)] && bwd[static_cast<std::size_t>(v)];
  });
}

int cyclicity(const Digraph& g) {
  long long overall = 1;
  for (const NodeSet& comp : strongly_connected_components(g)) {
    const Digraph sub = g.restricted_to(comp);
    if (sub.arc_count() == 0) continue;  // trivial component, no circuit
    // BFS levels from a root; every arc u->v inside the component closes a
    // circuit combination of length level[u] + 1 - level[v].
    std::vector<int> level(static_cast<std::size_t>(g.size()), -1);
    std::deque<int> queue{comp.front()};
    level[static_cast<std::size_t>(comp.front())] = 0;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : sub.successors(u))
        if (level[static_cast<std::size_t>(v)] < 0) {
          level[static_cast<std::size_t>(v)] = level[static_cast<std::size_t>(u)] + 1;
          queue.push_back(v);
        }
    }
    int period = 0;
    for (auto [u, v] : sub.arcs())
      period = std::gcd(period, std::abs(level[static_cast<std::size_t>(u)] + 1 - level[static_cast<std::size_t>(v)]));
    overall = std::lcm(overall, static_cast<long long>(period));
  }
  return static_cast<int>(overall);
}

}  // namespace monodyn

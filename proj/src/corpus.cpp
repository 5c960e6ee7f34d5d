#include "monodyn/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>


namespace monodyn::corpus {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Vector unit(int n, int j) {
  Vector e(idx(n), 0.0);
  e[idx(j)] = 1.0;
  return e;
}

// Weights >= 0.05 on at most two columns, total mass `mass`.
Vector mixed_row(Rng& rng, int n, double mass) {
  Vector row(idx(n), 0.0);
  const int a = uniform_int(rng, 0, n - 1);
  if (n == 1 || uniform(rng, 0.0, 1.0) < 0.3) {
    row[idx(a)] = mass;
    return row;
  }
  int b = uniform_int(rng, 0, n - 2);
  if (b >= a) ++b;
  const double w = uniform(rng, 0.05, mass - 0.05);
  row[idx(a)] = w;
  row[idx(b)] = mass - w;
  return row;
}

}  // namespace

Vector substochastic_row(Rng& rng, int n) {
  if (uniform(rng, 0.0, 1.0) < 0.4) return unit(n, uniform_int(rng, 0, n - 1));
  const double mass = uniform(rng, 0.0, 1.0) < 0.5 ? 1.0 : uniform(rng, 0.2, 1.0);
  return mixed_row(rng, n, mass);
}

MapSpec origin_fixed_map(Rng& rng, int n) {
  std::vector<int> perm(idx(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);

  MaxAffineRows rows;
  for (int i = 0; i < n; ++i) {
    std::vector<AffineTerm> terms;
    const Vector first = uniform(rng, 0.0, 1.0) < 0.6 ? unit(n, perm[idx(i)]) : substochastic_row(rng, n);
    terms.push_back({0.0, first});
    if (uniform(rng, 0.0, 1.0) < 0.4) terms.push_back({0.0, substochastic_row(rng, n)});
    const int extra = uniform_int(rng, 0, 2);
    for (int e = 0; e < extra; ++e) terms.push_back({uniform(rng, -2.0, -0.1), substochastic_row(rng, n)});
    std::shuffle(terms.begin(), terms.end(), rng);
    rows.push_back(std::move(terms));
  }
  return MapSpec(n, std::move(rows));
}

HomogeneousMap conjugated_max_linear(Rng& rng, int n) {
  const HomogeneousMap base = recession(origin_fixed_map(rng, n));
  Vector d(idx(n));
  for (double& v : d) v = std::exp(uniform(rng, std::log(0.2), std::log(5.0)));
  std::vector<std::vector<Vector>> rows;
  for (int i = 0; i < n; ++i) {
    std::vector<Vector> gens;
    for (const auto& g : base.generators().generators(i)) {
      Vector s(idx(n));
      for (int j = 0; j < n; ++j) s[idx(j)] = g[idx(j)] * d[idx(j)] / d[idx(i)];
      gens.push_back(std::move(s));
    }
    rows.push_back(std::move(gens));
  }
  return HomogeneousMap(RectangularSet(n, std::move(rows)));
}

SemilatticeInstance semilattice_map(Rng& rng, int n, int count) {
  const int nc = uniform_int(rng, 1, std::max(1, n - 1));
  std::vector<int> order(idx(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  NodeSet critical(order.begin(), order.begin() + nc), rest(order.begin() + nc, order.end());
  std::sort(critical.begin(), critical.end());
  std::sort(rest.begin(), rest.end());

  MaxAffineRows rows(idx(n));
  for (int i : critical) {
    rows[idx(i)].push_back({0.0, unit(n, i)});
    if (uniform(rng, 0.0, 1.0) < 0.5) {
      const int j = critical[idx(uniform_int(rng, 0, nc - 1))];
      if (j != i) rows[idx(i)].push_back({-uniform(rng, 2.5, 4.0), unit(n, j)});
    }
  }
  for (int i : rest) {
    const int terms = uniform_int(rng, 1, 3);
    for (int t = 0; t < terms; ++t) {
      // Mass on critical columns is free, mass on the rest stays <= 0.9.
      Vector p(idx(n), 0.0);
      p[idx(critical[idx(uniform_int(rng, 0, nc - 1))])] += uniform(rng, 0.1, 1.0);
      if (!rest.empty() && uniform(rng, 0.0, 1.0) < 0.6)
        p[idx(rest[idx(uniform_int(rng, 0, static_cast<int>(rest.size()) - 1))])] += uniform(rng, 0.05, 0.9);
      const double r = t == 0 ? 0.0 : uniform(rng, -2.0, 0.5);
      rows[idx(i)].push_back({r, std::move(p)});
    }
  }
  SemilatticeInstance inst{MapSpec(n, std::move(rows)), critical, {}};

  for (int k = 0; k < count; ++k) {
    Vector x(idx(n), 0.0);
    for (int i : critical) x[idx(i)] = uniform(rng, -1.0, 1.0);
    // The non-critical block is a contraction for fixed x_C.
    for (int it = 0; it < 5000; ++it) {
      Vector next = eval(inst.map, x);
      for (int i : critical) next[idx(i)] = x[idx(i)];
      const double step = sup_dist(next, x);
      x = std::move(next);
      if (step == 0.0) break;
    }
    inst.fixed_points.push_back(std::move(x));
  }
  return inst;
}

int landau(int n) {
  // Maximum lcm over partitions of n.
  std::vector<long long> best(idx(n + 1), 1);
  std::function<void(int, int, long long)> go = [&](int left, int min_part, long long l) {
    best[idx(n - left)] = std::max(best[idx(n - left)], l);
    for (int part = min_part; part <= left; ++part) go(left - part, part, std::lcm(l, static_cast<long long>(part)));
  };
  go(n, 1, 1);
  long long m = 1;
  for (long long v : best) m = std::max(m, v);
  return static_cast<int>(m);
}

}  // namespace monodyn::corpus

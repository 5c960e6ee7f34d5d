#include "simplex.hpp"

#include <cmath>
#include <stdexcept>

namespace monodyn::detail {

namespace {

constexpr double kEps = 1e-11;
constexpr double kPivot = 1e-9;

struct Tableau {
  std::size_t m, cols;  // cols = original + artificial variables
  Matrix t;             // m rows of [A | I | b]
  std::vector<std::size_t> basis;

  double& rhs(std::size_t i) { return t(i, cols); }

  void pivot(std::size_t r, std::size_t c) {
    const double pv = t(r, c);
    for (std::size_t j = 0; j <= cols; ++j) t(r, j) /= pv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r) continue;
      const double f = t(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols; ++j) t(i, j) -= f * t(r, j);
    }
    basis[r] = c;
  }

  enum class Status { Optimal, Unbounded, Stalled };

  // Maximizes cost over the columns in [0, allowed).
  Status optimize(const Vector& cost, std::size_t allowed) {
    const std::size_t cap = 50 * (cols + m) + 100;
    for (std::size_t it = 0; it < cap; ++it) {
      std::size_t enter = cols;
      for (std::size_t j = 0; j < allowed && enter == cols; ++j) {
        double reduced = cost[j];
        for (std::size_t i = 0; i < m; ++i) reduced -= cost[basis[i]] * t(i, j);
        if (reduced > kEps) enter = j;
      }
      if (enter == cols) return Status::Optimal;
      std::size_t leave = m;
      double best = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (t(i, enter) <= kPivot) continue;
        const double ratio = rhs(i) / t(i, enter);
        if (leave == m || ratio < best - kEps || (std::abs(ratio - best) <= kEps && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m) return Status::Unbounded;
      pivot(leave, enter);
    }
    return Status::Stalled;
  }

  double value(const Vector& cost) {
    double v = 0.0;
    for (std::size_t i = 0; i < m; ++i) v += cost[basis[i]] * rhs(i);
    return v;
  }
};

}  // namespace

std::optional<double> lp_maximize(const Matrix& a, const Vector& b, const Vector& c) {
  const std::size_t m = a.rows(), n = a.cols();
  Tableau tab{m, n + m, Matrix(m, n + m + 1), std::vector<std::size_t>(m)};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) tab.t(i, j) = a(i, j);
    tab.t(i, n + i) = 1.0;
    tab.rhs(i) = b[i];
    tab.basis[i] = n + i;
  }

  Vector phase1(n + m, 0.0);
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = -1.0;
  if (tab.optimize(phase1, n) != Tableau::Status::Optimal) return std::nullopt;
  double scale = 1.0;
  for (double v : b) scale = std::max(scale, std::abs(v));
  if (tab.value(phase1) < -1e-9 * scale) return std::nullopt;

  // Drive artificial variables out of the basis where possible; rows where
  // that fails are redundant and keep their artificial at zero.
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis[i] < n) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(tab.t(i, j)) > 1e-9) {
        tab.pivot(i, j);
        break;
      }
  }

  Vector phase2(n + m, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
  const auto status = tab.optimize(phase2, n);
  if (status == Tableau::Status::Unbounded) throw std::runtime_error("unbounded linear program");
  if (status == Tableau::Status::Stalled) return std::nullopt;
  return tab.value(phase2);
}

}  // namespace monodyn::detail

#pragma once

// Test-only oracles for the LP/MILP solver: vertex enumeration for tiny
// bounded LPs, the dual-bound certificate, and exhaustive enumeration over
// binaries.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "solve/milp.hpp"

namespace oracle {

using tsagg::solve::MilpProblem;
using tsagg::solve::Sense;

// Solves the n x n system in place by Gaussian elimination with partial
// pivoting; returns false when singular.
inline bool solve_dense(std::vector<std::vector<double>> a, std::vector<double> b,
                        std::vector<double>& x) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    if (std::abs(a[p][c]) < 1e-12) return false;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

// Minimum over all vertices of a problem whose variables all have finite
// bounds. Returns nullopt when no vertex is feasible.
inline std::optional<double> vertex_enumeration(const MilpProblem& p, double tol = 1e-9) {
  const std::size_t n = p.num_variables();
  struct Plane {
    std::vector<double> a;
    double b;
  };
  std::vector<Plane> planes;
  for (const auto& c : p.constraints()) {
    Plane pl{std::vector<double>(n, 0.0), c.rhs};
    for (const auto& t : c.terms) pl.a[t.var] += t.coef;
    planes.push_back(pl);
  }
  for (std::size_t j = 0; j < n; ++j) {
    Plane lo{std::vector<double>(n, 0.0), p.variables()[j].lower};
    lo.a[j] = 1.0;
    planes.push_back(lo);
    Plane up{std::vector<double>(n, 0.0), p.variables()[j].upper};
    up.a[j] = 1.0;
    planes.push_back(up);
  }
  std::optional<double> best;
  std::vector<std::size_t> pick(n);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t depth, std::size_t from) {
    if (depth == n) {
      std::vector<std::vector<double>> a;
      std::vector<double> b;
      for (std::size_t k : pick) {
        a.push_back(planes[k].a);
        b.push_back(planes[k].b);
      }
      std::vector<double> x;
      if (!solve_dense(a, b, x)) return;
      if (tsagg::solve::max_violation(p, x) > tol * 10) return;
      const double obj = tsagg::solve::evaluate_objective(p, x);
      if (!best || obj < *best) best = obj;
      return;
    }
    for (std::size_t k = from; k < planes.size(); ++k) {
      pick[depth] = k;
      rec(depth + 1, k + 1);
    }
  };
  if (n == 0) return 0.0;
  rec(0, 0);
  return best;
}

// Dual objective from row duals, recomputing reduced costs from scratch.
// Sets `dual_violation` to the largest sign violation of the duals.
inline double dual_bound(const MilpProblem& p, const std::vector<double>& y,
                         double& dual_violation) {
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t n = p.num_variables();
  std::vector<double> d(p.objective());
  double obj = 0.0;
  dual_violation = 0.0;
  for (std::size_t i = 0; i < p.num_constraints(); ++i) {
    const auto& c = p.constraints()[i];
    for (const auto& t : c.terms) d[t.var] -= t.coef * y[i];
    const double lo = c.sense == Sense::less_equal ? -inf : c.rhs;
    const double up = c.sense == Sense::greater_equal ? inf : c.rhs;
    if (y[i] > 0) {
      if (std::isfinite(lo)) obj += y[i] * lo;
      else dual_violation = std::max(dual_violation, y[i]);
    } else if (y[i] < 0) {
      if (std::isfinite(up)) obj += y[i] * up;
      else dual_violation = std::max(dual_violation, -y[i]);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = p.variables()[j];
    if (d[j] > 0) {
      if (std::isfinite(v.lower)) obj += d[j] * v.lower;
      else dual_violation = std::max(dual_violation, d[j]);
    } else if (d[j] < 0) {
      if (std::isfinite(v.upper)) obj += d[j] * v.upper;
      else dual_violation = std::max(dual_violation, -d[j]);
    }
  }
  return obj;
}

// Exhaustive enumeration over all binary assignments, each completed by
// solve_lp. Returns nullopt when every assignment is infeasible.
inline std::optional<double> enumerate_binaries(const MilpProblem& p) {
  std::vector<int> bins;
  for (std::size_t j = 0; j < p.num_variables(); ++j)
    if (p.variables()[j].kind == tsagg::solve::VarKind::binary) bins.push_back(int(j));
  MilpProblem relaxed = tsagg::solve::relax_integrality(p);
  std::optional<double> best;
  const std::size_t combos = std::size_t{1} << bins.size();
  for (std::size_t mask = 0; mask < combos; ++mask) {
    MilpProblem fixed = relaxed;
    bool consistent = true;
    for (std::size_t k = 0; k < bins.size(); ++k) {
      const double v = (mask >> k) & 1 ? 1.0 : 0.0;
      const auto& var = p.variables()[bins[k]];
      if (v < var.lower || v > var.upper) consistent = false;
      fixed.set_bounds(bins[k], v, v);
    }
    if (!consistent) continue;
    auto sol = tsagg::solve::solve_lp(fixed);
    if (sol.status != tsagg::solve::SolveStatus::optimal) continue;
    if (!best || sol.objective < *best) best = sol.objective;
  }
  return best;
}

// Random bounded MILP: continuous in [lo, hi], binaries, mixed-sense rows
// built around a known feasible point so most instances are feasible.
inline MilpProblem random_milp(std::mt19937_64& rng, int n_cont, int n_bin, int n_rows,
                               double density = 0.6) {
  std::uniform_real_distribution<double> coef(-5.0, 5.0), unit(0.0, 1.0);
  MilpProblem p;
  std::vector<double> point;
  for (int j = 0; j < n_cont; ++j) {
    const double lo = std::round(coef(rng)), hi = lo + 1.0 + std::round(4.0 * unit(rng));
    p.add_variable("x" + std::to_string(j), tsagg::solve::VarKind::continuous, lo, hi,
                   std::round(coef(rng) * 10) / 10);
    point.push_back(lo + (hi - lo) * unit(rng));
  }
  for (int j = 0; j < n_bin; ++j) {
    p.add_binary("b" + std::to_string(j), std::round(coef(rng) * 10) / 10);
    point.push_back(unit(rng) < 0.5 ? 0.0 : 1.0);
  }
  const int n = n_cont + n_bin;
  for (int i = 0; i < n_rows; ++i) {
    std::vector<tsagg::solve::Term> terms;
    double act = 0.0;
    for (int j = 0; j < n; ++j) {
      if (unit(rng) > density) continue;
      const double a = std::round(coef(rng) * 4) / 4;
      if (a == 0.0) continue;
      terms.push_back({j, a});
      act += a * point[j];
    }
    if (terms.empty()) {
      terms.push_back({int(i % n), 1.0});
      act = point[i % n];
    }
    const double pick = unit(rng);
    const double slack = std::round(unit(rng) * 3 * 4) / 4;
    if (pick < 0.45) {
      p.add_constraint("r" + std::to_string(i), terms, Sense::less_equal, std::ceil(act) + slack);
    } else if (pick < 0.9) {
      p.add_constraint("r" + std::to_string(i), terms, Sense::greater_equal, std::floor(act) - slack);
    } else {
      p.add_constraint("r" + std::to_string(i), terms, Sense::equal, act);
    }
  }
  return p;
}

}  // namespace oracle

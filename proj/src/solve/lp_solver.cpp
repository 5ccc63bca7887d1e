#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>

#include "error.hpp"
#include "solve/milp.hpp"
#include "solve/scaled_lp.hpp"

namespace tsagg::solve {

namespace {

double pow2_round(double v) { return std::exp2(std::round(std::log2(v))); }

void validate_for_solve(const MilpProblem& problem) {
  for (const auto& v : problem.variables()) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper ||
        v.lower == kInfinity || v.upper == -kInfinity)
      fail(ErrorCode::usage, "variable '" + v.name + "' has inconsistent bounds");
  }
  for (double c : problem.objective())
    if (!std::isfinite(c)) fail(ErrorCode::usage, "objective coefficient is not finite");
  const auto nvar = static_cast<int>(problem.num_variables());
  for (const auto& c : problem.constraints()) {
    if (!std::isfinite(c.rhs))
      fail(ErrorCode::usage, "constraint '" + c.name + "' has a non-finite right-hand side");
    for (const auto& t : c.terms) {
      if (t.var < 0 || t.var >= nvar)
        fail(ErrorCode::usage, "constraint '" + c.name + "' references an unknown variable");
      if (!std::isfinite(t.coef))
        fail(ErrorCode::usage, "constraint '" + c.name + "' has a non-finite coefficient");
    }
  }
}

}  // namespace

ScaledLp build_scaled_lp(const MilpProblem& problem, double feasibility_tol) {
  validate_for_solve(problem);
  ScaledLp out;
  const int n = static_cast<int>(problem.num_variables());
  const auto& cons = problem.constraints();

  // Merge duplicate terms and drop empty rows.
  struct Row {
    std::vector<Term> terms;
    double lower, upper;
  };
  std::vector<Row> rows;
  out.row_of_constraint.assign(cons.size(), -1);
  std::vector<double> acc(n, 0.0);
  std::vector<char> used(n, 0);
  for (std::size_t c = 0; c < cons.size(); ++c) {
    std::vector<int> order;
    for (const auto& t : cons[c].terms) {
      if (!used[t.var]) {
        used[t.var] = 1;
        order.push_back(t.var);
      }
      acc[t.var] += t.coef;
    }
    Row row;
    for (int j : order) {
      if (acc[j] != 0.0) row.terms.push_back({j, acc[j]});
      acc[j] = 0.0;
      used[j] = 0;
    }
    double lo = -kInfinity, up = kInfinity;
    switch (cons[c].sense) {
      case Sense::less_equal: up = cons[c].rhs; break;
      case Sense::greater_equal: lo = cons[c].rhs; break;
      case Sense::equal: lo = up = cons[c].rhs; break;
    }
    if (row.terms.empty()) {
      if (lo > feasibility_tol || up < -feasibility_tol) out.trivially_infeasible = true;
      continue;
    }
    row.lower = lo;
    row.upper = up;
    out.row_of_constraint[c] = static_cast<int>(rows.size());
    rows.push_back(std::move(row));
  }
  const int m = static_cast<int>(rows.size());

  // Equilibration: a few geometric passes, then unit max-magnitude.
  std::vector<double> R(m, 1.0), C(n, 1.0);
  auto row_pass = [&](bool geometric) {
    for (int i = 0; i < m; ++i) {
      double lo = kInfinity, hi = 0.0;
      for (const auto& t : rows[i].terms) {
        const double a = std::abs(t.coef) * R[i] * C[t.var];
        lo = std::min(lo, a);
        hi = std::max(hi, a);
      }
      const double f = geometric ? std::sqrt(lo * hi) : hi;
      if (f > 0.0) R[i] /= pow2_round(f);
    }
  };
  auto col_pass = [&](bool geometric) {
    std::vector<double> lo(n, kInfinity), hi(n, 0.0);
    for (int i = 0; i < m; ++i)
      for (const auto& t : rows[i].terms) {
        const double a = std::abs(t.coef) * R[i] * C[t.var];
        lo[t.var] = std::min(lo[t.var], a);
        hi[t.var] = std::max(hi[t.var], a);
      }
    for (int j = 0; j < n; ++j) {
      if (hi[j] <= 0.0) continue;
      const double f = geometric ? std::sqrt(lo[j] * hi[j]) : hi[j];
      C[j] /= pow2_round(f);
    }
  };
  for (int pass = 0; pass < 3; ++pass) {
    row_pass(true);
    col_pass(true);
  }
  row_pass(false);
  col_pass(false);

  LpData& lp = out.data;
  lp.n = n;
  lp.m = m;
  std::vector<int> count(n + 1, 0);
  for (const auto& r : rows)
    for (const auto& t : r.terms) ++count[t.var + 1];
  lp.col_start.assign(n + 1, 0);
  for (int j = 0; j < n; ++j) lp.col_start[j + 1] = lp.col_start[j] + count[j + 1];
  const int nnz = lp.col_start[n];
  lp.row_index.assign(nnz, 0);
  lp.col_value.assign(nnz, 0.0);
  lp.row_start.assign(m + 1, 0);
  lp.col_index.reserve(nnz);
  lp.row_value.reserve(nnz);
  std::vector<int> fill(lp.col_start.begin(), lp.col_start.end() - 1);
  for (int i = 0; i < m; ++i) {
    for (const auto& t : rows[i].terms) {
      const double a = t.coef * R[i] * C[t.var];
      lp.row_index[fill[t.var]] = i;
      lp.col_value[fill[t.var]] = a;
      ++fill[t.var];
      lp.col_index.push_back(t.var);
      lp.row_value.push_back(a);
    }
    lp.row_start[i + 1] = static_cast<int>(lp.col_index.size());
  }

  lp.cost.assign(n + m, 0.0);
  lp.lower.assign(n + m, 0.0);
  lp.upper.assign(n + m, 0.0);
  // The objective is brought to unit size by its median magnitude; the
  // maximum lets one badly scaled column loosen the dual tolerance for all.
  std::vector<double> magnitudes;
  for (int j = 0; j < n; ++j) {
    lp.cost[j] = problem.objective()[j] * C[j];
    if (lp.cost[j] != 0.0) magnitudes.push_back(std::abs(lp.cost[j]));
    lp.lower[j] = problem.variables()[j].lower / C[j];
    lp.upper[j] = problem.variables()[j].upper / C[j];
  }
  out.obj_scale = 1.0;
  if (!magnitudes.empty()) {
    auto mid = magnitudes.begin() + magnitudes.size() / 2;
    std::nth_element(magnitudes.begin(), mid, magnitudes.end());
    out.obj_scale = 1.0 / pow2_round(*mid);
  }
  for (int j = 0; j < n; ++j) lp.cost[j] *= out.obj_scale;
  for (int i = 0; i < m; ++i) {
    lp.lower[n + i] = rows[i].lower * R[i];
    lp.upper[n + i] = rows[i].upper * R[i];
  }
  out.col_scale = std::move(C);
  out.row_scale = std::move(R);
  return out;
}

std::vector<double> unscale_values(const ScaledLp& lp, const std::vector<double>& x) {
  std::vector<double> v(lp.data.n);
  for (int j = 0; j < lp.data.n; ++j) v[j] = x[j] * lp.col_scale[j];
  return v;
}

void unscale_duals(const ScaledLp& lp, const SimplexEngine& engine,
                   std::vector<double>& row_duals,
                   std::vector<double>& reduced_costs) {
  const auto& y = engine.row_duals();
  const auto& d = engine.reduced_costs();
  row_duals.assign(lp.row_of_constraint.size(), 0.0);
  for (std::size_t c = 0; c < lp.row_of_constraint.size(); ++c) {
    const int i = lp.row_of_constraint[c];
    if (i >= 0) row_duals[c] = y[i] * lp.row_scale[i] / lp.obj_scale;
  }
  reduced_costs.assign(lp.data.n, 0.0);
  for (int j = 0; j < lp.data.n; ++j)
    reduced_costs[j] = d[j] / (lp.obj_scale * lp.col_scale[j]);
}

MilpSolution solve_lp(const MilpProblem& problem, const SolverOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (problem.num_binaries() > 0)
    fail(ErrorCode::usage, "solve_lp called on a problem with binary variables");
  MilpSolution sol;
  ScaledLp lp = build_scaled_lp(problem, options.feasibility_tolerance);
  auto finish = [&]() {
    sol.stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return sol;
  };
  if (lp.trivially_infeasible) {
    sol.status = SolveStatus::infeasible;
    return finish();
  }
  const auto deadline =
      std::isfinite(options.time_limit_seconds)
          ? start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(options.time_limit_seconds))
          : std::chrono::steady_clock::time_point::max();
  SimplexEngine engine(std::move(lp.data),
                       {options.feasibility_tolerance, options.optimality_tolerance, 1e-9});
  const LpStatus st = engine.solve(deadline);
  sol.stats.iterations = engine.iterations();
  switch (st) {
    case LpStatus::optimal:
      sol.status = SolveStatus::optimal;
      sol.values = unscale_values(lp, engine.values());
      sol.objective = evaluate_objective(problem, sol.values);
      sol.best_bound = sol.objective;
      unscale_duals(lp, engine, sol.row_duals, sol.reduced_costs);
      break;
    case LpStatus::infeasible: sol.status = SolveStatus::infeasible; break;
    case LpStatus::unbounded: sol.status = SolveStatus::unbounded; break;
    case LpStatus::time_limit: sol.status = SolveStatus::time_limit_no_incumbent; break;
  }
  return finish();
}

}  // namespace tsagg::solve

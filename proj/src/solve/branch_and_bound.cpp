#include <chrono>
#include <cmath>
#include <memory>
#include <queue>

#include "solve/milp.hpp"
#include "solve/scaled_lp.hpp"

namespace tsagg::solve {

namespace {

struct Fix {
  int var;
  bool one;
};

struct Node {
  double bound;
  long id;
  std::vector<Fix> fixes;
  std::shared_ptr<const Basis> basis;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

double relative_gap(double incumbent, double bound) {
  return std::max(0.0, incumbent - bound) / std::max(std::abs(incumbent), 1e-10);
}

}  // namespace

MilpSolution solve_milp(const MilpProblem& problem, const SolverOptions& options) {
  if (problem.num_binaries() == 0) {
    MilpSolution sol = solve_lp(problem, options);
    sol.stats.nodes = 1;
    if (sol.status == SolveStatus::time_limit_no_incumbent) return sol;
    return sol;
  }
  const auto start = std::chrono::steady_clock::now();
  const auto deadline =
      std::isfinite(options.time_limit_seconds)
          ? start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(options.time_limit_seconds))
          : std::chrono::steady_clock::time_point::max();

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

  const int n = lp.data.n;
  std::vector<int> binaries;
  for (int j = 0; j < n; ++j)
    if (problem.variables()[j].kind == VarKind::binary) binaries.push_back(j);
  const std::vector<double> root_lower(lp.data.lower.begin(), lp.data.lower.begin() + n);
  const std::vector<double> root_upper(lp.data.upper.begin(), lp.data.upper.begin() + n);
  const std::vector<double> col_scale = lp.col_scale;

  SimplexEngine engine(std::move(lp.data),
                       {options.feasibility_tolerance, options.optimality_tolerance, 1e-9});
  auto apply_fixes = [&](const std::vector<Fix>& fixes) {
    for (int j : binaries) engine.set_bounds(j, root_lower[j], root_upper[j]);
    for (const auto& f : fixes) {
      const double v = f.one ? 1.0 / col_scale[f.var] : 0.0;
      engine.set_bounds(f.var, v, v);
    }
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;
  open.push({-kInfinity, next_id++, {}, nullptr});
  bool have_incumbent = false;
  double incumbent = kInfinity;
  bool root = true;
  bool timed_out = false;

  while (!open.empty()) {
    if (options.node_limit >= 0 && sol.stats.nodes >= options.node_limit) {
      timed_out = true;
      break;
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      timed_out = true;
      break;
    }
    if (have_incumbent && relative_gap(incumbent, open.top().bound) <= options.gap_tolerance)
      break;
    Node node = open.top();
    open.pop();

    apply_fixes(node.fixes);
    if (node.basis) engine.set_basis(*node.basis);
    const LpStatus st = engine.solve(deadline);
    ++sol.stats.nodes;
    if (st == LpStatus::time_limit) {
      open.push(std::move(node));
      timed_out = true;
      break;
    }
    if (st == LpStatus::unbounded) {
      if (root) {
        sol.status = SolveStatus::unbounded;
        sol.stats.iterations = engine.iterations();
        return finish();
      }
      continue;
    }
    root = false;
    if (st == LpStatus::infeasible) continue;

    const std::vector<double> x = unscale_values(lp, engine.values());
    const double obj = evaluate_objective(problem, x);
    if (have_incumbent && relative_gap(incumbent, obj) <= options.gap_tolerance) continue;

    // Most fractional binary, lowest index on ties.
    int branch = -1;
    double best_frac = options.integrality_tolerance;
    for (int j : binaries) {
      const double frac = std::abs(x[j] - std::round(x[j]));
      if (frac > best_frac) {
        best_frac = frac;
        branch = j;
      }
    }
    auto basis = std::make_shared<const Basis>(engine.basis());
    if (branch < 0) {
      // Integral within tolerance: pin the binaries and re-solve so the
      // continuous part is consistent with exact 0/1 values.
      std::vector<Fix> pinned = node.fixes;
      for (int j : binaries) pinned.push_back({j, x[j] > 0.5});
      apply_fixes(pinned);
      const LpStatus pst = engine.solve(deadline);
      if (pst == LpStatus::time_limit) {
        open.push(std::move(node));
        timed_out = true;
        break;
      }
      if (pst != LpStatus::optimal) continue;
      std::vector<double> xp = unscale_values(lp, engine.values());
      for (int j : binaries) xp[j] = std::round(xp[j]);
      const double pobj = evaluate_objective(problem, xp);
      if (!have_incumbent || pobj < incumbent) {
        have_incumbent = true;
        incumbent = pobj;
        sol.values = std::move(xp);
      }
      continue;
    }
    std::vector<Fix> down = node.fixes, up = node.fixes;
    down.push_back({branch, false});
    up.push_back({branch, true});
    open.push({obj, next_id++, std::move(down), basis});
    open.push({obj, next_id++, std::move(up), basis});
  }

  sol.stats.iterations = engine.iterations();
  double bound = have_incumbent ? incumbent : kInfinity;
  if (!open.empty()) bound = std::min(bound, open.top().bound);
  sol.best_bound = bound;
  if (!have_incumbent) {
    sol.status = timed_out ? SolveStatus::time_limit_no_incumbent : SolveStatus::infeasible;
    return finish();
  }
  sol.objective = incumbent;
  sol.gap = relative_gap(incumbent, bound);
  sol.status = timed_out && sol.gap > options.gap_tolerance ? SolveStatus::time_limit_incumbent
                                                            : SolveStatus::optimal;
  return finish();
}

}  // namespace tsagg::solve

#pragma once

// Solver-agnostic linear programs with binary variables, and the embedded
// simplex / branch-and-bound solver used for desk-scale instances.

#include <cstddef>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

namespace tsagg::solve {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class VarKind { continuous, binary };
enum class Sense { less_equal, greater_equal, equal };

struct Variable {
  std::string name;
  VarKind kind = VarKind::continuous;
  double lower = 0.0;
  double upper = kInfinity;
};

struct Term {
  int var;
  double coef;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::less_equal;
  double rhs = 0.0;
};

// Minimisation problem. Objective coefficients are stored densely, one per
// variable.
class MilpProblem {
 public:
  int add_variable(std::string name, VarKind kind, double lower, double upper,
                   double objective = 0.0);
  int add_binary(std::string name, double objective = 0.0) {
    return add_variable(std::move(name), VarKind::binary, 0.0, 1.0, objective);
  }
  int add_constraint(std::string name, std::vector<Term> terms, Sense sense,
                     double rhs);

  void set_objective(int var, double coef) { objective_.at(var) = coef; }
  void add_objective(int var, double coef) { objective_.at(var) += coef; }
  void set_bounds(int var, double lower, double upper);

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<double>& objective() const { return objective_; }

  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_constraints() const { return constraints_.size(); }
  std::size_t num_binaries() const;
  std::size_t num_nonzeros() const;

  // Throws Error(usage) when bounds are inconsistent, a coefficient is not
  // finite, a term references an unknown variable, or a row is empty.
  void audit() const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<double> objective_;
};

// Copy of `problem` with every binary turned into a continuous [0,1] variable.
MilpProblem relax_integrality(const MilpProblem& problem);

enum class SolveStatus {
  optimal,
  infeasible,
  unbounded,
  time_limit_incumbent,
  time_limit_no_incumbent,
};

const char* to_string(SolveStatus status);

struct SolveStats {
  long nodes = 0;
  long iterations = 0;
  double wall_seconds = 0.0;
};

struct MilpSolution {
  SolveStatus status = SolveStatus::infeasible;
  double objective = 0.0;
  std::vector<double> values;
  // Relative gap (incumbent - bound) / max(|incumbent|, 1e-10).
  double gap = 0.0;
  double best_bound = 0.0;
  SolveStats stats;
  // Filled by solve_lp for optimal solutions: one dual per constraint and
  // one reduced cost per variable, in the original (unscaled) problem.
  std::vector<double> row_duals;
  std::vector<double> reduced_costs;

  bool has_solution() const {
    return status == SolveStatus::optimal ||
           status == SolveStatus::time_limit_incumbent;
  }
};

struct SolverOptions {
  double time_limit_seconds = kInfinity;
  double gap_tolerance = 1e-6;
  double feasibility_tolerance = 1e-7;
  double optimality_tolerance = 1e-7;
  double integrality_tolerance = 1e-6;
  long node_limit = -1;
};

// Simplex solve of a problem without binaries (throws Error(usage) when
// binaries are present; use relax_integrality first).
MilpSolution solve_lp(const MilpProblem& problem,
                      const SolverOptions& options = {});

// Branch-and-bound over the binaries with LP relaxations at every node.
MilpSolution solve_milp(const MilpProblem& problem,
                        const SolverOptions& options = {});

// Largest absolute violation of any row or bound by `values`, and of
// integrality for binaries.
double max_violation(const MilpProblem& problem,
                     const std::vector<double>& values);

double evaluate_objective(const MilpProblem& problem,
                          const std::vector<double>& values);

// CPLEX-style LP text format.
std::string to_lp_string(const MilpProblem& problem);
void export_lp(const MilpProblem& problem, const std::filesystem::path& path);

// Maps a name onto [A-Za-z0-9_] without a leading digit.
std::string sanitize_lp_name(const std::string& name);

}  // namespace tsagg::solve

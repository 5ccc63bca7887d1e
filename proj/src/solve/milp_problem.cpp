#include "solve/milp.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace tsagg::solve {

int MilpProblem::add_variable(std::string name, VarKind kind, double lower,
                              double upper, double objective) {
  if (kind == VarKind::binary) {
    lower = std::max(lower, 0.0);
    upper = std::min(upper, 1.0);
  }
  variables_.push_back({std::move(name), kind, lower, upper});
  objective_.push_back(objective);
  return static_cast<int>(variables_.size() - 1);
}

int MilpProblem::add_constraint(std::string name, std::vector<Term> terms,
                                Sense sense, double rhs) {
  constraints_.push_back({std::move(name), std::move(terms), sense, rhs});
  return static_cast<int>(constraints_.size() - 1);
}

void MilpProblem::set_bounds(int var, double lower, double upper) {
  auto& v = variables_.at(var);
  v.lower = lower;
  v.upper = upper;
}

std::size_t MilpProblem::num_binaries() const {
  return static_cast<std::size_t>(
      std::count_if(variables_.begin(), variables_.end(),
                    [](const Variable& v) { return v.kind == VarKind::binary; }));
}

std::size_t MilpProblem::num_nonzeros() const {
  std::size_t n = 0;
  for (const auto& c : constraints_) n += c.terms.size();
  return n;
}

void MilpProblem::audit() const {
  const auto nvar = static_cast<int>(variables_.size());
  for (const auto& v : variables_) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper)
      fail(ErrorCode::usage, "variable '" + v.name + "' has inconsistent bounds");
    if (v.lower == kInfinity || v.upper == -kInfinity)
      fail(ErrorCode::usage, "variable '" + v.name + "' has an infinite bound on the wrong side");
    if (v.kind == VarKind::binary && (v.lower < 0.0 || v.upper > 1.0))
      fail(ErrorCode::usage, "binary '" + v.name + "' is not bounded by [0,1]");
  }
  for (std::size_t j = 0; j < objective_.size(); ++j)
    if (!std::isfinite(objective_[j]))
      fail(ErrorCode::usage, "objective coefficient of '" + variables_[j].name + "' is not finite");
  for (const auto& c : constraints_) {
    if (c.terms.empty())
      fail(ErrorCode::usage, "constraint '" + c.name + "' has no terms");
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

MilpProblem relax_integrality(const MilpProblem& problem) {
  MilpProblem relaxed;
  for (std::size_t j = 0; j < problem.num_variables(); ++j) {
    const auto& v = problem.variables()[j];
    relaxed.add_variable(v.name, VarKind::continuous, v.lower, v.upper,
                         problem.objective()[j]);
  }
  for (const auto& c : problem.constraints())
    relaxed.add_constraint(c.name, c.terms, c.sense, c.rhs);
  return relaxed;
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::time_limit_incumbent: return "time_limit_incumbent";
    case SolveStatus::time_limit_no_incumbent: return "time_limit_no_incumbent";
  }
  return "unknown";
}

double max_violation(const MilpProblem& problem,
                     const std::vector<double>& values) {
  double worst = 0.0;
  const auto& vars = problem.variables();
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const double x = values.at(j);
    worst = std::max(worst, vars[j].lower - x);
    worst = std::max(worst, x - vars[j].upper);
    if (vars[j].kind == VarKind::binary)
      worst = std::max(worst, std::abs(x - std::round(x)));
  }
  for (const auto& c : problem.constraints()) {
    double activity = 0.0;
    for (const auto& t : c.terms) activity += t.coef * values[t.var];
    switch (c.sense) {
      case Sense::less_equal: worst = std::max(worst, activity - c.rhs); break;
      case Sense::greater_equal: worst = std::max(worst, c.rhs - activity); break;
      case Sense::equal: worst = std::max(worst, std::abs(activity - c.rhs)); break;
    }
  }
  return worst;
}

double evaluate_objective(const MilpProblem& problem,
                          const std::vector<double>& values) {
  double obj = 0.0;
  for (std::size_t j = 0; j < problem.num_variables(); ++j)
    obj += problem.objective()[j] * values.at(j);
  return obj;
}

}  // namespace tsagg::solve

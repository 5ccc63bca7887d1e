#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include "solve/basis_factor.hpp"

namespace tsagg::solve {

// LP in computational form: A x - r = 0 with column bounds on x and row
// bounds on the logical r. Column j < n is structural; column n + i is the
// logical of row i (coefficient -1 in row i).
struct LpData {
  int n = 0;
  int m = 0;
  std::vector<int> col_start, row_index;
  std::vector<double> col_value;
  std::vector<int> row_start, col_index;
  std::vector<double> row_value;
  std::vector<double> cost;   // size n + m, logicals carry 0
  std::vector<double> lower;  // size n + m
  std::vector<double> upper;  // size n + m
};

enum class VarStatus : std::uint8_t { basic, at_lower, at_upper, free_nonbasic };

enum class LpStatus { optimal, infeasible, unbounded, time_limit };

struct SimplexTolerances {
  double primal = 1e-7;
  double dual = 1e-7;
  double pivot = 1e-9;
};

using Basis = std::vector<VarStatus>;

// Bounded primal and dual simplex sharing one basis factorisation. Starts
// from the all-logical basis or from a basis supplied with set_basis; the
// dual simplex is used whenever the starting basis is dual feasible.
class SimplexEngine {
 public:
  SimplexEngine(LpData data, SimplexTolerances tol);

  void set_bounds(int j, double lower, double upper);
  double lower(int j) const { return lp_.lower[j]; }
  double upper(int j) const { return lp_.upper[j]; }

  Basis basis() const { return status_; }
  void set_basis(const Basis& basis);

  LpStatus solve(std::chrono::steady_clock::time_point deadline);

  const std::vector<double>& values() const { return x_; }
  const std::vector<double>& row_duals() const { return y_; }
  const std::vector<double>& reduced_costs() const { return d_; }
  double objective() const;
  long iterations() const { return iterations_; }
  int num_structural() const { return lp_.n; }

 private:
  enum class Step { progress, done, infeasible, unbounded, trouble };

  int total() const { return lp_.n + lp_.m; }
  bool is_fixed(int j) const { return lp_.lower[j] == lp_.upper[j]; }
  void place_nonbasic(int j);
  void refactor();
  void compute_primal();
  void collect_infeasible();
  void note_infeasible(int position);
  void compute_duals(const std::vector<double>& cost);
  void price_all(const std::vector<double>& cost);
  void load_column(int j, HVector& column) const;
  double primal_infeasibility(int j) const;
  bool make_dual_feasible();
  bool remove_cost_shifts();
  void pivot_in(int q, int r, const HVector& alpha);
  bool check_time(std::chrono::steady_clock::time_point deadline);

  Step primal_iteration(bool phase1);
  Step dual_iteration();
  LpStatus run_primal(std::chrono::steady_clock::time_point deadline);
  LpStatus run_dual(std::chrono::steady_clock::time_point deadline);

  LpData lp_;
  SimplexTolerances tol_;
  std::vector<VarStatus> status_;
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> d_;
  std::vector<int> head_;
  std::vector<int> pos_;
  BasisFactor factor_;
  bool factor_valid_ = false;

  std::vector<double> cost_;  // objective plus any cost shifts
  bool shifted_ = false;
  // Dual pricing weights by basis position.
  std::vector<double> dse_;
  // Basis positions that may be primal infeasible, for the dual pricing.
  std::vector<int> infeasible_;
  std::vector<char> listed_infeasible_;
  bool infeasible_valid_ = false;
  std::vector<double> phase_cost_;
  HVector work_;
  HVector alpha_;
  std::vector<double> row_alpha_;
  std::vector<int> touched_;
  std::vector<char> touched_mark_;
  std::vector<int> logical_index_;
  double neg_one_ = -1.0;

  long iterations_ = 0;
  int degenerate_run_ = 0;
  bool bland_ = false;
  bool timed_out_ = false;
};

}  // namespace tsagg::solve

#pragma once

#include <vector>

#include "solve/milp.hpp"
#include "solve/simplex.hpp"

namespace tsagg::solve {

// Computational form of a MilpProblem after dropping empty rows and
// equilibrating rows and columns with power-of-two factors.
struct ScaledLp {
  LpData data;
  std::vector<double> col_scale;  // x_original = col_scale * x_scaled
  std::vector<double> row_scale;  // r_scaled = row_scale * r_original
  double obj_scale = 1.0;
  std::vector<int> row_of_constraint;  // -1 for dropped rows
  bool trivially_infeasible = false;   // an empty row cannot be satisfied
};

ScaledLp build_scaled_lp(const MilpProblem& problem, double feasibility_tol);

// Unscaled primal values of the structural columns.
std::vector<double> unscale_values(const ScaledLp& lp, const std::vector<double>& x);

void unscale_duals(const ScaledLp& lp, const SimplexEngine& engine,
                   std::vector<double>& row_duals,
                   std::vector<double>& reduced_costs);

}  // namespace tsagg::solve

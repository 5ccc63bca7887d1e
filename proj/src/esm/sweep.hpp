#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "esm/model.hpp"
#include "pipeline.hpp"

namespace tsagg::esm {

struct SweepConfig {
  std::vector<Method> methods;
  std::vector<int> n_clusters;
  std::vector<int> steps_per_period;
  // Applied to every cell.
  std::vector<ExtremeSpec> extremes;
  IntegrationMethod extreme_method = IntegrationMethod::none;
  KMeansOptions kmeans;
  double kmedoids_time_limit_seconds = 600.0;
  solve::SolverOptions solver;
};

struct SweepRow {
  Method method;
  int n_clusters;
  int steps_per_period;
  solve::SolveStatus status;
  double objective;       // NaN without a solution
  double full_objective;  // full model over the same truncated horizon
  double relative_error;  // (objective - full) / full
  double wall_time_seconds;
  double full_wall_time_seconds;
};

// One row per method x N_k x N_g, sorted by (method as listed, N_g, N_k).
// The reference is solved once per distinct horizon. Throws Error(data)
// when a cell asks for more periods than the horizon holds and
// Error(infeasible) when a reference run has no solution.
std::vector<SweepRow> run_sweep(const SystemModel& system, const RawSeriesSet& raw, const SweepConfig& config);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace tsagg::esm

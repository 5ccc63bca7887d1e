#pragma once

#include <string>
#include <vector>

#include "esm/system.hpp"
#include "solve/milp.hpp"
#include "timeseries.hpp"
#include "typical.hpp"

namespace tsagg::esm {

// The emitted problem plus where each model quantity lives in it.
struct BuiltModel {
  solve::MilpProblem problem;
  int periods = 1;
  int steps = 0;  // per period
  double step_length_hours = 1.0;
  std::vector<double> weights;      // per period
  double operation_scale = 1.0;     // annualization of operating costs
  std::vector<int> capacity_var;    // per device, -1 when fixed or absent
  std::vector<int> exist_var;       // per device, -1 when no binary is needed
  std::vector<double> fixed_capacity;  // per device, NaN unless fixed
  // flow_var[c][k * steps + g] for connection c.
  std::vector<std::vector<int>> flow_var;
  // soc_var[d][k * steps + g], empty for non-storage devices.
  std::vector<std::vector<int>> soc_var;
};

// Whole horizon as one period: every time step is modelled and storage
// closes cyclically over the horizon.
BuiltModel build_full_model(const SystemModel& system, const RawSeriesSet& profiles);

// One block of N_g steps per typical period, operating costs weighted by
// the period weight, storage closed cyclically inside every period.
BuiltModel build_typical_model(const SystemModel& system, const TypicalPeriodSet& set);

struct DeviceReport {
  std::string name;
  DeviceClass cls;
  bool exists;
  double capacity;
};

struct ModelReport {
  solve::SolveStatus status = solve::SolveStatus::infeasible;
  double objective = 0.0;
  double gap = 0.0;
  double best_bound = 0.0;
  std::vector<DeviceReport> devices;
  solve::SolveStats stats;
  std::size_t variables = 0, constraints = 0, binaries = 0;
  std::vector<double> values;
};

// solve_milp when the model has binaries, solve_lp otherwise.
ModelReport solve_model(const SystemModel& system, const BuiltModel& model,
                        const solve::SolverOptions& options = {});

std::vector<DeviceReport> device_reports(const SystemModel& system, const BuiltModel& model,
                                         const std::vector<double>& values);

// {status, objective, gap, best_bound, capacities, exists, wall_time_seconds, ...}
std::string report_json(const ModelReport& report);

}  // namespace tsagg::esm

#include "esm/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "error.hpp"

namespace tsagg::esm {

namespace {

RawSeriesSet truncated(const RawSeriesSet& raw, std::size_t steps) {
  RawSeriesSet out = raw;
  for (auto& a : out.attributes) a.values.resize(steps);
  return out;
}

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SystemModel& system, const RawSeriesSet& raw, const SweepConfig& config) {
  if (config.methods.empty() || config.n_clusters.empty() || config.steps_per_period.empty())
    fail(ErrorCode::usage, "sweep needs at least one method, period count and period length");
  raw.validate();

  std::vector<int> lengths = config.steps_per_period;
  std::sort(lengths.begin(), lengths.end());
  lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
  std::vector<int> counts = config.n_clusters;
  std::sort(counts.begin(), counts.end());
  counts.erase(std::unique(counts.begin(), counts.end()), counts.end());

  for (int ng : lengths) {
    if (ng < 1) fail(ErrorCode::usage, "period length must be positive");
    const int periods = static_cast<int>(raw.steps()) / ng;
    for (int nk : counts)
      if (nk < 1 || nk > periods)
        fail(ErrorCode::data, "cannot form " + std::to_string(nk) + " typical periods from " +
                                  std::to_string(periods) + " periods of " + std::to_string(ng) + " steps");
  }

  struct Reference {
    double objective;
    double seconds;
  };
  std::map<std::size_t, Reference> references;
  auto reference = [&](std::size_t steps) {
    auto it = references.find(steps);
    if (it != references.end()) return it->second;
    const auto report = solve_model(system, build_full_model(system, truncated(raw, steps)), config.solver);
    if (report.status != solve::SolveStatus::optimal && report.status != solve::SolveStatus::time_limit_incumbent)
      fail(ErrorCode::infeasible, std::string("reference model over ") + std::to_string(steps) +
                                      " steps ended " + solve::to_string(report.status));
    return references[steps] = Reference{report.objective, report.stats.wall_seconds};
  };

  std::vector<SweepRow> rows;
  for (Method method : config.methods) {
    for (int ng : lengths) {
      const Reference ref = reference(raw.steps() / ng * ng);
      for (int nk : counts) {
        AggregationConfig a;
        a.n_clusters = nk;
        a.steps_per_period = ng;
        a.method = method;
        a.extremes = config.extremes;
        a.extreme_method = config.extreme_method;
        a.kmeans = config.kmeans;
        a.kmedoids_time_limit_seconds = config.kmedoids_time_limit_seconds;
        const auto set = run_aggregation(raw, a).set;
        const auto report = solve_model(system, build_typical_model(system, set), config.solver);
        SweepRow row{method, nk, ng, report.status, std::numeric_limits<double>::quiet_NaN(),
                     ref.objective, std::numeric_limits<double>::quiet_NaN(), report.stats.wall_seconds,
                     ref.seconds};
        if (report.status == solve::SolveStatus::optimal || report.status == solve::SolveStatus::time_limit_incumbent) {
          row.objective = report.objective;
          row.relative_error = (row.objective - ref.objective) / ref.objective;
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "method,N_k,N_g,objective,full_objective,relative_error,wall_time_seconds,full_wall_time_seconds,status\n";
  for (const auto& r : rows)
    out << to_string(r.method) << ',' << r.n_clusters << ',' << r.steps_per_period << ',' << number(r.objective)
        << ',' << number(r.full_objective) << ',' << number(r.relative_error) << ','
        << number(r.wall_time_seconds) << ',' << number(r.full_wall_time_seconds) << ','
        << solve::to_string(r.status) << '\n';
}

}  // namespace tsagg::esm

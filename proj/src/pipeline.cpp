#include "pipeline.hpp"

namespace tsagg {

AggregationOutcome run_aggregation(const RawSeriesSet& raw, const AggregationConfig& config) {
  AggregationOutcome out;
  out.matrix = reshape_to_periods(normalize(raw), config.steps_per_period, config.tail);
  AggregateOptions opt;
  opt.kmeans = config.kmeans;
  opt.kmedoids_time_limit_seconds = config.kmedoids_time_limit_seconds;
  out.clusters = aggregate(out.matrix, config.method, config.n_clusters, opt);
  out.integrated = out.clusters;
  if (!config.extremes.empty() && config.extreme_method != IntegrationMethod::none) {
    out.extremes = detect_extremes(out.matrix, config.extremes);
    out.integrated = integrate_extremes(out.clusters, out.matrix, out.extremes, config.extreme_method);
  }
  const RowMatrix scaled = rescale_to_mean(out.integrated, out.matrix, &out.rescale);
  std::vector<std::string> units;
  for (const auto& a : raw.attributes) units.push_back(a.unit);
  Provenance p{config.method, config.extreme_method, config.kmeans.seed, config.tail};
  out.set = backscale(scaled, out.integrated, out.matrix, p, units);
  return out;
}

}  // namespace tsagg

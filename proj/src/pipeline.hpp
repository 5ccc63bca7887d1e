#pragma once

#include <vector>

#include "typical.hpp"

namespace tsagg {

struct AggregationConfig {
  int n_clusters = 8;
  int steps_per_period = 24;
  Method method = Method::hierarchical;
  std::vector<ExtremeSpec> extremes;
  IntegrationMethod extreme_method = IntegrationMethod::none;
  KMeansOptions kmeans;
  double kmedoids_time_limit_seconds = 600.0;
  TailPolicy tail = TailPolicy::truncate;
};

struct AggregationOutcome {
  CandidateMatrix matrix;
  ClusterResult clusters;    // straight from the clustering method
  ClusterResult integrated;  // after extreme-period integration
  std::vector<int> extremes;
  RescaleReport rescale;
  TypicalPeriodSet set;
};

// normalize -> reshape -> cluster -> integrate extremes -> rescale -> backscale.
AggregationOutcome run_aggregation(const RawSeriesSet& raw, const AggregationConfig& config);

}  // namespace tsagg

#pragma once

#include <string>
#include <vector>

#include "clustering.hpp"

namespace tsagg {

enum class ExtremeCriterion { max_step_value, min_step_value, max_period_sum, min_period_sum };

struct ExtremeSpec {
  std::string attribute;
  ExtremeCriterion criterion = ExtremeCriterion::max_step_value;
};

enum class IntegrationMethod { none, append, new_cluster_center, replace_representative };

const char* to_string(ExtremeCriterion c);
const char* to_string(IntegrationMethod m);
// "attribute:criterion" with criterion one of max_step_value, min_step_value,
// max_period_sum, min_period_sum (or the short forms max, min, max_sum, min_sum).
ExtremeSpec parse_extreme_spec(const std::string& text);
IntegrationMethod parse_integration_method(const std::string& text);

// Candidate indices in spec order with duplicates removed; lowest period
// index on ties.
std::vector<int> detect_extremes(const CandidateMatrix& matrix, const std::vector<ExtremeSpec>& specs);

// An extreme whose row already equals a representative row is skipped.
// Clusters that lose all members are dropped and counted in
// dropped_clusters.
ClusterResult integrate_extremes(const ClusterResult& result, const CandidateMatrix& matrix,
                                 const std::vector<int>& extremes, IntegrationMethod method);

// Extremes from `extremes` that integrate_extremes would act on with `method`.
std::vector<int> effective_extremes(const ClusterResult& result, const CandidateMatrix& matrix,
                                    const std::vector<int>& extremes, IntegrationMethod method);

}  // namespace tsagg

#pragma once

#include <string>
#include <vector>

#include "typical.hpp"

namespace tsagg {

// 100 * sqrt(mean squared difference), one value per attribute.
std::vector<double> rmse_profile(const std::vector<std::vector<double>>& original,
                                 const std::vector<std::vector<double>>& reconstruction);

// As rmse_profile after sorting both series in descending order.
std::vector<double> rmse_duration(const std::vector<std::vector<double>>& original,
                                  const std::vector<std::vector<double>>& reconstruction);

// Chronological reconstruction of the candidate matrix from a cluster
// result, normalized scale.
std::vector<std::vector<double>> reconstruct_normalized(const ClusterResult& result,
                                                        const CandidateMatrix& matrix,
                                                        const RowMatrix& representatives);

struct IndicatorRow {
  std::string attribute;
  double rmse_profile;
  double rmse_duration;
};

// Scores a typical period set against the candidate matrix it came from.
std::vector<IndicatorRow> score(const CandidateMatrix& matrix, const TypicalPeriodSet& set);

}  // namespace tsagg

#include "indicators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "error.hpp"

namespace tsagg {

namespace {

void check_shapes(const std::vector<std::vector<double>>& x, const std::vector<std::vector<double>>& y) {
  if (x.size() != y.size()) fail(ErrorCode::data, "attribute counts differ between original and reconstruction");
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (x[a].size() != y[a].size())
      fail(ErrorCode::data, "attribute " + std::to_string(a) + ": original has " + std::to_string(x[a].size()) +
                                " steps, reconstruction " + std::to_string(y[a].size()));
    if (x[a].empty()) fail(ErrorCode::data, "cannot score an empty series");
  }
}

double rmse(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) s += (x[t] - y[t]) * (x[t] - y[t]);
  return 100.0 * std::sqrt(s / static_cast<double>(x.size()));
}

}  // namespace

std::vector<double> rmse_profile(const std::vector<std::vector<double>>& original,
                                 const std::vector<std::vector<double>>& reconstruction) {
  check_shapes(original, reconstruction);
  std::vector<double> out;
  for (std::size_t a = 0; a < original.size(); ++a) out.push_back(rmse(original[a], reconstruction[a]));
  return out;
}

std::vector<double> rmse_duration(const std::vector<std::vector<double>>& original,
                                  const std::vector<std::vector<double>>& reconstruction) {
  check_shapes(original, reconstruction);
  std::vector<double> out;
  for (std::size_t a = 0; a < original.size(); ++a) {
    auto x = original[a], y = reconstruction[a];
    std::sort(x.begin(), x.end(), std::greater<>());
    std::sort(y.begin(), y.end(), std::greater<>());
    out.push_back(rmse(x, y));
  }
  return out;
}

std::vector<std::vector<double>> reconstruct_normalized(const ClusterResult& result,
                                                        const CandidateMatrix& matrix,
                                                        const RowMatrix& representatives) {
  const int n_g = matrix.steps_per_period;
  std::vector<std::vector<double>> out(matrix.num_attributes());
  for (int a = 0; a < matrix.num_attributes(); ++a) {
    out[a].reserve(static_cast<std::size_t>(matrix.periods()) * n_g);
    for (int k : result.assignment)
      for (int g = 0; g < n_g; ++g) out[a].push_back(representatives(k, a * n_g + g));
  }
  return out;
}

std::vector<IndicatorRow> score(const CandidateMatrix& matrix, const TypicalPeriodSet& set) {
  if (set.steps_per_period != matrix.steps_per_period || set.num_candidates() != matrix.periods())
    fail(ErrorCode::data, "typical period set does not match the original series layout");
  const auto original = flatten(matrix);
  // Align attributes by name and normalize with the original's ranges.
  const auto recon = reconstruct_full(set);
  std::vector<std::vector<double>> aligned;
  for (int m = 0; m < matrix.num_attributes(); ++m) {
    const int a = set.find(matrix.attribute_order[m]);
    if (a < 0) fail(ErrorCode::data, "typical period set lacks attribute '" + matrix.attribute_order[m] + "'");
    const auto& r = matrix.norm_info.ranges[m];
    std::vector<double> v = recon[a];
    for (double& x : v) x = r.degenerate ? 0.0 : (x - r.min) / (r.max - r.min);
    aligned.push_back(std::move(v));
  }
  const auto p = rmse_profile(original, aligned);
  const auto d = rmse_duration(original, aligned);
  std::vector<IndicatorRow> rows;
  for (std::size_t a = 0; a < p.size(); ++a) rows.push_back({matrix.attribute_order[a], p[a], d[a]});
  return rows;
}

}  // namespace tsagg

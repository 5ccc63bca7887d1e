#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "clustering.hpp"
#include "extremes.hpp"

namespace tsagg {

struct RescaleReport {
  std::vector<int> iterations;          // per attribute
  std::vector<double> residual;         // |weighted mean - target mean|, normalized scale
  std::vector<std::string> warnings;
};

// Per-attribute factor so the weighted representative mean matches the
// candidate mean, followed by clip-at-1 and re-scaling of the unclipped
// values until the mean error drops below 1e-9 (at most 100 passes).
RowMatrix rescale_to_mean(const ClusterResult& result, const CandidateMatrix& matrix,
                          RescaleReport* report = nullptr);

struct Provenance {
  Method method = Method::averaging;
  IntegrationMethod extreme_method = IntegrationMethod::none;
  unsigned long long seed = 0;
  TailPolicy tail = TailPolicy::truncate;
};

struct TypicalPeriodSet {
  int steps_per_period = 0;
  double step_length_hours = 1.0;
  std::vector<std::string> attribute_order;
  std::vector<std::string> units;
  NormalizationInfo norm_info;
  // values[k][a][g] in physical units.
  std::vector<std::vector<std::vector<double>>> values;
  std::vector<int> weights;
  std::vector<int> assignment;
  std::vector<bool> is_extreme;
  Provenance provenance;
  int dropped_tail_steps = 0;
  int padded_steps = 0;

  int num_periods() const { return static_cast<int>(weights.size()); }
  int num_candidates() const { return static_cast<int>(assignment.size()); }
  int find(const std::string& name) const;
  // Throws Error(data) when the pieces disagree.
  void validate() const;
};

// Maps normalized representatives back to physical units.
TypicalPeriodSet backscale(const RowMatrix& scaled, const ClusterResult& result,
                           const CandidateMatrix& matrix, const Provenance& provenance,
                           const std::vector<std::string>& units = {});

// Chronological series of N_i * N_g values per attribute, physical units.
std::vector<std::vector<double>> reconstruct_full(const TypicalPeriodSet& set);

// Same reconstruction mapped onto the normalized scale of the set.
std::vector<std::vector<double>> reconstruct_normalized(const TypicalPeriodSet& set);

// CSV (cluster,weight,step,attribute,value) plus `<path>.meta`.
void write_typical_set(const TypicalPeriodSet& set, const std::filesystem::path& csv_path);
TypicalPeriodSet read_typical_set(const std::filesystem::path& csv_path);

std::filesystem::path meta_path(const std::filesystem::path& csv_path);

}  // namespace tsagg

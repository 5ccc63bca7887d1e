#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace tsagg {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Attribute {
  std::string name;
  std::string unit;
  std::vector<double> values;
};

struct RawSeriesSet {
  std::vector<Attribute> attributes;
  double step_length_hours = 1.0;

  std::size_t steps() const { return attributes.empty() ? 0 : attributes.front().values.size(); }
  // Index of the attribute called `name`, or -1.
  int find(const std::string& name) const;
  // Throws Error(data) on empty sets, ragged lengths, duplicate names,
  // non-finite values or a non-positive step length.
  void validate() const;
};

struct AttributeRange {
  double min = 0.0;
  double max = 0.0;
  bool degenerate = false;

  double to_physical(double v) const { return degenerate ? min : v * (max - min) + min; }
};

struct NormalizationInfo {
  std::vector<AttributeRange> ranges;
};

struct NormalizedSeries {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;
  NormalizationInfo info;
  double step_length_hours = 1.0;
};

NormalizedSeries normalize(const RawSeriesSet& raw);

enum class TailPolicy { truncate, pad_repeat_last };

// Rows are candidate periods; columns are attribute blocks of N_g steps each.
struct CandidateMatrix {
  RowMatrix values;
  int steps_per_period = 0;
  std::vector<std::string> attribute_order;
  NormalizationInfo norm_info;
  int dropped_tail_steps = 0;
  int padded_steps = 0;
  double step_length_hours = 1.0;

  int periods() const { return static_cast<int>(values.rows()); }
  int num_attributes() const { return static_cast<int>(attribute_order.size()); }
  double at(int period, int attribute, int step) const {
    return values(period, attribute * steps_per_period + step);
  }
  int find(const std::string& name) const;
};

CandidateMatrix reshape_to_periods(const NormalizedSeries& series, int steps_per_period,
                                   TailPolicy tail = TailPolicy::truncate);

// Undoes the period layout: one normalized sequence of N_i * N_g values
// per attribute.
std::vector<std::vector<double>> flatten(const CandidateMatrix& matrix);

struct SpectrumLine {
  double frequency;  // 1/hour
  double amplitude;
};

struct AttributeSpectrum {
  std::string name;
  std::vector<SpectrumLine> lines;  // ascending frequency, zero bin excluded
};

// One-sided amplitude spectrum 2|X_k|/N (|X_k|/N at the Nyquist bin).
std::vector<AttributeSpectrum> spectrum(const RawSeriesSet& raw);

// Lines sorted by amplitude, largest first; equal amplitudes keep ascending
// frequency.
std::vector<SpectrumLine> by_amplitude(const AttributeSpectrum& s);

}  // namespace tsagg

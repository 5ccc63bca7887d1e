#include "timeseries.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <unordered_set>

#include "error.hpp"

namespace tsagg {

int RawSeriesSet::find(const std::string& name) const {
  for (std::size_t a = 0; a < attributes.size(); ++a)
    if (attributes[a].name == name) return static_cast<int>(a);
  return -1;
}

void RawSeriesSet::validate() const {
  if (attributes.empty()) fail(ErrorCode::data, "series set has no attributes");
  if (!(step_length_hours > 0.0) || !std::isfinite(step_length_hours))
    fail(ErrorCode::data, "step length must be a positive number of hours");
  std::unordered_set<std::string> names;
  const std::size_t n = attributes.front().values.size();
  for (const auto& a : attributes) {
    if (!names.insert(a.name).second) fail(ErrorCode::data, "duplicate attribute '" + a.name + "'");
    if (a.values.size() != n)
      fail(ErrorCode::data, "attribute '" + a.name + "' has " + std::to_string(a.values.size()) +
                                " values, expected " + std::to_string(n));
    for (std::size_t t = 0; t < a.values.size(); ++t)
      if (!std::isfinite(a.values[t]))
        fail(ErrorCode::data,
             "attribute '" + a.name + "' has a non-finite value at step " + std::to_string(t));
  }
  if (n == 0) fail(ErrorCode::data, "series set has no time steps");
}

NormalizedSeries normalize(const RawSeriesSet& raw) {
  raw.validate();
  NormalizedSeries out;
  out.step_length_hours = raw.step_length_hours;
  for (const auto& a : raw.attributes) {
    const auto [lo, hi] = std::minmax_element(a.values.begin(), a.values.end());
    AttributeRange r{*lo, *hi, *lo == *hi};
    std::vector<double> v(a.values.size(), 0.0);
    if (!r.degenerate) {
      const double span = r.max - r.min;
      for (std::size_t t = 0; t < v.size(); ++t)
        v[t] = std::clamp((a.values[t] - r.min) / span, 0.0, 1.0);
    }
    out.names.push_back(a.name);
    out.values.push_back(std::move(v));
    out.info.ranges.push_back(r);
  }
  return out;
}

int CandidateMatrix::find(const std::string& name) const {
  for (std::size_t a = 0; a < attribute_order.size(); ++a)
    if (attribute_order[a] == name) return static_cast<int>(a);
  return -1;
}

CandidateMatrix reshape_to_periods(const NormalizedSeries& series, int steps_per_period,
                                   TailPolicy tail) {
  if (series.values.empty()) fail(ErrorCode::data, "series set has no attributes");
  if (steps_per_period < 1) fail(ErrorCode::usage, "steps per period must be at least 1");
  const int n_t = static_cast<int>(series.values.front().size());
  if (steps_per_period > n_t)
    fail(ErrorCode::usage, "steps per period (" + std::to_string(steps_per_period) +
                               ") exceed the series length (" + std::to_string(n_t) + ")");
  const int n_g = steps_per_period;
  const int n_a = static_cast<int>(series.values.size());
  const int remainder = n_t % n_g;
  int n_i = n_t / n_g;
  CandidateMatrix m;
  m.steps_per_period = n_g;
  m.attribute_order = series.names;
  m.norm_info = series.info;
  m.step_length_hours = series.step_length_hours;
  if (remainder != 0) {
    if (tail == TailPolicy::truncate) {
      m.dropped_tail_steps = remainder;
    } else {
      ++n_i;
      m.padded_steps = n_g - remainder;
    }
  }
  m.values.resize(n_i, n_a * n_g);
  for (int a = 0; a < n_a; ++a) {
    const auto& v = series.values[a];
    for (int i = 0; i < n_i; ++i)
      for (int g = 0; g < n_g; ++g) {
        const int t = std::min(i * n_g + g, n_t - 1);
        m.values(i, a * n_g + g) = v[t];
      }
  }
  return m;
}

std::vector<std::vector<double>> flatten(const CandidateMatrix& matrix) {
  const int n_g = matrix.steps_per_period;
  std::vector<std::vector<double>> out(matrix.num_attributes());
  for (int a = 0; a < matrix.num_attributes(); ++a) {
    out[a].reserve(static_cast<std::size_t>(matrix.periods()) * n_g);
    for (int i = 0; i < matrix.periods(); ++i)
      for (int g = 0; g < n_g; ++g) out[a].push_back(matrix.at(i, a, g));
  }
  return out;
}

std::vector<AttributeSpectrum> spectrum(const RawSeriesSet& raw) {
  raw.validate();
  const int n = static_cast<int>(raw.steps());
  if (n < 2) fail(ErrorCode::data, "spectrum needs at least two time steps");
  const int bins = n / 2 + 1;
  std::unique_ptr<double, decltype(&fftw_free)> in(fftw_alloc_real(n), &fftw_free);
  std::unique_ptr<fftw_complex, decltype(&fftw_free)> out(fftw_alloc_complex(bins), &fftw_free);
  fftw_plan plan = fftw_plan_dft_r2c_1d(n, in.get(), out.get(), FFTW_ESTIMATE);
  if (!plan) fail(ErrorCode::internal, "could not create an FFT plan");

  std::vector<AttributeSpectrum> result;
  for (const auto& a : raw.attributes) {
    std::copy(a.values.begin(), a.values.end(), in.get());
    fftw_execute(plan);
    AttributeSpectrum s{a.name, {}};
    for (int k = 1; k < bins; ++k) {
      const double mag = std::hypot(out.get()[k][0], out.get()[k][1]);
      const bool nyquist = (n % 2 == 0) && k == n / 2;
      s.lines.push_back({k / (n * raw.step_length_hours), (nyquist ? 1.0 : 2.0) * mag / n});
    }
    result.push_back(std::move(s));
  }
  fftw_destroy_plan(plan);
  return result;
}

std::vector<SpectrumLine> by_amplitude(const AttributeSpectrum& s) {
  std::vector<SpectrumLine> lines = s.lines;
  std::stable_sort(lines.begin(), lines.end(),
                   [](const SpectrumLine& a, const SpectrumLine& b) { return a.amplitude > b.amplitude; });
  return lines;
}

}  // namespace tsagg

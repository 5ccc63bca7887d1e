#pragma once

// Brute-force references for the clustering and spectrum code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "timeseries.hpp"

namespace oracle {

// Candidate matrix whose rows are used verbatim (one attribute, N_g = row
// length); values need not lie in [0,1].
inline tsagg::CandidateMatrix matrix_of(const std::vector<std::vector<double>>& rows) {
  tsagg::CandidateMatrix m;
  const int cols = static_cast<int>(rows.front().size());
  m.values.resize(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int c = 0; c < cols; ++c) m.values(static_cast<Eigen::Index>(i), c) = rows[i][c];
  m.steps_per_period = cols;
  m.attribute_order = {"x"};
  m.norm_info.ranges = {{0.0, 1.0, false}};
  return m;
}

inline double sq(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

struct MedoidOptimum {
  double objective = std::numeric_limits<double>::infinity();
  // All optimal partitions as "same cluster" relations.
  std::vector<std::vector<int>> assignments;
};

// Every medoid subset of size k; candidates go to their nearest medoid.
// Records each distinct optimal partition, including alternative
// assignments of equidistant candidates.
inline MedoidOptimum brute_force_medoids(const std::vector<std::vector<double>>& rows, int k,
                                         double tol = 1e-12) {
  const int n = static_cast<int>(rows.size());
  MedoidOptimum best;
  std::vector<int> pick;
  std::function<void(int)> rec = [&](int from) {
    if (static_cast<int>(pick.size()) == k) {
      double total = 0.0;
      std::vector<int> assign(n);
      for (int i = 0; i < n; ++i) {
        double bd = std::numeric_limits<double>::infinity();
        for (int m : pick) {
          const double d = sq(rows[i], rows[m]);
          if (d < bd) {
            bd = d;
            assign[i] = m;
          }
        }
        total += bd;
      }
      if (total < best.objective - tol) {
        best.objective = total;
        best.assignments.clear();
      }
      if (std::abs(total - best.objective) <= tol) best.assignments.push_back(assign);
      return;
    }
    for (int c = from; c < n; ++c) {
      pick.push_back(c);
      rec(c + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return best;
}

// True when both assignments induce the same partition.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
  return true;
}

// Minimum SSE over every partition into exactly k non-empty clusters with
// centroid representatives.
inline double brute_force_kmeans(const std::vector<std::vector<double>>& rows, int k) {
  const int n = static_cast<int>(rows.size());
  std::vector<int> label(n, 0);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(int, int)> rec = [&](int i, int used) {
    if (i == n) {
      if (used != k) return;
      double total = 0.0;
      for (int c = 0; c < k; ++c) {
        std::vector<double> mean(rows[0].size(), 0.0);
        int cnt = 0;
        for (int j = 0; j < n; ++j)
          if (label[j] == c) {
            for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += rows[j][d];
            ++cnt;
          }
        for (auto& v : mean) v /= cnt;
        for (int j = 0; j < n; ++j)
          if (label[j] == c) total += sq(rows[j], mean);
      }
      best = std::min(best, total);
      return;
    }
    for (int c = 0; c <= std::min(used, k - 1); ++c) {
      label[i] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  rec(0, 0);
  return best;
}

// Naive O(N^2) DFT amplitude 2|X_k|/N (|X_k|/N at Nyquist), k >= 1.
inline std::vector<double> dft_amplitudes(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> out;
  for (int k = 1; k <= n / 2; ++k) {
    std::complex<double> s = 0.0;
    for (int t = 0; t < n; ++t)
      s += x[t] * std::polar(1.0, -2.0 * std::numbers::pi * k * t / n);
    const bool nyquist = n % 2 == 0 && k == n / 2;
    out.push_back((nyquist ? 1.0 : 2.0) * std::abs(s) / n);
  }
  return out;
}

}  // namespace oracle

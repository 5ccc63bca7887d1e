#include "extremes.hpp"

#include <algorithm>

#include "error.hpp"

namespace tsagg {

namespace {

struct Working {
  std::vector<int> assignment;
  std::vector<std::vector<double>> reps;
  std::vector<int> source;
  std::vector<bool> extreme;
};

double dist(const CandidateMatrix& m, int i, const std::vector<double>& rep) {
  double s = 0.0;
  for (Eigen::Index c = 0; c < m.values.cols(); ++c) {
    const double d = m.values(i, c) - rep[c];
    s += d * d;
  }
  return s;
}

bool row_equals(const CandidateMatrix& m, int i, const std::vector<double>& rep) {
  for (Eigen::Index c = 0; c < m.values.cols(); ++c)
    if (m.values(i, c) != rep[c]) return false;
  return true;
}

std::vector<double> row_of(const CandidateMatrix& m, int i) {
  return std::vector<double>(m.values.row(i).data(), m.values.row(i).data() + m.values.cols());
}

ClusterResult integrate(const ClusterResult& in, const CandidateMatrix& matrix,
                        const std::vector<int>& extremes, IntegrationMethod method,
                        std::vector<int>* applied) {
  const int n = matrix.periods();
  if (static_cast<int>(in.assignment.size()) != n)
    fail(ErrorCode::usage, "cluster result does not belong to this candidate matrix");
  for (int e : extremes)
    if (e < 0 || e >= n) fail(ErrorCode::usage, "extreme index " + std::to_string(e) + " out of range");
  if (method == IntegrationMethod::none) return in;

  Working w;
  w.assignment = in.assignment;
  for (int k = 0; k < in.num_clusters(); ++k) {
    w.reps.push_back(std::vector<double>(in.representatives.row(k).data(),
                                         in.representatives.row(k).data() + in.representatives.cols()));
    w.source.push_back(in.source_candidate[k]);
    w.extreme.push_back(in.is_extreme[k]);
  }

  std::vector<int> unique;
  for (int e : extremes)
    if (std::find(unique.begin(), unique.end(), e) == unique.end()) unique.push_back(e);

  for (int e : unique) {
    const bool coincides = std::any_of(w.reps.begin(), w.reps.end(),
                                       [&](const std::vector<double>& r) { return row_equals(matrix, e, r); });
    if (coincides) continue;
    if (applied) applied->push_back(e);
    const int home = w.assignment[e];
    switch (method) {
      case IntegrationMethod::append: {
        w.reps.push_back(row_of(matrix, e));
        w.source.push_back(e);
        w.extreme.push_back(true);
        w.assignment[e] = static_cast<int>(w.reps.size()) - 1;
        break;
      }
      case IntegrationMethod::new_cluster_center: {
        const int k = static_cast<int>(w.reps.size());
        w.reps.push_back(row_of(matrix, e));
        w.source.push_back(e);
        w.extreme.push_back(true);
        std::vector<int> moved;
        for (int i = 0; i < n; ++i)
          if (dist(matrix, i, w.reps[k]) < dist(matrix, i, w.reps[w.assignment[i]])) moved.push_back(i);
        for (int i : moved) w.assignment[i] = k;
        break;
      }
      case IntegrationMethod::replace_representative: {
        w.reps[home] = row_of(matrix, e);
        w.source[home] = e;
        w.extreme[home] = true;
        break;
      }
      case IntegrationMethod::none: break;
    }
  }

  // Drop clusters without members, keeping the order of the survivors.
  const int total = static_cast<int>(w.reps.size());
  std::vector<int> count(total, 0);
  for (int a : w.assignment) ++count[a];
  std::vector<int> remap(total, -1);
  ClusterResult out;
  out.method = in.method;
  out.representative_kind = in.representative_kind;
  out.optimality_gap = in.optimality_gap;
  out.time_limited = in.time_limited;
  out.dropped_clusters = in.dropped_clusters;
  int next = 0;
  for (int k = 0; k < total; ++k) {
    if (count[k] == 0) {
      ++out.dropped_clusters;
      continue;
    }
    remap[k] = next++;
  }
  out.representatives.resize(next, matrix.values.cols());
  out.clusters.assign(next, {});
  for (int k = 0; k < total; ++k) {
    if (remap[k] < 0) continue;
    const int r = remap[k];
    for (Eigen::Index c = 0; c < matrix.values.cols(); ++c) out.representatives(r, c) = w.reps[k][c];
    out.source_candidate.push_back(w.source[k]);
    out.is_extreme.push_back(w.extreme[k]);
  }
  out.assignment.resize(n);
  for (int i = 0; i < n; ++i) {
    out.assignment[i] = remap[w.assignment[i]];
    out.clusters[out.assignment[i]].push_back(i);
  }
  for (const auto& c : out.clusters) out.weights.push_back(static_cast<int>(c.size()));
  out.objective = cluster_objective(matrix, out.assignment, out.representatives);
  return out;
}

}  // namespace

const char* to_string(ExtremeCriterion c) {
  switch (c) {
    case ExtremeCriterion::max_step_value: return "max_step_value";
    case ExtremeCriterion::min_step_value: return "min_step_value";
    case ExtremeCriterion::max_period_sum: return "max_period_sum";
    case ExtremeCriterion::min_period_sum: return "min_period_sum";
  }
  return "?";
}

const char* to_string(IntegrationMethod m) {
  switch (m) {
    case IntegrationMethod::none: return "none";
    case IntegrationMethod::append: return "append";
    case IntegrationMethod::new_cluster_center: return "new-center";
    case IntegrationMethod::replace_representative: return "replace";
  }
  return "?";
}

ExtremeSpec parse_extreme_spec(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size())
    fail(ErrorCode::usage, "extreme spec '" + text + "' is not attribute:criterion");
  ExtremeSpec s;
  s.attribute = text.substr(0, colon);
  const std::string c = text.substr(colon + 1);
  if (c == "max_step_value" || c == "max") s.criterion = ExtremeCriterion::max_step_value;
  else if (c == "min_step_value" || c == "min") s.criterion = ExtremeCriterion::min_step_value;
  else if (c == "max_period_sum" || c == "max_sum") s.criterion = ExtremeCriterion::max_period_sum;
  else if (c == "min_period_sum" || c == "min_sum") s.criterion = ExtremeCriterion::min_period_sum;
  else fail(ErrorCode::usage, "unknown extreme criterion '" + c + "'");
  return s;
}

IntegrationMethod parse_integration_method(const std::string& text) {
  if (text == "none") return IntegrationMethod::none;
  if (text == "append") return IntegrationMethod::append;
  if (text == "new-center" || text == "new_cluster_center") return IntegrationMethod::new_cluster_center;
  if (text == "replace" || text == "replace_representative") return IntegrationMethod::replace_representative;
  fail(ErrorCode::usage, "unknown extreme integration method '" + text + "'");
}

std::vector<int> detect_extremes(const CandidateMatrix& matrix, const std::vector<ExtremeSpec>& specs) {
  if (specs.empty()) fail(ErrorCode::usage, "no extreme specs given");
  const int n_g = matrix.steps_per_period;
  std::vector<int> out;
  for (const auto& s : specs) {
    const int a = matrix.find(s.attribute);
    if (a < 0) fail(ErrorCode::usage, "unknown attribute '" + s.attribute + "' in extreme spec");
    const bool want_max = s.criterion == ExtremeCriterion::max_step_value ||
                          s.criterion == ExtremeCriterion::max_period_sum;
    const bool by_sum = s.criterion == ExtremeCriterion::max_period_sum ||
                        s.criterion == ExtremeCriterion::min_period_sum;
    int best = -1;
    double best_v = 0.0;
    for (int i = 0; i < matrix.periods(); ++i) {
      double v;
      if (by_sum) {
        v = 0.0;
        for (int g = 0; g < n_g; ++g) v += matrix.at(i, a, g);
      } else {
        v = matrix.at(i, a, 0);
        for (int g = 1; g < n_g; ++g) v = want_max ? std::max(v, matrix.at(i, a, g)) : std::min(v, matrix.at(i, a, g));
      }
      if (best < 0 || (want_max ? v > best_v : v < best_v)) {
        best = i;
        best_v = v;
      }
    }
    if (std::find(out.begin(), out.end(), best) == out.end()) out.push_back(best);
  }
  return out;
}

ClusterResult integrate_extremes(const ClusterResult& result, const CandidateMatrix& matrix,
                                 const std::vector<int>& extremes, IntegrationMethod method) {
  return integrate(result, matrix, extremes, method, nullptr);
}

std::vector<int> effective_extremes(const ClusterResult& result, const CandidateMatrix& matrix,
                                    const std::vector<int>& extremes, IntegrationMethod method) {
  std::vector<int> applied;
  integrate(result, matrix, extremes, method, &applied);
  return applied;
}

}  // namespace tsagg

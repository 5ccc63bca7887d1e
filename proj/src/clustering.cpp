#include "clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "error.hpp"
#include "solve/milp.hpp"

namespace tsagg {

namespace {

void check_count(const CandidateMatrix& matrix, int n_clusters) {
  if (matrix.periods() < 1) fail(ErrorCode::data, "no candidate periods");
  if (n_clusters < 1 || n_clusters > matrix.periods())
    fail(ErrorCode::usage, "number of clusters (" + std::to_string(n_clusters) +
                               ") must lie in [1, " + std::to_string(matrix.periods()) + "]");
}

double row_distance(const RowMatrix& a, int i, const RowMatrix& b, int k) {
  return (a.row(i) - b.row(k)).squaredNorm();
}

// Uniform double in [0,1) from the top 53 bits, independent of the
// standard library's distribution implementations.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Relabels so that cluster ids follow the lowest member index.
std::vector<int> canonical(const std::vector<int>& assignment) {
  std::vector<int> map(assignment.size(), -1), out(assignment.size());
  int next = 0;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    int& m = map[assignment[i]];
    if (m < 0) m = next++;
    out[i] = m;
  }
  return out;
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::averaging: return "averaging";
    case Method::kmeans: return "kmeans";
    case Method::kmedoids_exact: return "kmedoids";
    case Method::hierarchical: return "hierarchical";
  }
  return "?";
}

const char* to_string(RepresentativeKind k) {
  switch (k) {
    case RepresentativeKind::centroid: return "centroid";
    case RepresentativeKind::medoid: return "medoid";
    case RepresentativeKind::chronological_mean: return "chronological_mean";
  }
  return "?";
}

Method parse_method(const std::string& s) {
  if (s == "averaging") return Method::averaging;
  if (s == "kmeans" || s == "k-means") return Method::kmeans;
  if (s == "kmedoids" || s == "k-medoids" || s == "kmedoids_exact") return Method::kmedoids_exact;
  if (s == "hierarchical") return Method::hierarchical;
  fail(ErrorCode::usage, "unknown aggregation method '" + s + "'");
}

Eigen::MatrixXd pairwise_distances(const CandidateMatrix& matrix) {
  const int n = matrix.periods();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i) = row_distance(matrix.values, i, matrix.values, j);
  return d;
}

double squared_distance(const CandidateMatrix& matrix, int i, const RowMatrix& reps, int k) {
  return row_distance(matrix.values, i, reps, k);
}

double cluster_objective(const CandidateMatrix& matrix, const std::vector<int>& assignment,
                         const RowMatrix& representatives) {
  if (assignment.size() != static_cast<std::size_t>(matrix.periods()))
    fail(ErrorCode::usage, "assignment length does not match the candidate count");
  double total = 0.0;
  for (int i = 0; i < matrix.periods(); ++i) {
    const int k = assignment[i];
    if (k < 0 || k >= representatives.rows())
      fail(ErrorCode::usage, "assignment index " + std::to_string(k) + " out of range");
    total += row_distance(matrix.values, i, representatives, k);
  }
  return total;
}

int medoid_of(const CandidateMatrix& matrix, const std::vector<int>& members) {
  if (members.empty()) fail(ErrorCode::usage, "medoid of an empty set");
  std::vector<int> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  int best = sorted.front();
  double best_sum = std::numeric_limits<double>::infinity();
  for (int i : sorted) {
    double sum = 0.0;
    for (int j : sorted)
      if (j != i) sum += row_distance(matrix.values, i, matrix.values, j);
    if (sum < best_sum) {
      best_sum = sum;
      best = i;
    }
  }
  return best;
}

ClusterResult from_assignment(const CandidateMatrix& matrix, Method method,
                              RepresentativeKind kind, const std::vector<int>& assignment) {
  ClusterResult r;
  r.method = method;
  r.representative_kind = kind;
  r.assignment = canonical(assignment);
  const int n_k = r.assignment.empty() ? 0 : *std::max_element(r.assignment.begin(), r.assignment.end()) + 1;
  r.clusters.assign(n_k, {});
  for (int i = 0; i < matrix.periods(); ++i) r.clusters[r.assignment[i]].push_back(i);
  r.representatives.resize(n_k, matrix.values.cols());
  r.source_candidate.assign(n_k, -1);
  r.is_extreme.assign(n_k, false);
  for (int k = 0; k < n_k; ++k) {
    r.weights.push_back(static_cast<int>(r.clusters[k].size()));
    if (kind == RepresentativeKind::medoid) {
      const int m = medoid_of(matrix, r.clusters[k]);
      r.representatives.row(k) = matrix.values.row(m);
      r.source_candidate[k] = m;
    } else {
      r.representatives.row(k).setZero();
      for (int i : r.clusters[k]) r.representatives.row(k) += matrix.values.row(i);
      r.representatives.row(k) /= static_cast<double>(r.clusters[k].size());
    }
  }
  r.objective = cluster_objective(matrix, r.assignment, r.representatives);
  return r;
}

ClusterResult aggregate_averaging(const CandidateMatrix& matrix, int n_clusters) {
  check_count(matrix, n_clusters);
  const int size = matrix.periods() / n_clusters;
  std::vector<int> assignment(matrix.periods());
  for (int i = 0; i < matrix.periods(); ++i) assignment[i] = std::min(i / size, n_clusters - 1);
  return from_assignment(matrix, Method::averaging, RepresentativeKind::chronological_mean, assignment);
}

RowMatrix seed_centers(const CandidateMatrix& matrix, int n_clusters, unsigned long long seed) {
  const int n = matrix.periods();
  std::mt19937_64 rng(seed);
  RowMatrix centers(n_clusters, matrix.values.cols());
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  int pick = std::min(static_cast<int>(unit(rng) * n), n - 1);
  for (int c = 0; c < n_clusters; ++c) {
    centers.row(c) = matrix.values.row(pick);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], row_distance(matrix.values, i, centers, c));
      total += nearest[i];
    }
    if (c + 1 == n_clusters) break;
    if (total <= 0.0) {
      // Every candidate coincides with a centre already; empty clusters get
      // repaired in Lloyd.
      pick = std::min(static_cast<int>(unit(rng) * n), n - 1);
      continue;
    }
    const double target = unit(rng) * total;
    double acc = 0.0;
    pick = -1;
    for (int i = 0; i < n; ++i) {
      if (nearest[i] <= 0.0) continue;
      acc += nearest[i];
      pick = i;
      if (acc > target) break;
    }
  }
  return centers;
}

std::vector<int> lloyd(const CandidateMatrix& matrix, RowMatrix centers, int max_iter, double tol,
                       std::vector<double>* trace) {
  const int n = matrix.periods();
  const int k = static_cast<int>(centers.rows());
  std::vector<int> assignment(n, -1);
  std::vector<double> dist(n);
  double previous = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = row_distance(matrix.values, i, centers, 0);
      for (int c = 1; c < k; ++c) {
        const double d = row_distance(matrix.values, i, centers, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assignment[i] != best) changed = true;
      assignment[i] = best;
      dist[i] = best_d;
    }
    // Repair empty clusters with the candidate farthest from its centre.
    std::vector<int> count(k, 0);
    for (int a : assignment) ++count[a];
    for (int c = 0; c < k; ++c) {
      if (count[c] > 0) continue;
      int far = -1;
      for (int i = 0; i < n; ++i)
        if (count[assignment[i]] > 1 && (far < 0 || dist[i] > dist[far])) far = i;
      if (far < 0) break;
      --count[assignment[far]];
      assignment[far] = c;
      count[c] = 1;
      dist[far] = 0.0;
      centers.row(c) = matrix.values.row(far);
      changed = true;
    }
    centers.setZero();
    for (int i = 0; i < n; ++i) centers.row(assignment[i]) += matrix.values.row(i);
    for (int c = 0; c < k; ++c)
      if (count[c] > 0) centers.row(c) /= static_cast<double>(count[c]);
    const double obj = cluster_objective(matrix, assignment, centers);
    if (trace) trace->push_back(obj);
    if (!changed || previous - obj < tol) break;
    previous = obj;
  }
  return assignment;
}

ClusterResult aggregate_kmeans(const CandidateMatrix& matrix, int n_clusters,
                               const KMeansOptions& options) {
  check_count(matrix, n_clusters);
  if (options.restarts < 1 || options.max_iter < 1 || !(options.tol > 0.0))
    fail(ErrorCode::usage, "k-means needs positive restarts, iteration limit and tolerance");
  ClusterResult best;
  bool have = false;
  // Restart r seeds its own generator so restarts are independent.
  std::mt19937_64 seeder(options.seed);
  for (int r = 0; r < options.restarts; ++r) {
    const unsigned long long s = seeder();
    RowMatrix centers = seed_centers(matrix, n_clusters, s);
    const auto assignment = lloyd(matrix, std::move(centers), options.max_iter, options.tol);
    ClusterResult res = from_assignment(matrix, Method::kmeans, RepresentativeKind::centroid, assignment);
    if (!have || res.objective < best.objective) {
      best = std::move(res);
      have = true;
    }
  }
  return best;
}

ClusterResult aggregate_kmedoids_exact(const CandidateMatrix& matrix, int n_clusters,
                                       double time_limit_seconds) {
  check_count(matrix, n_clusters);
  if (!(time_limit_seconds > 0.0)) fail(ErrorCode::usage, "time limit must be positive");
  const int n = matrix.periods();
  const Eigen::MatrixXd d = pairwise_distances(matrix);
  solve::MilpProblem p;
  // z[m*n + c]: candidate c is represented by medoid m; z[m*n + m] doubles
  // as the medoid indicator.
  std::vector<int> z(static_cast<std::size_t>(n) * n);
  for (int m = 0; m < n; ++m)
    for (int c = 0; c < n; ++c)
      z[m * n + c] = p.add_binary("z_" + std::to_string(m) + "_" + std::to_string(c), d(m, c));
  for (int c = 0; c < n; ++c) {
    std::vector<solve::Term> row;
    for (int m = 0; m < n; ++m) row.push_back({z[m * n + c], 1.0});
    p.add_constraint("assign_" + std::to_string(c), std::move(row), solve::Sense::equal, 1.0);
  }
  for (int m = 0; m < n; ++m)
    for (int c = 0; c < n; ++c)
      if (c != m)
        p.add_constraint("link_" + std::to_string(m) + "_" + std::to_string(c),
                         {{z[m * n + c], 1.0}, {z[m * n + m], -1.0}}, solve::Sense::less_equal, 0.0);
  std::vector<solve::Term> count;
  for (int m = 0; m < n; ++m) count.push_back({z[m * n + m], 1.0});
  p.add_constraint("count", std::move(count), solve::Sense::equal, n_clusters);

  solve::SolverOptions opt;
  opt.time_limit_seconds = time_limit_seconds;
  opt.gap_tolerance = 1e-9;
  const auto sol = solve::solve_milp(p, opt);
  if (!sol.has_solution()) {
    if (sol.status == solve::SolveStatus::time_limit_no_incumbent)
      fail(ErrorCode::no_incumbent, "k-medoids found no incumbent within the time limit");
    fail(ErrorCode::internal, std::string("k-medoids problem reported ") + solve::to_string(sol.status));
  }
  std::vector<int> medoid_of_candidate(n, -1);
  for (int c = 0; c < n; ++c)
    for (int m = 0; m < n; ++m)
      if (sol.values[z[m * n + c]] > 0.5) medoid_of_candidate[c] = m;

  // Re-deriving each medoid applies the lowest-index rule among equal-cost
  // members without changing the objective.
  ClusterResult r =
      from_assignment(matrix, Method::kmedoids_exact, RepresentativeKind::medoid, medoid_of_candidate);
  r.time_limited = sol.status == solve::SolveStatus::time_limit_incumbent;
  r.optimality_gap = sol.gap;
  return r;
}

ClusterResult aggregate_hierarchical(const CandidateMatrix& matrix, int n_clusters) {
  check_count(matrix, n_clusters);
  const int n = matrix.periods();
  // Cluster c is identified by its lowest member; merges keep the lower id.
  std::vector<std::vector<int>> members(n);
  RowMatrix centroid = matrix.values;
  std::vector<bool> alive(n, true);
  for (int i = 0; i < n; ++i) members[i] = {i};
  Eigen::MatrixXd dist = pairwise_distances(matrix);
  for (int remaining = n; remaining > n_clusters; --remaining) {
    int a = -1, b = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (int j = i + 1; j < n; ++j) {
        if (!alive[j]) continue;
        if (dist(i, j) < best) {
          best = dist(i, j);
          a = i;
          b = j;
        }
      }
    }
    const double wa = static_cast<double>(members[a].size()), wb = static_cast<double>(members[b].size());
    centroid.row(a) = (wa * centroid.row(a) + wb * centroid.row(b)) / (wa + wb);
    members[a].insert(members[a].end(), members[b].begin(), members[b].end());
    members[b].clear();
    alive[b] = false;
    for (int j = 0; j < n; ++j) {
      if (!alive[j] || j == a) continue;
      dist(a, j) = dist(j, a) = row_distance(centroid, a, centroid, j);
    }
  }
  std::vector<int> assignment(n);
  for (int c = 0; c < n; ++c)
    for (int i : members[c]) assignment[i] = c;
  return from_assignment(matrix, Method::hierarchical, RepresentativeKind::medoid, assignment);
}

ClusterResult aggregate(const CandidateMatrix& matrix, Method method, int n_clusters,
                        const AggregateOptions& options) {
  switch (method) {
    case Method::averaging: return aggregate_averaging(matrix, n_clusters);
    case Method::kmeans: return aggregate_kmeans(matrix, n_clusters, options.kmeans);
    case Method::kmedoids_exact:
      return aggregate_kmedoids_exact(matrix, n_clusters, options.kmedoids_time_limit_seconds);
    case Method::hierarchical: return aggregate_hierarchical(matrix, n_clusters);
  }
  fail(ErrorCode::internal, "unhandled method");
}

std::vector<std::string> check_invariants(const ClusterResult& r, const CandidateMatrix& matrix) {
  std::vector<std::string> issues;
  const int n = matrix.periods();
  const int k = r.num_clusters();
  if (static_cast<int>(r.assignment.size()) != n) issues.push_back("assignment length differs from N_i");
  if (static_cast<int>(r.clusters.size()) != k || r.representatives.rows() != k ||
      static_cast<int>(r.source_candidate.size()) != k || static_cast<int>(r.is_extreme.size()) != k)
    issues.push_back("per-cluster arrays disagree in length");
  if (!issues.empty()) return issues;
  std::vector<int> seen(n, 0);
  long total = 0;
  for (int c = 0; c < k; ++c) {
    if (r.weights[c] < 1) issues.push_back("cluster " + std::to_string(c) + " has weight < 1");
    if (r.weights[c] != static_cast<int>(r.clusters[c].size()))
      issues.push_back("cluster " + std::to_string(c) + " weight differs from its size");
    total += r.weights[c];
    for (int i : r.clusters[c]) {
      if (i < 0 || i >= n) {
        issues.push_back("cluster member out of range");
        continue;
      }
      ++seen[i];
      if (r.assignment[i] != c) issues.push_back("candidate " + std::to_string(i) + " assignment mismatch");
    }
    const int src = r.source_candidate[c];
    if (src >= 0 && (src >= n || r.representatives.row(c) != matrix.values.row(src)))
      issues.push_back("representative " + std::to_string(c) + " is not its source candidate row");
    if (r.representative_kind == RepresentativeKind::medoid && src < 0)
      issues.push_back("medoid representative " + std::to_string(c) + " has no source row");
  }
  if (total != n) issues.push_back("weights sum to " + std::to_string(total) + ", expected " + std::to_string(n));
  for (int i = 0; i < n; ++i)
    if (seen[i] != 1) issues.push_back("candidate " + std::to_string(i) + " appears " + std::to_string(seen[i]) + " times");
  const double obj = cluster_objective(matrix, r.assignment, r.representatives);
  if (std::abs(obj - r.objective) > 1e-9 * std::max(1.0, obj)) issues.push_back("stored objective is stale");
  return issues;
}

}  // namespace tsagg

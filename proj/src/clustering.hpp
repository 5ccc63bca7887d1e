#pragma once

#include <string>
#include <vector>

#include "timeseries.hpp"

namespace tsagg {

enum class Method { averaging, kmeans, kmedoids_exact, hierarchical };
enum class RepresentativeKind { centroid, medoid, chronological_mean };

const char* to_string(Method m);
const char* to_string(RepresentativeKind k);
// Accepts the CLI spellings ("kmedoids" for the exact variant).
Method parse_method(const std::string& s);

// Cluster indices are 0-based and numbered by their lowest member.
struct ClusterResult {
  Method method = Method::averaging;
  RepresentativeKind representative_kind = RepresentativeKind::centroid;
  std::vector<int> assignment;
  std::vector<std::vector<int>> clusters;
  RowMatrix representatives;
  std::vector<int> weights;
  // Candidate whose row the representative copies, or -1 (centroids, means).
  std::vector<int> source_candidate;
  // Representative was put in place by extreme-period integration.
  std::vector<bool> is_extreme;
  double objective = 0.0;
  // Exact k-medoids only: relative gap when the time limit stopped the search.
  double optimality_gap = 0.0;
  bool time_limited = false;
  // Clusters dropped by extreme integration because they ran empty.
  int dropped_clusters = 0;

  int num_clusters() const { return static_cast<int>(weights.size()); }
};

// Squared Euclidean distances between candidate rows.
Eigen::MatrixXd pairwise_distances(const CandidateMatrix& matrix);

double squared_distance(const CandidateMatrix& matrix, int i, const RowMatrix& reps, int k);

// Eq. 4 objective: summed squared distance of every candidate to its
// assigned representative.
double cluster_objective(const CandidateMatrix& matrix, const std::vector<int>& assignment,
                         const RowMatrix& representatives);

// Member with the smallest summed squared distance to the other members;
// lowest index on ties.
int medoid_of(const CandidateMatrix& matrix, const std::vector<int>& members);

ClusterResult aggregate_averaging(const CandidateMatrix& matrix, int n_clusters);

struct KMeansOptions {
  unsigned long long seed = 0;
  int restarts = 10;
  int max_iter = 300;
  double tol = 1e-9;
};

ClusterResult aggregate_kmeans(const CandidateMatrix& matrix, int n_clusters,
                               const KMeansOptions& options = {});

// One Lloyd run from the given centres. When `trace` is set it receives the
// objective after every centre update.
std::vector<int> lloyd(const CandidateMatrix& matrix, RowMatrix centers, int max_iter, double tol,
                       std::vector<double>* trace = nullptr);

// Distance-proportional seeding driven by the given 64-bit generator state.
RowMatrix seed_centers(const CandidateMatrix& matrix, int n_clusters, unsigned long long seed);

ClusterResult aggregate_kmedoids_exact(const CandidateMatrix& matrix, int n_clusters,
                                       double time_limit_seconds = 600.0);

ClusterResult aggregate_hierarchical(const CandidateMatrix& matrix, int n_clusters);

struct AggregateOptions {
  KMeansOptions kmeans;
  double kmedoids_time_limit_seconds = 600.0;
};

ClusterResult aggregate(const CandidateMatrix& matrix, Method method, int n_clusters,
                        const AggregateOptions& options = {});

// Builds clusters, weights and centroid/medoid representatives from an
// assignment, relabelling clusters by their lowest member.
ClusterResult from_assignment(const CandidateMatrix& matrix, Method method,
                              RepresentativeKind kind, const std::vector<int>& assignment);

// Empty when the result is a consistent partition of `matrix`; otherwise a
// description of every broken invariant.
std::vector<std::string> check_invariants(const ClusterResult& result,
                                          const CandidateMatrix& matrix);

}  // namespace tsagg

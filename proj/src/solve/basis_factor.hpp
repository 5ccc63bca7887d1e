#pragma once

#include <vector>

namespace tsagg::solve {

// Sparse column given by parallel index/value arrays.
struct SparseView {
  const int* index = nullptr;
  const double* value = nullptr;
  int size = 0;
};

// Dense values plus the list of entries that may be nonzero. While
// `sparse` holds, every nonzero is listed exactly once; otherwise callers
// must scan all of `value`.
struct HVector {
  std::vector<double> value;
  std::vector<int> index;
  std::vector<char> listed;
  bool sparse = true;

  void resize(int m);
  int size() const { return static_cast<int>(value.size()); }
  // Adds v to entry i and lists it.
  void add(int i, double v) {
    if (!listed[i]) {
      listed[i] = 1;
      index.push_back(i);
    }
    value[i] += v;
  }
  void set(int i, double v) {
    if (!listed[i]) {
      listed[i] = 1;
      index.push_back(i);
    }
    value[i] = v;
  }
  void clear();
  // Rebuilds the list from a full scan.
  void reindex();
};

// LU factorisation of a simplex basis (Markowitz pivoting with a threshold
// test) followed by product-form eta updates.
//
// Rows of B are constraint rows; columns are basis positions. ftran solves
// B x = b with b indexed by row and x by position; btran solves B^T y = c
// with c indexed by position and y by row. Both work in place on a dense
// vector of length m.
class BasisFactor {
 public:
  struct Outcome {
    // Basis positions whose column could not be pivoted, and the rows left
    // without a pivot. Equal sizes; empty when B is nonsingular.
    std::vector<int> singular_positions;
    std::vector<int> unpivoted_rows;
  };

  // `columns[p]` is the basis column at position p.
  Outcome factorize(int m, const std::vector<SparseView>& columns);

  void ftran(HVector& rhs) const;
  void btran(HVector& rhs) const;

  // Replace the column at `position` given its ftran'd image `alpha`.
  void update(int position, const HVector& alpha);

  int num_updates() const { return static_cast<int>(eta_pivot_.size()); }
  long eta_nonzeros() const { return static_cast<long>(eta_index_.size()); }
  long lu_nonzeros() const {
    return static_cast<long>(l_index_.size() + u_index_.size()) + m_;
  }

 private:
  int m_ = 0;
  // Pivot k sits at (pivot_row_[k], pivot_pos_[k]).
  std::vector<int> pivot_row_;
  std::vector<int> pivot_pos_;
  std::vector<double> diag_;
  // L column k: row indices and multipliers.
  std::vector<int> l_start_, l_index_;
  std::vector<double> l_value_;
  // U column k: entries U(row of pivot i, pos of pivot k) for i < k,
  // stored by the row index of pivot i.
  std::vector<int> u_start_, u_index_;
  std::vector<double> u_value_;

  std::vector<int> eta_pivot_;
  std::vector<double> eta_diag_;
  std::vector<int> eta_start_{0};
  std::vector<int> eta_index_;
  std::vector<double> eta_value_;

  // Steps reachable from `start` along `next`, ordered by step; returns
  // false when the set grows past the hypersparse limit.
  template <class Next>
  bool reach(const std::vector<int>& start, bool ascending, Next next) const;

  std::vector<int> step_of_row_;
  std::vector<int> step_of_pos_;
  // Transposed factors for the scatter form of btran: for step k the
  // steps k2 whose U column holds row pivot_row_[k], and the steps whose L
  // column holds it.
  std::vector<int> ut_start_, ut_step_;
  std::vector<double> ut_value_;
  std::vector<int> lt_start_, lt_step_;
  std::vector<double> lt_value_;

  mutable HVector out_;
  mutable std::vector<int> start_;
  mutable std::vector<int> order_;
  mutable std::vector<int> stack_;
  mutable std::vector<int> visit_;
  mutable int visit_stamp_ = 0;
};

}  // namespace tsagg::solve

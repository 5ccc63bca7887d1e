#include "solve/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tsagg::solve {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kRefactorInterval = 80;
constexpr int kBlandTrigger = 150;
constexpr int kMaxTrouble = 20;
constexpr double kMaxCostShift = 1e-5;
constexpr double kMinWeight = 1e-6;

}  // namespace

SimplexEngine::SimplexEngine(LpData data, SimplexTolerances tol)
    : lp_(std::move(data)), tol_(tol) {
  const int n = lp_.n, m = lp_.m, total_cols = n + m;
  status_.assign(total_cols, VarStatus::at_lower);
  x_.assign(total_cols, 0.0);
  d_.assign(total_cols, 0.0);
  y_.assign(m, 0.0);
  head_.resize(m);
  pos_.assign(total_cols, -1);
  for (int i = 0; i < m; ++i) {
    head_[i] = n + i;
    status_[n + i] = VarStatus::basic;
    pos_[n + i] = i;
  }
  for (int j = 0; j < n; ++j) place_nonbasic(j);
  logical_index_.resize(m);
  std::iota(logical_index_.begin(), logical_index_.end(), 0);
  work_.resize(m);
  alpha_.resize(m);
  row_alpha_.assign(total_cols, 0.0);
  touched_mark_.assign(total_cols, 0);
  phase_cost_.assign(total_cols, 0.0);
  cost_ = lp_.cost;
  dse_.assign(m, 1.0);
  listed_infeasible_.assign(m, 0);
}

void SimplexEngine::place_nonbasic(int j) {
  const double lo = lp_.lower[j], up = lp_.upper[j];
  if (std::isfinite(lo) && std::isfinite(up)) {
    // keep the side closest to the current value
    if (std::abs(x_[j] - up) < std::abs(x_[j] - lo)) {
      status_[j] = VarStatus::at_upper;
      x_[j] = up;
    } else {
      status_[j] = VarStatus::at_lower;
      x_[j] = lo;
    }
  } else if (std::isfinite(lo)) {
    status_[j] = VarStatus::at_lower;
    x_[j] = lo;
  } else if (std::isfinite(up)) {
    status_[j] = VarStatus::at_upper;
    x_[j] = up;
  } else {
    status_[j] = VarStatus::free_nonbasic;
    x_[j] = 0.0;
  }
}

void SimplexEngine::set_bounds(int j, double lower, double upper) {
  infeasible_valid_ = false;
  lp_.lower[j] = lower;
  lp_.upper[j] = upper;
  if (status_[j] == VarStatus::basic) return;
  if (status_[j] == VarStatus::at_lower && std::isfinite(lower)) {
    x_[j] = lower;
  } else if (status_[j] == VarStatus::at_upper && std::isfinite(upper)) {
    x_[j] = upper;
  } else {
    place_nonbasic(j);
  }
}

void SimplexEngine::set_basis(const Basis& basis) {
  infeasible_valid_ = false;
  const int total_cols = total();
  if (static_cast<int>(basis.size()) != total_cols) return;
  const int basics = static_cast<int>(
      std::count(basis.begin(), basis.end(), VarStatus::basic));
  if (basics != lp_.m) return;
  status_ = basis;
  int p = 0;
  for (int j = 0; j < total_cols; ++j) {
    if (status_[j] == VarStatus::basic) {
      head_[p] = j;
      pos_[j] = p++;
      continue;
    }
    pos_[j] = -1;
    const double lo = lp_.lower[j], up = lp_.upper[j];
    if (status_[j] == VarStatus::at_lower && std::isfinite(lo)) {
      x_[j] = lo;
    } else if (status_[j] == VarStatus::at_upper && std::isfinite(up)) {
      x_[j] = up;
    } else {
      place_nonbasic(j);
    }
  }
  factor_valid_ = false;
  std::fill(dse_.begin(), dse_.end(), 1.0);
}

void SimplexEngine::refactor() {
  const int n = lp_.n, m = lp_.m;
  std::vector<SparseView> views(m);
  for (int attempt = 0; attempt < 4; ++attempt) {
    for (int p = 0; p < m; ++p) {
      const int j = head_[p];
      if (j < n) {
        const int s = lp_.col_start[j];
        views[p] = {lp_.row_index.data() + s, lp_.col_value.data() + s,
                    lp_.col_start[j + 1] - s};
      } else {
        views[p] = {logical_index_.data() + (j - n), &neg_one_, 1};
      }
    }
    auto outcome = factor_.factorize(m, views);
    if (outcome.singular_positions.empty()) break;
    // Swap the dependent columns for the logicals of the uncovered rows.
    for (std::size_t k = 0; k < outcome.singular_positions.size(); ++k) {
      const int p = outcome.singular_positions[k];
      const int row = outcome.unpivoted_rows[k];
      const int old = head_[p];
      pos_[old] = -1;
      status_[old] = VarStatus::at_lower;
      place_nonbasic(old);
      head_[p] = n + row;
      pos_[n + row] = p;
      status_[n + row] = VarStatus::basic;
    }
  }
  factor_valid_ = true;
}

void SimplexEngine::load_column(int j, HVector& column) const {
  column.clear();
  if (j < lp_.n) {
    for (int k = lp_.col_start[j]; k < lp_.col_start[j + 1]; ++k)
      column.set(lp_.row_index[k], lp_.col_value[k]);
  } else {
    column.set(j - lp_.n, -1.0);
  }
}

void SimplexEngine::collect_infeasible() {
  for (int p : infeasible_) listed_infeasible_[p] = 0;
  infeasible_.clear();
  for (int p = 0; p < lp_.m; ++p) note_infeasible(p);
  infeasible_valid_ = true;
}

void SimplexEngine::note_infeasible(int p) {
  if (listed_infeasible_[p] || primal_infeasibility(head_[p]) <= tol_.primal) return;
  listed_infeasible_[p] = 1;
  infeasible_.push_back(p);
}

void SimplexEngine::compute_primal() {
  infeasible_valid_ = false;
  const int n = lp_.n, m = lp_.m;
  work_.clear();
  work_.sparse = false;
  auto& w = work_.value;
  for (int j = 0; j < n + m; ++j) {
    if (status_[j] == VarStatus::basic || x_[j] == 0.0) continue;
    if (j < n) {
      for (int k = lp_.col_start[j]; k < lp_.col_start[j + 1]; ++k)
        w[lp_.row_index[k]] -= lp_.col_value[k] * x_[j];
    } else {
      w[j - n] += x_[j];
    }
  }
  factor_.ftran(work_);
  for (int p = 0; p < m; ++p) x_[head_[p]] = w[p];
  work_.clear();
}

void SimplexEngine::compute_duals(const std::vector<double>& cost) {
  const int m = lp_.m;
  work_.clear();
  work_.sparse = false;
  for (int p = 0; p < m; ++p) work_.value[p] = cost[head_[p]];
  factor_.btran(work_);
  std::copy(work_.value.begin(), work_.value.end(), y_.begin());
  work_.clear();
  price_all(cost);
}

void SimplexEngine::price_all(const std::vector<double>& cost) {
  const int n = lp_.n, m = lp_.m;
  for (int j = 0; j < n; ++j) {
    if (status_[j] == VarStatus::basic) {
      d_[j] = 0.0;
      continue;
    }
    double s = cost[j];
    for (int k = lp_.col_start[j]; k < lp_.col_start[j + 1]; ++k)
      s -= lp_.col_value[k] * y_[lp_.row_index[k]];
    d_[j] = s;
  }
  for (int i = 0; i < m; ++i)
    d_[n + i] = status_[n + i] == VarStatus::basic ? 0.0 : cost[n + i] + y_[i];
}

double SimplexEngine::primal_infeasibility(int j) const {
  if (x_[j] < lp_.lower[j]) return lp_.lower[j] - x_[j];
  if (x_[j] > lp_.upper[j]) return x_[j] - lp_.upper[j];
  return 0.0;
}

bool SimplexEngine::make_dual_feasible() {
  bool feasible = true, flipped = false;
  for (int j = 0; j < total(); ++j) {
    if (status_[j] == VarStatus::basic || is_fixed(j)) continue;
    const double dj = d_[j];
    bool bad = false;
    switch (status_[j]) {
      case VarStatus::at_lower:
        if (dj >= -tol_.dual) break;
        if (std::isfinite(lp_.upper[j])) {
          status_[j] = VarStatus::at_upper;
          x_[j] = lp_.upper[j];
          flipped = true;
        } else {
          bad = true;
        }
        break;
      case VarStatus::at_upper:
        if (dj <= tol_.dual) break;
        if (std::isfinite(lp_.lower[j])) {
          status_[j] = VarStatus::at_lower;
          x_[j] = lp_.lower[j];
          flipped = true;
        } else {
          bad = true;
        }
        break;
      case VarStatus::free_nonbasic:
        bad = std::abs(dj) > tol_.dual;
        break;
      default:
        break;
    }
    if (!bad) continue;
    // Small leftovers of round-off are absorbed by shifting the cost; the
    // primal pass after the dual removes the shift again.
    if (std::abs(dj) <= kMaxCostShift) {
      cost_[j] -= dj;
      d_[j] = 0.0;
      shifted_ = true;
    } else {
      feasible = false;
    }
  }
  if (flipped) compute_primal();
  return feasible;
}

bool SimplexEngine::remove_cost_shifts() {
  if (!shifted_) return false;
  cost_ = lp_.cost;
  shifted_ = false;
  return true;
}

void SimplexEngine::pivot_in(int q, int r, const HVector& alpha) {
  const int leave = head_[r];
  pos_[leave] = -1;
  head_[r] = q;
  pos_[q] = r;
  status_[q] = VarStatus::basic;
  factor_.update(r, alpha);
  (void)leave;
}

bool SimplexEngine::check_time(std::chrono::steady_clock::time_point deadline) {
  if ((iterations_ & 31) != 0) return false;
  if (deadline != std::chrono::steady_clock::time_point::max() &&
      std::chrono::steady_clock::now() >= deadline) {
    timed_out_ = true;
  }
  return timed_out_;
}

SimplexEngine::Step SimplexEngine::primal_iteration(bool phase1) {
  infeasible_valid_ = false;
  const int m = lp_.m, total_cols = total();
  if (phase1) {
    std::fill(phase_cost_.begin(), phase_cost_.end(), 0.0);
    bool any = false;
    for (int p = 0; p < m; ++p) {
      const int j = head_[p];
      if (x_[j] < lp_.lower[j] - tol_.primal) {
        phase_cost_[j] = -1.0;
        any = true;
      } else if (x_[j] > lp_.upper[j] + tol_.primal) {
        phase_cost_[j] = 1.0;
        any = true;
      }
    }
    if (!any) return Step::done;
    compute_duals(phase_cost_);
  } else {
    compute_duals(cost_);
  }

  int q = -1;
  double best = 0.0;
  for (int j = 0; j < total_cols; ++j) {
    if (status_[j] == VarStatus::basic || is_fixed(j)) continue;
    const double dj = d_[j];
    double score = 0.0;
    if (status_[j] == VarStatus::at_lower) {
      if (dj < -tol_.dual) score = -dj;
    } else if (status_[j] == VarStatus::at_upper) {
      if (dj > tol_.dual) score = dj;
    } else if (std::abs(dj) > tol_.dual) {
      score = std::abs(dj);
    }
    if (score <= 0.0) continue;
    if (bland_) {
      q = j;
      break;
    }
    if (score > best) {
      best = score;
      q = j;
    }
  }
  if (q < 0) return phase1 ? Step::infeasible : Step::done;

  const double dir = d_[q] < 0.0 ? 1.0 : -1.0;
  load_column(q, alpha_);
  factor_.ftran(alpha_);

  double flip = kInf;
  if (dir > 0 && std::isfinite(lp_.upper[q])) flip = lp_.upper[q] - x_[q];
  if (dir < 0 && std::isfinite(lp_.lower[q])) flip = x_[q] - lp_.lower[q];
  flip = std::max(flip, 0.0);

  // Harris two-pass ratio test.
  double theta_max = flip;
  for (int p = 0; p < m; ++p) {
    const double a = alpha_.value[p];
    if (std::abs(a) <= tol_.pivot) continue;
    const int j = head_[p];
    const double rate = -dir * a;
    const double xv = x_[j], lo = lp_.lower[j], up = lp_.upper[j];
    double lim;
    if (rate > 0) {
      if (phase1 && xv < lo - tol_.primal) lim = lo - xv;
      else if (xv > up + tol_.primal) continue;
      else if (std::isfinite(up)) lim = up - xv;
      else continue;
    } else {
      if (phase1 && xv > up + tol_.primal) lim = xv - up;
      else if (xv < lo - tol_.primal) continue;
      else if (std::isfinite(lo)) lim = xv - lo;
      else continue;
    }
    theta_max = std::min(theta_max, (lim + tol_.primal) / std::abs(rate));
  }
  int r = -1;
  double r_abs = 0.0, r_ratio = kInf, r_target = 0.0;
  bool r_to_upper = false;
  for (int p = 0; p < m; ++p) {
    const double a = alpha_.value[p];
    if (std::abs(a) <= tol_.pivot) continue;
    const int j = head_[p];
    const double rate = -dir * a;
    const double xv = x_[j], lo = lp_.lower[j], up = lp_.upper[j];
    double lim, target;
    bool to_upper;
    if (rate > 0) {
      if (phase1 && xv < lo - tol_.primal) { lim = lo - xv; target = lo; to_upper = false; }
      else if (xv > up + tol_.primal) continue;
      else if (std::isfinite(up)) { lim = up - xv; target = up; to_upper = true; }
      else continue;
    } else {
      if (phase1 && xv > up + tol_.primal) { lim = xv - up; target = up; to_upper = true; }
      else if (xv < lo - tol_.primal) continue;
      else if (std::isfinite(lo)) { lim = xv - lo; target = lo; to_upper = false; }
      else continue;
    }
    const double ratio = std::max(lim, 0.0) / std::abs(rate);
    if (ratio > theta_max) continue;
    bool take;
    if (bland_) {
      take = r < 0 || ratio < r_ratio - 1e-12 ||
             (ratio <= r_ratio + 1e-12 && j < head_[r]);
    } else {
      take = std::abs(a) > r_abs;
    }
    if (take) {
      r = p;
      r_abs = std::abs(a);
      r_ratio = ratio;
      r_target = target;
      r_to_upper = to_upper;
    }
  }

  double theta = r >= 0 ? r_ratio : kInf;
  const bool do_flip = flip <= theta;
  if (do_flip) theta = flip;
  if (!std::isfinite(theta)) return phase1 ? Step::trouble : Step::unbounded;

  if (theta != 0.0) {
    for (int p = 0; p < m; ++p)
      if (alpha_.value[p] != 0.0) x_[head_[p]] -= dir * alpha_.value[p] * theta;
  }
  x_[q] += dir * theta;
  if (do_flip) {
    if (dir > 0) {
      status_[q] = VarStatus::at_upper;
      x_[q] = lp_.upper[q];
    } else {
      status_[q] = VarStatus::at_lower;
      x_[q] = lp_.lower[q];
    }
  } else {
    const int leave = head_[r];
    x_[leave] = r_target;
    status_[leave] = r_to_upper ? VarStatus::at_upper : VarStatus::at_lower;
    pivot_in(q, r, alpha_);
  }
  ++iterations_;
  if (theta * std::abs(d_[q]) < 1e-12) {
    if (++degenerate_run_ > kBlandTrigger) bland_ = true;
  } else {
    degenerate_run_ = 0;
    bland_ = false;
  }
  return Step::progress;
}

SimplexEngine::Step SimplexEngine::dual_iteration() {
  const int n = lp_.n;
  if (!infeasible_valid_) collect_infeasible();
  int r = -1;
  double best = 0.0;
  for (std::size_t t = 0; t < infeasible_.size();) {
    const int p = infeasible_[t];
    const int j = head_[p];
    const double inf = primal_infeasibility(j);
    if (inf <= tol_.primal) {
      listed_infeasible_[p] = 0;
      infeasible_[t] = infeasible_.back();
      infeasible_.pop_back();
      continue;
    }
    ++t;
    if (bland_) {
      if (r < 0 || j < head_[r]) r = p;
    } else if (inf * inf > best * dse_[p]) {
      best = inf * inf / dse_[p];
      r = p;
    }
  }
  if (r < 0) return Step::done;

  const int leave = head_[r];
  const bool to_lower = x_[leave] < lp_.lower[leave];
  const double target = to_lower ? lp_.lower[leave] : lp_.upper[leave];

  work_.clear();
  work_.set(r, 1.0);
  factor_.btran(work_);
  // The leaving row's weight is refreshed exactly; the others follow the
  // Devex-style bound max(w_p, (alpha_p / alpha_r)^2 w_r).
  double rho_norm = 0.0;
  for (int i : work_.index) rho_norm += work_.value[i] * work_.value[i];
  dse_[r] = rho_norm;

  touched_.clear();
  auto touch = [&](int j, double v) {
    if (!touched_mark_[j]) {
      touched_mark_[j] = 1;
      touched_.push_back(j);
    }
    row_alpha_[j] += v;
  };
  for (int i : work_.index) {
    const double rho = work_.value[i];
    if (rho == 0.0) continue;
    for (int k = lp_.row_start[i]; k < lp_.row_start[i + 1]; ++k) {
      const int j = lp_.col_index[k];
      if (status_[j] != VarStatus::basic) touch(j, rho * lp_.row_value[k]);
    }
    if (status_[n + i] != VarStatus::basic) touch(n + i, -rho);
  }
  work_.clear();

  const double sigma = to_lower ? -1.0 : 1.0;
  auto eligible = [&](int j, double a) {
    if (is_fixed(j) || std::abs(a) <= tol_.pivot) return false;
    switch (status_[j]) {
      case VarStatus::at_lower: return sigma * a > 0;
      case VarStatus::at_upper: return sigma * a < 0;
      case VarStatus::free_nonbasic: return true;
      default: return false;
    }
  };
  auto signed_d = [&](int j) {
    switch (status_[j]) {
      case VarStatus::at_lower: return d_[j];
      case VarStatus::at_upper: return -d_[j];
      default: return std::abs(d_[j]);
    }
  };

  double theta_max = kInf;
  for (int j : touched_) {
    const double a = row_alpha_[j];
    if (!eligible(j, a)) continue;
    theta_max = std::min(theta_max, (signed_d(j) + tol_.dual) / std::abs(a));
  }
  int q = -1;
  double q_abs = 0.0, q_ratio = kInf;
  if (std::isfinite(theta_max)) {
    for (int j : touched_) {
      const double a = row_alpha_[j];
      if (!eligible(j, a)) continue;
      const double ratio = std::max(signed_d(j), 0.0) / std::abs(a);
      if (ratio > theta_max) continue;
      bool take;
      if (bland_) {
        take = q < 0 || ratio < q_ratio - 1e-12 || (ratio <= q_ratio + 1e-12 && j < q);
      } else {
        take = std::abs(a) > q_abs;
      }
      if (take) {
        q = j;
        q_abs = std::abs(a);
        q_ratio = ratio;
      }
    }
  }
  auto clear_row = [&]() {
    for (int j : touched_) {
      row_alpha_[j] = 0.0;
      touched_mark_[j] = 0;
    }
    touched_.clear();
  };
  if (q < 0) {
    clear_row();
    return Step::infeasible;
  }

  const double alpha_rq = row_alpha_[q];
  const double theta_d = d_[q] / alpha_rq;
  for (int j : touched_)
    if (j != q) d_[j] -= theta_d * row_alpha_[j];
  clear_row();
  d_[q] = 0.0;
  d_[leave] = -theta_d;

  load_column(q, alpha_);
  factor_.ftran(alpha_);
  if (std::abs(alpha_.value[r] - alpha_rq) > 1e-6 * (1.0 + std::abs(alpha_rq))) return Step::trouble;

  const double a_r = alpha_.value[r];
  const double theta_p = (x_[leave] - target) / a_r;
  for (int p : alpha_.index) {
    const double a = alpha_.value[p];
    if (a == 0.0) continue;
    x_[head_[p]] -= theta_p * a;
    if (p == r) continue;
    const double ratio = a / a_r;
    dse_[p] = std::max(dse_[p], ratio * ratio * rho_norm);
  }
  dse_[r] = std::max(rho_norm / (a_r * a_r), kMinWeight);
  for (int p : alpha_.index) note_infeasible(p);
  x_[q] += theta_p;
  x_[leave] = target;
  status_[leave] = to_lower ? VarStatus::at_lower : VarStatus::at_upper;
  pivot_in(q, r, alpha_);
  ++iterations_;
  if (std::abs(theta_d) < 1e-12) {
    if (++degenerate_run_ > kBlandTrigger) bland_ = true;
  } else {
    degenerate_run_ = 0;
    bland_ = false;
  }
  return Step::progress;
}

LpStatus SimplexEngine::run_dual(std::chrono::steady_clock::time_point deadline) {
  int trouble = 0;
  bool verified = false;
  for (;;) {
    if (check_time(deadline)) return LpStatus::time_limit;
    if (factor_.num_updates() >= kRefactorInterval ||
        factor_.eta_nonzeros() > 2 * factor_.lu_nonzeros() + lp_.m) {
      refactor();
      compute_primal();
      compute_duals(cost_);
      if (!make_dual_feasible()) return LpStatus::optimal;  // hand over to primal
    }
    switch (dual_iteration()) {
      case Step::progress:
        verified = false;
        break;
      case Step::done:
        return LpStatus::optimal;
      case Step::infeasible:
        if (!verified && factor_.num_updates() > 0) {
          verified = true;
          refactor();
          compute_primal();
          compute_duals(cost_);
          if (!make_dual_feasible()) return LpStatus::optimal;
          break;
        }
        return LpStatus::infeasible;
      case Step::trouble:
      case Step::unbounded:
        if (++trouble > kMaxTrouble) return LpStatus::optimal;
        refactor();
        compute_primal();
        compute_duals(cost_);
        if (!make_dual_feasible()) return LpStatus::optimal;
        break;
    }
  }
}

LpStatus SimplexEngine::run_primal(std::chrono::steady_clock::time_point deadline) {
  bool phase1 = true;
  bool verified = false;
  int trouble = 0;
  for (;;) {
    if (check_time(deadline)) return LpStatus::time_limit;
    if (factor_.num_updates() >= kRefactorInterval ||
        factor_.eta_nonzeros() > 2 * factor_.lu_nonzeros() + lp_.m) {
      refactor();
      compute_primal();
    }
    switch (primal_iteration(phase1)) {
      case Step::progress:
        verified = false;
        break;
      case Step::done:
        if (phase1) {
          phase1 = false;
          break;
        }
        return LpStatus::optimal;
      case Step::infeasible:
        if (!verified && factor_.num_updates() > 0) {
          verified = true;
          refactor();
          compute_primal();
          break;
        }
        return LpStatus::infeasible;
      case Step::unbounded:
        if (!verified && factor_.num_updates() > 0) {
          verified = true;
          refactor();
          compute_primal();
          break;
        }
        return LpStatus::unbounded;
      case Step::trouble:
        if (++trouble > kMaxTrouble) return LpStatus::infeasible;
        refactor();
        compute_primal();
        break;
    }
  }
}

LpStatus SimplexEngine::solve(std::chrono::steady_clock::time_point deadline) {
  timed_out_ = false;
  bland_ = false;
  degenerate_run_ = 0;
  refactor();
  compute_primal();
  for (int round = 0; round < 6; ++round) {
    compute_duals(cost_);
    if (make_dual_feasible()) {
      const auto st = run_dual(deadline);
      if (st == LpStatus::time_limit || st == LpStatus::infeasible) {
        remove_cost_shifts();
        return st;
      }
    }
    remove_cost_shifts();
    const auto st = run_primal(deadline);
    if (st != LpStatus::optimal) return st;

    refactor();
    compute_primal();
    compute_duals(cost_);
    double primal_err = 0.0, dual_err = 0.0;
    for (int p = 0; p < lp_.m; ++p)
      primal_err = std::max(primal_err, primal_infeasibility(head_[p]));
    for (int j = 0; j < total(); ++j) {
      if (status_[j] == VarStatus::basic || is_fixed(j)) continue;
      if (status_[j] == VarStatus::at_lower) dual_err = std::max(dual_err, -d_[j]);
      else if (status_[j] == VarStatus::at_upper) dual_err = std::max(dual_err, d_[j]);
      else dual_err = std::max(dual_err, std::abs(d_[j]));
    }
    if (primal_err <= 10 * tol_.primal && dual_err <= 10 * tol_.dual) break;
  }
  return LpStatus::optimal;
}

double SimplexEngine::objective() const {
  double obj = 0.0;
  for (int j = 0; j < lp_.n; ++j) obj += lp_.cost[j] * x_[j];  // unshifted
  return obj;
}

}  // namespace tsagg::solve

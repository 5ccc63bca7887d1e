#include "solve/basis_factor.hpp"

#include <algorithm>
#include <cmath>

namespace tsagg::solve {

namespace {

constexpr double kThreshold = 0.05;   // relative pivot threshold
constexpr double kTinyPivot = 1e-11;  // absolute singularity threshold
constexpr double kDropTol = 1e-14;
constexpr int kSearchLines = 4;
constexpr int kLongRow = 48;

struct Entry {
  int pos;
  double val;
};

}  // namespace

BasisFactor::Outcome BasisFactor::factorize(
    int m, const std::vector<SparseView>& columns) {
  m_ = m;
  pivot_row_.clear();
  pivot_pos_.clear();
  diag_.clear();
  l_start_.assign(1, 0);
  l_index_.clear();
  l_value_.clear();
  eta_pivot_.clear();
  eta_diag_.clear();
  eta_start_.assign(1, 0);
  eta_index_.clear();
  eta_value_.clear();
  std::vector<double> scratch(m, 0.0);
  out_.resize(m);
  visit_.assign(m, 0);
  visit_stamp_ = 0;

  // Fill-free singleton pivots first. Column singletons need no L entries
  // and row singletons change nothing but the pivot column, so neither
  // touches a value.
  std::vector<int> r_start(m + 1, 0);
  for (int p = 0; p < m; ++p)
    for (int t = 0; t < columns[p].size; ++t)
      if (columns[p].value[t] != 0.0) ++r_start[columns[p].index[t] + 1];
  for (int i = 0; i < m; ++i) r_start[i + 1] += r_start[i];
  std::vector<int> r_pos(r_start[m]);
  std::vector<double> r_val(r_start[m]);
  std::vector<int> row_count(m, 0), col_count(m, 0);
  {
    std::vector<int> at(r_start.begin(), r_start.end() - 1);
    for (int p = 0; p < m; ++p)
      for (int t = 0; t < columns[p].size; ++t) {
        const double v = columns[p].value[t];
        if (v == 0.0) continue;
        const int i = columns[p].index[t];
        r_pos[at[i]] = p;
        r_val[at[i]++] = v;
        ++col_count[p];
      }
  }
  for (int i = 0; i < m; ++i) row_count[i] = r_start[i + 1] - r_start[i];

  std::vector<char> row_done(m, 0), col_done(m, 0);
  std::vector<std::vector<Entry>> u_rows;  // per pivot, entries by position
  u_rows.reserve(m);
  int settled = 0;
  auto record = [&](int r, int c, double piv) {
    row_done[r] = 1;
    col_done[c] = 1;
    pivot_row_.push_back(r);
    pivot_pos_.push_back(c);
    diag_.push_back(piv);
    ++settled;
  };
  std::vector<int> col_stack, row_stack;
  for (int p = 0; p < m; ++p)
    if (col_count[p] == 1) col_stack.push_back(p);
  for (int i = 0; i < m; ++i)
    if (row_count[i] == 1) row_stack.push_back(i);
  while (!col_stack.empty() || !row_stack.empty()) {
    if (!col_stack.empty()) {
      const int c = col_stack.back();
      col_stack.pop_back();
      if (col_done[c] || col_count[c] != 1) continue;
      int r = -1;
      double piv = 0.0;
      const auto& col = columns[c];
      for (int t = 0; t < col.size; ++t)
        if (col.value[t] != 0.0 && !row_done[col.index[t]]) r = col.index[t], piv = col.value[t];
      if (std::abs(piv) <= kTinyPivot) continue;
      record(r, c, piv);
      l_start_.push_back(static_cast<int>(l_index_.size()));
      std::vector<Entry> urow;
      for (int q = r_start[r]; q < r_start[r + 1]; ++q) {
        const int p2 = r_pos[q];
        if (col_done[p2]) continue;
        urow.push_back({p2, r_val[q]});
        if (--col_count[p2] == 1) col_stack.push_back(p2);
      }
      u_rows.push_back(std::move(urow));
      continue;
    }
    const int r = row_stack.back();
    row_stack.pop_back();
    if (row_done[r] || row_count[r] != 1) continue;
    int c = -1;
    double piv = 0.0;
    for (int q = r_start[r]; q < r_start[r + 1]; ++q)
      if (!col_done[r_pos[q]]) c = r_pos[q], piv = r_val[q];
    const auto& col = columns[c];
    double mx = 0.0;
    for (int t = 0; t < col.size; ++t)
      if (!row_done[col.index[t]]) mx = std::max(mx, std::abs(col.value[t]));
    if (std::abs(piv) <= kTinyPivot || std::abs(piv) < kThreshold * mx) continue;
    for (int t = 0; t < col.size; ++t) {
      const int i = col.index[t];
      if (i == r || row_done[i] || col.value[t] == 0.0) continue;
      l_index_.push_back(i);
      l_value_.push_back(col.value[t] / piv);
      if (--row_count[i] == 1) row_stack.push_back(i);
    }
    record(r, c, piv);
    l_start_.push_back(static_cast<int>(l_index_.size()));
    u_rows.emplace_back();
  }

  // The remaining nucleus goes through Markowitz elimination with fill.
  std::vector<std::vector<Entry>> rows(m);
  std::vector<std::vector<int>> col_rows(m);
  std::fill(row_count.begin(), row_count.end(), 0);
  std::fill(col_count.begin(), col_count.end(), 0);
  if (settled < m) {
    for (int i = 0; i < m; ++i) {
      if (row_done[i]) continue;
      for (int q = r_start[i]; q < r_start[i + 1]; ++q) {
        if (col_done[r_pos[q]]) continue;
        rows[i].push_back({r_pos[q], r_val[q]});
        col_rows[r_pos[q]].push_back(i);
      }
      row_count[i] = static_cast<int>(rows[i].size());
    }
    for (int p = 0; p < m; ++p) col_count[p] = static_cast<int>(col_rows[p].size());
  }

  std::vector<std::vector<int>> col_bucket(m + 2), row_bucket(m + 2);
  for (int p = 0; p < m; ++p)
    if (!col_done[p]) col_bucket[std::min(col_count[p], m + 1)].push_back(p);
  for (int i = 0; i < m; ++i)
    if (!row_done[i]) row_bucket[std::min(row_count[i], m + 1)].push_back(i);

  // No line is longer than top_count, so the search never walks empty buckets
  // beyond it.
  int top_count = 1;
  for (int p = 0; p < m; ++p) top_count = std::max(top_count, std::min(col_count[p], m + 1));
  for (int i = 0; i < m; ++i) top_count = std::max(top_count, std::min(row_count[i], m + 1));
  auto push_col = [&](int p) {
    const int b = std::min(col_count[p], m + 1);
    top_count = std::max(top_count, b);
    col_bucket[b].push_back(p);
  };
  auto push_row = [&](int i) {
    const int b = std::min(row_count[i], m + 1);
    top_count = std::max(top_count, b);
    row_bucket[b].push_back(i);
  };

  // Long rows (a horizon-wide sum, say) get a position -> slot map so that
  // lookups and updates cost O(1) per touched entry instead of a scan.
  std::vector<int> map_of(m, -1);
  std::vector<std::vector<int>> maps;
  std::vector<int> free_maps;
  auto index_row = [&](int i) {
    int k;
    if (!free_maps.empty()) {
      k = free_maps.back();
      free_maps.pop_back();
    } else {
      k = static_cast<int>(maps.size());
      maps.emplace_back(m, -1);
    }
    map_of[i] = k;
    for (int t = 0; t < static_cast<int>(rows[i].size()); ++t) maps[k][rows[i][t].pos] = t;
  };
  auto release_row = [&](int i) {
    if (map_of[i] < 0) return;
    for (const auto& e : rows[i]) maps[map_of[i]][e.pos] = -1;
    free_maps.push_back(map_of[i]);
    map_of[i] = -1;
  };
  // Swap-removes slot t of row i.
  auto erase_at = [&](int i, int t) {
    auto& row = rows[i];
    if (map_of[i] >= 0) {
      auto& where = maps[map_of[i]];
      where[row[t].pos] = -1;
      if (t + 1 != static_cast<int>(row.size())) where[row.back().pos] = t;
    }
    row[t] = row.back();
    row.pop_back();
  };
  for (int i = 0; i < m; ++i)
    if (static_cast<int>(rows[i].size()) > kLongRow) index_row(i);

  auto find_in_row = [&](int i, int p) -> int {
    if (map_of[i] >= 0) return maps[map_of[i]][p];
    const auto& r = rows[i];
    for (int t = 0; t < static_cast<int>(r.size()); ++t)
      if (r[t].pos == p) return t;
    return -1;
  };

  // Cached per column; an elimination invalidates the columns of its pivot
  // row, the only ones whose entries change. Recomputing also drops stale
  // row references.
  std::vector<double> col_max(m, 0.0);
  std::vector<char> col_max_ok(m, 0);
  auto column_max = [&](int p) {
    if (col_max_ok[p]) return col_max[p];
    double mx = 0.0;
    auto& list = col_rows[p];
    std::size_t keep = 0;
    for (std::size_t k = 0; k < list.size(); ++k) {
      const int i = list[k];
      if (row_done[i]) continue;
      int t = find_in_row(i, p);
      if (t < 0) continue;
      mx = std::max(mx, std::abs(rows[i][t].val));
      list[keep++] = i;
    }
    list.resize(keep);
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    col_max[p] = mx;
    col_max_ok[p] = 1;
    return mx;
  };

  // Pops stale entries and returns a live member of bucket `c`, or -1.
  auto live_col = [&](int c) -> int {
    auto& b = col_bucket[c];
    while (!b.empty()) {
      int p = b.back();
      if (!col_done[p] && col_count[p] == c) return p;
      b.pop_back();
    }
    return -1;
  };

  std::vector<int> mark(m, -1), seen(m, -1);
  int stamp = 0;
  Outcome outcome;

  auto eliminate = [&](int r, int c) {
    const int t_piv = find_in_row(r, c);
    const double piv = rows[r][t_piv].val;
    ++stamp;
    const int pivot_stamp = stamp;
    for (const auto& e : rows[r]) {
      mark[e.pos] = pivot_stamp;
      scratch[e.pos] = e.val;  // keyed by position
      col_max_ok[e.pos] = 0;
    }
    for (int i : col_rows[c]) {
      if (row_done[i] || i == r) continue;
      auto& row = rows[i];
      const int t = find_in_row(i, c);
      if (t < 0) continue;
      const double l = row[t].val / piv;
      erase_at(i, t);
      l_index_.push_back(i);
      l_value_.push_back(l);
      if (map_of[i] >= 0) {
        auto& where = maps[map_of[i]];
        for (const auto& e : rows[r]) {
          if (e.pos == c) continue;
          const int k = where[e.pos];
          if (k >= 0) {
            row[k].val -= l * e.val;
            if (std::abs(row[k].val) < kDropTol) {
              --col_count[e.pos];
              push_col(e.pos);
              erase_at(i, k);
            }
          } else {
            where[e.pos] = static_cast<int>(row.size());
            row.push_back({e.pos, -l * e.val});
            col_rows[e.pos].push_back(i);
            ++col_count[e.pos];
            push_col(e.pos);
          }
        }
        row_count[i] = static_cast<int>(row.size());
        push_row(i);
        continue;
      }
      ++stamp;
      for (auto& e : row) {
        if (mark[e.pos] == pivot_stamp) {
          e.val -= l * scratch[e.pos];
          seen[e.pos] = stamp;
        }
      }
      for (const auto& e : rows[r]) {
        if (e.pos == c || seen[e.pos] == stamp) continue;
        row.push_back({e.pos, -l * e.val});
        col_rows[e.pos].push_back(i);
        ++col_count[e.pos];
        push_col(e.pos);
      }
      for (std::size_t k = 0; k < row.size();) {
        if (std::abs(row[k].val) < kDropTol) {
          --col_count[row[k].pos];
          push_col(row[k].pos);
          row[k] = row.back();
          row.pop_back();
        } else {
          ++k;
        }
      }
      row_count[i] = static_cast<int>(row.size());
      push_row(i);
      if (row_count[i] > kLongRow) index_row(i);
    }
    l_start_.push_back(static_cast<int>(l_index_.size()));
    release_row(r);
    row_done[r] = 1;
    col_done[c] = 1;
    std::vector<Entry> urow;
    for (const auto& e : rows[r]) {
      scratch[e.pos] = 0.0;
      if (e.pos == c) continue;
      urow.push_back(e);
      --col_count[e.pos];
      push_col(e.pos);
    }
    rows[r].clear();
    u_rows.push_back(std::move(urow));
    pivot_row_.push_back(r);
    pivot_pos_.push_back(c);
    diag_.push_back(piv);
    ++settled;
  };

  while (settled < m) {
    // Column singletons never create fill or growth.
    int c = live_col(1);
    if (c >= 0) {
      int r = -1;
      for (int i : col_rows[c])
        if (!row_done[i] && find_in_row(i, c) >= 0) { r = i; break; }
      if (r >= 0 && std::abs(rows[r][find_in_row(r, c)].val) > kTinyPivot) {
        eliminate(r, c);
      } else {
        col_done[c] = 1;
        outcome.singular_positions.push_back(c);
        ++settled;
      }
      continue;
    }
    // Markowitz search over the sparsest lines, extended past kSearchLines
    // while no line has offered a stable pivot.
    int best_r = -1, best_c = -1;
    double best_cost = 0.0, best_abs = 0.0;
    int examined = 0;
    for (int cnt = 1; cnt <= top_count && (examined < kSearchLines || best_r < 0); ++cnt) {
      if (cnt >= 2) {
        auto& cb = col_bucket[cnt];
        for (int k = static_cast<int>(cb.size()) - 1; k >= 0 && (examined < kSearchLines || best_r < 0); --k) {
          int p = cb[k];
          if (col_done[p] || col_count[p] != cnt) continue;
          ++examined;
          const double mx = column_max(p);
          for (int i : col_rows[p]) {
            if (row_done[i]) continue;
            int t = find_in_row(i, p);
            if (t < 0) continue;
            const double a = std::abs(rows[i][t].val);
            if (a < kThreshold * mx || a <= kTinyPivot) continue;
            const double cost = double(row_count[i] - 1) * double(cnt - 1);
            if (best_r < 0 || cost < best_cost || (cost == best_cost && a > best_abs)) {
              best_r = i, best_c = p, best_cost = cost, best_abs = a;
            }
          }
        }
      }
      auto& rb = row_bucket[cnt];
      for (int k = static_cast<int>(rb.size()) - 1; k >= 0 && (examined < kSearchLines || best_r < 0); --k) {
        int i = rb[k];
        if (row_done[i] || row_count[i] != cnt) continue;
        ++examined;
        for (const auto& e : rows[i]) {
          const double a = std::abs(e.val);
          if (a <= kTinyPivot || a < kThreshold * column_max(e.pos)) continue;
          const double cost = double(cnt - 1) * double(col_count[e.pos] - 1);
          if (best_r < 0 || cost < best_cost || (cost == best_cost && a > best_abs)) {
            best_r = i, best_c = e.pos, best_cost = cost, best_abs = a;
          }
        }
      }
      if (best_r >= 0 && best_cost <= double(cnt - 1) * double(cnt - 1)) break;
    }
    if (best_r < 0) {
      // Whatever is left cannot be pivoted stably: empty or tiny columns.
      for (int p = 0; p < m; ++p) {
        if (col_done[p]) continue;
        bool usable = false;
        for (int i : col_rows[p]) {
          if (row_done[i]) continue;
          int t = find_in_row(i, p);
          if (t >= 0 && std::abs(rows[i][t].val) > kTinyPivot) { usable = true; break; }
        }
        if (!usable) {
          col_done[p] = 1;
          outcome.singular_positions.push_back(p);
          ++settled;
        }
      }
      if (best_r < 0 && settled < m) {
        // Remaining columns have entries, but all failed the threshold;
        // accept the largest available entry.
        for (int p = 0; p < m && best_r < 0; ++p) {
          if (col_done[p]) continue;
          for (int i : col_rows[p]) {
            if (row_done[i]) continue;
            int t = find_in_row(i, p);
            if (t >= 0 && std::abs(rows[i][t].val) > best_abs) {
              best_abs = std::abs(rows[i][t].val), best_r = i, best_c = p;
            }
          }
        }
        if (best_r >= 0) eliminate(best_r, best_c);
      }
      continue;
    }
    eliminate(best_r, best_c);
  }

  for (int i = 0; i < m; ++i)
    if (!row_done[i]) outcome.unpivoted_rows.push_back(i);
  if (!outcome.singular_positions.empty()) return outcome;

  // Column-wise U: entry (pivot k row, position p) goes to the column of the
  // pivot that eliminated position p.
  std::vector<int> step_of_pos(m, -1);
  for (int k = 0; k < m; ++k) step_of_pos[pivot_pos_[k]] = k;
  std::vector<int> counts(m + 1, 0);
  for (int k = 0; k < m; ++k)
    for (const auto& e : u_rows[k]) ++counts[step_of_pos[e.pos] + 1];
  u_start_.assign(m + 1, 0);
  for (int k = 0; k < m; ++k) u_start_[k + 1] = u_start_[k] + counts[k + 1];
  u_index_.assign(u_start_[m], 0);
  u_value_.assign(u_start_[m], 0.0);
  std::vector<int> fill(u_start_.begin(), u_start_.end() - 1);
  for (int k = 0; k < m; ++k) {
    for (const auto& e : u_rows[k]) {
      const int j = step_of_pos[e.pos];
      u_index_[fill[j]] = pivot_row_[k];
      u_value_[fill[j]] = e.val;
      ++fill[j];
    }
  }

  step_of_row_.assign(m, -1);
  for (int k = 0; k < m; ++k) step_of_row_[pivot_row_[k]] = k;
  step_of_pos_ = std::move(step_of_pos);
  auto transpose = [&](const std::vector<int>& start, const std::vector<int>& index,
                       const std::vector<double>& value, std::vector<int>& t_start,
                       std::vector<int>& t_step, std::vector<double>& t_value) {
    std::vector<int> cnt(m + 1, 0);
    for (int q : index) ++cnt[step_of_row_[q] + 1];
    t_start.assign(m + 1, 0);
    for (int k = 0; k < m; ++k) t_start[k + 1] = t_start[k] + cnt[k + 1];
    t_step.assign(index.size(), 0);
    t_value.assign(index.size(), 0.0);
    std::vector<int> at(t_start.begin(), t_start.end() - 1);
    for (int k = 0; k < m; ++k)
      for (int q = start[k]; q < start[k + 1]; ++q) {
        const int s = step_of_row_[index[q]];
        t_step[at[s]] = k;
        t_value[at[s]] = value[q];
        ++at[s];
      }
  };
  transpose(u_start_, u_index_, u_value_, ut_start_, ut_step_, ut_value_);
  transpose(l_start_, l_index_, l_value_, lt_start_, lt_step_, lt_value_);
  return outcome;
}

void HVector::resize(int m) {
  value.assign(m, 0.0);
  listed.assign(m, 0);
  index.clear();
  sparse = true;
}

void HVector::clear() {
  if (sparse && index.size() * 4 < value.size()) {
    for (int i : index) {
      value[i] = 0.0;
      listed[i] = 0;
    }
  } else {
    std::fill(value.begin(), value.end(), 0.0);
    std::fill(listed.begin(), listed.end(), 0);
  }
  index.clear();
  sparse = true;
}

void HVector::reindex() {
  index.clear();
  for (int i = 0; i < size(); ++i) {
    listed[i] = value[i] != 0.0;
    if (listed[i]) index.push_back(i);
  }
  sparse = true;
}

namespace {

// Beyond this share of m the dense loops are cheaper than graph search.
constexpr double kHyperLimit = 0.1;

}  // namespace

template <class Next>
bool BasisFactor::reach(const std::vector<int>& start, bool ascending, Next next) const {
  const auto limit = static_cast<std::size_t>(kHyperLimit * m_) + 8;
  if (++visit_stamp_ == 0) {
    std::fill(visit_.begin(), visit_.end(), 0);
    visit_stamp_ = 1;
  }
  order_.clear();
  stack_.clear();
  for (int k : start) {
    if (visit_[k] == visit_stamp_) continue;
    visit_[k] = visit_stamp_;
    stack_.push_back(k);
    while (!stack_.empty()) {
      const int v = stack_.back();
      stack_.pop_back();
      order_.push_back(v);
      if (order_.size() > limit) return false;
      next(v, [&](int w) {
        if (visit_[w] != visit_stamp_) {
          visit_[w] = visit_stamp_;
          stack_.push_back(w);
        }
      });
    }
  }
  if (ascending) std::sort(order_.begin(), order_.end());
  else std::sort(order_.begin(), order_.end(), std::greater<int>());
  return true;
}

void BasisFactor::ftran(HVector& x) const {
  auto& v = x.value;
  bool sparse = x.sparse && x.index.size() < kHyperLimit * m_;

  // L
  if (sparse) {
    start_.clear();
    for (int i : x.index) start_.push_back(step_of_row_[i]);
    sparse = reach(start_, true, [&](int k, auto&& visit) {
      for (int q = l_start_[k]; q < l_start_[k + 1]; ++q) visit(step_of_row_[l_index_[q]]);
    });
  }
  if (sparse) {
    for (int k : order_) {
      const double t = v[pivot_row_[k]];
      if (t == 0.0) continue;
      for (int q = l_start_[k]; q < l_start_[k + 1]; ++q) x.add(l_index_[q], -l_value_[q] * t);
    }
  } else {
    for (int k = 0; k < m_; ++k) {
      const double t = v[pivot_row_[k]];
      if (t == 0.0) continue;
      for (int q = l_start_[k]; q < l_start_[k + 1]; ++q) v[l_index_[q]] -= l_value_[q] * t;
    }
  }

  // U, written by position into out_
  if (sparse) {
    start_.clear();
    for (int i : x.index) start_.push_back(step_of_row_[i]);
    sparse = reach(start_, false, [&](int k, auto&& visit) {
      for (int q = u_start_[k]; q < u_start_[k + 1]; ++q) visit(step_of_row_[u_index_[q]]);
    });
  }
  out_.clear();
  if (sparse) {
    for (int k : order_) {
      const double t = v[pivot_row_[k]] / diag_[k];
      if (t == 0.0) continue;
      out_.set(pivot_pos_[k], t);
      for (int q = u_start_[k]; q < u_start_[k + 1]; ++q) v[u_index_[q]] -= u_value_[q] * t;
    }
    for (int i : x.index) {
      v[i] = 0.0;
      x.listed[i] = 0;
    }
    for (int k : order_) {
      v[pivot_row_[k]] = 0.0;
      x.listed[pivot_row_[k]] = 0;
    }
  } else {
    auto& o = out_.value;
    for (int k = m_ - 1; k >= 0; --k) {
      const double t = v[pivot_row_[k]] / diag_[k];
      o[pivot_pos_[k]] = t;
      if (t == 0.0) continue;
      for (int q = u_start_[k]; q < u_start_[k + 1]; ++q) v[u_index_[q]] -= u_value_[q] * t;
    }
    std::fill(v.begin(), v.end(), 0.0);
    std::fill(x.listed.begin(), x.listed.end(), 0);
    out_.sparse = false;
  }
  x.index.clear();
  std::swap(x.value, out_.value);
  std::swap(x.index, out_.index);
  std::swap(x.listed, out_.listed);
  x.sparse = out_.sparse;
  out_.sparse = true;

  // Eta file, in order.
  for (std::size_t e = 0; e < eta_pivot_.size(); ++e) {
    const int r = eta_pivot_[e];
    const double xr = x.value[r] / eta_diag_[e];
    if (xr == 0.0) continue;
    x.value[r] = xr;
    if (x.sparse) {
      for (int q = eta_start_[e]; q < eta_start_[e + 1]; ++q) x.add(eta_index_[q], -eta_value_[q] * xr);
    } else {
      for (int q = eta_start_[e]; q < eta_start_[e + 1]; ++q) x.value[eta_index_[q]] -= eta_value_[q] * xr;
    }
  }
  if (!x.sparse) x.reindex();
}

void BasisFactor::btran(HVector& x) const {
  // Eta file, backwards. Each eta needs a dot product, so this part is
  // proportional to the eta nonzeros either way.
  for (int e = static_cast<int>(eta_pivot_.size()) - 1; e >= 0; --e) {
    const int r = eta_pivot_[e];
    double s = x.value[r];
    for (int q = eta_start_[e]; q < eta_start_[e + 1]; ++q) s -= eta_value_[q] * x.value[eta_index_[q]];
    s /= eta_diag_[e];
    if (s == x.value[r]) continue;
    if (x.sparse) x.set(r, s);
    else x.value[r] = s;
  }
  auto& v = x.value;
  bool sparse = x.sparse && x.index.size() < kHyperLimit * m_;

  // U transposed: position space in x, row space in out_.
  if (sparse) {
    start_.clear();
    for (int p : x.index) start_.push_back(step_of_pos_[p]);
    sparse = reach(start_, true, [&](int k, auto&& visit) {
      for (int q = ut_start_[k]; q < ut_start_[k + 1]; ++q) visit(ut_step_[q]);
    });
  }
  out_.clear();
  if (sparse) {
    for (int k : order_) {
      const double s = v[pivot_pos_[k]];
      if (s == 0.0) continue;
      const double w = s / diag_[k];
      out_.set(pivot_row_[k], w);
      for (int q = ut_start_[k]; q < ut_start_[k + 1]; ++q) v[pivot_pos_[ut_step_[q]]] -= ut_value_[q] * w;
    }
    for (int p : x.index) v[p] = 0.0, x.listed[p] = 0;
    for (int k : order_) v[pivot_pos_[k]] = 0.0, x.listed[pivot_pos_[k]] = 0;
  } else {
    auto& w = out_.value;
    for (int k = 0; k < m_; ++k) {
      double s = v[pivot_pos_[k]];
      for (int q = u_start_[k]; q < u_start_[k + 1]; ++q) s -= u_value_[q] * w[u_index_[q]];
      w[pivot_row_[k]] = s / diag_[k];
    }
    std::fill(v.begin(), v.end(), 0.0);
    std::fill(x.listed.begin(), x.listed.end(), 0);
    out_.sparse = false;
  }
  x.index.clear();
  std::swap(x.value, out_.value);
  std::swap(x.index, out_.index);
  std::swap(x.listed, out_.listed);
  x.sparse = out_.sparse;
  out_.sparse = true;

  // L transposed, in row space.
  sparse = x.sparse && x.index.size() < kHyperLimit * m_;
  if (sparse) {
    start_.clear();
    for (int i : x.index) start_.push_back(step_of_row_[i]);
    sparse = reach(start_, false, [&](int k, auto&& visit) {
      for (int q = lt_start_[k]; q < lt_start_[k + 1]; ++q) visit(lt_step_[q]);
    });
  }
  if (sparse) {
    for (int k : order_) {
      const double w = x.value[pivot_row_[k]];
      if (w == 0.0) continue;
      for (int q = lt_start_[k]; q < lt_start_[k + 1]; ++q) x.add(pivot_row_[lt_step_[q]], -lt_value_[q] * w);
    }
  } else {
    auto& w = x.value;
    for (int k = m_ - 1; k >= 0; --k) {
      double s = 0.0;
      for (int q = l_start_[k]; q < l_start_[k + 1]; ++q) s += l_value_[q] * w[l_index_[q]];
      w[pivot_row_[k]] -= s;
    }
    x.reindex();
  }
}

void BasisFactor::update(int position, const HVector& alpha) {
  eta_pivot_.push_back(position);
  eta_diag_.push_back(alpha.value[position]);
  auto add = [&](int i) {
    if (i == position || std::abs(alpha.value[i]) < kDropTol) return;
    eta_index_.push_back(i);
    eta_value_.push_back(alpha.value[i]);
  };
  if (alpha.sparse) {
    for (int i : alpha.index) add(i);
  } else {
    for (int i = 0; i < m_; ++i) add(i);
  }
  eta_start_.push_back(static_cast<int>(eta_index_.size()));
}

}  // namespace tsagg::solve

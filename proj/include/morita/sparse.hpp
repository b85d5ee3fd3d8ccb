#pragma once

#include <algorithm>
#include <utility>

#include "morita/matrix.hpp"
#include "morita/rational.hpp"

namespace morita {

/// Sparse exact vector: (index, value) pairs, strictly increasing indices,
/// no explicit zeros. Internal substrate for the large coequalizer and
/// intertwiner computations; the public surface stays on RatMatrix.
using SparseVec = std::vector<std::pair<int, Rat>>;

inline void sparse_normalize(SparseVec& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec out;
  out.reserve(v.size());
  for (auto& [i, x] : v) {
    if (!out.empty() && out.back().first == i) {
      out.back().second += x;
    } else {
      out.emplace_back(i, x);
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const auto& p) { return p.second == 0; }), out.end());
  v = std::move(out);
}

/// a += s * b, both sorted sparse.
inline void sparse_axpy(SparseVec& a, const Rat& s, const SparseVec& b) {
  if (s == 0 || b.empty()) return;
  SparseVec out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j >= b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i >= a.size() || b[j].first < a[i].first) {
      Rat val = s * b[j].second;
      if (val != 0) out.emplace_back(b[j].first, std::move(val));
      ++j;
    } else {
      Rat val = a[i].second + s * b[j].second;
      if (val != 0) out.emplace_back(a[i].first, std::move(val));
      ++i;
      ++j;
    }
  }
  a = std::move(out);
}

inline void sparse_scale(SparseVec& a, const Rat& s) {
  for (auto& [i, x] : a) x *= s;
}

inline Vec sparse_to_dense(const SparseVec& v, int n) {
  Vec out(n, Rat(0));
  for (const auto& [i, x] : v) out[i] = x;
  return out;
}

inline SparseVec sparse_from_dense(const Vec& v) {
  SparseVec out;
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) out.emplace_back(static_cast<int>(i), v[i]);
  return out;
}

/// Incremental sparse row-echelon structure over Q^ncols. Rows are kept
/// reduced against earlier pivots on insertion; finalize() back-eliminates
/// to full reduced echelon form. Pivot choice is the leading index, so the
/// result is deterministic in insertion order.
class SparseEchelon {
 public:
  explicit SparseEchelon(int ncols) : ncols_(ncols), row_of_pivot_(ncols, -1) {}

  int ncols() const { return ncols_; }
  int rank() const { return static_cast<int>(rows_.size()); }

  /// Reduces v against the current rows; if a nonzero remainder survives it
  /// becomes a new row (normalized to leading coefficient 1) and the row
  /// index is returned, otherwise -1.
  int insert(SparseVec v) {
    reduce(v);
    if (v.empty()) return -1;
    Rat inv = Rat(1) / v.front().second;
    if (inv != 1) sparse_scale(v, inv);
    int pivot = v.front().first;
    rows_.push_back(std::move(v));
    int idx = static_cast<int>(rows_.size()) - 1;
    row_of_pivot_[pivot] = idx;
    finalized_ = false;
    return idx;
  }

  /// Reduces v in place against the stored rows.
  void reduce(SparseVec& v) const {
    size_t cursor = 0;
    while (cursor < v.size()) {
      int col = v[cursor].first;
      int r = row_of_pivot_[col];
      if (r < 0) {
        ++cursor;
        continue;
      }
      Rat factor = -v[cursor].second;
      sparse_axpy(v, factor, rows_[r]);
      // The pivot entry cancelled exactly; indices before cursor are
      // untouched because stored rows start at their pivot.
    }
  }

  bool contains(SparseVec v) const {
    reduce(v);
    return v.empty();
  }

  /// Back-eliminates so every pivot column appears in exactly one row.
  void finalize() {
    if (finalized_) return;
    std::vector<int> order;
    order.reserve(rows_.size());
    for (int c = 0; c < ncols_; ++c)
      if (row_of_pivot_[c] >= 0) order.push_back(row_of_pivot_[c]);
    // Eliminate later pivots from earlier rows, working right to left.
    for (int k = static_cast<int>(order.size()) - 1; k >= 0; --k) {
      SparseVec& row = rows_[order[k]];
      SparseVec reduced;
      reduced.reserve(row.size());
      reduced.push_back(row.front());
      SparseVec tail(row.begin() + 1, row.end());
      size_t cursor = 0;
      while (cursor < tail.size()) {
        int col = tail[cursor].first;
        int r = row_of_pivot_[col];
        if (r < 0) {
          ++cursor;
          continue;
        }
        sparse_axpy(tail, -tail[cursor].second, rows_[r]);
      }
      for (auto& p : tail) reduced.push_back(std::move(p));
      row = std::move(reduced);
    }
    finalized_ = true;
  }

  std::vector<int> pivot_cols() const {
    std::vector<int> out;
    for (int c = 0; c < ncols_; ++c)
      if (row_of_pivot_[c] >= 0) out.push_back(c);
    return out;
  }

  std::vector<int> free_cols() const {
    std::vector<int> out;
    for (int c = 0; c < ncols_; ++c)
      if (row_of_pivot_[c] < 0) out.push_back(c);
    return out;
  }

  const SparseVec& row_for_pivot(int pivot_col) const { return rows_[row_of_pivot_[pivot_col]]; }
  int row_index_of_pivot(int pivot_col) const { return row_of_pivot_[pivot_col]; }

  /// Quotient presentation of Q^ncols by the row space: projection onto the
  /// free coordinates after reduction, section = inclusion of free
  /// coordinates. Requires finalize() first.
  QuotientPresentation quotient() const {
    std::vector<int> frees = free_cols();
    int q = static_cast<int>(frees.size());
    RatMatrix projection(q, ncols_);
    std::vector<int> free_index(ncols_, -1);
    for (int j = 0; j < q; ++j) free_index[frees[j]] = j;
    for (int j = 0; j < q; ++j) projection.at(j, frees[j]) = 1;
    for (int c = 0; c < ncols_; ++c) {
      int r = row_of_pivot_[c];
      if (r < 0) continue;
      for (const auto& [col, val] : rows_[r]) {
        if (col == c) continue;
        int fj = free_index[col];
        if (fj >= 0) projection.at(fj, c) = -val;
      }
    }
    RatMatrix section(ncols_, q);
    for (int j = 0; j < q; ++j) section.at(frees[j], j) = 1;
    return QuotientPresentation{ncols_, std::move(projection), std::move(section)};
  }

  /// Kernel basis of the linear system whose rows were inserted, i.e. of the
  /// matrix with these rows. Requires finalize() first.
  std::vector<Vec> kernel_basis() const {
    std::vector<int> frees = free_cols();
    std::vector<Vec> out;
    out.reserve(frees.size());
    for (int f : frees) {
      Vec v(ncols_, Rat(0));
      v[f] = 1;
      for (int c = 0; c < ncols_; ++c) {
        int r = row_of_pivot_[c];
        if (r < 0) continue;
        for (const auto& [col, val] : rows_[r]) {
          if (col == f) v[c] = -val;
        }
      }
      out.push_back(std::move(v));
    }
    return out;
  }

  /// Applies the quotient projection to a sparse vector without
  /// materializing the projection matrix.
  Vec project(SparseVec v) const {
    reduce(v);
    std::vector<int> frees = free_cols();
    std::vector<int> free_index(ncols_, -1);
    for (size_t j = 0; j < frees.size(); ++j) free_index[frees[j]] = static_cast<int>(j);
    Vec out(frees.size(), Rat(0));
    for (const auto& [i, x] : v) {
      int fj = free_index[i];
      if (fj >= 0) out[fj] = x;
    }
    return out;
  }

 private:
  int ncols_;
  std::vector<SparseVec> rows_;
  std::vector<int> row_of_pivot_;
  bool finalized_ = false;
};

/// Kernel basis of a sparse linear system given by row generators.
inline std::vector<Vec> sparse_kernel(int ncols, const std::vector<SparseVec>& rows) {
  SparseEchelon ech(ncols);
  for (const auto& r : rows) ech.insert(r);
  ech.finalize();
  return ech.kernel_basis();
}

}  // namespace morita

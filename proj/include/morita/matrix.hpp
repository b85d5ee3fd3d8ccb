#pragma once

#include <algorithm>
#include <optional>
#include <utility>

#include "morita/rational.hpp"

namespace morita {

/// Dense exact rational matrix, row-major. The universal numeric substrate:
/// every witness this library emits is ultimately one of these.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(int rows, int cols) : rows_(rows), cols_(cols), entries_(static_cast<size_t>(rows) * cols, Rat(0)) {}
  RatMatrix(int rows, int cols, Vec entries) : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != static_cast<size_t>(rows_) * cols_)
      throw InputError("matrix entry count does not match rows*cols");
  }

  static RatMatrix identity(int n) {
    RatMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static RatMatrix row_vector(const Vec& v) { return RatMatrix(1, static_cast<int>(v.size()), v); }
  static RatMatrix col_vector(const Vec& v) { return RatMatrix(static_cast<int>(v.size()), 1, v); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rat& at(int r, int c) { return entries_[static_cast<size_t>(r) * cols_ + c]; }
  const Rat& at(int r, int c) const { return entries_[static_cast<size_t>(r) * cols_ + c]; }

  const Vec& entries() const { return entries_; }

  Vec row(int r) const {
    Vec out(cols_);
    for (int c = 0; c < cols_; ++c) out[c] = at(r, c);
    return out;
  }

  Vec col(int c) const {
    Vec out(rows_);
    for (int r = 0; r < rows_; ++r) out[r] = at(r, c);
    return out;
  }

  bool is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Rat& x) { return x == 0; });
  }

  friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }
  friend bool operator!=(const RatMatrix& a, const RatMatrix& b) { return !(a == b); }

  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols_ != b.rows_) throw InputError("matrix product dimension mismatch");
    RatMatrix out(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const Rat& aik = a.at(i, k);
        if (aik == 0) continue;
        for (int j = 0; j < b.cols_; ++j) {
          const Rat& bkj = b.at(k, j);
          if (bkj != 0) out.at(i, j) += aik * bkj;
        }
      }
    return out;
  }

  friend RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InputError("matrix sum dimension mismatch");
    RatMatrix out = a;
    for (size_t i = 0; i < out.entries_.size(); ++i) out.entries_[i] += b.entries_[i];
    return out;
  }

  friend RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InputError("matrix difference dimension mismatch");
    RatMatrix out = a;
    for (size_t i = 0; i < out.entries_.size(); ++i) out.entries_[i] -= b.entries_[i];
    return out;
  }

  friend RatMatrix operator*(const Rat& s, const RatMatrix& a) {
    RatMatrix out = a;
    for (auto& e : out.entries_) e *= s;
    return out;
  }

  Vec apply(const Vec& v) const {
    if (static_cast<int>(v.size()) != cols_) throw InputError("matrix-vector dimension mismatch");
    Vec out(rows_, Rat(0));
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if (at(i, j) != 0 && v[j] != 0) out[i] += at(i, j) * v[j];
    return out;
  }

  RatMatrix transpose() const {
    RatMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
    return out;
  }

  RatMatrix hstack(const RatMatrix& b) const {
    if (rows_ != b.rows_) throw InputError("hstack row mismatch");
    RatMatrix out(rows_, cols_ + b.cols_);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) out.at(i, j) = at(i, j);
      for (int j = 0; j < b.cols_; ++j) out.at(i, cols_ + j) = b.at(i, j);
    }
    return out;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  Vec entries_;
};

/// A linear subspace of Q^ambient given by an independent column basis.
struct Subspace {
  int ambient_dim = 0;
  RatMatrix basis;  // ambient_dim x dim, columns are basis vectors

  int dim() const { return basis.cols(); }
};

/// A quotient Q^ambient -> Q^q presented by a surjective projection and a
/// section with projection * section = identity.
struct QuotientPresentation {
  int ambient_dim = 0;
  RatMatrix projection;  // q x ambient_dim
  RatMatrix section;     // ambient_dim x q

  int dim() const { return projection.rows(); }
};

struct RrefResult {
  RatMatrix matrix;
  std::vector<int> pivots;  // strictly increasing pivot column indices
};

/// Reduced row-echelon form with deterministic pivoting: for each column in
/// order, the first not-yet-used row with a nonzero entry becomes the pivot.
inline RrefResult rref(const RatMatrix& m) {
  RatMatrix a = m;
  std::vector<int> pivots;
  int lead = 0;
  for (int col = 0; col < a.cols() && lead < a.rows(); ++col) {
    int piv = -1;
    for (int r = lead; r < a.rows(); ++r) {
      if (a.at(r, col) != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != lead) {
      for (int c = 0; c < a.cols(); ++c) std::swap(a.at(piv, c), a.at(lead, c));
    }
    Rat inv = Rat(1) / a.at(lead, col);
    for (int c = 0; c < a.cols(); ++c) a.at(lead, c) *= inv;
    for (int r = 0; r < a.rows(); ++r) {
      if (r == lead) continue;
      Rat f = a.at(r, col);
      if (f == 0) continue;
      for (int c = 0; c < a.cols(); ++c) a.at(r, c) -= f * a.at(lead, c);
    }
    pivots.push_back(col);
    ++lead;
  }
  return {std::move(a), std::move(pivots)};
}

inline int rank(const RatMatrix& m) { return static_cast<int>(rref(m).pivots.size()); }

/// Column basis of {v : m v = 0}; the kernel as an exact subspace.
inline Subspace kernel(const RatMatrix& m) {
  RrefResult r = rref(m);
  std::vector<int> free_cols;
  {
    size_t p = 0;
    for (int c = 0; c < m.cols(); ++c) {
      if (p < r.pivots.size() && r.pivots[p] == c) {
        ++p;
      } else {
        free_cols.push_back(c);
      }
    }
  }
  RatMatrix basis(m.cols(), static_cast<int>(free_cols.size()));
  for (size_t j = 0; j < free_cols.size(); ++j) {
    int f = free_cols[j];
    basis.at(f, static_cast<int>(j)) = 1;
    for (size_t p = 0; p < r.pivots.size(); ++p) {
      basis.at(r.pivots[p], static_cast<int>(j)) = -r.matrix.at(static_cast<int>(p), f);
    }
  }
  return Subspace{m.cols(), std::move(basis)};
}

/// Solves m x = b exactly. Returns nothing iff b is not in the image of m.
/// Free variables are set to zero, so the output is deterministic.
inline std::optional<Vec> solve(const RatMatrix& m, const Vec& b) {
  if (static_cast<int>(b.size()) != m.rows()) throw InputError("solve: rhs length does not match row count");
  RatMatrix aug = m.hstack(RatMatrix::col_vector(b));
  RrefResult r = rref(aug);
  // A pivot in the appended column certifies inconsistency.
  if (!r.pivots.empty() && r.pivots.back() == m.cols()) return std::nullopt;
  Vec x(m.cols(), Rat(0));
  for (size_t p = 0; p < r.pivots.size(); ++p) {
    x[r.pivots[p]] = r.matrix.at(static_cast<int>(p), m.cols());
  }
  return x;
}

/// Presents Q^rows(m) / image(m). The section embeds the non-pivot
/// coordinates of the defining relations, which makes output canonical.
inline QuotientPresentation cokernel(const RatMatrix& m) {
  // Row-reduce the transpose: its row space is the image of m.
  RrefResult r = rref(m.transpose());
  int n = m.rows();
  int rk = static_cast<int>(r.pivots.size());
  std::vector<int> free_cols;
  {
    size_t p = 0;
    for (int c = 0; c < n; ++c) {
      if (p < r.pivots.size() && r.pivots[p] == c) {
        ++p;
      } else {
        free_cols.push_back(c);
      }
    }
  }
  int q = n - rk;
  RatMatrix projection(q, n);
  for (int j = 0; j < q; ++j) {
    projection.at(j, free_cols[j]) = 1;
    // Reducing v by the image's rref rows replaces v[free] with
    // v[free] - sum_k v[pivot_k] * row_k[free].
    for (int k = 0; k < rk; ++k) {
      projection.at(j, r.pivots[k]) = -r.matrix.at(k, free_cols[j]);
    }
  }
  RatMatrix section(n, q);
  for (int j = 0; j < q; ++j) section.at(free_cols[j], j) = 1;
  return QuotientPresentation{n, std::move(projection), std::move(section)};
}

/// Exact inverse, or nothing when the matrix is singular.
inline std::optional<RatMatrix> invert(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw InputError("invert: matrix not square");
  int n = m.rows();
  RatMatrix aug = m.hstack(RatMatrix::identity(n));
  RrefResult r = rref(aug);
  if (static_cast<int>(r.pivots.size()) != n || (n > 0 && r.pivots.back() != n - 1)) return std::nullopt;
  RatMatrix inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.at(i, j) = r.matrix.at(i, n + j);
  return inv;
}

inline Rat determinant(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw InputError("determinant: matrix not square");
  RatMatrix a = m;
  int n = m.rows();
  Rat det(1);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (a.at(r, col) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return Rat(0);
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(a.at(piv, c), a.at(col, c));
      det = -det;
    }
    det *= a.at(col, col);
    Rat inv = Rat(1) / a.at(col, col);
    for (int r = col + 1; r < n; ++r) {
      Rat f = a.at(r, col) * inv;
      if (f == 0) continue;
      for (int c = col; c < n; ++c) a.at(r, c) -= f * a.at(col, c);
    }
  }
  return det;
}

}  // namespace morita

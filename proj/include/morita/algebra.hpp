#pragma once

#include <memory>
#include <string>

#include "morita/sparse.hpp"

namespace morita {

/// Bilinear structure data c[i][j] -> sparse output vector, stored sparsely
/// so tensor-product algebras of a few hundred dimensions stay cheap.
class StructureTensor {
 public:
  StructureTensor() = default;
  StructureTensor(int left, int right, int out) : left_(left), right_(right), out_(out), data_(static_cast<size_t>(left) * right) {}

  int left_dim() const { return left_; }
  int right_dim() const { return right_; }
  int out_dim() const { return out_; }

  SparseVec& at(int i, int j) { return data_[static_cast<size_t>(i) * right_ + j]; }
  const SparseVec& at(int i, int j) const { return data_[static_cast<size_t>(i) * right_ + j]; }

  /// Evaluates the bilinear map on dense inputs.
  Vec eval(const Vec& x, const Vec& y) const {
    Vec out(out_, Rat(0));
    for (int i = 0; i < left_; ++i) {
      if (x[i] == 0) continue;
      for (int j = 0; j < right_; ++j) {
        if (y[j] == 0) continue;
        Rat f = x[i] * y[j];
        for (const auto& [k, c] : at(i, j)) out[k] += f * c;
      }
    }
    return out;
  }

  Vec eval_basis(int i, int j) const { return sparse_to_dense(at(i, j), out_); }

  /// Matrix of y -> eval(e_i, y).
  RatMatrix left_operator(int i) const {
    RatMatrix m(out_, right_);
    for (int j = 0; j < right_; ++j)
      for (const auto& [k, c] : at(i, j)) m.at(k, j) = c;
    return m;
  }

  /// Matrix of x -> eval(x, e_j).
  RatMatrix right_operator(int j) const {
    RatMatrix m(out_, left_);
    for (int i = 0; i < left_; ++i)
      for (const auto& [k, c] : at(i, j)) m.at(k, i) = c;
    return m;
  }

  friend bool operator==(const StructureTensor& a, const StructureTensor& b) {
    return a.left_ == b.left_ && a.right_ == b.right_ && a.out_ == b.out_ && a.data_ == b.data_;
  }

 private:
  int left_ = 0, right_ = 0, out_ = 0;
  std::vector<SparseVec> data_;
};

namespace detail {
struct AlgebraImpl {
  int dim = 0;
  StructureTensor mul;     // e_i * e_j
  Vec unit;                // coordinates of 1
  std::vector<Vec> gens;   // unital algebra generators (small set)
  std::string name;
};
}  // namespace detail

/// Finite-dimensional unital associative Q-algebra given by structure
/// constants on a fixed ordered basis. Immutable and cheaply copyable.
class Algebra {
 public:
  Algebra() = default;

  int dim() const { return impl_->dim; }
  const StructureTensor& mul() const { return impl_->mul; }
  const Vec& unit() const { return impl_->unit; }
  const std::vector<Vec>& generators() const { return impl_->gens; }
  const std::string& name() const { return impl_->name; }

  Vec multiply(const Vec& x, const Vec& y) const { return impl_->mul.eval(x, y); }

  Vec basis_vector(int i) const {
    Vec v(dim(), Rat(0));
    v[i] = 1;
    return v;
  }

  friend bool operator==(const Algebra& a, const Algebra& b) {
    if (a.impl_ == b.impl_) return true;
    return a.impl_->dim == b.impl_->dim && a.impl_->unit == b.impl_->unit && a.impl_->mul == b.impl_->mul;
  }
  friend bool operator!=(const Algebra& a, const Algebra& b) { return !(a == b); }

  static Algebra from_impl(detail::AlgebraImpl impl) {
    Algebra a;
    a.impl_ = std::make_shared<const detail::AlgebraImpl>(std::move(impl));
    return a;
  }

 private:
  std::shared_ptr<const detail::AlgebraImpl> impl_;
};

/// An element of a named algebra, used for returned witnesses such as the
/// separability idempotent.
struct AlgebraElement {
  Algebra algebra;
  Vec coords;
};

namespace detail {

/// Greedy unital generating set: walk the basis, keep every vector not yet
/// in the generated subalgebra. Intended for desk-scale algebras; tensor
/// products combine their factors' generators instead.
inline std::vector<Vec> compute_generators(int dim, const StructureTensor& mul, const Vec& unit) {
  std::vector<Vec> gens;
  SparseEchelon span(dim);
  std::vector<Vec> span_vecs;
  auto add_to_span = [&](const Vec& v) -> bool {
    if (span.insert(sparse_from_dense(v)) >= 0) {
      span_vecs.push_back(v);
      return true;
    }
    return false;
  };
  add_to_span(unit);
  for (int i = 0; i < dim && span.rank() < dim; ++i) {
    Vec e(dim, Rat(0));
    e[i] = 1;
    if (span.contains(sparse_from_dense(e))) continue;
    gens.push_back(e);
    add_to_span(e);
    // Close under multiplication until stable.
    bool grew = true;
    while (grew && span.rank() < dim) {
      grew = false;
      size_t count = span_vecs.size();
      for (size_t a = 0; a < count; ++a)
        for (size_t b = 0; b < count; ++b) {
          Vec prod = mul.eval(span_vecs[a], span_vecs[b]);
          if (add_to_span(prod)) grew = true;
        }
    }
  }
  return gens;
}

}  // namespace detail

/// Validates and constructs an algebra. Throws ValidationError naming the
/// first failing basis triple or unit axiom.
inline Algebra make_algebra(int dim, StructureTensor mul, Vec unit, std::string name = "") {
  if (mul.left_dim() != dim || mul.right_dim() != dim || mul.out_dim() != dim)
    throw InputError("algebra structure tensor dimensions inconsistent");
  if (static_cast<int>(unit.size()) != dim) throw InputError("algebra unit vector has wrong length");
  for (int i = 0; i < dim; ++i) {
    Vec e(dim, Rat(0));
    e[i] = 1;
    Vec left = mul.eval(unit, e);
    if (left != e) throw ValidationError("unitality fails: 1*e_" + std::to_string(i) + " != e_" + std::to_string(i) + (name.empty() ? "" : " in " + name));
    Vec right = mul.eval(e, unit);
    if (right != e) throw ValidationError("unitality fails: e_" + std::to_string(i) + "*1 != e_" + std::to_string(i) + (name.empty() ? "" : " in " + name));
  }
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Vec eij = mul.eval_basis(i, j);
      for (int l = 0; l < dim; ++l) {
        Vec el(dim, Rat(0));
        el[l] = 1;
        Vec lhs = mul.eval(eij, el);
        Vec ejl = mul.eval_basis(j, l);
        Vec ei(dim, Rat(0));
        ei[i] = 1;
        Vec rhs = mul.eval(ei, ejl);
        if (lhs != rhs)
          throw ValidationError("associativity fails on basis triple (" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(l) + ")" + (name.empty() ? "" : " in " + name));
      }
    }
  detail::AlgebraImpl impl;
  impl.dim = dim;
  impl.mul = std::move(mul);
  impl.unit = std::move(unit);
  impl.name = std::move(name);
  impl.gens = detail::compute_generators(impl.dim, impl.mul, impl.unit);
  return Algebra::from_impl(std::move(impl));
}

/// Trusted constructor for algebras produced by structure-preserving
/// operations (opposite, tensor); skips the triple re-validation.
inline Algebra make_algebra_unchecked(int dim, StructureTensor mul, Vec unit, std::vector<Vec> gens, std::string name = "") {
  detail::AlgebraImpl impl;
  impl.dim = dim;
  impl.mul = std::move(mul);
  impl.unit = std::move(unit);
  impl.gens = std::move(gens);
  impl.name = std::move(name);
  return Algebra::from_impl(std::move(impl));
}

/// The opposite algebra: same space, multiplication arguments swapped.
inline Algebra opposite(const Algebra& a) {
  int n = a.dim();
  StructureTensor mul(n, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) mul.at(i, j) = a.mul().at(j, i);
  return make_algebra_unchecked(n, std::move(mul), a.unit(), a.generators(), a.name().empty() ? "" : a.name() + "^op");
}

/// Tensor product algebra on basis e_i (x) f_j |-> index i*dim(b)+j.
inline Algebra tensor(const Algebra& a, const Algebra& b) {
  int na = a.dim(), nb = b.dim();
  int n = na * nb;
  StructureTensor mul(n, n, n);
  for (int i1 = 0; i1 < na; ++i1)
    for (int j1 = 0; j1 < nb; ++j1)
      for (int i2 = 0; i2 < na; ++i2)
        for (int j2 = 0; j2 < nb; ++j2) {
          SparseVec out;
          for (const auto& [ka, ca] : a.mul().at(i1, i2))
            for (const auto& [kb, cb] : b.mul().at(j1, j2)) {
              out.emplace_back(ka * nb + kb, ca * cb);
            }
          sparse_normalize(out);
          mul.at(i1 * nb + j1, i2 * nb + j2) = std::move(out);
        }
  Vec unit(n, Rat(0));
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      Rat v = a.unit()[i] * b.unit()[j];
      if (v != 0) unit[i * nb + j] = v;
    }
  // a (x) 1 and 1 (x) b together generate.
  std::vector<Vec> gens;
  for (const auto& g : a.generators()) {
    Vec v(n, Rat(0));
    for (int i = 0; i < na; ++i)
      if (g[i] != 0)
        for (int j = 0; j < nb; ++j)
          if (b.unit()[j] != 0) v[i * nb + j] = g[i] * b.unit()[j];
    gens.push_back(std::move(v));
  }
  for (const auto& g : b.generators()) {
    Vec v(n, Rat(0));
    for (int j = 0; j < nb; ++j)
      if (g[j] != 0)
        for (int i = 0; i < na; ++i)
          if (a.unit()[i] != 0) v[i * nb + j] = a.unit()[i] * g[j];
    gens.push_back(std::move(v));
  }
  std::string name;
  if (!a.name().empty() && !b.name().empty()) name = a.name() + "(x)" + b.name();
  return make_algebra_unchecked(n, std::move(mul), std::move(unit), std::move(gens), std::move(name));
}

inline bool is_commutative(const Algebra& a) {
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i + 1; j < a.dim(); ++j)
      if (!(a.mul().at(i, j) == a.mul().at(j, i))) return false;
  return true;
}

/// Center Z(A): solution space of [z, e_i] = 0 for every basis element.
inline Subspace center(const Algebra& a) {
  int n = a.dim();
  std::vector<SparseVec> rows;
  // Commutation with e_i, coordinate k: rows indexed over (i, k).
  for (int i = 0; i < n; ++i) {
    RatMatrix li = a.mul().left_operator(i);   // z -> e_i z
    RatMatrix ri = a.mul().right_operator(i);  // z -> z e_i
    for (int k = 0; k < n; ++k) {
      SparseVec row;
      for (int j = 0; j < n; ++j) {
        Rat v = ri.at(k, j) - li.at(k, j);
        if (v != 0) row.emplace_back(j, v);
      }
      if (!row.empty()) rows.push_back(std::move(row));
    }
  }
  std::vector<Vec> basis = sparse_kernel(n, rows);
  RatMatrix b(n, static_cast<int>(basis.size()));
  for (size_t j = 0; j < basis.size(); ++j)
    for (int i = 0; i < n; ++i) b.at(i, static_cast<int>(j)) = basis[j][i];
  return Subspace{n, std::move(b)};
}

/// Zeroth Hochschild homology A/[A,A]: cokernel of the commutator span.
inline QuotientPresentation hh0(const Algebra& a) {
  int n = a.dim();
  RatMatrix commutators(n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec c = a.mul().eval_basis(i, j);
      Vec d = a.mul().eval_basis(j, i);
      for (int k = 0; k < n; ++k) commutators.at(k, i * n + j) = c[k] - d[k];
    }
  return cokernel(commutators);
}

/// Separability idempotent: e in A (x) A^op with (x (x) 1) e = (1 (x) x) e for
/// all basis x and mu(e) = 1. Pure linear feasibility; absent iff infeasible.
/// Basis ordering of A (x) A^op is e_i (x) e_j |-> i*dim + j.
inline std::optional<AlgebraElement> separability_idempotent(const Algebra& a) {
  int n = a.dim();
  Algebra env = tensor(a, opposite(a));
  int N = n * n;
  // Stack the intertwining constraints and the multiplication constraint.
  std::vector<Vec> lhs_rows;
  Vec rhs;
  for (int x = 0; x < n; ++x) {
    // Left multiplication by (e_x (x) 1) minus left multiplication by (1 (x) e_x) in A (x) A^op.
    Vec x_left(N, Rat(0)), x_right(N, Rat(0));
    for (int j = 0; j < n; ++j) {
      if (a.unit()[j] == 0) continue;
      x_left[x * n + j] = a.unit()[j];
      x_right[j * n + x] = a.unit()[j];
    }
    RatMatrix op_l(N, N), op_r(N, N);
    for (int e = 0; e < N; ++e) {
      Vec base(N, Rat(0));
      base[e] = 1;
      Vec vl = env.multiply(x_left, base);
      Vec vr = env.multiply(x_right, base);
      for (int k = 0; k < N; ++k) {
        op_l.at(k, e) = vl[k];
        op_r.at(k, e) = vr[k];
      }
    }
    for (int k = 0; k < N; ++k) {
      Vec row(N, Rat(0));
      bool nonzero = false;
      for (int e = 0; e < N; ++e) {
        row[e] = op_l.at(k, e) - op_r.at(k, e);
        if (row[e] != 0) nonzero = true;
      }
      if (nonzero) {
        lhs_rows.push_back(std::move(row));
        rhs.push_back(Rat(0));
      }
    }
  }
  // Multiplication map mu: A (x) A^op -> A, e_i (x) e_j -> e_i e_j (product in A).
  for (int k = 0; k < n; ++k) {
    Vec row(N, Rat(0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Vec prod = a.mul().eval_basis(i, j);
        row[i * n + j] = prod[k];
      }
    lhs_rows.push_back(std::move(row));
    rhs.push_back(a.unit()[k]);
  }
  RatMatrix system(static_cast<int>(lhs_rows.size()), N);
  for (size_t r = 0; r < lhs_rows.size(); ++r)
    for (int c = 0; c < N; ++c) system.at(static_cast<int>(r), c) = lhs_rows[r][c];
  auto sol = solve(system, rhs);
  if (!sol) return std::nullopt;
  return AlgebraElement{env, *sol};
}

}  // namespace morita

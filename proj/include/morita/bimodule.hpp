#pragma once

#include <memory>
#include <string>

#include "morita/algebra.hpp"

namespace morita {

namespace detail {
struct BimoduleImpl {
  Algebra left_alg;   // A
  Algebra right_alg;  // B
  int dim = 0;
  StructureTensor left_act;   // (a, m) -> a.m
  StructureTensor right_act;  // (m, b) -> m.b
  std::optional<Vec> pointing;
  std::string name;
};
}  // namespace detail

/// An (A,B)-bimodule with explicit action tensors and an optional pointing
/// vector. Immutable, cheaply copyable, structural equality.
class Bimodule {
 public:
  Bimodule() = default;

  const Algebra& left_alg() const { return impl_->left_alg; }
  const Algebra& right_alg() const { return impl_->right_alg; }
  int dim() const { return impl_->dim; }
  const StructureTensor& left_act() const { return impl_->left_act; }
  const StructureTensor& right_act() const { return impl_->right_act; }
  bool pointed() const { return impl_->pointing.has_value(); }
  const Vec& pointing() const {
    if (!impl_->pointing) throw InputError("bimodule is not pointed");
    return *impl_->pointing;
  }
  const std::string& name() const { return impl_->name; }

  Vec act_left(const Vec& a, const Vec& m) const { return impl_->left_act.eval(a, m); }
  Vec act_right(const Vec& m, const Vec& b) const { return impl_->right_act.eval(m, b); }

  /// Matrix of m -> e_a . m
  RatMatrix left_operator(int a) const { return impl_->left_act.left_operator(a); }
  /// Matrix of m -> m . e_b
  RatMatrix right_operator(int b) const { return impl_->right_act.right_operator(b); }

  /// Matrix of m -> a . m for a dense algebra element.
  RatMatrix left_operator_of(const Vec& a) const {
    RatMatrix out(dim(), dim());
    for (int i = 0; i < left_alg().dim(); ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < dim(); ++j)
        for (const auto& [k, c] : impl_->left_act.at(i, j)) out.at(k, j) += a[i] * c;
    }
    return out;
  }

  RatMatrix right_operator_of(const Vec& b) const {
    RatMatrix out(dim(), dim());
    for (int i = 0; i < right_alg().dim(); ++i) {
      if (b[i] == 0) continue;
      for (int j = 0; j < dim(); ++j)
        for (const auto& [k, c] : impl_->right_act.at(j, i)) out.at(k, j) += b[i] * c;
    }
    return out;
  }

  Bimodule with_pointing(Vec p) const {
    detail::BimoduleImpl impl = *impl_;
    if (static_cast<int>(p.size()) != impl.dim) throw InputError("pointing vector has wrong length");
    impl.pointing = std::move(p);
    return from_impl(std::move(impl));
  }

  Bimodule without_pointing() const {
    detail::BimoduleImpl impl = *impl_;
    impl.pointing.reset();
    return from_impl(std::move(impl));
  }

  friend bool operator==(const Bimodule& a, const Bimodule& b) {
    if (a.impl_ == b.impl_) return true;
    return a.impl_->dim == b.impl_->dim && a.impl_->left_alg == b.impl_->left_alg &&
           a.impl_->right_alg == b.impl_->right_alg && a.impl_->left_act == b.impl_->left_act &&
           a.impl_->right_act == b.impl_->right_act && a.impl_->pointing == b.impl_->pointing;
  }
  friend bool operator!=(const Bimodule& a, const Bimodule& b) { return !(a == b); }

  static Bimodule from_impl(detail::BimoduleImpl impl) {
    Bimodule m;
    m.impl_ = std::make_shared<const detail::BimoduleImpl>(std::move(impl));
    return m;
  }

 private:
  std::shared_ptr<const detail::BimoduleImpl> impl_;
};

enum class MapSide { Both, LeftOnly, RightOnly };

/// A linear map between bimodules, with the scope on which it is required
/// to intertwine (pointing-induced maps are one-sided module maps).
struct BimoduleMap {
  Bimodule source;
  Bimodule target;
  RatMatrix matrix;
  MapSide side = MapSide::Both;
  bool pointed = false;  // when set, matrix . pointing(source) = pointing(target)
};

/// Exact intertwiner check over every basis element (not just generators).
inline bool is_intertwiner(const BimoduleMap& f, std::string* why = nullptr) {
  const Bimodule& m = f.source;
  const Bimodule& n = f.target;
  if (f.matrix.rows() != n.dim() || f.matrix.cols() != m.dim()) {
    if (why) *why = "matrix shape mismatch";
    return false;
  }
  bool check_left = f.side != MapSide::RightOnly;
  bool check_right = f.side != MapSide::LeftOnly;
  if (check_left) {
    if (m.left_alg() != n.left_alg()) {
      if (why) *why = "left algebras differ";
      return false;
    }
    for (int a = 0; a < m.left_alg().dim(); ++a) {
      if (!(f.matrix * m.left_operator(a) == n.left_operator(a) * f.matrix)) {
        if (why) *why = "fails left equivariance at basis index " + std::to_string(a);
        return false;
      }
    }
  }
  if (check_right) {
    if (m.right_alg() != n.right_alg()) {
      if (why) *why = "right algebras differ";
      return false;
    }
    for (int b = 0; b < m.right_alg().dim(); ++b) {
      if (!(f.matrix * m.right_operator(b) == n.right_operator(b) * f.matrix)) {
        if (why) *why = "fails right equivariance at basis index " + std::to_string(b);
        return false;
      }
    }
  }
  if (f.pointed) {
    if (!m.pointed() || !n.pointed()) {
      if (why) *why = "pointed flag on unpointed bimodule";
      return false;
    }
    if (f.matrix.apply(m.pointing()) != n.pointing()) {
      if (why) *why = "fails to carry pointing to pointing";
      return false;
    }
  }
  return true;
}

/// Validates and constructs a bimodule; errors name the failing triple.
inline Bimodule make_bimodule(Algebra A, Algebra B, StructureTensor left_act, StructureTensor right_act,
                              std::optional<Vec> pointing = std::nullopt, std::string name = "") {
  int dim = left_act.out_dim();
  if (left_act.left_dim() != A.dim() || left_act.right_dim() != dim)
    throw InputError("left action tensor dimensions inconsistent");
  if (right_act.left_dim() != dim || right_act.right_dim() != B.dim() || right_act.out_dim() != dim)
    throw InputError("right action tensor dimensions inconsistent");
  if (pointing && static_cast<int>(pointing->size()) != dim) throw InputError("pointing vector has wrong length");

  auto basis = [dim](int i) {
    Vec v(dim, Rat(0));
    v[i] = 1;
    return v;
  };
  for (int j = 0; j < dim; ++j) {
    if (left_act.eval(A.unit(), basis(j)) != basis(j))
      throw ValidationError("left action not unital at module basis " + std::to_string(j));
    if (right_act.eval(basis(j), B.unit()) != basis(j))
      throw ValidationError("right action not unital at module basis " + std::to_string(j));
  }
  for (int a1 = 0; a1 < A.dim(); ++a1)
    for (int a2 = 0; a2 < A.dim(); ++a2) {
      Vec prod = A.mul().eval_basis(a1, a2);
      for (int j = 0; j < dim; ++j) {
        Vec lhs = left_act.eval(prod, basis(j));
        Vec inner = sparse_to_dense(left_act.at(a2, j), dim);
        Vec rhs2(dim, Rat(0));
        for (int k = 0; k < dim; ++k)
          if (inner[k] != 0)
            for (const auto& [l, c] : left_act.at(a1, k)) rhs2[l] += inner[k] * c;
        if (lhs != rhs2)
          throw ValidationError("left action not associative on triple (a" + std::to_string(a1) + ",a" + std::to_string(a2) + ",m" + std::to_string(j) + ")");
      }
    }
  for (int b1 = 0; b1 < B.dim(); ++b1)
    for (int b2 = 0; b2 < B.dim(); ++b2) {
      Vec prod = B.mul().eval_basis(b1, b2);
      for (int j = 0; j < dim; ++j) {
        Vec lhs(dim, Rat(0));
        for (int p = 0; p < B.dim(); ++p)
          if (prod[p] != 0)
            for (const auto& [k, c] : right_act.at(j, p)) lhs[k] += prod[p] * c;
        Vec step = sparse_to_dense(right_act.at(j, b1), dim);
        Vec rhs(dim, Rat(0));
        for (int k = 0; k < dim; ++k)
          if (step[k] != 0)
            for (const auto& [l, c] : right_act.at(k, b2)) rhs[l] += step[k] * c;
        if (lhs != rhs)
          throw ValidationError("right action not associative on triple (m" + std::to_string(j) + ",b" + std::to_string(b1) + ",b" + std::to_string(b2) + ")");
      }
    }
  for (int a = 0; a < A.dim(); ++a)
    for (int j = 0; j < dim; ++j) {
      Vec am = sparse_to_dense(left_act.at(a, j), dim);
      for (int b = 0; b < B.dim(); ++b) {
        Vec lhs(dim, Rat(0));
        for (int k = 0; k < dim; ++k)
          if (am[k] != 0)
            for (const auto& [l, c] : right_act.at(k, b)) lhs[l] += am[k] * c;
        Vec mb = sparse_to_dense(right_act.at(j, b), dim);
        Vec rhs(dim, Rat(0));
        for (int k = 0; k < dim; ++k)
          if (mb[k] != 0)
            for (const auto& [l, c] : left_act.at(a, k)) rhs[l] += mb[k] * c;
        if (lhs != rhs)
          throw ValidationError("actions do not commute on triple (a" + std::to_string(a) + ",m" + std::to_string(j) + ",b" + std::to_string(b) + ")");
      }
    }

  detail::BimoduleImpl impl;
  impl.left_alg = std::move(A);
  impl.right_alg = std::move(B);
  impl.dim = dim;
  impl.left_act = std::move(left_act);
  impl.right_act = std::move(right_act);
  impl.pointing = std::move(pointing);
  impl.name = std::move(name);
  return Bimodule::from_impl(std::move(impl));
}

/// Trusted constructor for bimodules assembled by structure-preserving
/// operations; skips triple re-validation.
inline Bimodule make_bimodule_unchecked(Algebra A, Algebra B, StructureTensor left_act, StructureTensor right_act,
                                        std::optional<Vec> pointing = std::nullopt, std::string name = "") {
  detail::BimoduleImpl impl;
  impl.left_alg = std::move(A);
  impl.right_alg = std::move(B);
  impl.dim = left_act.out_dim();
  impl.left_act = std::move(left_act);
  impl.right_act = std::move(right_act);
  impl.pointing = std::move(pointing);
  impl.name = std::move(name);
  return Bimodule::from_impl(std::move(impl));
}

/// A as an (A,A)-bimodule via multiplication, pointed by the unit element.
inline Bimodule regular(const Algebra& A) {
  return make_bimodule_unchecked(A, A, A.mul(), A.mul(), A.unit(), A.name().empty() ? "regular" : A.name());
}

/// External tensor product: M (x) N over (A (x) C, B (x) D), index
/// (i, j) -> i*dim(N)+j. The plain tensor with outer actions only.
inline Bimodule outer_tensor(const Bimodule& M, const Bimodule& N) {
  const Algebra A = tensor(M.left_alg(), N.left_alg());
  const Algebra B = tensor(M.right_alg(), N.right_alg());
  int md = M.dim(), nd = N.dim();
  int dim = md * nd;
  StructureTensor left(A.dim(), dim, dim), right(dim, B.dim(), dim);
  int la = M.left_alg().dim(), lc = N.left_alg().dim();
  for (int a = 0; a < la; ++a)
    for (int c = 0; c < lc; ++c)
      for (int i = 0; i < md; ++i)
        for (int j = 0; j < nd; ++j) {
          SparseVec out;
          for (const auto& [k1, c1] : M.left_act().at(a, i))
            for (const auto& [k2, c2] : N.left_act().at(c, j)) out.emplace_back(k1 * nd + k2, c1 * c2);
          sparse_normalize(out);
          left.at(a * lc + c, i * nd + j) = std::move(out);
        }
  int rb = M.right_alg().dim(), rd = N.right_alg().dim();
  for (int i = 0; i < md; ++i)
    for (int j = 0; j < nd; ++j)
      for (int b = 0; b < rb; ++b)
        for (int d = 0; d < rd; ++d) {
          SparseVec out;
          for (const auto& [k1, c1] : M.right_act().at(i, b))
            for (const auto& [k2, c2] : N.right_act().at(j, d)) out.emplace_back(k1 * nd + k2, c1 * c2);
          sparse_normalize(out);
          right.at(i * nd + j, b * rd + d) = std::move(out);
        }
  std::optional<Vec> pointing;
  if (M.pointed() && N.pointed()) {
    Vec p(dim, Rat(0));
    for (int i = 0; i < md; ++i)
      if (M.pointing()[i] != 0)
        for (int j = 0; j < nd; ++j)
          if (N.pointing()[j] != 0) p[i * nd + j] = M.pointing()[i] * N.pointing()[j];
    pointing = std::move(p);
  }
  return make_bimodule_unchecked(A, B, std::move(left), std::move(right), std::move(pointing));
}

/// The result of a relative tensor product: the coequalizer presentation
/// with its canonical surjection from the plain tensor and a section.
struct RelativeTensor {
  Bimodule product;       // M (x)_B N over (A, C)
  Bimodule flat;          // M (x) N with outer (A, C) actions only
  RatMatrix projection;   // product.dim x flat.dim
  RatMatrix section;      // flat.dim x product.dim, projection*section = id
  BimoduleMap surjection; // flat -> product, matrix = projection
};

/// Relative tensor product M (x)_B N: one-step coequalizer of the balancing
/// span {(m.b)(x)n - m(x)(b.n)}, with induced outer actions. When both
/// factors are pointed the result is pointed by the image of m0 (x) n0.
inline RelativeTensor relative_tensor(const Bimodule& M, const Bimodule& N) {
  if (M.right_alg() != N.left_alg())
    throw CompositionError("relative tensor requires matching middle algebra");
  const Algebra& B = M.right_alg();
  int md = M.dim(), nd = N.dim();
  int F = md * nd;

  SparseEchelon ech(F);
  // Balancing vectors for a generating set of B suffice: the balancing span
  // is linear in b and products decompose into generator instances.
  for (const Vec& g : B.generators()) {
    for (int i = 0; i < md; ++i) {
      // (e_i . g) as a sparse vector over M
      SparseVec ig;
      for (int b = 0; b < B.dim(); ++b) {
        if (g[b] == 0) continue;
        for (const auto& [k, c] : M.right_act().at(i, b)) ig.emplace_back(k, g[b] * c);
      }
      sparse_normalize(ig);
      for (int j = 0; j < nd; ++j) {
        SparseVec v;
        for (const auto& [k, c] : ig) v.emplace_back(k * nd + j, c);
        // minus e_i (x) (g . e_j)
        for (int b = 0; b < B.dim(); ++b) {
          if (g[b] == 0) continue;
          for (const auto& [k, c] : N.left_act().at(b, j)) v.emplace_back(i * nd + k, -(g[b] * c));
        }
        sparse_normalize(v);
        if (!v.empty()) ech.insert(std::move(v));
      }
    }
  }
  ech.finalize();
  QuotientPresentation q = ech.quotient();
  int qd = q.dim();
  std::vector<int> frees = ech.free_cols();

  const Algebra& A = M.left_alg();
  const Algebra& C = N.right_alg();
  StructureTensor left(A.dim(), qd, qd), right(qd, C.dim(), qd);
  for (int a = 0; a < A.dim(); ++a)
    for (int k = 0; k < qd; ++k) {
      int f = frees[k];
      int i = f / nd, j = f % nd;
      // a . (e_i (x) e_j) = (a.e_i) (x) e_j in the flat space, then project
      SparseVec v;
      for (const auto& [ki, c] : M.left_act().at(a, i)) v.emplace_back(ki * nd + j, c);
      left.at(a, k) = sparse_from_dense(ech.project(std::move(v)));
    }
  for (int c = 0; c < C.dim(); ++c)
    for (int k = 0; k < qd; ++k) {
      int f = frees[k];
      int i = f / nd, j = f % nd;
      SparseVec v;
      for (const auto& [kj, cc] : N.right_act().at(j, c)) v.emplace_back(i * nd + kj, cc);
      right.at(k, c) = sparse_from_dense(ech.project(std::move(v)));
    }

  std::optional<Vec> pointing;
  if (M.pointed() && N.pointed()) {
    SparseVec p;
    for (int i = 0; i < md; ++i)
      if (M.pointing()[i] != 0)
        for (int j = 0; j < nd; ++j)
          if (N.pointing()[j] != 0) p.emplace_back(i * nd + j, M.pointing()[i] * N.pointing()[j]);
    pointing = ech.project(std::move(p));
  }

  Bimodule product = make_bimodule_unchecked(A, C, std::move(left), std::move(right), std::move(pointing));

  // The flat outer-tensor bimodule (drop middle actions): build directly to
  // avoid constructing tensor algebras we do not need.
  StructureTensor fl(A.dim(), F, F), fr(F, C.dim(), F);
  for (int a = 0; a < A.dim(); ++a)
    for (int i = 0; i < md; ++i)
      for (int j = 0; j < nd; ++j) {
        SparseVec out;
        for (const auto& [k, c] : M.left_act().at(a, i)) out.emplace_back(k * nd + j, c);
        fl.at(a, i * nd + j) = std::move(out);
      }
  for (int i = 0; i < md; ++i)
    for (int j = 0; j < nd; ++j)
      for (int c = 0; c < C.dim(); ++c) {
        SparseVec out;
        for (const auto& [k, cc] : N.right_act().at(j, c)) out.emplace_back(i * nd + k, cc);
        fr.at(i * nd + j, c) = std::move(out);
      }
  std::optional<Vec> flat_pointing;
  if (M.pointed() && N.pointed()) {
    Vec p(F, Rat(0));
    for (int i = 0; i < md; ++i)
      for (int j = 0; j < nd; ++j) p[i * nd + j] = M.pointing()[i] * N.pointing()[j];
    flat_pointing = std::move(p);
  }
  Bimodule flat = make_bimodule_unchecked(A, C, std::move(fl), std::move(fr), std::move(flat_pointing));

  BimoduleMap surj{flat, product, q.projection, MapSide::Both, product.pointed()};
  return RelativeTensor{std::move(product), std::move(flat), q.projection, q.section, std::move(surj)};
}

/// Basis (and particular solution, when pointed) of the intertwiner space
/// Hom(M, N). Pointed map spaces are affine: particular + homogeneous basis.
struct MapSpace {
  std::optional<BimoduleMap> particular;  // set iff pointed was requested and feasible
  std::vector<BimoduleMap> basis;         // homogeneous intertwiners
  bool pointed_requested = false;
};

namespace detail {

/// Sparse rows of the intertwiner system T . L_g = L'_g . T over unknowns
/// T[k][c] (flattened k*cols + c), for all generators of both actions.
inline std::vector<SparseVec> intertwiner_rows(const Bimodule& M, const Bimodule& N) {
  int mc = M.dim(), nr = N.dim();
  auto unknown = [&](int k, int c) { return k * mc + c; };
  std::vector<SparseVec> rows;
  auto add_equivariance = [&](const RatMatrix& opM, const RatMatrix& opN) {
    // (T * opM - opN * T)[k][j] = 0
    for (int k = 0; k < nr; ++k)
      for (int j = 0; j < mc; ++j) {
        SparseVec row;
        for (int c = 0; c < mc; ++c)
          if (opM.at(c, j) != 0) row.emplace_back(unknown(k, c), opM.at(c, j));
        for (int r = 0; r < nr; ++r)
          if (opN.at(k, r) != 0) row.emplace_back(unknown(r, j), -opN.at(k, r));
        sparse_normalize(row);
        if (!row.empty()) rows.push_back(std::move(row));
      }
  };
  for (const Vec& g : M.left_alg().generators()) add_equivariance(M.left_operator_of(g), N.left_operator_of(g));
  for (const Vec& g : M.right_alg().generators()) add_equivariance(M.right_operator_of(g), N.right_operator_of(g));
  return rows;
}

inline RatMatrix unflatten(const Vec& v, int rows, int cols) {
  return RatMatrix(rows, cols, v);
}

}  // namespace detail

inline MapSpace map_space(const Bimodule& M, const Bimodule& N, bool pointed = false) {
  if (M.left_alg() != N.left_alg() || M.right_alg() != N.right_alg())
    throw InputError("map_space requires the same outer algebras");
  if (pointed && (!M.pointed() || !N.pointed()))
    throw InputError("pointed map space requires pointed bimodules");
  int unknowns = N.dim() * M.dim();
  std::vector<SparseVec> rows = detail::intertwiner_rows(M, N);

  MapSpace out;
  out.pointed_requested = pointed;
  if (!pointed) {
    for (const Vec& v : sparse_kernel(unknowns, rows)) {
      out.basis.push_back(BimoduleMap{M, N, detail::unflatten(v, N.dim(), M.dim()), MapSide::Both, false});
    }
    return out;
  }
  // Affine system: intertwining plus T . m0 = n0.
  int nrows = static_cast<int>(rows.size()) + N.dim();
  RatMatrix system(nrows, unknowns);
  Vec rhs(nrows, Rat(0));
  for (size_t r = 0; r < rows.size(); ++r)
    for (const auto& [c, val] : rows[r]) system.at(static_cast<int>(r), c) = val;
  for (int k = 0; k < N.dim(); ++k) {
    int r = static_cast<int>(rows.size()) + k;
    for (int c = 0; c < M.dim(); ++c)
      if (M.pointing()[c] != 0) system.at(r, k * M.dim() + c) = M.pointing()[c];
    rhs[r] = N.pointing()[k];
  }
  auto particular = solve(system, rhs);
  if (particular) {
    out.particular = BimoduleMap{M, N, detail::unflatten(*particular, N.dim(), M.dim()), MapSide::Both, true};
  }
  Subspace hom_kernel = kernel(system);
  for (int j = 0; j < hom_kernel.dim(); ++j) {
    out.basis.push_back(BimoduleMap{M, N, detail::unflatten(hom_kernel.basis.col(j), N.dim(), M.dim()), MapSide::Both, false});
  }
  return out;
}

/// The left-module map a -> a.m0 and the right-module map b -> m0.b induced
/// by a pointing.
inline std::pair<BimoduleMap, BimoduleMap> pointing_induced_maps(const Bimodule& M) {
  if (!M.pointed()) throw InputError("pointing_induced_maps requires a pointed bimodule");
  const Algebra& A = M.left_alg();
  const Algebra& B = M.right_alg();
  RatMatrix m0a(M.dim(), A.dim());
  for (int a = 0; a < A.dim(); ++a) {
    Vec col = M.left_operator(a).apply(M.pointing());
    for (int k = 0; k < M.dim(); ++k) m0a.at(k, a) = col[k];
  }
  RatMatrix m0b(M.dim(), B.dim());
  for (int b = 0; b < B.dim(); ++b) {
    Vec col = M.right_operator(b).apply(M.pointing());
    for (int k = 0; k < M.dim(); ++k) m0b.at(k, b) = col[k];
  }
  BimoduleMap left{regular(A), M, std::move(m0a), MapSide::LeftOnly, false};
  BimoduleMap right{regular(B), M, std::move(m0b), MapSide::RightOnly, false};
  std::string why;
  if (!is_intertwiner(left, &why)) throw ValidationError("induced left-module map invalid: " + why);
  if (!is_intertwiner(right, &why)) throw ValidationError("induced right-module map invalid: " + why);
  return {std::move(left), std::move(right)};
}

namespace detail {

/// System rows for left-A-linearity of maps M -> A with unknowns T[r][c]
/// flattened as r*dim(M)+c.
inline std::vector<SparseVec> hom_left_rows(const Bimodule& M) {
  const Algebra& A = M.left_alg();
  int ad = A.dim(), md = M.dim();
  auto unknown = [&](int r, int c) { return r * md + c; };
  std::vector<SparseVec> rows;
  for (const Vec& g : A.generators()) {
    RatMatrix actM = M.left_operator_of(g);  // m -> g.m
    RatMatrix mulA(ad, ad);                  // x -> g.x in A
    for (int x = 0; x < ad; ++x) {
      Vec prod = A.multiply(g, A.basis_vector(x));
      for (int k = 0; k < ad; ++k) mulA.at(k, x) = prod[k];
    }
    // T(g.m) = g.T(m): for each m-basis j, output coord k
    for (int k = 0; k < ad; ++k)
      for (int j = 0; j < md; ++j) {
        SparseVec row;
        for (int c = 0; c < md; ++c)
          if (actM.at(c, j) != 0) row.emplace_back(unknown(k, c), actM.at(c, j));
        for (int r = 0; r < ad; ++r)
          if (mulA.at(k, r) != 0) row.emplace_back(unknown(r, j), -mulA.at(k, r));
        sparse_normalize(row);
        if (!row.empty()) rows.push_back(std::move(row));
      }
  }
  return rows;
}

}  // namespace detail

/// The matrices of a basis of Hom_A(M,A), in the order used by
/// hom_into_left for its module basis.
inline std::vector<RatMatrix> hom_into_left_basis(const Bimodule& M) {
  int ad = M.left_alg().dim(), md = M.dim();
  int unknowns = ad * md;
  std::vector<Vec> basis = sparse_kernel(unknowns, detail::hom_left_rows(M));
  std::vector<RatMatrix> fs;
  fs.reserve(basis.size());
  for (const auto& v : basis) fs.push_back(RatMatrix(ad, md, v));
  return fs;
}

/// Hom_A(M, A) for M over (A,B): left-A-linear maps M -> A, as a
/// (B,A)-bimodule with B acting by precomposition with the right action and
/// A by postcomposition with right multiplication.
inline Bimodule hom_into_left(const Bimodule& M) {
  const Algebra& A = M.left_alg();
  const Algebra& B = M.right_alg();
  int ad = A.dim(), md = M.dim();
  int unknowns = ad * md;
  auto unknown = [&](int r, int c) { return r * md + c; };
  std::vector<SparseVec> rows = detail::hom_left_rows(M);
  SparseEchelon ech(unknowns);
  for (const auto& r : rows) ech.insert(r);
  ech.finalize();
  std::vector<Vec> basis = ech.kernel_basis();
  int h = static_cast<int>(basis.size());

  // Coordinates in this kernel basis can be read off the free columns.
  std::vector<int> frees = ech.free_cols();
  auto coords_of = [&](const Vec& v) {
    Vec out(h, Rat(0));
    for (int l = 0; l < h; ++l) out[l] = v[frees[l]];
    return out;
  };

  std::vector<RatMatrix> fs;
  fs.reserve(h);
  for (const auto& v : basis) fs.push_back(RatMatrix(ad, md, v));

  StructureTensor left(B.dim(), h, h), right(h, ad, h);
  for (int b = 0; b < B.dim(); ++b) {
    RatMatrix rb = M.right_operator(b);  // m -> m.e_b
    for (int l = 0; l < h; ++l) {
      RatMatrix img = fs[l] * rb;  // (b.f)(m) = f(m.b)
      Vec flat(unknowns, Rat(0));
      for (int r = 0; r < ad; ++r)
        for (int c = 0; c < md; ++c) flat[unknown(r, c)] = img.at(r, c);
      left.at(b, l) = sparse_from_dense(coords_of(flat));
    }
  }
  for (int a = 0; a < ad; ++a) {
    RatMatrix ra = A.mul().right_operator(a);  // x -> x.e_a
    for (int l = 0; l < h; ++l) {
      RatMatrix img = ra * fs[l];  // (f.a)(m) = f(m).a
      Vec flat(unknowns, Rat(0));
      for (int r = 0; r < ad; ++r)
        for (int c = 0; c < md; ++c) flat[unknown(r, c)] = img.at(r, c);
      right.at(l, a) = sparse_from_dense(coords_of(flat));
    }
  }
  return make_bimodule_unchecked(B, A, std::move(left), std::move(right), std::nullopt,
                                 M.name().empty() ? "" : "Hom(" + M.name() + ")");
}

/// An isomorphism witness: the forward intertwiner and its exact inverse.
struct IsoWitness {
  BimoduleMap forward;
  RatMatrix inverse;
};

namespace detail {

/// Decides whether some combination T0 + sum c_i T_i is invertible, and
/// returns one if so. det is a polynomial of degree <= n in each variable,
/// so scanning the grid {0..n}^h is a complete decision procedure over Q.
inline std::optional<RatMatrix> find_invertible_combination(const std::optional<RatMatrix>& t0,
                                                            const std::vector<RatMatrix>& ts, int n) {
  if (n == 0) return RatMatrix(0, 0);
  auto assemble = [&](const std::vector<int>& c) {
    RatMatrix m = t0 ? *t0 : RatMatrix(n, n);
    for (size_t i = 0; i < ts.size(); ++i)
      if (c[i] != 0) m = m + Rat(c[i]) * ts[i];
    return m;
  };
  size_t h = ts.size();
  if (h == 0) {
    if (!t0) return std::nullopt;
    if (determinant(*t0) != 0) return *t0;
    return std::nullopt;
  }
  // Fast probes: single basis elements and prefix sums.
  std::vector<std::vector<int>> probes;
  for (size_t i = 0; i < h; ++i) {
    std::vector<int> c(h, 0);
    c[i] = 1;
    probes.push_back(c);
  }
  {
    std::vector<int> c(h, 1);
    probes.push_back(c);
  }
  for (const auto& c : probes) {
    RatMatrix m = assemble(c);
    if (determinant(m) != 0) return m;
  }
  // Complete grid scan {0..n}^h, lexicographic, deterministic.
  std::vector<int> c(h, 0);
  while (true) {
    RatMatrix m = assemble(c);
    if (determinant(m) != 0) return m;
    size_t pos = 0;
    while (pos < h) {
      if (c[pos] < n) {
        ++c[pos];
        std::fill(c.begin(), c.begin() + static_cast<long>(pos), 0);
        break;
      }
      ++pos;
    }
    if (pos == h) break;
  }
  return std::nullopt;
}

}  // namespace detail

/// Searches for an invertible intertwiner M -> N. Returns a witness with an
/// exact two-sided inverse, or nothing when no isomorphism exists; the grid
/// scan over the intertwiner space makes the verdict exact, not heuristic.
inline std::optional<IsoWitness> iso_search(const Bimodule& M, const Bimodule& N) {
  if (M.left_alg() != N.left_alg() || M.right_alg() != N.right_alg()) return std::nullopt;
  if (M.dim() != N.dim()) return std::nullopt;
  int n = M.dim();
  if (n == 0) {
    return IsoWitness{BimoduleMap{M, N, RatMatrix(0, 0), MapSide::Both, false}, RatMatrix(0, 0)};
  }
  MapSpace hom = map_space(M, N, false);
  std::vector<RatMatrix> ts;
  ts.reserve(hom.basis.size());
  for (const auto& f : hom.basis) ts.push_back(f.matrix);
  auto found = detail::find_invertible_combination(std::nullopt, ts, n);
  if (!found) return std::nullopt;
  auto inv = invert(*found);
  return IsoWitness{BimoduleMap{M, N, *found, MapSide::Both, false}, *inv};
}

/// Pointed variant: searches the affine subspace of pointing-preserving
/// intertwiners for an invertible element.
inline std::optional<IsoWitness> iso_search_pointed(const Bimodule& M, const Bimodule& N) {
  if (M.left_alg() != N.left_alg() || M.right_alg() != N.right_alg()) return std::nullopt;
  if (M.dim() != N.dim()) return std::nullopt;
  int n = M.dim();
  MapSpace hom = map_space(M, N, true);
  if (!hom.particular) return std::nullopt;
  std::vector<RatMatrix> ts;
  for (const auto& f : hom.basis) ts.push_back(f.matrix);
  auto found = detail::find_invertible_combination(hom.particular->matrix, ts, n);
  if (!found) return std::nullopt;
  auto inv = invert(*found);
  return IsoWitness{BimoduleMap{M, N, *found, MapSide::Both, true}, *inv};
}

/// Canonical unit-law isomorphism regular(A) (x)_A M -> M, materialized as
/// an explicit matrix together with its inverse.
inline IsoWitness left_unit_iso(const RelativeTensor& rt, const Bimodule& M) {
  const Algebra& A = M.left_alg();
  int md = M.dim();
  int F = A.dim() * md;
  RatMatrix eval(md, F);
  for (int a = 0; a < A.dim(); ++a)
    for (int j = 0; j < md; ++j)
      for (const auto& [k, c] : M.left_act().at(a, j)) eval.at(k, a * md + j) = c;
  RatMatrix fwd = eval * rt.section;
  RatMatrix incl(F, md);
  for (int j = 0; j < md; ++j)
    for (int a = 0; a < A.dim(); ++a)
      if (A.unit()[a] != 0) incl.at(a * md + j, j) = A.unit()[a];
  RatMatrix inv = rt.projection * incl;
  return IsoWitness{BimoduleMap{rt.product, M, std::move(fwd), MapSide::Both, M.pointed() && rt.product.pointed()}, std::move(inv)};
}

/// Canonical unit-law isomorphism M (x)_B regular(B) -> M.
inline IsoWitness right_unit_iso(const RelativeTensor& rt, const Bimodule& M) {
  const Algebra& B = M.right_alg();
  int md = M.dim();
  int F = md * B.dim();
  RatMatrix eval(md, F);
  for (int j = 0; j < md; ++j)
    for (int b = 0; b < B.dim(); ++b)
      for (const auto& [k, c] : M.right_act().at(j, b)) eval.at(k, j * B.dim() + b) = c;
  RatMatrix fwd = eval * rt.section;
  RatMatrix incl(F, md);
  for (int j = 0; j < md; ++j)
    for (int b = 0; b < B.dim(); ++b)
      if (B.unit()[b] != 0) incl.at(j * B.dim() + b, j) = B.unit()[b];
  RatMatrix inv = rt.projection * incl;
  return IsoWitness{BimoduleMap{rt.product, M, std::move(fwd), MapSide::Both, M.pointed() && rt.product.pointed()}, std::move(inv)};
}

inline RatMatrix kron(const RatMatrix& a, const RatMatrix& b) {
  RatMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      if (a.at(i, j) == 0) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          if (b.at(k, l) != 0) out.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
    }
  return out;
}

/// Canonical reassociation (M (x)_B N) (x)_C P -> M (x)_B (N (x)_C P).
/// Both sides present the same quotient of the triple tensor, so the map is
/// projection-after-section, with the reverse composite as exact inverse.
inline IsoWitness associator(const RelativeTensor& mn, const RelativeTensor& mn_p, const RelativeTensor& np,
                             const RelativeTensor& m_np, const Bimodule& M, const Bimodule& P) {
  RatMatrix lift = kron(mn.section, RatMatrix::identity(P.dim())) * mn_p.section;
  RatMatrix drop = m_np.projection * kron(RatMatrix::identity(M.dim()), np.projection);
  RatMatrix fwd = drop * lift;
  RatMatrix lift2 = kron(RatMatrix::identity(M.dim()), np.section) * m_np.section;
  RatMatrix drop2 = mn_p.projection * kron(mn.projection, RatMatrix::identity(P.dim()));
  RatMatrix inv = drop2 * lift2;
  bool pointed = mn_p.product.pointed() && m_np.product.pointed();
  return IsoWitness{BimoduleMap{mn_p.product, m_np.product, std::move(fwd), MapSide::Both, pointed}, std::move(inv)};
}

}  // namespace morita

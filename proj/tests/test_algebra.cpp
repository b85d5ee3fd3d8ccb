#include <catch2/catch_amalgamated.hpp>

#include "morita/algebra.hpp"
#include "morita/corpus.hpp"

using namespace morita;

namespace {

/// Independent validator used as the oracle for the separability witness:
/// checks the two defining linear identities directly on the basis.
bool is_separability_idempotent(const Algebra& a, const AlgebraElement& e) {
  int n = a.dim();
  const Algebra& env = e.algebra;
  for (int x = 0; x < n; ++x) {
    Vec xl(n * n, Rat(0)), xr(n * n, Rat(0));
    for (int j = 0; j < n; ++j) {
      if (a.unit()[j] == 0) continue;
      xl[x * n + j] = a.unit()[j];
      xr[j * n + x] = a.unit()[j];
    }
    if (env.multiply(xl, e.coords) != env.multiply(xr, e.coords)) return false;
  }
  Vec mu(n, Rat(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (e.coords[i * n + j] == 0) continue;
      Vec prod = a.mul().eval_basis(i, j);
      for (int k = 0; k < n; ++k) mu[k] += e.coords[i * n + j] * prod[k];
    }
  return mu == a.unit();
}

/// Checks that p intertwines the structure tensors: p(xy) = p(x)p(y) and
/// p(1) = 1, with p invertible.
bool is_algebra_isomorphism(const Algebra& a, const Algebra& b, const RatMatrix& p) {
  if (a.dim() != b.dim() || p.rows() != b.dim() || p.cols() != a.dim()) return false;
  if (!invert(p)) return false;
  if (p.apply(a.unit()) != b.unit()) return false;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) {
      Vec lhs = p.apply(a.mul().eval_basis(i, j));
      Vec rhs = b.multiply(p.col(i), p.col(j));
      if (lhs != rhs) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("algebra validation") {
  SECTION("the ground field validates") {
    REQUIRE(corpus::rationals().dim() == 1);
  }
  SECTION("matrix units validate") {
    REQUIRE(corpus::matrices_2x2().dim() == 4);
  }
  SECTION("non-associative table is rejected with the failing triple") {
    StructureTensor bad(3, 3, 3);
    // basis: 1, u, v with u*u = v, u*v = 1, v*u = 0, v*v = 0
    // (u u) u = v u = 0 but u (u u) = u v = 1
    bad.at(0, 0) = {{0, Rat(1)}};
    bad.at(0, 1) = {{1, Rat(1)}};
    bad.at(0, 2) = {{2, Rat(1)}};
    bad.at(1, 0) = {{1, Rat(1)}};
    bad.at(2, 0) = {{2, Rat(1)}};
    bad.at(1, 1) = {{2, Rat(1)}};
    bad.at(1, 2) = {{0, Rat(1)}};
    bad.at(2, 1) = {};
    bad.at(2, 2) = {};
    Vec unit{Rat(1), Rat(0), Rat(0)};
    REQUIRE_THROWS_MATCHES(make_algebra(3, bad, unit), ValidationError,
                           Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("triple")));
  }
  SECTION("broken unit is rejected") {
    StructureTensor mul(1, 1, 1);
    mul.at(0, 0) = {{0, Rat(1)}};
    REQUIRE_THROWS_AS(make_algebra(1, mul, Vec{Rat(2)}), ValidationError);
  }
}

TEST_CASE("opposite algebra") {
  SECTION("commutative algebras are fixed") {
    Algebra c2 = corpus::group_algebra_c2();
    REQUIRE(opposite(c2) == c2);
  }
  SECTION("opposite is an involution") {
    Algebra m2 = corpus::matrices_2x2();
    REQUIRE(opposite(opposite(m2)) == m2);
  }
  SECTION("M2 opposite is transpose-isomorphic") {
    Algebra m2 = corpus::matrices_2x2();
    Algebra op = opposite(m2);
    // transpose: e11->e11, e12->e21, e21->e12, e22->e22
    RatMatrix t(4, 4);
    t.at(0, 0) = 1;
    t.at(2, 1) = 1;
    t.at(1, 2) = 1;
    t.at(3, 3) = 1;
    REQUIRE(is_algebra_isomorphism(m2, op, t));
  }
  SECTION("upper triangular flips to lower triangular table") {
    Algebra t2 = corpus::upper_triangular_2x2();
    Algebra op = opposite(t2);
    // In T2, e11*e12 = e12; in the opposite it must vanish and e12*e11 = e12.
    REQUIRE(op.mul().at(0, 1).empty());
    REQUIRE(op.mul().at(1, 0) == SparseVec{{1, Rat(1)}});
  }
}

TEST_CASE("tensor product algebra") {
  Algebra q = corpus::rationals();
  Algebra m2 = corpus::matrices_2x2();
  SECTION("tensoring with the ground field is the identity on structure") {
    Algebra t = tensor(q, m2);
    REQUIRE(t == m2);
    REQUIRE(tensor(m2, q) == m2);
  }
  SECTION("M2 (x) M2 has dimension 16 and unit I(x)I") {
    Algebra t = tensor(m2, m2);
    REQUIRE(t.dim() == 16);
    Vec expected(16, Rat(0));
    for (int i : {0, 3})
      for (int j : {0, 3}) expected[i * 4 + j] = 1;
    REQUIRE(t.unit() == expected);
  }
  SECTION("A (x) B is isomorphic to B (x) A via the swap matrix") {
    Algebra c2 = corpus::group_algebra_c2();
    Algebra ab = tensor(m2, c2);
    Algebra ba = tensor(c2, m2);
    RatMatrix swap(8, 8);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 2; ++j) swap.at(j * 4 + i, i * 2 + j) = 1;
    REQUIRE(is_algebra_isomorphism(ab, ba, swap));
  }
}

TEST_CASE("center computation") {
  SECTION("commutative algebra has full center") {
    Algebra c3 = corpus::group_algebra_c3();
    REQUIRE(center(c3).dim() == 3);
  }
  SECTION("Z(M2) is the scalars") {
    Subspace z = center(corpus::matrices_2x2());
    REQUIRE(z.dim() == 1);
    // spanned by the identity matrix
    Vec v = z.basis.col(0);
    REQUIRE(v[0] == v[3]);
    REQUIRE(v[1] == 0);
    REQUIRE(v[2] == 0);
    REQUIRE(v[0] != 0);
  }
  SECTION("Z(T2) is the scalars") {
    REQUIRE(center(corpus::upper_triangular_2x2()).dim() == 1);
  }
  SECTION("center is opposite-invariant") {
    for (const Algebra& a : corpus::standard()) {
      Subspace z1 = center(a);
      Subspace z2 = center(opposite(a));
      REQUIRE(z1.dim() == z2.dim());
      // Same subspace: each basis vector of one lies in the kernel test of the other.
      auto r1 = rref(z1.basis.transpose());
      auto r2 = rref(z2.basis.transpose());
      REQUIRE(r1.matrix == r2.matrix);
    }
  }
}

TEST_CASE("zeroth Hochschild homology") {
  SECTION("commutative algebras have full HH0") {
    for (const Algebra& a : corpus::standard()) {
      if (!is_commutative(a)) continue;
      REQUIRE(hh0(a).dim() == a.dim());
      REQUIRE(center(a).dim() == a.dim());
    }
  }
  SECTION("HH0(M2) is one-dimensional") {
    REQUIRE(hh0(corpus::matrices_2x2()).dim() == 1);
  }
  SECTION("HH0(T2) is two-dimensional") {
    REQUIRE(hh0(corpus::upper_triangular_2x2()).dim() == 2);
  }
}

TEST_CASE("separability idempotent") {
  SECTION("ground field: 1 (x) 1") {
    auto e = separability_idempotent(corpus::rationals());
    REQUIRE(e.has_value());
    REQUIRE(e->coords == Vec{Rat(1)});
  }
  SECTION("group algebra C2 is separable with a verified witness") {
    Algebra c2 = corpus::group_algebra_c2();
    auto e = separability_idempotent(c2);
    REQUIRE(e.has_value());
    REQUIRE(is_separability_idempotent(c2, *e));
  }
  SECTION("dual numbers are not separable") {
    REQUIRE_FALSE(separability_idempotent(corpus::dual_numbers()).has_value());
  }
  SECTION("every returned witness verifies") {
    for (const Algebra& a : corpus::standard()) {
      auto e = separability_idempotent(a);
      if (e) REQUIRE(is_separability_idempotent(a, *e));
    }
  }
}

TEST_CASE("commutativity detection") {
  REQUIRE(is_commutative(corpus::dual_numbers()));
  REQUIRE(is_commutative(corpus::group_algebra_c2()));
  REQUIRE_FALSE(is_commutative(corpus::matrices_2x2()));
  REQUIRE_FALSE(is_commutative(corpus::upper_triangular_2x2()));
}

TEST_CASE("generator sets generate") {
  for (const Algebra& a : corpus::standard()) {
    SparseEchelon span(a.dim());
    std::vector<Vec> vecs{a.unit()};
    span.insert(sparse_from_dense(a.unit()));
    for (const auto& g : a.generators()) {
      vecs.push_back(g);
      span.insert(sparse_from_dense(g));
    }
    bool grew = true;
    while (grew && span.rank() < a.dim()) {
      grew = false;
      size_t n = vecs.size();
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
          Vec p = a.multiply(vecs[i], vecs[j]);
          if (span.insert(sparse_from_dense(p)) >= 0) {
            vecs.push_back(p);
            grew = true;
          }
        }
    }
    REQUIRE(span.rank() == a.dim());
  }
}

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "morita/matrix.hpp"
#include "morita/sparse.hpp"

using namespace morita;

namespace {

RatMatrix random_matrix(std::mt19937& rng, int rows, int cols) {
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  RatMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.at(i, j) = Rat(num(rng), den(rng));
  return m;
}

}  // namespace

TEST_CASE("rref on frozen examples") {
  SECTION("identity is already reduced") {
    auto r = rref(RatMatrix::identity(2));
    REQUIRE(r.matrix == RatMatrix::identity(2));
    REQUIRE(r.pivots == std::vector<int>{0, 1});
  }
  SECTION("rank-1 matrix") {
    RatMatrix m(2, 2, Vec{Rat(1), Rat(2), Rat(2), Rat(4)});
    auto r = rref(m);
    RatMatrix expected(2, 2, Vec{Rat(1), Rat(2), Rat(0), Rat(0)});
    REQUIRE(r.matrix == expected);
    REQUIRE(r.pivots == std::vector<int>{0});
  }
  SECTION("zero matrix") {
    RatMatrix z(3, 3);
    auto r = rref(z);
    REQUIRE(r.matrix == z);
    REQUIRE(r.pivots.empty());
  }
}

TEST_CASE("kernel on frozen examples") {
  SECTION("identity has trivial kernel") {
    REQUIRE(kernel(RatMatrix::identity(2)).dim() == 0);
  }
  SECTION("single relation") {
    RatMatrix m(1, 2, Vec{Rat(1), Rat(1)});
    Subspace k = kernel(m);
    REQUIRE(k.dim() == 1);
    REQUIRE(k.basis.at(0, 0) == -k.basis.at(1, 0));
    REQUIRE(k.basis.at(0, 0) != 0);
  }
  SECTION("zero map has full kernel") {
    REQUIRE(kernel(RatMatrix(1, 3)).dim() == 3);
  }
}

TEST_CASE("solve on frozen examples") {
  SECTION("identity system") {
    Vec b{Rat(3, 2), Rat(-1)};
    auto x = solve(RatMatrix::identity(2), b);
    REQUIRE(x.has_value());
    REQUIRE(*x == b);
  }
  SECTION("inconsistent system has no solution") {
    RatMatrix m(2, 2, Vec{Rat(1), Rat(2), Rat(2), Rat(4)});
    REQUIRE_FALSE(solve(m, Vec{Rat(1), Rat(3)}).has_value());
  }
  SECTION("scalar division") {
    RatMatrix m(1, 1, Vec{Rat(2)});
    auto x = solve(m, Vec{Rat(1)});
    REQUIRE(x.has_value());
    REQUIRE((*x)[0] == Rat(1, 2));
  }
  SECTION("dimension mismatch is an input error") {
    REQUIRE_THROWS_AS(solve(RatMatrix::identity(2), Vec{Rat(1)}), InputError);
  }
}

TEST_CASE("cokernel on frozen examples") {
  SECTION("identity has trivial cokernel") {
    REQUIRE(cokernel(RatMatrix::identity(3)).dim() == 0);
  }
  SECTION("zero map has full cokernel with identity projection") {
    auto q = cokernel(RatMatrix(3, 2));
    REQUIRE(q.dim() == 3);
    REQUIRE(q.projection == RatMatrix::identity(3));
  }
  SECTION("column (1,1) in Q^2") {
    RatMatrix m(2, 1, Vec{Rat(1), Rat(1)});
    auto q = cokernel(m);
    REQUIRE(q.dim() == 1);
    // Projection kills the image exactly.
    Vec image = m.col(0);
    Vec projected = q.projection.apply(image);
    REQUIRE(std::all_of(projected.begin(), projected.end(), [](const Rat& r) { return r == 0; }));
  }
}

TEST_CASE("invert on frozen examples") {
  REQUIRE(*invert(RatMatrix::identity(3)) == RatMatrix::identity(3));
  RatMatrix swap(2, 2, Vec{Rat(0), Rat(1), Rat(1), Rat(0)});
  REQUIRE(*invert(swap) == swap);
  RatMatrix singular(2, 2, Vec{Rat(1), Rat(1), Rat(1), Rat(1)});
  REQUIRE_FALSE(invert(singular).has_value());
  REQUIRE_THROWS_AS(invert(RatMatrix(2, 3)), InputError);
}

TEST_CASE("exact linear algebra properties on random matrices") {
  std::mt19937 rng(20260809);
  for (int trial = 0; trial < 60; ++trial) {
    int rows = 1 + trial % 5;
    int cols = 1 + (trial * 7) % 5;
    RatMatrix m = random_matrix(rng, rows, cols);

    // rank-nullity, exactly
    Subspace k = kernel(m);
    REQUIRE(rank(m) + k.dim() == cols);

    // kernel vectors are annihilated exactly
    for (int j = 0; j < k.dim(); ++j) {
      Vec v = k.basis.col(j);
      Vec mv = m.apply(v);
      REQUIRE(std::all_of(mv.begin(), mv.end(), [](const Rat& r) { return r == 0; }));
    }

    // solve postcondition: m x = b whenever a solution is returned
    Vec target = random_matrix(rng, rows, 1).col(0);
    auto x = solve(m, target);
    if (x) {
      REQUIRE(m.apply(*x) == target);
    } else {
      // absent iff b not in the image: rank of augmented must exceed rank
      REQUIRE(rank(m.hstack(RatMatrix::col_vector(target))) == rank(m) + 1);
    }

    // cokernel: projection surjective with section, kernel(projection) = image(m)
    auto q = cokernel(m);
    REQUIRE(q.projection * q.section == RatMatrix::identity(q.dim()));
    RatMatrix killed = q.projection * m;
    REQUIRE(killed.is_zero());
    REQUIRE(rank(q.projection) == q.dim());
    REQUIRE(q.dim() == rows - rank(m));

    // rref idempotence, bit for bit
    auto r1 = rref(m);
    auto r2 = rref(r1.matrix);
    REQUIRE(r1.matrix == r2.matrix);
    REQUIRE(r1.pivots == r2.pivots);
  }
}

TEST_CASE("sparse echelon agrees with dense computations") {
  std::mt19937 rng(777);
  for (int trial = 0; trial < 40; ++trial) {
    int rows = 1 + trial % 6;
    int cols = 1 + (trial * 5) % 6;
    RatMatrix m = random_matrix(rng, rows, cols);

    SparseEchelon ech(cols);
    for (int i = 0; i < rows; ++i) ech.insert(sparse_from_dense(m.row(i)));
    REQUIRE(ech.rank() == rank(m));

    ech.finalize();
    auto kb = ech.kernel_basis();
    Subspace dk = kernel(m);
    REQUIRE(static_cast<int>(kb.size()) == dk.dim());
    for (const auto& v : kb) {
      Vec mv = m.apply(v);
      REQUIRE(std::all_of(mv.begin(), mv.end(), [](const Rat& r) { return r == 0; }));
    }

    // Quotient of Q^cols by the row space
    auto q = ech.quotient();
    REQUIRE(q.projection * q.section == RatMatrix::identity(q.dim()));
    for (int i = 0; i < rows; ++i) {
      Vec proj = q.projection.apply(m.row(i));
      REQUIRE(std::all_of(proj.begin(), proj.end(), [](const Rat& r) { return r == 0; }));
    }
    // project() agrees with the materialized projection
    for (int i = 0; i < rows; ++i) {
      Vec direct = ech.project(sparse_from_dense(m.row(i)));
      REQUIRE(direct == q.projection.apply(m.row(i)));
    }
  }
}

TEST_CASE("rational parsing and printing") {
  REQUIRE(rat_from_string("3/2") == Rat(3, 2));
  REQUIRE(rat_from_string("-7") == Rat(-7));
  REQUIRE(rat_from_string("4/6") == Rat(2, 3));
  REQUIRE(rat_to_string(Rat(-1, 2)) == "-1/2");
  REQUIRE(rat_to_string(Rat(5)) == "5/1");
  REQUIRE_THROWS_AS(rat_from_string("1/0"), InputError);
  REQUIRE_THROWS_AS(rat_from_string("abc"), InputError);
}

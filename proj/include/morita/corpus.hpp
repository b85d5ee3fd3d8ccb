#pragma once

#include "morita/algebra.hpp"
#include "morita/bimodule.hpp"

namespace morita::corpus {

/// The ground field as a one-dimensional algebra.
inline Algebra rationals() {
  StructureTensor mul(1, 1, 1);
  mul.at(0, 0) = {{0, Rat(1)}};
  return make_algebra(1, std::move(mul), Vec{Rat(1)}, "Q");
}

/// Group algebra Q[C_n] on basis 1, g, ..., g^{n-1}.
inline Algebra cyclic_group_algebra(int order, std::string name) {
  StructureTensor mul(order, order, order);
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) mul.at(i, j) = {{(i + j) % order, Rat(1)}};
  Vec unit(order, Rat(0));
  unit[0] = 1;
  return make_algebra(order, std::move(mul), std::move(unit), std::move(name));
}

inline Algebra group_algebra_c2() { return cyclic_group_algebra(2, "Q[C2]"); }
inline Algebra group_algebra_c3() { return cyclic_group_algebra(3, "Q[C3]"); }

/// Dual numbers Q[x]/(x^2) on basis 1, x.
inline Algebra dual_numbers() {
  StructureTensor mul(2, 2, 2);
  mul.at(0, 0) = {{0, Rat(1)}};
  mul.at(0, 1) = {{1, Rat(1)}};
  mul.at(1, 0) = {{1, Rat(1)}};
  mul.at(1, 1) = {};
  Vec unit{Rat(1), Rat(0)};
  return make_algebra(2, std::move(mul), std::move(unit), "Q[x]/(x^2)");
}

/// Full 2x2 matrix algebra on basis e11, e12, e21, e22.
inline Algebra matrices_2x2() {
  auto idx = [](int i, int j) { return 2 * i + j; };
  StructureTensor mul(4, 4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          if (j == k) mul.at(idx(i, j), idx(k, l)) = {{idx(i, l), Rat(1)}};
        }
  Vec unit(4, Rat(0));
  unit[idx(0, 0)] = 1;
  unit[idx(1, 1)] = 1;
  return make_algebra(4, std::move(mul), std::move(unit), "M2(Q)");
}

/// Upper triangular 2x2 matrices on basis e11, e12, e22.
inline Algebra upper_triangular_2x2() {
  // index 0 = e11, 1 = e12, 2 = e22
  StructureTensor mul(3, 3, 3);
  mul.at(0, 0) = {{0, Rat(1)}};
  mul.at(0, 1) = {{1, Rat(1)}};
  mul.at(1, 2) = {{1, Rat(1)}};
  mul.at(2, 2) = {{2, Rat(1)}};
  Vec unit{Rat(1), Rat(0), Rat(1)};
  return make_algebra(3, std::move(mul), std::move(unit), "T2(Q)");
}

inline Algebra matrices_2x2_tensor_c2() {
  Algebra t = tensor(matrices_2x2(), group_algebra_c2());
  return make_algebra_unchecked(t.dim(), t.mul(), t.unit(), t.generators(), "M2(Q)(x)Q[C2]");
}

/// The standard seven-algebra corpus, in fixed report order.
inline std::vector<Algebra> standard() {
  return {rationals(),        group_algebra_c2(),      group_algebra_c3(), dual_numbers(),
          upper_triangular_2x2(), matrices_2x2(), matrices_2x2_tensor_c2()};
}

/// Q^2 column vectors as an (M2(Q), Q)-bimodule, pointed by e1.
inline Bimodule column_vectors() {
  Algebra m2 = matrices_2x2();
  Algebra q = rationals();
  auto idx = [](int i, int j) { return 2 * i + j; };
  StructureTensor left(4, 2, 2), right(2, 1, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int v = 0; v < 2; ++v) {
        if (j == v) left.at(idx(i, j), v) = {{i, Rat(1)}};  // e_ij . e_v = delta_jv e_i
      }
  for (int v = 0; v < 2; ++v) right.at(v, 0) = {{v, Rat(1)}};
  Vec pointing{Rat(1), Rat(0)};
  return make_bimodule(std::move(m2), std::move(q), std::move(left), std::move(right), pointing, "Q^2 columns");
}

/// Q^2 row vectors as a (Q, M2(Q))-bimodule, pointed by e1^T.
inline Bimodule row_vectors() {
  Algebra m2 = matrices_2x2();
  Algebra q = rationals();
  auto idx = [](int i, int j) { return 2 * i + j; };
  StructureTensor left(1, 2, 2), right(2, 4, 2);
  for (int v = 0; v < 2; ++v) left.at(0, v) = {{v, Rat(1)}};
  for (int v = 0; v < 2; ++v)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        if (v == i) right.at(v, idx(i, j)) = {{j, Rat(1)}};  // e_v . e_ij = delta_vi e_j
      }
  Vec pointing{Rat(1), Rat(0)};
  return make_bimodule(std::move(q), std::move(m2), std::move(left), std::move(right), pointing, "Q^2 rows");
}

/// Q as a (Q[x]/(x^2), Q)-bimodule with x acting by zero: the standard
/// non-projective example.
inline Bimodule dual_numbers_augmentation_left() {
  Algebra d = dual_numbers();
  Algebra q = rationals();
  StructureTensor left(2, 1, 1), right(1, 1, 1);
  left.at(0, 0) = {{0, Rat(1)}};
  left.at(1, 0) = {};
  right.at(0, 0) = {{0, Rat(1)}};
  Vec pointing{Rat(1)};
  return make_bimodule(std::move(d), std::move(q), std::move(left), std::move(right), pointing, "Q over Q[x]/(x^2)");
}

/// Mirror: Q as a (Q, Q[x]/(x^2))-bimodule with x acting by zero.
inline Bimodule dual_numbers_augmentation_right() {
  Algebra d = dual_numbers();
  Algebra q = rationals();
  StructureTensor left(1, 1, 1), right(1, 2, 1);
  left.at(0, 0) = {{0, Rat(1)}};
  right.at(0, 0) = {{0, Rat(1)}};
  right.at(0, 1) = {};
  Vec pointing{Rat(1)};
  return make_bimodule(std::move(q), std::move(d), std::move(left), std::move(right), pointing, "Q over Q[x]/(x^2), right");
}

/// Regular bimodules of the standard corpus plus the classical Morita pair
/// and the non-projective examples; the sweep set for adjoint checks.
inline std::vector<Bimodule> standard_bimodules() {
  std::vector<Bimodule> out;
  for (const Algebra& a : standard()) out.push_back(regular(a));
  out.push_back(column_vectors());
  out.push_back(row_vectors());
  out.push_back(dual_numbers_augmentation_left());
  out.push_back(dual_numbers_augmentation_right());
  return out;
}

}  // namespace morita::corpus

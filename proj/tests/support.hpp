#pragma once

#include <random>

#include "chainrt/hopf.hpp"
#include "chainrt/rep.hpp"

namespace testing {

using namespace chainrt;

inline HopfPtr fun_z3() {
  static const HopfPtr h = HopfAlgebra::create(datasets::fun_zn(3));
  return h;
}
inline HopfPtr fun_z5() {
  static const HopfPtr h = HopfAlgebra::create(datasets::fun_zn(5));
  return h;
}
inline HopfPtr sweedler() {
  static const HopfPtr h = HopfAlgebra::create(datasets::sweedler());
  return h;
}

// The character x_j of Fun(Z/n): e_i acts by delta_ij.
inline RepObject zn_char(const HopfPtr& h, std::size_t j) {
  Vector chi(h->dim());
  chi[j % h->dim()] = 1;
  return character_rep(h, chi);
}

// Sweedler characters: g acts by +1 or -1, x by 0.
inline RepObject sw_char(int sign) {
  return character_rep(sweedler(), Vector{1, sign, 0, 0});
}

// Two-dimensional indecomposable projective P_sign of Sweedler's algebra.
inline RepObject sw_projective(int sign) {
  Matrix g(2, 2), x(2, 2);
  g.set(0, 0, sign);
  g.set(1, 1, -sign);
  x.set(1, 0, 1);
  return RepObject(sweedler(), 2, {Matrix::identity(2), g, x, g * x});
}

// All bundled example objects of small dimension.
inline std::vector<RepObject> sample_objects() {
  std::vector<RepObject> out;
  out.push_back(unit_rep(HopfAlgebra::trivial()));
  out.push_back(vector_space(2));
  for (std::size_t j = 0; j < 3; ++j) out.push_back(zn_char(fun_z3(), j));
  out.push_back(direct_sum_rep(zn_char(fun_z3(), 1), zn_char(fun_z3(), 2)));
  out.push_back(zn_char(fun_z5(), 2));
  out.push_back(sw_char(1));
  out.push_back(sw_char(-1));
  out.push_back(sw_projective(1));
  out.push_back(sw_projective(-1));
  out.push_back(direct_sum_rep(sw_projective(1), sw_char(-1)));
  return out;
}

// Random invertible scalar matrix (unit lower times unit upper triangular).
inline Matrix random_invertible(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<int> val(-2, 2);
  Matrix lo = Matrix::identity(n), up = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      lo.set(i, j, val(rng));
      up.set(j, i, val(rng));
    }
  return lo * up;
}

}  // namespace testing

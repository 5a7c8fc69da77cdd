#pragma once

#include <memory>
#include <string>
#include <vector>

#include "chainrt/matrix.hpp"

namespace chainrt {

/// Raw structure constants of a finite-dimensional ribbon Hopf algebra on
/// the basis e_0, ..., e_{dim-1}. The first index of every term is the
/// input:
///   mult     e_i e_j        = sum c e_k        as {i, j, k, c}
///   comult   Delta(e_i)     = sum c e_j (x) e_k as {i, j, k, c}
///   antipode S(e_i)         = sum c e_j        as {i, j, c}
///   rmatrix  R              = sum c e_i (x) e_j as {i, j, c}
/// unit, counit and ribbon are dense coordinate vectors.
struct HopfAlgebraData {
  struct Term3 {
    std::size_t i, j, k;
    ScalarCyclo c;
  };
  struct Term2 {
    std::size_t i, j;
    ScalarCyclo c;
  };

  std::string name;
  unsigned field_order = 1;
  std::size_t dim = 0;
  std::vector<Term3> mult;
  Vector unit;
  std::vector<Term3> comult;
  Vector counit;
  std::vector<Term2> antipode;
  std::vector<Term2> rmatrix;
  Vector ribbon;
};

/// Checks every Hopf, quasitriangular and ribbon axiom exactly. Returns the
/// identifiers of the failed axioms (empty on success). Throws ShapeError on
/// malformed data.
///
/// Identifiers: associativity, unit, coassociativity, counit,
/// comultiplication_multiplicative, comultiplication_unital,
/// counit_multiplicative, antipode, rmatrix_invertible,
/// quasi_cocommutativity, hexagon_1, hexagon_2, ribbon_central,
/// ribbon_invertible, ribbon_square, ribbon_coproduct, ribbon_counit.
std::vector<std::string> verify_hopf_ribbon(const HopfAlgebraData& data);

/// A validated ribbon Hopf algebra with its derived elements (R^-1, the
/// Drinfeld element u, v^-1 and the pivotal element g = u v^-1).
/// Elements of H, H(x)H are dense coordinate vectors (index i*dim + j).
class HopfAlgebra {
 public:
  /// Verifies the axioms and throws MathError listing the failures.
  static std::shared_ptr<const HopfAlgebra> create(HopfAlgebraData data);
  /// The one-dimensional algebra k; shared singleton.
  static std::shared_ptr<const HopfAlgebra> trivial();
  /// A (x) B with componentwise structure. Memoized: the same pair of
  /// algebras always yields the same object.
  static std::shared_ptr<const HopfAlgebra> product(const std::shared_ptr<const HopfAlgebra>& a,
                                                    const std::shared_ptr<const HopfAlgebra>& b);

  const HopfAlgebraData& data() const { return data_; }
  const std::string& name() const { return data_.name; }
  std::size_t dim() const { return data_.dim; }
  unsigned field_order() const { return data_.field_order; }
  bool is_trivial() const { return data_.dim == 1; }

  Vector basis_element(std::size_t i) const;
  Vector multiply(const Vector& a, const Vector& b) const;
  /// Product in H (x) H.
  Vector multiply2(const Vector& a, const Vector& b) const;
  Vector antipode(const Vector& a) const;
  Vector coproduct(const Vector& a) const;
  ScalarCyclo counit(const Vector& a) const;
  const Vector& unit() const { return data_.unit; }

  /// Matrix of left multiplication by a on H.
  Matrix left_multiplication(const Vector& a) const;

  const Vector& rmatrix() const { return r_; }
  const Vector& rmatrix_inverse() const { return r_inv_; }
  const Vector& ribbon() const { return data_.ribbon; }
  const Vector& ribbon_inverse() const { return v_inv_; }
  const Vector& drinfeld() const { return u_; }
  const Vector& pivotal() const { return g_; }
  const Vector& pivotal_inverse() const { return g_inv_; }

  /// Sparse structure constants: products e_i e_j and coproducts Delta(e_i).
  const Matrix::Row& product_terms(std::size_t i, std::size_t j) const {
    return mult_[i * dim() + j];
  }
  const Matrix::Row& coproduct_terms(std::size_t i) const { return comult_[i]; }

 private:
  explicit HopfAlgebra(HopfAlgebraData data);
  HopfAlgebra(const HopfAlgebra& a, const HopfAlgebra& b);

  HopfAlgebraData data_;
  std::vector<Matrix::Row> mult_;
  std::vector<Matrix::Row> comult_;
  Matrix antipode_;  // column i = S(e_i)
  Vector r_, r_inv_, u_, v_inv_, g_, g_inv_;
};

using HopfPtr = std::shared_ptr<const HopfAlgebra>;

/// Structure constants of A (x) B on the basis e_i (x) f_j (index i * dim B
/// + j), with R = R_13 R_24 and ribbon element v_A (x) v_B. Modules over it
/// house disjoint unions of surfaces.
HopfAlgebraData external_product(const HopfAlgebraData& a, const HopfAlgebraData& b);

/// Bundled datasets.
namespace datasets {
/// The ground field k.
HopfAlgebraData trivial();
/// Functions on Z/n (n odd) with R = sum zeta^{ij} e_i (x) e_j and
/// v = sum zeta^{-j^2} e_j, so the twist on the character x_j is zeta^{j^2}.
HopfAlgebraData fun_zn(unsigned n);
/// Sweedler's four-dimensional algebra <g, x | g^2 = 1, x^2 = 0, xg = -gx>
/// with the triangular R-matrix of parameter 1 and ribbon element 1.
/// Basis order: 1, g, x, gx. Not semisimple.
HopfAlgebraData sweedler();
}  // namespace datasets

}  // namespace chainrt

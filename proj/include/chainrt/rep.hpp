#pragma once

#include <memory>
#include <string>
#include <vector>

#include "chainrt/hopf.hpp"
#include "chainrt/matrix.hpp"

namespace chainrt {

/// A finite-dimensional module over a ribbon Hopf algebra, given by the
/// action matrices of the basis elements. Cheap to copy; immutable.
class RepObject {
 public:
  RepObject();  // zero module over the trivial algebra
  /// Throws ShapeError on wrong shapes; the module axioms are checked by
  /// validate().
  RepObject(HopfPtr algebra, std::size_t dim, std::vector<Matrix> actions);

  const HopfAlgebra& algebra() const { return *algebra_; }
  const HopfPtr& algebra_ptr() const { return algebra_; }
  std::size_t dim() const { return data_->dim; }
  const Matrix& action(std::size_t i) const { return data_->actions[i]; }
  const std::vector<Matrix>& actions() const { return data_->actions; }
  /// Action of an arbitrary element of H.
  Matrix act(const Vector& element) const;
  /// Action of an element of H (x) H on this (x) other.
  Matrix act2(const RepObject& other, const Vector& element) const;

  /// Failed module axioms ("multiplication", "unit"); empty when valid.
  std::vector<std::string> validate() const;

  friend bool operator==(const RepObject& a, const RepObject& b);
  friend bool operator!=(const RepObject& a, const RepObject& b) { return !(a == b); }

 private:
  struct Data {
    std::size_t dim;
    std::vector<Matrix> actions;
  };
  HopfPtr algebra_;
  std::shared_ptr<const Data> data_;
};

/// A module map given by its matrix (target.dim x source.dim).
struct RepMorphism {
  RepObject source;
  RepObject target;
  Matrix matrix;

  bool is_intertwiner() const;
};

RepObject unit_rep(const HopfPtr& algebra);
/// A plain vector space, i.e. a module over the trivial algebra.
RepObject vector_space(std::size_t dim);
/// One-dimensional module on which e_i acts by chi[i].
RepObject character_rep(const HopfPtr& algebra, const Vector& chi);
/// Zero module over the given algebra.
RepObject zero_rep(const HopfPtr& algebra);

/// x (x) y with action through the coproduct. Kronecker flattening, so the
/// tensor product is strictly associative on matrices.
RepObject tensor_rep(const RepObject& x, const RepObject& y);
RepObject direct_sum_rep(const RepObject& x, const RepObject& y);
/// Direct sum of a list, in order; the zero module when empty.
RepObject direct_sum_rep(const HopfPtr& algebra, const std::vector<RepObject>& parts);
/// Left dual: action rho(S(h))^T on the dual basis.
RepObject dual_rep(const RepObject& x);
/// x (x) y as a module over the external product algebra `ab` of their
/// algebras: e_i (x) f_j acts by the Kronecker product of the actions.
RepObject external_tensor_rep(const HopfPtr& ab, const RepObject& x, const RepObject& y);
/// The left regular module.
RepObject regular_rep(const HopfPtr& algebra);
/// One-dimensional modules whose character values lie in {-1, 0, 1},
/// found by exhaustive search (algebras of dimension at most 8).
std::vector<RepObject> small_characters(const HopfPtr& algebra);
/// Underlying space of the algebra with the adjoint action h.a = h1 a S(h2).
RepObject adjoint_rep(const HopfPtr& algebra);

RepMorphism identity(const RepObject& x);
RepMorphism zero_morphism(const RepObject& source, const RepObject& target);
RepMorphism compose(const RepMorphism& g, const RepMorphism& f);
RepMorphism tensor(const RepMorphism& f, const RepMorphism& g);
/// f* : y* -> x*, the transpose.
RepMorphism dual_morphism(const RepMorphism& f);

/// ev: x* (x) x -> 1 and coev: 1 -> x (x) x*.
RepMorphism ev(const RepObject& x);
RepMorphism coev(const RepObject& x);
/// Right duality through the pivotal element g = u theta:
/// ev_right: x (x) x* -> 1, v (x) f -> f(g v);
/// coev_right: 1 -> x* (x) x.
RepMorphism ev_right(const RepObject& x);
RepMorphism coev_right(const RepObject& x);

/// c_{x,y} = flip o (rho_x (x) rho_y)(R).
RepMorphism braiding(const RepObject& x, const RepObject& y);
/// (c_{y,x})^-1 : x (x) y -> y (x) x.
RepMorphism braiding_inv(const RepObject& x, const RepObject& y);
/// theta_x = action of v^-1.
RepMorphism twist(const RepObject& x);
RepMorphism twist_inv(const RepObject& x);

/// Hom_A(x, y) as a subspace of the row-major flattened matrices.
class HomSpace {
 public:
  HomSpace(const RepObject& source, const RepObject& target);

  const RepObject& source() const { return source_; }
  const RepObject& target() const { return target_; }
  std::size_t dim() const { return space_.dim(); }
  const Subspace& subspace() const { return space_; }

  Matrix element(std::size_t i) const;
  Matrix combine(const Vector& coords) const;
  /// Coordinates of an intertwiner; throws MathError for a non-intertwiner.
  Vector coordinates(const Matrix& m) const;
  /// Coordinates read off the lead positions without the membership check.
  Vector lead_coordinates(const Matrix& m) const;
  std::vector<RepMorphism> basis() const;

 private:
  RepObject source_, target_;
  Subspace space_;
};

/// Exact basis of intertwiners x -> y, ordered by echelon lead position.
std::vector<RepMorphism> hom_basis(const RepObject& x, const RepObject& y);

/// Quantum trace of the identity, ev_right o coev = tr rho(g).
ScalarCyclo qdim(const RepObject& x);

}  // namespace chainrt

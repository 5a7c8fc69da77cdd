#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "chainrt/chain.hpp"

namespace chainrt {

struct Marking {
  ChainObject label;
  bool positive = true;
};

/// A closed surface of genus g with marked points labeled in Ch(A). The
/// algebra is carried separately so unmarked surfaces know their category.
struct MarkedSurface {
  HopfPtr algebra;
  std::size_t genus = 0;
  std::vector<Marking> markings;
};

/// Throws ShapeError when a label lives over another algebra or fails
/// validation.
void check_surface(const MarkedSurface& s);

/// Right-nested tensor of the labels, dualized at negative markings.
ChainObject oriented_product(const HopfPtr& algebra, const std::vector<Marking>& markings);

/// Hom*(1, Ad^{(x)g} (x) x_I) together with the bookkeeping needed to read
/// coordinates back as morphisms.
struct StateComplex {
  MarkedSurface surface;
  /// Ad, ..., Ad, then each marking's label or its dual.
  std::vector<ChainObject> factors;
  ChainObject ambient;
  std::shared_ptr<const HomComplex> hom;
  /// The complex of vector spaces; its differential is the one under study.
  ChainObject complex;
};

StateComplex state_complex(const MarkedSurface& s);

/// Same graded space, with the differential assembled marking by marking:
/// the sign of the graded string diagram that splits k(-1) off the i-th
/// line and moves it to the far left, times post-composition with the
/// i-th differential on the matching multidegree. Negative markings use
/// -(-1)^m (d_x^{m-1})^T taken from the label itself.
StateComplex state_differential_explicit(const MarkedSurface& s);

/// Map of state complexes for the cylinder over the surface with label maps
/// f_i. At a negative marking f_i runs from the target label to the source
/// label and enters through its dual. Throws ShapeError on mismatch.
ChainMap bordism_map(const StateComplex& source, const StateComplex& target, const std::vector<ChainMap>& maps);

struct PreservationResult {
  ChainMap map;
  /// Inverse and homotopies assembled from the label witnesses.
  HomotopyEquivalence witness;
  bool witness_verified = false;
  /// find_homotopy found both composites homotopic to the identity.
  bool fallback_verified = false;
};

/// For equivalences mu_i between the labels of `source` and `target`
/// (reversed at negative markings), builds the induced state map and a
/// witness that it is an equivalence. Throws MathError when a stated
/// witness does not check out.
PreservationResult verify_homotopy_preservation(const StateComplex& source, const StateComplex& target,
                                                const std::vector<ChainMap>& mus,
                                                const std::vector<HomotopyEquivalence>& witnesses);

struct MonoidalityResult {
  StateComplex first, second;
  /// State complex of the union, over the external product algebra.
  ChainObject united;
  /// Z(S0) (x) Z(S1) -> Z(S0 + S1).
  ChainMap comparison;
  bool chain_map = false;
  bool invertible = false;

  bool ok() const { return chain_map && invertible; }
};

/// The disjoint union is modelled over A (x) B, whose modules are the
/// external products of A- and B-modules; the union's state complex is
/// Hom*(1, amb_0 (x) amb_1) there, and the comparison map sends
/// phi_0 (x) phi_1 to their Kronecker product.
MonoidalityResult monoidality_check(const MarkedSurface& s0, const MarkedSurface& s1);

}  // namespace chainrt

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "chainrt/rep.hpp"

namespace chainrt {

/// A bounded cochain complex over rep(H). Each component is stored as an
/// ordered list of summands; the component itself is their direct sum and
/// the differential is one matrix on it. Tensor products keep the summand
/// structure, which lets Hom spaces be computed summand by summand.
class ChainObject {
 public:
  /// The zero complex over the trivial algebra.
  ChainObject();

  /// Unvalidated constructor. summands[k] is degree lo + k; diffs[k] is
  /// d^{lo+k}, of size one less than summands (or empty for a one-term
  /// complex). Use make_complex for checked construction.
  ChainObject(HopfPtr algebra, int lo, std::vector<std::vector<RepObject>> summands,
              std::vector<Matrix> diffs);

  const HopfAlgebra& algebra() const { return *algebra_; }
  const HopfPtr& algebra_ptr() const { return algebra_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + int(data_->degrees.size()) - 1; }
  bool in_support(int n) const { return n >= lo() && n <= hi(); }

  std::size_t dim(int n) const;
  std::size_t total_dim() const;
  const std::vector<RepObject>& summands(int n) const;
  std::size_t summand_offset(int n, std::size_t i) const;
  /// The component x^n (the zero module outside the support).
  RepObject component(int n) const;
  /// d^n : x^n -> x^{n+1}, the zero matrix of the right shape outside.
  const Matrix& diff(int n) const;
  RepMorphism diff_morphism(int n) const;

  /// Failed invariants: "shape", "intertwiner", "d_squared".
  std::vector<std::string> validate() const;
  long euler_characteristic() const;

  friend bool operator==(const ChainObject& a, const ChainObject& b);

 private:
  struct Degree {
    std::vector<RepObject> summands;
    std::vector<std::size_t> offsets;
    RepObject total;
    Matrix d;
  };
  struct Data {
    std::vector<Degree> degrees;
    Matrix below;  // d^{lo-1}
    RepObject zero;
  };
  HopfPtr algebra_;
  int lo_ = 0;
  std::shared_ptr<const Data> data_;
};

/// A degree-0 morphism; missing components are zero.
struct ChainMap {
  ChainObject source;
  ChainObject target;
  std::map<int, Matrix> components;

  Matrix component(int n) const;
};

/// Components H^n : x^n -> y^{n-1}.
struct ChainHomotopy {
  ChainObject source;
  ChainObject target;
  std::map<int, Matrix> components;

  Matrix component(int n) const;
};

struct HomotopyEquivalence {
  ChainMap inverse;
  ChainHomotopy left;   // inverse o f - id = Hd + dH
  ChainHomotopy right;  // f o inverse - id = Hd + dH
};

/// Validated construction; components[k] sits in degree lo + k.
/// Throws ShapeError on misaligned shapes and MathError if d^2 != 0 or a
/// differential is not an intertwiner.
ChainObject make_complex(const HopfPtr& algebra, int lo, const std::vector<RepObject>& components,
                         const std::vector<Matrix>& diffs);
ChainObject unit_chain(const HopfPtr& algebra);
ChainObject zero_chain(const HopfPtr& algebra);
ChainObject single_chain(const RepObject& x, int degree);
/// b -> b by the identity, in degrees n and n + 1.
ChainObject cone_of_identity(const RepObject& b, int n);
ChainObject direct_sum_chain(const ChainObject& x, const ChainObject& y);

/// (x (x) y)^n = sum over a + b = n of x^a (x) y^b, summands ordered by a
/// and then by summand index; d = d_x (x) 1 + (-1)^a 1 (x) d_y.
ChainObject tensor_chain(const ChainObject& x, const ChainObject& y);
/// x (x) y over the external product algebra `ab` of their algebras, with
/// the same summand order and differential as tensor_chain.
ChainObject external_tensor_chain(const HopfPtr& ab, const ChainObject& x, const ChainObject& y);
/// Right-nested tensor of a list; the unit complex for an empty list.
ChainObject tensor_chain(const std::vector<ChainObject>& factors);
/// (x[r])^n = x^{n+r} with differential (-1)^r d.
ChainObject shift_chain(const ChainObject& x, int r);
/// (x*)^l = (x^{-l})* with d^l = -(-1)^l (d^{-l-1})^T.
ChainObject dual_chain(const ChainObject& x);

ChainMap identity_chain(const ChainObject& x);
ChainMap zero_map(const ChainObject& x, const ChainObject& y);
ChainMap compose_chain(const ChainMap& g, const ChainMap& f);
ChainMap operator+(const ChainMap& f, const ChainMap& g);
ChainMap operator-(const ChainMap& f, const ChainMap& g);
ChainMap operator*(const ScalarCyclo& c, const ChainMap& f);
ChainMap tensor_chain_map(const ChainMap& f, const ChainMap& g);
/// f* : y* -> x*.
ChainMap dual_chain_map(const ChainMap& f);
ChainMap shift_chain_map(const ChainMap& f, int r);

/// The dual of a homotopy for p - id: a homotopy for p* - id on the dual,
/// with components (-1)^l (H^{1-l})^T.
ChainHomotopy dual_chain_homotopy(const ChainHomotopy& h);

/// A graded map of the given degree between two complexes, for tensoring.
struct GradedMapFactor {
  ChainObject source;
  ChainObject target;
  std::map<int, Matrix> components;  // keyed by source degree
  int degree = 0;
};
/// Components of f_1 (x) ... (x) f_t between the right-nested tensors, keyed
/// by source degree, with the Koszul sign of every factor map passing the
/// degrees to its left.
std::map<int, Matrix> tensor_graded_maps(const std::vector<GradedMapFactor>& factors);
ChainMap direct_sum_chain_map(const ChainMap& f, const ChainMap& g);
/// Inclusion of x and projection onto x for x (+) y, and likewise for y.
ChainMap inclusion_first(const ChainObject& x, const ChainObject& y);
ChainMap projection_first(const ChainObject& x, const ChainObject& y);

/// Shape, intertwiner and commutation checks.
bool is_chain_map(const ChainMap& f);
/// f - g = H d + d H degreewise.
bool is_homotopy(const ChainHomotopy& h, const ChainMap& f, const ChainMap& g);

ChainMap ev_chain(const ChainObject& x);          // x* (x) x -> 1
ChainMap coev_chain(const ChainObject& x);        // 1 -> x (x) x*
ChainMap ev_right_chain(const ChainObject& x);    // x (x) x* -> 1, sign (-1)^a on x^a
ChainMap coev_right_chain(const ChainObject& x);  // 1 -> x* (x) x, sign (-1)^a on x^a
/// (-1)^{ab} c on x^a (x) y^b.
ChainMap braiding_chain(const ChainObject& x, const ChainObject& y);
/// (c_{y,x})^{-1} : x (x) y -> y (x) x.
ChainMap braiding_inv_chain(const ChainObject& x, const ChainObject& y);
ChainMap twist_chain(const ChainObject& x);
ChainMap twist_inv_chain(const ChainObject& x);

/// Summand index bookkeeping for a right-nested tensor of several
/// complexes. Entries of each degree are tuples (degree, summand) per
/// factor in lexicographic order, matching the summand order of
/// tensor_chain(factors).
class TensorLayout {
 public:
  struct Entry {
    std::vector<std::pair<int, std::size_t>> parts;
    std::size_t offset = 0;
    std::size_t dim = 0;
  };

  explicit TensorLayout(const std::vector<ChainObject>& factors);

  int lo() const { return lo_; }
  int hi() const { return hi_; }
  const std::vector<Entry>& entries(int n) const;
  /// Index of the entry with the given parts in degree n, or npos.
  std::size_t find(int n, const std::vector<std::pair<int, std::size_t>>& parts) const;
  const std::vector<ChainObject>& factors() const { return factors_; }

  static constexpr std::size_t npos = std::size_t(-1);

 private:
  std::vector<ChainObject> factors_;
  int lo_ = 0, hi_ = -1;
  std::map<int, std::vector<Entry>> entries_;
  std::map<int, std::map<std::vector<std::pair<int, std::size_t>>, std::size_t>> index_;
};

/// 0/1 matrix embedding the Kronecker product of whole components
/// factor_k^{degrees_k} into degree sum(degrees) of the right-nested tensor.
Matrix multidegree_embedding(const std::vector<ChainObject>& factors, const TensorLayout& layout,
                             const std::vector<int>& degrees, std::size_t total_dim);

/// id (x) f (x) id, where f acts on factors [pos, pos + width) of `factors`
/// and maps their tensor to the tensor of `replacement`. Returns a map
/// between tensor_chain(factors) and the tensor with that range replaced.
/// The full source and target complexes may be passed in when already known.
ChainMap apply_local(const std::vector<ChainObject>& factors, std::size_t pos, std::size_t width,
                     const std::vector<ChainObject>& replacement, const ChainMap& f,
                     const ChainObject* source_total = nullptr, const ChainObject* target_total = nullptr);

/// Elements of Hom^n are families phi_a : x^a -> y^{a+n}, keyed by a.
using GradedFamily = std::map<int, Matrix>;

/// Hom*(x, y) as a complex of vector spaces with d(phi) = d_y phi - (-1)^n phi d_x.
/// Coordinates are concatenated over source degree, then source summand,
/// then target summand, each block in its HomSpace coordinates.
class HomComplex {
 public:
  struct Block {
    int a;
    std::size_t i, j;
    std::shared_ptr<const HomSpace> space;
    std::size_t offset;
  };

  HomComplex(const ChainObject& x, const ChainObject& y);

  const ChainObject& source() const { return x_; }
  const ChainObject& target() const { return y_; }
  /// The complex itself, over the trivial algebra.
  const ChainObject& complex() const { return complex_; }
  std::size_t dim(int n) const;
  const std::vector<Block>& blocks(int n) const;

  GradedFamily unpack(int n, const Vector& coords) const;
  /// Throws MathError when a block is not an intertwiner.
  Vector pack(int n, const GradedFamily& family) const;
  /// Matrix of a linear map Hom^n(this) -> Hom^m(other) given on families.
  Matrix matrix_of(int n, const HomComplex& other, int m,
                   const std::function<GradedFamily(const GradedFamily&)>& map) const;

 private:
  ChainObject x_, y_;
  ChainObject complex_;
  std::map<int, std::vector<Block>> blocks_;
  std::map<int, std::size_t> dims_;
};

HomComplex hom_complex(const ChainObject& x, const ChainObject& y);

/// Dimensions of the cohomology of the underlying complex of vector spaces,
/// for every degree in the support.
std::map<int, std::size_t> cohomology(const ChainObject& x);

std::optional<ChainHomotopy> find_homotopy(const ChainMap& f, const ChainMap& g);
std::optional<HomotopyEquivalence> is_homotopy_equivalence(const ChainMap& f);
/// Checks a stated equivalence witness.
bool verify_equivalence(const ChainMap& f, const HomotopyEquivalence& w);

/// Random complexes for tests and self-checks: direct sums of single
/// objects and identity cones drawn from `blocks`, scrambled degreewise by
/// random automorphisms.
struct RandomComplexOptions {
  int min_degree = -1;
  int max_width = 3;
  std::size_t max_terms = 3;
};
ChainObject random_complex(std::mt19937_64& rng, const std::vector<RepObject>& blocks,
                           const RandomComplexOptions& options = {});
/// Random degree-0 cycle of Hom*(x, y), i.e. a random chain map.
ChainMap random_chain_map(std::mt19937_64& rng, const ChainObject& x, const ChainObject& y);
/// Random homotopy equivalence out of x, together with its witness: a
/// composite of degreewise automorphisms and inclusions of identity cones.
std::pair<ChainMap, HomotopyEquivalence> random_equivalence(std::mt19937_64& rng, const ChainObject& x,
                                                            const std::vector<RepObject>& blocks);

/// Standard building blocks for an algebra: its small characters and the
/// regular module.
std::vector<RepObject> standard_blocks(const HopfPtr& algebra);

}  // namespace chainrt

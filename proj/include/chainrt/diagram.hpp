#pragma once

#include <cstddef>
#include <vector>

#include "chainrt/chain.hpp"
#include "chainrt/graded_strings.hpp"
#include "chainrt/rep.hpp"

namespace chainrt {

/// A strand labeled by objects[label]; a downward strand carries its dual.
struct RibbonStrand {
  std::size_t label = 0;
  bool up = true;

  RibbonStrand reversed() const { return {label, !up}; }
  friend bool operator==(const RibbonStrand&, const RibbonStrand&) = default;
};

struct RibbonToken;

/// What a coupon evaluates to: morphisms[word[0]], then word[1], ...; the
/// composite is dualized when `dual` is set (one input and one output only),
/// then followed by the framed braid `post` on the output strands.
struct CouponLabel {
  std::vector<std::size_t> word;
  bool dual = false;
  std::vector<std::vector<RibbonToken>> post;
};

struct RibbonToken {
  enum class Kind { cross_pos, cross_neg, twist_pos, twist_neg, cap, cup, coupon };
  Kind kind = Kind::cross_pos;
  std::size_t pos = 0;
  RibbonStrand strand;               // cup: the left strand created
  std::size_t arity = 0;             // coupon: number of input strands
  std::vector<RibbonStrand> outputs; // coupon: strands leaving the morphism, before post
  CouponLabel label;

  static RibbonToken cross(std::size_t pos, bool positive = true);
  static RibbonToken twist(std::size_t pos, bool positive = true);
  static RibbonToken cap(std::size_t pos);
  static RibbonToken cup(std::size_t pos, RibbonStrand left);
  static RibbonToken coupon(std::size_t pos, std::size_t arity, std::vector<RibbonStrand> outputs,
                            std::size_t morphism);
};

/// Slice word read bottom to top; positions refer to the strands entering
/// the slice and tokens of one slice touch disjoint strands.
struct RibbonDiagram {
  std::vector<RibbonStrand> source;
  std::vector<RibbonStrand> target;
  std::vector<std::vector<RibbonToken>> slices;
};

/// Output strands of a coupon token, after its post braid.
std::vector<RibbonStrand> coupon_outputs(const RibbonToken& t);
/// Strands after one slice; throws ShapeError when a token does not fit.
std::vector<RibbonStrand> apply_ribbon_slice(const std::vector<RibbonStrand>& strands,
                                             const std::vector<RibbonToken>& slice);
/// Strands after the first k slices.
std::vector<RibbonStrand> strands_at(const RibbonDiagram& d, std::size_t k);
/// One token per slice, in application order (right to left within a
/// slice). Evaluation is unchanged.
RibbonDiagram normalize_slices(const RibbonDiagram& d);
/// Checks the slice word against source and target; throws ShapeError.
void check_shape(const RibbonDiagram& d);

template <class Object, class Morphism>
struct DiagramLabels {
  std::vector<Object> objects;
  std::vector<Morphism> morphisms;
};
using RepLabels = DiagramLabels<RepObject, RepMorphism>;
using ChainLabels = DiagramLabels<ChainObject, ChainMap>;

/// The ribbon functor on rep(A): crossings to braidings, twists to theta,
/// caps and cups to the left or right (co)evaluations, coupons to labels.
/// Throws ShapeError when a label does not match its strands.
RepMorphism evaluate(const RibbonDiagram& d, const RepLabels& labels);
/// The same over Ch(A), built from the chain-level structure maps.
ChainMap evaluate(const RibbonDiagram& d, const ChainLabels& labels);

/// Evaluation through the separation into graded lines and A-objects: for
/// every assignment of degrees to the strand segments, the sign of the
/// underlying graded string diagram times the evaluation over A of the
/// degreewise components, reassembled into a chain map.
ChainMap evaluate_separated(const RibbonDiagram& d, const ChainLabels& labels);

/// Degree-0 scalar of a closed diagram over Ch(A). Throws ShapeError when
/// the boundary is not empty.
ScalarCyclo graded_link_invariant(const RibbonDiagram& d, const ChainLabels& labels);

/// Closed diagram with a single label slot, evaluated as the alternating sum
/// over the degrees m of x of the A-level value with label x^m.
ScalarCyclo knot_alternating_sum(const RibbonDiagram& d, const ChainObject& x);

/// Lifts degree-0 A labels to Ch(A).
ChainLabels chain_labels(const RepLabels& labels);

/// Replaces every strand label l by mapping[l].
RibbonDiagram relabel(const RibbonDiagram& d, const std::vector<std::size_t>& mapping);

/// Standard closed diagrams on label 0 (and 1 for links).
RibbonDiagram unknot(int framing = 0);
RibbonDiagram hopf_link(bool positive = true);
RibbonDiagram trefoil();

}  // namespace chainrt

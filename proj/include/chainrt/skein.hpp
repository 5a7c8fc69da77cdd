#pragma once

#include <random>
#include <string>
#include <vector>

#include "chainrt/diagram.hpp"

namespace chainrt {

enum class SkeinMove { U1, U2, U3, RII, RIII, framed_RI };

std::string to_string(SkeinMove move);
/// Parses "U1", "U2", "U3", "RII", "RIII" or "framed-RI"; throws ShapeError.
SkeinMove parse_skein_move(const std::string& name);

/// Where a move applies, in the one-token-per-slice form of a diagram.
/// `slice` is a token index, or a slice boundary for insertions.
///   U1: flip a 1-to-1 coupon between upward strands into its dual.
///   U2: merge the coupon at `slice` with the coupon right above it.
///   U3: absorb the crossing or twist above the coupon at `slice`.
///   RII: variant 0 or 1 inserts a crossing and its inverse at (slice, pos);
///        variant 2 removes such a pair starting at `slice`.
///   RIII: rewrites the braid relation starting at `slice`.
///   framed_RI: variant 0 replaces the twist at `slice` by a curl; variant 1
///        inserts a curl and an inverse twist at (slice, pos).
struct SkeinSite {
  std::size_t slice = 0;
  std::size_t pos = 0;
  int variant = 0;
};

/// All sites of a move in normalize_slices(d).
std::vector<SkeinSite> skein_sites(const RibbonDiagram& d, SkeinMove move);

/// Applies a move to normalize_slices(d). The boundary is unchanged.
/// Throws ShapeError when the move does not apply at the site.
RibbonDiagram apply_skein(const RibbonDiagram& d, SkeinMove move, const SkeinSite& site);

/// A coupon kind available to the random generator: one upward strand of
/// label `source` to one upward strand of label `target`, via `morphism`.
struct CouponSignature {
  std::size_t morphism = 0;
  std::size_t source = 0;
  std::size_t target = 0;
};

/// Random diagram over `label_count` labels with about `steps` tokens.
/// Closed diagrams use only coupons with source == target.
RibbonDiagram random_diagram(std::mt19937_64& rng, std::size_t label_count,
                             const std::vector<CouponSignature>& coupons, std::size_t steps, bool closed);

/// A random applicable move; returns false if no move applies.
bool random_skein_step(std::mt19937_64& rng, const RibbonDiagram& d, SkeinMove& move, SkeinSite& site);

/// Random labels: objects from the small characters and projective-like
/// blocks of the algebra, and endomorphism and cross coupons between them.
RepLabels random_rep_labels(std::mt19937_64& rng, const HopfPtr& algebra, std::size_t objects,
                            std::vector<CouponSignature>& coupons);
/// Random small complexes and chain maps between them.
ChainLabels random_chain_labels(std::mt19937_64& rng, const HopfPtr& algebra, std::size_t objects,
                                std::vector<CouponSignature>& coupons);

}  // namespace chainrt

#include "chainrt/diagram.hpp"

#include "chainrt/errors.hpp"
#include "chainrt/skein.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace chainrt;
using namespace testing;

namespace {

HopfPtr triv() { return HopfAlgebra::trivial(); }

ScalarCyclo closed_value(const RibbonDiagram& d, const RepLabels& l) { return evaluate(d, l).matrix.at(0, 0); }

bool same_map(const ChainMap& f, const ChainMap& g) {
  if (!(f.source == g.source) || !(f.target == g.target)) return false;
  for (int n = f.source.lo(); n <= f.source.hi(); ++n)
    if (f.component(n) != g.component(n)) return false;
  return true;
}

// d1 on the left strands, then d2 on the right ones.
RibbonDiagram side_by_side(const RibbonDiagram& d1, const RibbonDiagram& d2, std::size_t label_shift) {
  std::vector<std::size_t> shift(16);
  for (std::size_t i = 0; i < shift.size(); ++i) shift[i] = i + label_shift;
  const RibbonDiagram e2 = relabel(d2, shift);
  RibbonDiagram out;
  out.source = d1.source;
  out.source.insert(out.source.end(), e2.source.begin(), e2.source.end());
  out.target = d1.target;
  out.target.insert(out.target.end(), e2.target.begin(), e2.target.end());
  out.slices = d1.slices;
  for (auto slice : e2.slices) {
    for (auto& t : slice) t.pos += d1.target.size();
    out.slices.push_back(slice);
  }
  return out;
}

template <class L>
L concat_labels(const L& a, const L& b) {
  L out = a;
  out.objects.insert(out.objects.end(), b.objects.begin(), b.objects.end());
  return out;
}

ChainObject k_to_k(long s) {
  return make_complex(triv(), 0, {unit_rep(triv()), unit_rep(triv())}, {Matrix::scalar(1, s)});
}

}  // namespace

TEST_CASE("unknots") {
  for (std::size_t n = 0; n < 4; ++n) CHECK(closed_value(unknot(0), {{vector_space(n)}, {}}) == ScalarCyclo(long(n)));
  // character oracle: theta on x_j is zeta^{j^2}, quantum dimension 1
  for (std::size_t j = 0; j < 3; ++j)
    for (int f = -2; f <= 2; ++f)
      CHECK(closed_value(unknot(f), {{zn_char(fun_z3(), j)}, {}}) == root_of_unity(3, long(j * j) * f));
  CHECK(closed_value(unknot(1), {{zn_char(fun_z3(), 1)}, {}}) == root_of_unity(3, 1));
  CHECK(closed_value(unknot(0), {{sw_projective(1)}, {}}).is_zero());
  CHECK(closed_value(unknot(0), {{sw_char(-1)}, {}}) == ScalarCyclo(-1));
  // the same loop read with the opposite orientation
  RibbonDiagram down;
  down.slices = {{RibbonToken::cup(0, {0, false})}, {RibbonToken::cap(0)}};
  for (const auto& x : sample_objects()) CHECK(closed_value(down, {{x}, {}}) == closed_value(unknot(0), {{x}, {}}));
}

TEST_CASE("coupons compose along a strand") {
  const RepObject x = sw_projective(1), y = direct_sum_rep(sw_projective(1), sw_char(-1));
  const auto fs = hom_basis(x, y), gs = hom_basis(y, y);
  REQUIRE(!fs.empty());
  REQUIRE(!gs.empty());
  RepLabels l{{x, y}, {fs[0], gs.back()}};
  RibbonDiagram d;
  d.source = {{0, true}};
  d.target = {{1, true}};
  d.slices = {{RibbonToken::coupon(0, 1, {{1, true}}, 0)}, {RibbonToken::coupon(0, 1, {{1, true}}, 1)}};
  CHECK(evaluate(d, l).matrix == (gs.back().matrix * fs[0].matrix));

  // a label that does not fit its strands is rejected
  RepLabels bad{{x, y}, {gs.back(), gs.back()}};
  CHECK_THROWS_AS(evaluate(d, bad), ShapeError);
  d.target = {{0, true}};
  CHECK_THROWS_AS(evaluate(d, l), ShapeError);
}

TEST_CASE("links and the graded invariant") {
  // Hopf link phase: c^2 = zeta^{2ij}
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const RepLabels l{{zn_char(fun_z3(), i), zn_char(fun_z3(), j)}, {}};
      CHECK(closed_value(hopf_link(true), l) == root_of_unity(3, long(2 * i * j)));
      CHECK(closed_value(hopf_link(false), l) == root_of_unity(3, -long(2 * i * j)));
      CHECK(graded_link_invariant(hopf_link(true), chain_labels(l)) == root_of_unity(3, long(2 * i * j)));
    }
  // unknot labeled by a complex over the trivial algebra gives its Euler characteristic
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const ChainObject x = random_complex(rng, standard_blocks(triv()));
    CHECK(graded_link_invariant(unknot(0), {{x}, {}}) == ScalarCyclo(x.euler_characteristic()));
  }
  CHECK(graded_link_invariant(unknot(0), {{k_to_k(1)}, {}}).is_zero());
  const ChainObject two = ChainObject(triv(), 0, {{unit_rep(triv())}, {}, {unit_rep(triv())}}, {Matrix(0, 1), Matrix(1, 0)});
  CHECK(graded_link_invariant(unknot(0), {{two}, {}}) == ScalarCyclo(2));
  CHECK_THROWS_AS(graded_link_invariant(RibbonDiagram{{{0, true}}, {{0, true}}, {}}, {{two}, {}}), ShapeError);

  // for knots the invariant is the alternating sum over degrees
  for (const HopfPtr& h : {triv(), fun_z3(), sweedler()}) {
    const auto blocks = standard_blocks(h);
    for (int trial = 0; trial < 3; ++trial) {
      RandomComplexOptions opts;
      opts.max_width = 3;
      opts.max_terms = 2;
      const ChainObject x = random_complex(rng, blocks, opts);
      for (const RibbonDiagram& k : {unknot(0), unknot(1), unknot(-2), trefoil()})
        CHECK(graded_link_invariant(k, {{x}, {}}) == knot_alternating_sum(k, x));
    }
  }
}

TEST_CASE("separated evaluation") {
  // labels in degree 0: no signs anywhere
  std::mt19937_64 rng(22);
  std::vector<CouponSignature> sigs;
  const RepLabels rl = random_rep_labels(rng, fun_z3(), 2, sigs);
  const ChainLabels cl0 = chain_labels(rl);
  for (int trial = 0; trial < 5; ++trial) {
    const RibbonDiagram d = random_diagram(rng, 2, sigs, 6, false);
    CHECK(same_map(evaluate_separated(d, cl0), evaluate(d, cl0)));
    CHECK(evaluate(d, cl0).component(0) == evaluate(d, rl).matrix);
  }
  // two-term monomial expansion with the loop sign
  const ChainObject zero_diff =
      ChainObject(triv(), 0, {{unit_rep(triv())}, {unit_rep(triv())}}, {Matrix(1, 1)});
  CHECK(evaluate_separated(unknot(0), {{zero_diff}, {}}).component(0).at(0, 0).is_zero());

  for (const HopfPtr& h : {triv(), fun_z3(), sweedler()}) {
    for (int trial = 0; trial < 6; ++trial) {
      const ChainLabels cl = random_chain_labels(rng, h, 2, sigs);
      const RibbonDiagram d = random_diagram(rng, 2, sigs, 5, trial % 2 == 0);
      const ChainMap direct = evaluate(d, cl);
      CHECK(is_chain_map(direct));
      CHECK(same_map(evaluate_separated(d, cl), direct));
    }
  }
}

TEST_CASE("monoidality and linearity") {
  std::mt19937_64 rng(23);
  std::vector<CouponSignature> s1, s2;
  const RepLabels a = random_rep_labels(rng, sweedler(), 2, s1);
  const RepLabels b = random_rep_labels(rng, sweedler(), 2, s2);
  for (int trial = 0; trial < 4; ++trial) {
    const RibbonDiagram d1 = random_diagram(rng, 2, {}, 4, false);
    const RibbonDiagram d2 = random_diagram(rng, 2, {}, 4, false);
    const RepLabels ab = concat_labels(a, b);
    const RepMorphism whole = evaluate(side_by_side(d1, d2, 2), ab);
    CHECK(whole.matrix == kron(evaluate(d1, a).matrix, evaluate(d2, b).matrix));
  }
  // U4: a coupon labeled c1 f1 - c2 f2
  const RepObject x = direct_sum_rep(sw_char(1), sw_projective(1));
  const auto hom = hom_basis(x, x);
  REQUIRE(hom.size() >= 2);
  RibbonDiagram d;
  d.slices = {{RibbonToken::cup(0, {0, true})},
              {RibbonToken::coupon(0, 1, {{0, true}}, 0)},
              {RibbonToken::cross(0)},
              {RibbonToken::twist(1)},
              {RibbonToken::cross(0, false)},
              {RibbonToken::cap(0)}};
  const ScalarCyclo c1 = root_of_unity(3, 1), c2(3);
  RepMorphism combo = hom[0];
  combo.matrix = c1 * hom[0].matrix - c2 * hom[1].matrix;
  const ScalarCyclo v = closed_value(d, {{x}, {combo}});
  CHECK(v == c1 * closed_value(d, {{x}, {hom[0]}}) - c2 * closed_value(d, {{x}, {hom[1]}}));
  // U5: knots are additive over direct sums of labels
  for (const RibbonDiagram& k : {unknot(1), trefoil()}) {
    const RepObject p = sw_projective(-1), q = sw_char(-1);
    CHECK(closed_value(k, {{direct_sum_rep(p, q)}, {}}) == closed_value(k, {{p}, {}}) + closed_value(k, {{q}, {}}));
  }
}

TEST_CASE("skein moves preserve the evaluation") {
  std::mt19937_64 rng(24);
  std::map<SkeinMove, int> applied;
  for (const HopfPtr& h : {triv(), fun_z3(), sweedler()}) {
    std::vector<CouponSignature> sigs;
    const RepLabels rl = random_rep_labels(rng, h, 2, sigs);
    for (int trial = 0; trial < 6; ++trial) {
      RibbonDiagram d = random_diagram(rng, 2, sigs, 6, trial % 2 == 1);
      const RepMorphism before = evaluate(d, rl);
      for (int step = 0; step < 4; ++step) {
        SkeinMove move;
        SkeinSite site;
        REQUIRE(random_skein_step(rng, d, move, site));
        d = apply_skein(d, move, site);
        ++applied[move];
        CHECK(evaluate(d, rl).matrix == before.matrix);
      }
    }
  }
  // every kind of move is exercised
  CHECK(applied.size() >= 4);
}

TEST_CASE("individual skein moves") {
  const RepObject x = sw_projective(1), y = direct_sum_rep(sw_projective(1), sw_char(1));
  const auto f = hom_basis(x, y);
  REQUIRE(!f.empty());
  const RepLabels l{{x, y}, {f[0]}};
  RibbonDiagram d;
  d.source = {{0, true}};
  d.target = {{1, true}};
  d.slices = {{RibbonToken::coupon(0, 1, {{1, true}}, 0)}};
  const Matrix value = evaluate(d, l).matrix;

  // U1 flips the coupon into its dual
  const auto u1 = skein_sites(d, SkeinMove::U1);
  REQUIRE(u1.size() == 1);
  const RibbonDiagram flipped = apply_skein(d, SkeinMove::U1, u1[0]);
  CHECK(flipped.slices.size() == 3);
  CHECK(flipped.slices[1][0].label.dual);
  CHECK(evaluate(flipped, l).matrix == value);
  CHECK(same_map(evaluate(flipped, chain_labels(l)), evaluate(d, chain_labels(l))));

  // U3 absorbs a twist above the coupon
  RibbonDiagram t = d;
  t.slices.push_back({RibbonToken::twist(0, true)});
  const auto u3 = skein_sites(t, SkeinMove::U3);
  REQUIRE(u3.size() == 1);
  const RibbonDiagram absorbed = apply_skein(t, SkeinMove::U3, u3[0]);
  CHECK(absorbed.slices.size() == 1);
  CHECK(evaluate(absorbed, l).matrix == evaluate(t, l).matrix);

  // RII insertion of a crossing and its inverse
  RibbonDiagram two;
  two.source = {{0, true}, {1, false}};
  two.target = two.source;
  for (int v = 0; v < 2; ++v) {
    const RibbonDiagram r = apply_skein(two, SkeinMove::RII, {0, 0, v});
    CHECK(r.slices.size() == 2);
    CHECK(evaluate(r, l).matrix == Matrix::identity(x.dim() * y.dim()));
    const RibbonDiagram back = apply_skein(r, SkeinMove::RII, {0, 0, 2});
    CHECK(back.slices.empty());
  }

  // framed RI: a twist is a curl, for either orientation
  for (bool up : {true, false}) {
    RibbonDiagram tw;
    tw.source = {{0, up}};
    tw.target = tw.source;
    tw.slices = {{RibbonToken::twist(0, true)}, {RibbonToken::twist(0, false)}, {RibbonToken::twist(0, true)}};
    const Matrix theta = evaluate(tw, l).matrix;
    const RibbonDiagram c1 = apply_skein(tw, SkeinMove::framed_RI, {0, 0, 0});
    CHECK(evaluate(c1, l).matrix == theta);
    const RibbonDiagram c2 = apply_skein(c1, SkeinMove::framed_RI, {3, 0, 0});
    CHECK(evaluate(c2, l).matrix == theta);
  }

  // not applicable
  CHECK_THROWS_AS(apply_skein(d, SkeinMove::U2, {0, 0, 0}), ShapeError);
  CHECK_THROWS_AS(apply_skein(d, SkeinMove::RIII, {0, 0, 0}), ShapeError);
  CHECK_THROWS_AS(apply_skein(two, SkeinMove::RII, {0, 1, 0}), ShapeError);
  CHECK(parse_skein_move("framed-RI") == SkeinMove::framed_RI);
  CHECK_THROWS_AS(parse_skein_move("R4"), ShapeError);
}

#include <optional>
#include <random>

#include "chainrt/errors.hpp"
#include "chainrt/graded_strings.hpp"
#include "doctest.h"

using namespace chainrt;
using T = GradedToken;

namespace {

GradedStrand up(int m) { return {m, true}; }
GradedStrand down(int m) { return {m, false}; }
int pow_sign(long k) { return k % 2 == 0 ? 1 : -1; }

GradedStringDiagram loop(int m, bool counterclockwise) {
  return {{}, {}, {{T::cup(0, counterclockwise ? up(m) : down(m))}, {T::cap(0)}}};
}

GradedStringDiagram parallel(std::vector<GradedStrand> s) { return {s, s, {}}; }

// Random diagram on the given source built from crossings, cups, caps and
// coupons; the target is whatever the slices produce.
GradedStringDiagram random_diagram(std::mt19937& rng, std::vector<GradedStrand> source, int steps) {
  GradedStringDiagram d{source, {}, {}};
  std::vector<GradedStrand> cur = source;
  std::uniform_int_distribution<int> deg(-3, 3), kind(0, 3);
  for (int s = 0; s < steps; ++s) {
    const int k = kind(rng);
    std::vector<T> slice;
    if (k == 0 && cur.size() >= 2) {
      slice.push_back(T::cross(std::uniform_int_distribution<std::size_t>(0, cur.size() - 2)(rng)));
    } else if (k == 1 || cur.size() < 2) {
      const GradedStrand st{deg(rng), bool(rng() % 2)};
      slice.push_back(T::cup(std::uniform_int_distribution<std::size_t>(0, cur.size())(rng), st));
    } else if (k == 2) {
      // cap the first adjacent compatible pair, if any
      for (std::size_t p = 0; p + 1 < cur.size(); ++p)
        if (cur[p + 1] == cur[p].reversed()) {
          slice.push_back(T::cap(p));
          break;
        }
    } else {
      // coupon merging two strands into one of the total degree
      const std::size_t p = std::uniform_int_distribution<std::size_t>(0, cur.size() - 2)(rng);
      const int total = cur[p].degree() + cur[p + 1].degree();
      slice.push_back(T::coupon(p, 2, {rng() % 2 ? up(total) : down(-total)}));
    }
    if (slice.empty()) continue;
    cur = apply_graded_slice(cur, slice, nullptr);
    d.slices.push_back(slice);
  }
  d.target = cur;
  return d;
}

// Random closed diagram, if the capping pass succeeds.
std::optional<GradedStringDiagram> random_closed(std::mt19937& rng) {
  GradedStringDiagram d = random_diagram(rng, {}, 8);
  std::vector<GradedStrand> cur = d.target;
  while (!cur.empty()) {
    bool capped = false;
    for (std::size_t p = 0; p + 1 < cur.size(); ++p)
      if (cur[p + 1] == cur[p].reversed()) {
        d.slices.push_back({T::cap(p)});
        cur = apply_graded_slice(cur, d.slices.back(), nullptr);
        capped = true;
        break;
      }
    if (!capped) return std::nullopt;
  }
  if (d.slices.empty() || d.slices.front().front().kind != T::Kind::cup) return std::nullopt;
  d.target = {};
  return d;
}

}  // namespace

TEST_CASE("closed loops evaluate to the super-dimension") {
  CHECK(eval_string(loop(0, true)) == 1);
  CHECK(eval_string(loop(1, true)) == -1);
  for (int m = -3; m <= 3; ++m) {
    CHECK(eval_string(loop(m, true)) == pow_sign(m));
    CHECK(eval_string(loop(m, false)) == pow_sign(m));
  }
}

TEST_CASE("crossing signs") {
  for (int m = -3; m <= 3; ++m) {
    const GradedStringDiagram one{{up(m), up(m)}, {up(m), up(m)}, {{T::cross(0)}}};
    CHECK(eval_string(one) == pow_sign(long(m) * m));
    CHECK(check_relation(one, parallel({up(m), up(m)}), pow_sign(long(m) * m)));
    // The symmetry squares to the identity, so a double crossing has no sign.
    const GradedStringDiagram two{{up(m), up(m)}, {up(m), up(m)}, {{T::cross(0)}, {T::cross(0)}}};
    CHECK(eval_string(two) == 1);
  }
  const GradedStringDiagram sq{{up(2), up(2)}, {up(2), up(2)}, {{T::cross(0)}, {T::cross(0)}}};
  CHECK(check_relation(sq, parallel({up(2), up(2)}), 1));
  // mixed degrees and orientations
  const GradedStringDiagram mixed{{up(1), down(3)}, {down(3), up(1)}, {{T::cross(0)}}};
  CHECK(eval_string(mixed) == -1);
}

TEST_CASE("absorbing evaluation into a coupon") {
  for (int m1 = -3; m1 <= 3; ++m1)
    for (int m2 = -2; m2 <= 2; ++m2) {
      const int n = m1 + m2;
      const GradedStringDiagram merged{{up(m1), up(m2)}, {up(n)}, {{T::coupon(0, 2, {up(n)})}}};
      // right-handed cap: the left strand runs down into the coupon
      const GradedStringDiagram right{
          {up(m1), up(m2)}, {up(n)}, {{T::coupon(1, 1, {down(m1), up(n)})}, {T::cap(0)}}};
      CHECK(check_relation(right, merged, pow_sign(m1)));
      // left-most strand oriented upwards: a left-handed cap, no sign
      const GradedStringDiagram merged_up{{down(m1), up(m2)}, {up(n - 2 * m1)},
                                          {{T::coupon(0, 2, {up(n - 2 * m1)})}}};
      const GradedStringDiagram left{{down(m1), up(m2)},
                                     {up(n - 2 * m1)},
                                     {{T::coupon(1, 1, {up(m1), up(n - 2 * m1)})}, {T::cap(0)}}};
      CHECK(check_relation(left, merged_up, 1));
      // coevaluation absorbed on the input side
      const GradedStringDiagram split{{up(n)}, {up(m1), up(m2)}, {{T::coupon(0, 1, {up(m1), up(m2)})}}};
      const GradedStringDiagram coev{
          {up(n)}, {up(m1), up(m2)}, {{T::cup(0, up(m1))}, {T::coupon(1, 2, {up(m2)})}}};
      CHECK(check_relation(coev, split, 1));
    }
}

TEST_CASE("internal composition of coupons") {
  const GradedStringDiagram two{{up(1), up(2)},
                                {up(-1), up(4)},
                                {{T::coupon(0, 2, {up(3)})}, {T::coupon(0, 1, {up(-1), up(4)})}}};
  const GradedStringDiagram one{{up(1), up(2)}, {up(-1), up(4)}, {{T::coupon(0, 2, {up(-1), up(4)})}}};
  CHECK(check_relation(two, one));
}

TEST_CASE("zig-zags and distant tokens") {
  for (int m = -2; m <= 2; ++m) {
    for (bool o : {true, false}) {
      const GradedStrand s{m, o};
      const GradedStringDiagram z1{{s}, {s}, {{T::cup(1, s.reversed())}, {T::cap(0)}}};
      const GradedStringDiagram z2{{s}, {s}, {{T::cup(0, s)}, {T::cap(1)}}};
      CHECK(eval_string(z1) == 1);
      CHECK(eval_string(z2) == 1);
    }
  }
  // tokens on disjoint strands commute: one slice vs two slices in either order
  const std::vector<GradedStrand> src{up(1), up(1), up(3), down(3)};
  const GradedStringDiagram a{src, {up(1), up(1)}, {{T::cross(0), T::cap(2)}}};
  const GradedStringDiagram b{src, {up(1), up(1)}, {{T::cross(0)}, {T::cap(2)}}};
  const GradedStringDiagram c{src, {up(1), up(1)}, {{T::cap(2)}, {T::cross(0)}}};
  CHECK(eval_string(a) == eval_string(b));
  CHECK(eval_string(a) == eval_string(c));
  CHECK(eval_string(a) == 1);  // (-1) from the crossing, (-1) from the right cap
  // braid relation
  const std::vector<GradedStrand> three{up(1), down(2), up(3)};
  const GradedStringDiagram l{three, {up(3), down(2), up(1)}, {{T::cross(0)}, {T::cross(1)}, {T::cross(0)}}};
  const GradedStringDiagram r{three, {up(3), down(2), up(1)}, {{T::cross(1)}, {T::cross(0)}, {T::cross(1)}}};
  CHECK(check_relation(l, r));
}

TEST_CASE("monoidal on random closed diagrams, and even degrees give +1") {
  std::mt19937 rng(17);
  std::vector<GradedStringDiagram> closed;
  for (int trial = 0; trial < 400 && closed.size() < 40; ++trial)
    if (auto d = random_closed(rng)) closed.push_back(*d);
  REQUIRE(closed.size() > 10);
  for (std::size_t i = 0; i + 1 < closed.size(); ++i) {
    const auto& d = closed[i];
    const auto& e = closed[i + 1];
    // stacked closed diagrams
    GradedStringDiagram both{{}, {}, d.slices};
    for (const auto& s : e.slices) both.slices.push_back(s);
    CHECK(eval_string(both) == eval_string(d) * eval_string(e));
    // e drawn inside the first cup of d, i.e. nested side by side
    GradedStringDiagram nested{{}, {}, {}};
    nested.slices.push_back(d.slices.front());
    for (auto s : e.slices) {
      for (auto& t : s) t.pos += 1;
      nested.slices.push_back(s);
    }
    for (std::size_t k = 1; k < d.slices.size(); ++k) nested.slices.push_back(d.slices[k]);
    CHECK(eval_string(nested) == eval_string(d) * eval_string(e));
  }

  std::mt19937 rng2(19);
  for (int trial = 0; trial < 50; ++trial) {
    GradedStringDiagram d{{}, {}, {}};
    std::vector<GradedStrand> cur;
    for (int s = 0; s < 6; ++s) {
      const int m = 2 * std::uniform_int_distribution<int>(-2, 2)(rng2);
      std::vector<T> slice{T::cup(cur.size(), {m, bool(rng2() % 2)})};
      cur = apply_graded_slice(cur, slice, nullptr);
      d.slices.push_back(slice);
      if (cur.size() >= 3) {
        d.slices.push_back({T::cross(cur.size() - 3)});
        cur = apply_graded_slice(cur, d.slices.back(), nullptr);
      }
    }
    while (!cur.empty()) {
      std::size_t p = 0;
      while (cur[p + 1] != cur[p].reversed()) {
        d.slices.push_back({T::cross(p + 1)});
        cur = apply_graded_slice(cur, d.slices.back(), nullptr);
        if (cur[p + 1] != cur[p].reversed()) ++p;
        if (p + 1 >= cur.size()) p = 0;
      }
      d.slices.push_back({T::cap(p)});
      cur = apply_graded_slice(cur, d.slices.back(), nullptr);
    }
    CHECK(eval_string(d) == 1);
  }
}

TEST_CASE("invalid diagrams are rejected") {
  CHECK_THROWS_AS(eval_string({{up(1), up(1)}, {}, {{T::cap(0)}}}), ShapeError);
  CHECK_THROWS_AS(eval_string({{up(1), up(1)}, {up(3)}, {{T::coupon(0, 2, {up(3)})}}}), ShapeError);
  CHECK_THROWS_AS(eval_string({{up(1)}, {up(2)}, {}}), ShapeError);
  CHECK_THROWS_AS(eval_string({{up(1), up(1), up(1)}, {}, {{T::cross(0), T::cross(1)}}}), ShapeError);
  CHECK_THROWS_AS(eval_string({{up(1)}, {up(1)}, {{T::identity(0, up(2))}}}), ShapeError);
  CHECK_THROWS_AS(check_relation(parallel({up(1)}), parallel({up(2)})), ShapeError);
}

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace chainrt {

/// A strand carrying the line k(m); a downward strand stands for k(m)* = k(-m).
struct GradedStrand {
  int m = 0;
  bool up = true;

  int degree() const { return up ? m : -m; }
  GradedStrand reversed() const { return {m, !up}; }
  friend bool operator==(const GradedStrand&, const GradedStrand&) = default;
};

struct GradedToken {
  enum class Kind { id, cross, cap, cup, coupon };
  Kind kind = Kind::id;
  std::size_t pos = 0;
  GradedStrand strand;                // id: expected strand; cup: left strand created
  std::size_t arity = 0;              // coupon: number of input strands
  std::vector<GradedStrand> outputs;  // coupon: output strands

  static GradedToken identity(std::size_t pos, GradedStrand s) { return {Kind::id, pos, s, 0, {}}; }
  static GradedToken cross(std::size_t pos) { return {Kind::cross, pos, {}, 0, {}}; }
  static GradedToken cap(std::size_t pos) { return {Kind::cap, pos, {}, 0, {}}; }
  static GradedToken cup(std::size_t pos, GradedStrand left) { return {Kind::cup, pos, left, 0, {}}; }
  static GradedToken coupon(std::size_t pos, std::size_t arity, std::vector<GradedStrand> outputs) {
    return {Kind::coupon, pos, {}, arity, std::move(outputs)};
  }
};

/// Slice-encoded string diagram over Z-graded lines, read bottom to top.
/// Positions in a slice refer to the strands entering that slice; tokens of
/// one slice act on disjoint strands.
struct GradedStringDiagram {
  std::vector<GradedStrand> source;
  std::vector<GradedStrand> target;
  std::vector<std::vector<GradedToken>> slices;
};

/// Boundary reached after applying one slice; throws ShapeError if the slice
/// does not fit.
std::vector<GradedStrand> apply_graded_slice(const std::vector<GradedStrand>& strands,
                                              const std::vector<GradedToken>& slice, int* sign);

/// Evaluates in graded vector spaces with the signed symmetry. Every object
/// is a line, so the value is a sign: crossings give (-1)^{pq}, right-handed
/// caps and cups give (-1)^m, coupons are the tautological identification.
/// Throws ShapeError on an invalid diagram.
int eval_string(const GradedStringDiagram& d);

/// eval_string(d) == sign * eval_string(d2); throws ShapeError if the
/// boundaries differ.
bool check_relation(const GradedStringDiagram& d, const GradedStringDiagram& d2, int sign = 1);

std::string to_string(const GradedStrand& s);

}  // namespace chainrt

#include "chainrt/graded_strings.hpp"

#include <algorithm>

#include "chainrt/errors.hpp"

namespace chainrt {

namespace {

int parity_sign(long k) { return (k % 2 == 0) ? 1 : -1; }

std::size_t width(const GradedToken& t) {
  switch (t.kind) {
    case GradedToken::Kind::id: return 1;
    case GradedToken::Kind::cross:
    case GradedToken::Kind::cap: return 2;
    case GradedToken::Kind::cup: return 0;
    case GradedToken::Kind::coupon: return t.arity;
  }
  return 0;
}

}  // namespace

std::string to_string(const GradedStrand& s) {
  return "(" + std::to_string(s.m) + (s.up ? ",+)" : ",-)");
}

std::vector<GradedStrand> apply_graded_slice(const std::vector<GradedStrand>& strands,
                                              const std::vector<GradedToken>& slice, int* sign) {
  std::vector<const GradedToken*> order;
  for (const auto& t : slice) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(),
                   [](const GradedToken* a, const GradedToken* b) { return a->pos < b->pos; });
  std::size_t end = 0;
  bool prev_empty = false;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const GradedToken& t = *order[i];
    const bool empty = width(t) == 0;
    if (i > 0 && (t.pos < end || (empty && prev_empty && t.pos == end)))
      throw ShapeError("slice tokens overlap at position " + std::to_string(t.pos));
    end = t.pos + width(t);
    prev_empty = empty;
    if (end > strands.size()) throw ShapeError("slice token exceeds the strand count");
  }

  std::vector<GradedStrand> out = strands;
  int s = 1;
  // Right to left, so earlier positions stay valid.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const GradedToken& t = **it;
    const std::size_t p = t.pos;
    switch (t.kind) {
      case GradedToken::Kind::id:
        if (out[p] != t.strand) throw ShapeError("id token does not match strand " + to_string(out[p]));
        break;
      case GradedToken::Kind::cross:
        s *= parity_sign(long(out[p].degree()) * out[p + 1].degree());
        std::swap(out[p], out[p + 1]);
        break;
      case GradedToken::Kind::cap:
        if (out[p + 1] != out[p].reversed())
          throw ShapeError("cap joins incompatible strands " + to_string(out[p]) + " " +
                           to_string(out[p + 1]));
        if (out[p].up) s *= parity_sign(out[p].m);
        out.erase(out.begin() + long(p), out.begin() + long(p) + 2);
        break;
      case GradedToken::Kind::cup:
        if (!t.strand.up) s *= parity_sign(t.strand.m);
        out.insert(out.begin() + long(p), {t.strand, t.strand.reversed()});
        break;
      case GradedToken::Kind::coupon: {
        long in = 0, outdeg = 0;
        for (std::size_t k = 0; k < t.arity; ++k) in += out[p + k].degree();
        for (const auto& o : t.outputs) outdeg += o.degree();
        if (in != outdeg) throw ShapeError("coupon does not preserve total degree");
        out.erase(out.begin() + long(p), out.begin() + long(p + t.arity));
        out.insert(out.begin() + long(p), t.outputs.begin(), t.outputs.end());
        break;
      }
    }
  }
  if (sign) *sign *= s;
  return out;
}

int eval_string(const GradedStringDiagram& d) {
  int sign = 1;
  std::vector<GradedStrand> cur = d.source;
  for (const auto& slice : d.slices) cur = apply_graded_slice(cur, slice, &sign);
  if (cur != d.target) throw ShapeError("diagram does not end at its target boundary");
  return sign;
}

bool check_relation(const GradedStringDiagram& d, const GradedStringDiagram& d2, int sign) {
  if (d.source != d2.source || d.target != d2.target)
    throw ShapeError("relation sides have different boundaries");
  return eval_string(d) == sign * eval_string(d2);
}

}  // namespace chainrt

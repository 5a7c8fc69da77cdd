#include "chainrt/skein.hpp"

#include <algorithm>

#include "chainrt/errors.hpp"

namespace chainrt {

std::string to_string(SkeinMove move) {
  switch (move) {
    case SkeinMove::U1:
      return "U1";
    case SkeinMove::U2:
      return "U2";
    case SkeinMove::U3:
      return "U3";
    case SkeinMove::RII:
      return "RII";
    case SkeinMove::RIII:
      return "RIII";
    case SkeinMove::framed_RI:
      return "framed-RI";
  }
  return "?";
}

SkeinMove parse_skein_move(const std::string& name) {
  for (SkeinMove m : {SkeinMove::U1, SkeinMove::U2, SkeinMove::U3, SkeinMove::RII, SkeinMove::RIII,
                      SkeinMove::framed_RI})
    if (to_string(m) == name) return m;
  throw ShapeError("unknown skein move: " + name);
}

namespace {

using Kind = RibbonToken::Kind;

bool is_cross(const RibbonToken& t) { return t.kind == Kind::cross_pos || t.kind == Kind::cross_neg; }
bool is_twist(const RibbonToken& t) { return t.kind == Kind::twist_pos || t.kind == Kind::twist_neg; }

const RibbonToken* only(const RibbonDiagram& d, std::size_t k) {
  if (k >= d.slices.size() || d.slices[k].size() != 1) return nullptr;
  return &d.slices[k][0];
}

bool u1_applies(const RibbonDiagram& d, std::size_t k) {
  const RibbonToken* t = only(d, k);
  if (!t || t->kind != Kind::coupon || t->arity != 1 || t->outputs.size() != 1) return false;
  if (t->label.dual || !t->label.post.empty()) return false;
  return t->outputs[0].up && strands_at(d, k)[t->pos].up;
}

bool u2_applies(const RibbonDiagram& d, std::size_t k) {
  const RibbonToken* a = only(d, k);
  const RibbonToken* b = only(d, k + 1);
  if (!a || !b || a->kind != Kind::coupon || b->kind != Kind::coupon) return false;
  if (a->label.dual || !a->label.post.empty() || b->label.dual) return false;
  return b->pos == a->pos && b->arity == a->outputs.size();
}

bool u3_applies(const RibbonDiagram& d, std::size_t k) {
  const RibbonToken* a = only(d, k);
  const RibbonToken* b = only(d, k + 1);
  if (!a || !b || a->kind != Kind::coupon || !(is_cross(*b) || is_twist(*b))) return false;
  const std::size_t w = is_cross(*b) ? 2 : 1;
  return b->pos >= a->pos && b->pos + w <= a->pos + coupon_outputs(*a).size();
}

bool rii_removable(const RibbonDiagram& d, std::size_t k) {
  const RibbonToken* a = only(d, k);
  const RibbonToken* b = only(d, k + 1);
  return a && b && is_cross(*a) && is_cross(*b) && a->pos == b->pos && a->kind != b->kind;
}

bool riii_applies(const RibbonDiagram& d, std::size_t k) {
  const RibbonToken* a = only(d, k);
  const RibbonToken* b = only(d, k + 1);
  const RibbonToken* c = only(d, k + 2);
  if (!a || !b || !c || !is_cross(*a) || a->kind != b->kind || a->kind != c->kind) return false;
  if (a->pos != c->pos) return false;
  return b->pos == a->pos + 1 || a->pos == b->pos + 1;
}

std::vector<std::vector<RibbonToken>> curl(std::size_t p, const RibbonStrand& s, bool positive) {
  return {{RibbonToken::cup(p + 1, s)}, {RibbonToken::cross(p, positive)}, {RibbonToken::cap(p + 1)}};
}

[[noreturn]] void not_applicable(SkeinMove move, const SkeinSite& site) {
  throw ShapeError("skein move " + to_string(move) + " does not apply at slice " + std::to_string(site.slice) +
                   ", position " + std::to_string(site.pos));
}

}  // namespace

std::vector<SkeinSite> skein_sites(const RibbonDiagram& input, SkeinMove move) {
  const RibbonDiagram d = normalize_slices(input);
  const std::size_t n = d.slices.size();
  std::vector<SkeinSite> out;
  switch (move) {
    case SkeinMove::U1:
      for (std::size_t k = 0; k < n; ++k)
        if (u1_applies(d, k)) out.push_back({k, d.slices[k][0].pos, 0});
      break;
    case SkeinMove::U2:
      for (std::size_t k = 0; k + 1 < n; ++k)
        if (u2_applies(d, k)) out.push_back({k, d.slices[k][0].pos, 0});
      break;
    case SkeinMove::U3:
      for (std::size_t k = 0; k + 1 < n; ++k)
        if (u3_applies(d, k)) out.push_back({k, d.slices[k][0].pos, 0});
      break;
    case SkeinMove::RII:
      for (std::size_t k = 0; k <= n; ++k) {
        const std::size_t count = strands_at(d, k).size();
        for (std::size_t i = 0; i + 1 < count; ++i) {
          out.push_back({k, i, 0});
          out.push_back({k, i, 1});
        }
        if (k + 1 < n && rii_removable(d, k)) out.push_back({k, d.slices[k][0].pos, 2});
      }
      break;
    case SkeinMove::RIII:
      for (std::size_t k = 0; k + 2 < n; ++k)
        if (riii_applies(d, k)) out.push_back({k, d.slices[k][0].pos, 0});
      break;
    case SkeinMove::framed_RI:
      for (std::size_t k = 0; k <= n; ++k) {
        if (k < n && is_twist(d.slices[k][0])) out.push_back({k, d.slices[k][0].pos, 0});
        const std::size_t count = strands_at(d, k).size();
        for (std::size_t i = 0; i < count; ++i) out.push_back({k, i, 1});
      }
      break;
  }
  return out;
}

RibbonDiagram apply_skein(const RibbonDiagram& input, SkeinMove move, const SkeinSite& site) {
  RibbonDiagram d = normalize_slices(input);
  auto& sl = d.slices;
  const std::size_t k = site.slice;
  auto replace = [&](std::size_t first, std::size_t count, std::vector<std::vector<RibbonToken>> with) {
    sl.erase(sl.begin() + long(first), sl.begin() + long(first + count));
    sl.insert(sl.begin() + long(first), with.begin(), with.end());
  };

  switch (move) {
    case SkeinMove::U1: {
      if (!u1_applies(d, k)) not_applicable(move, site);
      // f = (id_y (x) ev_x)(id_y (x) f* (x) id_x)(coev_y (x) id_x)
      const RibbonToken t = sl[k][0];
      const std::size_t p = t.pos;
      const RibbonStrand x = strands_at(d, k)[p], y = t.outputs[0];
      RibbonToken flipped = RibbonToken::coupon(p + 1, 1, {x.reversed()}, 0);
      flipped.label.word = t.label.word;
      flipped.label.dual = true;
      replace(k, 1, {{RibbonToken::cup(p, y)}, {flipped}, {RibbonToken::cap(p + 1)}});
      break;
    }
    case SkeinMove::U2: {
      if (!u2_applies(d, k)) not_applicable(move, site);
      RibbonToken merged = sl[k][0];
      const RibbonToken& b = sl[k + 1][0];
      merged.label.word.insert(merged.label.word.end(), b.label.word.begin(), b.label.word.end());
      merged.outputs = b.outputs;
      merged.label.post = b.label.post;
      replace(k, 2, {{merged}});
      break;
    }
    case SkeinMove::U3: {
      if (!u3_applies(d, k)) not_applicable(move, site);
      RibbonToken merged = sl[k][0];
      RibbonToken inner = sl[k + 1][0];
      inner.pos -= merged.pos;
      merged.label.post.push_back({inner});
      replace(k, 2, {{merged}});
      break;
    }
    case SkeinMove::RII: {
      if (site.variant == 2) {
        if (!rii_removable(d, k)) not_applicable(move, site);
        replace(k, 2, {});
        break;
      }
      if (k > sl.size() || site.pos + 1 >= strands_at(d, k).size()) not_applicable(move, site);
      const bool first = site.variant == 0;
      replace(k, 0, {{RibbonToken::cross(site.pos, first)}, {RibbonToken::cross(site.pos, !first)}});
      break;
    }
    case SkeinMove::RIII: {
      if (!riii_applies(d, k)) not_applicable(move, site);
      const bool positive = sl[k][0].kind == Kind::cross_pos;
      const std::size_t i = sl[k][0].pos, j = sl[k + 1][0].pos;
      replace(k, 3,
              {{RibbonToken::cross(j, positive)}, {RibbonToken::cross(i, positive)}, {RibbonToken::cross(j, positive)}});
      break;
    }
    case SkeinMove::framed_RI: {
      if (site.variant == 0) {
        if (k >= sl.size() || !is_twist(sl[k][0])) not_applicable(move, site);
        const RibbonToken t = sl[k][0];
        const RibbonStrand s = strands_at(d, k)[t.pos];
        replace(k, 1, curl(t.pos, s, t.kind == Kind::twist_pos));
        break;
      }
      if (k > sl.size()) not_applicable(move, site);
      const auto strands = strands_at(d, k);
      if (site.pos >= strands.size()) not_applicable(move, site);
      auto with = curl(site.pos, strands[site.pos], true);
      with.push_back({RibbonToken::twist(site.pos, false)});
      replace(k, 0, std::move(with));
      break;
    }
  }
  check_shape(d);
  return d;
}

}  // namespace chainrt

namespace chainrt {

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

bool coin(std::mt19937_64& rng) { return rng() % 2 == 0; }

}  // namespace

RibbonDiagram random_diagram(std::mt19937_64& rng, std::size_t label_count,
                             const std::vector<CouponSignature>& coupons, std::size_t steps, bool closed) {
  if (label_count == 0) throw ShapeError("random_diagram: no labels");
  std::vector<CouponSignature> usable;
  for (const auto& c : coupons)
    if (!closed || c.source == c.target) usable.push_back(c);

  RibbonDiagram d;
  if (!closed) {
    const std::size_t n = pick(rng, 3);
    for (std::size_t i = 0; i < n; ++i) d.source.push_back({pick(rng, label_count), coin(rng)});
  }
  std::vector<RibbonStrand> s = d.source;
  auto push = [&](RibbonToken t) {
    d.slices.push_back({t});
    s = apply_ribbon_slice(s, d.slices.back());
  };
  auto coupon_at = [&](std::size_t i) -> const CouponSignature* {
    std::vector<const CouponSignature*> fit;
    for (const auto& c : usable)
      if (s[i].up && s[i].label == c.source) fit.push_back(&c);
    return fit.empty() ? nullptr : fit[pick(rng, fit.size())];
  };

  for (std::size_t step = 0; step < steps; ++step) {
    const std::size_t kind = pick(rng, 7);
    if (s.size() < 2 || (kind == 0 && s.size() < 4)) {
      push(RibbonToken::cup(pick(rng, s.size() + 1), {pick(rng, label_count), coin(rng)}));
    } else if (kind == 1) {
      push(RibbonToken::cross(pick(rng, s.size() - 1), coin(rng)));
    } else if (kind == 2 && s.size() >= 3) {
      // a braid-relation pattern
      const std::size_t i = pick(rng, s.size() - 2);
      const bool pos = coin(rng);
      const std::size_t a = coin(rng) ? i : i + 1, b = a == i ? i + 1 : i;
      push(RibbonToken::cross(a, pos));
      push(RibbonToken::cross(b, pos));
      push(RibbonToken::cross(a, pos));
    } else if (kind == 3) {
      push(RibbonToken::twist(pick(rng, s.size()), coin(rng)));
    } else if (kind == 4) {
      const std::size_t i = pick(rng, s.size());
      if (const CouponSignature* c = coupon_at(i)) {
        RibbonToken t = RibbonToken::coupon(i, 1, {{c->target, true}}, c->morphism);
        push(t);
        // sometimes a second coupon or a twist right above
        if (const CouponSignature* c2 = coin(rng) ? coupon_at(i) : nullptr)
          push(RibbonToken::coupon(i, 1, {{c2->target, true}}, c2->morphism));
        else if (coin(rng))
          push(RibbonToken::twist(i, coin(rng)));
      }
    } else {
      // cap an adjacent dual pair if there is one
      std::vector<std::size_t> caps;
      for (std::size_t i = 0; i + 1 < s.size(); ++i)
        if (s[i].label == s[i + 1].label && s[i].up != s[i + 1].up) caps.push_back(i);
      if (!caps.empty() && s.size() > 2)
        push(RibbonToken::cap(caps[pick(rng, caps.size())]));
      else if (s.size() < 4)
        push(RibbonToken::cup(pick(rng, s.size() + 1), {pick(rng, label_count), coin(rng)}));
    }
  }
  if (closed) {
    while (!s.empty()) {
      std::size_t j = 1;
      while (j < s.size() && !(s[j].label == s[0].label && s[j].up != s[0].up)) ++j;
      if (j == s.size()) throw ShapeError("random_diagram: unpaired strand");
      for (std::size_t k = j; k > 1; --k) push(RibbonToken::cross(k - 1, coin(rng)));
      push(RibbonToken::cap(0));
    }
  }
  d.target = s;
  return d;
}

bool random_skein_step(std::mt19937_64& rng, const RibbonDiagram& d, SkeinMove& move, SkeinSite& site) {
  std::vector<SkeinMove> moves = {SkeinMove::U1, SkeinMove::U2, SkeinMove::U3, SkeinMove::RII, SkeinMove::RIII,
                                  SkeinMove::framed_RI};
  std::shuffle(moves.begin(), moves.end(), rng);
  for (SkeinMove m : moves) {
    const auto sites = skein_sites(d, m);
    if (sites.empty()) continue;
    move = m;
    site = sites[pick(rng, sites.size())];
    return true;
  }
  return false;
}

namespace {

std::vector<RepObject> label_pool(const HopfPtr& algebra) {
  std::vector<RepObject> pool = small_characters(algebra);
  if (algebra->dim() > 1) {
    // indecomposable projectives are too large for dense random tests;
    // a two-term sum keeps the dimensions small but non-trivial
    if (pool.size() >= 2) pool.push_back(direct_sum_rep(pool[0], pool[1]));
  } else {
    pool.push_back(vector_space(2));
  }
  return pool;
}

Matrix random_intertwiner(std::mt19937_64& rng, const RepObject& x, const RepObject& y) {
  const HomSpace hom(x, y);
  Vector c(hom.dim());
  for (auto& v : c) v = long(pick(rng, 5)) - 2;
  return hom.combine(c);
}

}  // namespace

RepLabels random_rep_labels(std::mt19937_64& rng, const HopfPtr& algebra, std::size_t objects,
                            std::vector<CouponSignature>& coupons) {
  const auto pool = label_pool(algebra);
  RepLabels out;
  for (std::size_t i = 0; i < objects; ++i) out.objects.push_back(pool[pick(rng, pool.size())]);
  coupons.clear();
  for (std::size_t a = 0; a < objects; ++a)
    for (std::size_t b = 0; b < objects; ++b) {
      if (a != b && HomSpace(out.objects[a], out.objects[b]).dim() == 0) continue;
      coupons.push_back({out.morphisms.size(), a, b});
      out.morphisms.push_back(
          {out.objects[a], out.objects[b], random_intertwiner(rng, out.objects[a], out.objects[b])});
    }
  return out;
}

ChainLabels random_chain_labels(std::mt19937_64& rng, const HopfPtr& algebra, std::size_t objects,
                                std::vector<CouponSignature>& coupons) {
  const auto chars = small_characters(algebra);
  RandomComplexOptions opts;
  opts.max_terms = 2;
  opts.max_width = 2;
  ChainLabels out;
  for (std::size_t i = 0; i < objects; ++i) out.objects.push_back(random_complex(rng, chars, opts));
  coupons.clear();
  for (std::size_t a = 0; a < objects; ++a)
    for (std::size_t b = 0; b < objects; ++b) {
      if (a != b && pick(rng, 2) == 0) continue;
      coupons.push_back({out.morphisms.size(), a, b});
      out.morphisms.push_back(random_chain_map(rng, out.objects[a], out.objects[b]));
    }
  return out;
}

}  // namespace chainrt

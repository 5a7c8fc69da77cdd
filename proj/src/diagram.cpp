#include "chainrt/diagram.hpp"

#include <algorithm>
#include <numeric>

#include "chainrt/errors.hpp"
#include "chainrt/parallel.hpp"

namespace chainrt {

RibbonToken RibbonToken::cross(std::size_t pos, bool positive) {
  RibbonToken t;
  t.kind = positive ? Kind::cross_pos : Kind::cross_neg;
  t.pos = pos;
  return t;
}

RibbonToken RibbonToken::twist(std::size_t pos, bool positive) {
  RibbonToken t;
  t.kind = positive ? Kind::twist_pos : Kind::twist_neg;
  t.pos = pos;
  return t;
}

RibbonToken RibbonToken::cap(std::size_t pos) {
  RibbonToken t;
  t.kind = Kind::cap;
  t.pos = pos;
  return t;
}

RibbonToken RibbonToken::cup(std::size_t pos, RibbonStrand left) {
  RibbonToken t;
  t.kind = Kind::cup;
  t.pos = pos;
  t.strand = left;
  return t;
}

RibbonToken RibbonToken::coupon(std::size_t pos, std::size_t arity, std::vector<RibbonStrand> outputs,
                                std::size_t morphism) {
  RibbonToken t;
  t.kind = Kind::coupon;
  t.pos = pos;
  t.arity = arity;
  t.outputs = std::move(outputs);
  t.label.word = {morphism};
  return t;
}

namespace {

std::size_t width(const RibbonToken& t) {
  switch (t.kind) {
    case RibbonToken::Kind::cross_pos:
    case RibbonToken::Kind::cross_neg:
    case RibbonToken::Kind::cap:
      return 2;
    case RibbonToken::Kind::twist_pos:
    case RibbonToken::Kind::twist_neg:
      return 1;
    case RibbonToken::Kind::cup:
      return 0;
    case RibbonToken::Kind::coupon:
      return t.arity;
  }
  return 0;
}

// Tokens in the order they are applied: right to left, and at a shared
// position the token with strands before the zero-width one.
std::vector<const RibbonToken*> application_order(const std::vector<RibbonToken>& slice) {
  std::vector<const RibbonToken*> out;
  for (const auto& t : slice) out.push_back(&t);
  std::stable_sort(out.begin(), out.end(), [](const RibbonToken* a, const RibbonToken* b) {
    if (a->pos != b->pos) return a->pos > b->pos;
    return width(*a) > width(*b);
  });
  return out;
}

void check_disjoint(const std::vector<RibbonToken>& slice, std::size_t count) {
  std::vector<const RibbonToken*> asc;
  for (const auto& t : slice) asc.push_back(&t);
  std::stable_sort(asc.begin(), asc.end(), [](const RibbonToken* a, const RibbonToken* b) {
    if (a->pos != b->pos) return a->pos < b->pos;
    return width(*a) < width(*b);
  });
  std::size_t end = 0;
  const RibbonToken* prev = nullptr;
  for (const RibbonToken* t : asc) {
    if (t->pos + width(*t) > count) throw ShapeError("ribbon slice: token beyond the strands");
    if (prev && t->pos < end) throw ShapeError("ribbon slice: overlapping tokens");
    if (prev && width(*t) == 0 && width(*prev) == 0 && prev->pos == t->pos)
      throw ShapeError("ribbon slice: two cups at one position");
    end = t->pos + width(*t);
    prev = t;
  }
}

std::vector<RibbonStrand> apply_token(std::vector<RibbonStrand> s, const RibbonToken& t) {
  const std::size_t p = t.pos;
  switch (t.kind) {
    case RibbonToken::Kind::cross_pos:
    case RibbonToken::Kind::cross_neg:
      std::swap(s[p], s[p + 1]);
      break;
    case RibbonToken::Kind::twist_pos:
    case RibbonToken::Kind::twist_neg:
      break;
    case RibbonToken::Kind::cap:
      if (s[p].label != s[p + 1].label || s[p].up == s[p + 1].up)
        throw ShapeError("ribbon slice: cap joins strands that are not dual");
      s.erase(s.begin() + long(p), s.begin() + long(p + 2));
      break;
    case RibbonToken::Kind::cup:
      s.insert(s.begin() + long(p), {t.strand, t.strand.reversed()});
      break;
    case RibbonToken::Kind::coupon: {
      const auto out = coupon_outputs(t);
      s.erase(s.begin() + long(p), s.begin() + long(p + t.arity));
      s.insert(s.begin() + long(p), out.begin(), out.end());
      break;
    }
  }
  return s;
}

}  // namespace

std::vector<RibbonStrand> coupon_outputs(const RibbonToken& t) {
  std::vector<RibbonStrand> s = t.outputs;
  for (const auto& slice : t.label.post) {
    for (const auto& tok : slice)
      if (tok.kind != RibbonToken::Kind::cross_pos && tok.kind != RibbonToken::Kind::cross_neg &&
          tok.kind != RibbonToken::Kind::twist_pos && tok.kind != RibbonToken::Kind::twist_neg)
        throw ShapeError("coupon: post braid may contain only crossings and twists");
    s = apply_ribbon_slice(s, slice);
  }
  return s;
}

std::vector<RibbonStrand> apply_ribbon_slice(const std::vector<RibbonStrand>& strands,
                                             const std::vector<RibbonToken>& slice) {
  check_disjoint(slice, strands.size());
  std::vector<RibbonStrand> s = strands;
  for (const RibbonToken* t : application_order(slice)) s = apply_token(std::move(s), *t);
  return s;
}

std::vector<RibbonStrand> strands_at(const RibbonDiagram& d, std::size_t k) {
  std::vector<RibbonStrand> s = d.source;
  for (std::size_t i = 0; i < k && i < d.slices.size(); ++i) s = apply_ribbon_slice(s, d.slices[i]);
  return s;
}

void check_shape(const RibbonDiagram& d) {
  if (strands_at(d, d.slices.size()) != d.target) throw ShapeError("ribbon diagram: slices do not reach the target");
}

RibbonDiagram normalize_slices(const RibbonDiagram& d) {
  RibbonDiagram out{d.source, d.target, {}};
  std::vector<RibbonStrand> s = d.source;
  for (const auto& slice : d.slices) {
    check_disjoint(slice, s.size());
    for (const RibbonToken* t : application_order(slice)) {
      out.slices.push_back({*t});
      s = apply_token(std::move(s), *t);
    }
  }
  return out;
}

// ------------------------------------------------------------ evaluation

namespace {

struct RepTraits {
  using Object = RepObject;
  using Morphism = RepMorphism;

  static Object unit(const HopfPtr& h) { return unit_rep(h); }
  static Object tensor(const HopfPtr& h, const std::vector<Object>& xs) {
    if (xs.empty()) return unit(h);
    Object acc = xs.back();
    for (std::size_t k = xs.size() - 1; k-- > 0;) acc = tensor_rep(xs[k], acc);
    return acc;
  }
  static const HopfPtr& algebra(const Object& x) { return x.algebra_ptr(); }
  static Object dual(const Object& x) { return dual_rep(x); }
  static Morphism identity(const Object& x) { return chainrt::identity(x); }
  static Morphism compose(const Morphism& g, const Morphism& f) { return chainrt::compose(g, f); }
  static Morphism dual_map(const Morphism& f) { return dual_morphism(f); }
  static const Object& source(const Morphism& f) { return f.source; }
  static const Object& target(const Morphism& f) { return f.target; }
  static Morphism braid(const Object& a, const Object& b, bool pos) { return pos ? braiding(a, b) : braiding_inv(a, b); }
  static Morphism theta(const Object& a, bool pos) { return pos ? twist(a) : twist_inv(a); }
  static Morphism ev_left(const Object& x) { return ev(x); }
  static Morphism coev_left(const Object& x) { return coev(x); }
  static Morphism ev_r(const Object& x) { return ev_right(x); }
  static Morphism coev_r(const Object& x) { return coev_right(x); }

  static Morphism local(const std::vector<Object>& factors, std::size_t pos, std::size_t width,
                        const Morphism& f, const Object& src, const Object& tgt) {
    std::size_t dl = 1, dr = 1;
    for (std::size_t k = 0; k < pos; ++k) dl *= factors[k].dim();
    for (std::size_t k = pos + width; k < factors.size(); ++k) dr *= factors[k].dim();
    return {src, tgt, kron(Matrix::identity(dl), kron(f.matrix, Matrix::identity(dr)))};
  }
};

struct ChainTraits {
  using Object = ChainObject;
  using Morphism = ChainMap;

  static Object unit(const HopfPtr& h) { return unit_chain(h); }
  static Object tensor(const HopfPtr& h, const std::vector<Object>& xs) {
    return xs.empty() ? unit(h) : tensor_chain(xs);
  }
  static const HopfPtr& algebra(const Object& x) { return x.algebra_ptr(); }
  static Object dual(const Object& x) { return dual_chain(x); }
  static Morphism identity(const Object& x) { return identity_chain(x); }
  static Morphism compose(const Morphism& g, const Morphism& f) { return compose_chain(g, f); }
  static Morphism dual_map(const Morphism& f) { return dual_chain_map(f); }
  static const Object& source(const Morphism& f) { return f.source; }
  static const Object& target(const Morphism& f) { return f.target; }
  static Morphism braid(const Object& a, const Object& b, bool pos) {
    return pos ? braiding_chain(a, b) : braiding_inv_chain(a, b);
  }
  static Morphism theta(const Object& a, bool pos) { return pos ? twist_chain(a) : twist_inv_chain(a); }
  static Morphism ev_left(const Object& x) { return ev_chain(x); }
  static Morphism coev_left(const Object& x) { return coev_chain(x); }
  static Morphism ev_r(const Object& x) { return ev_right_chain(x); }
  static Morphism coev_r(const Object& x) { return coev_right_chain(x); }
};

template <class T>
class Engine {
 public:
  using Object = typename T::Object;
  using Morphism = typename T::Morphism;

  Engine(const DiagramLabels<Object, Morphism>& labels) : labels_(labels) {
    algebra_ = labels.objects.empty() ? HopfAlgebra::trivial() : T::algebra(labels.objects.front());
    for (const auto& x : labels.objects) {
      if (T::algebra(x) != algebra_) throw ShapeError("diagram labels over different algebras");
      duals_.push_back(T::dual(x));
    }
  }

  const Object& object(const RibbonStrand& s) const {
    if (s.label >= labels_.objects.size()) throw ShapeError("diagram: strand label out of range");
    return s.up ? labels_.objects[s.label] : duals_[s.label];
  }

  std::vector<Object> objects(const std::vector<RibbonStrand>& s) const {
    std::vector<Object> out;
    for (const auto& st : s) out.push_back(object(st));
    return out;
  }

  Object tensor(const std::vector<Object>& xs) const { return T::tensor(algebra_, xs); }

  // Value of a coupon as a map from its input strands to its outputs.
  Morphism coupon(const RibbonToken& t, const std::vector<RibbonStrand>& inputs) const {
    const auto& word = t.label.word;
    if (word.empty()) throw ShapeError("coupon: empty label");
    for (std::size_t k : word)
      if (k >= labels_.morphisms.size()) throw ShapeError("coupon: morphism label out of range");
    Morphism m = labels_.morphisms[word[0]];
    for (std::size_t k = 1; k < word.size(); ++k) m = T::compose(labels_.morphisms[word[k]], m);
    if (t.label.dual) {
      if (inputs.size() != 1 || t.outputs.size() != 1) throw ShapeError("coupon: only 1-to-1 coupons dualize");
      m = T::dual_map(m);
    }
    if (!(T::source(m) == tensor(objects(inputs))))
      throw ShapeError("coupon: label source does not match the input strands");
    if (!(T::target(m) == tensor(objects(t.outputs))))
      throw ShapeError("coupon: label target does not match the output strands");
    if (t.label.post.empty()) return m;
    return T::compose(run(t.outputs, t.label.post), m);
  }

  // Local map of one token and its replacement strands.
  std::pair<Morphism, std::vector<RibbonStrand>> token(const RibbonToken& t,
                                                       const std::vector<RibbonStrand>& s) const {
    const std::size_t p = t.pos;
    switch (t.kind) {
      case RibbonToken::Kind::cross_pos:
      case RibbonToken::Kind::cross_neg:
        return {T::braid(object(s[p]), object(s[p + 1]), t.kind == RibbonToken::Kind::cross_pos), {s[p + 1], s[p]}};
      case RibbonToken::Kind::twist_pos:
      case RibbonToken::Kind::twist_neg:
        return {T::theta(object(s[p]), t.kind == RibbonToken::Kind::twist_pos), {s[p]}};
      case RibbonToken::Kind::cap: {
        const Object& x = labels_.objects.at(s[p].label);
        return {s[p].up ? T::ev_r(x) : T::ev_left(x), {}};
      }
      case RibbonToken::Kind::cup: {
        const Object& x = labels_.objects.at(t.strand.label);
        return {t.strand.up ? T::coev_left(x) : T::coev_r(x), {t.strand, t.strand.reversed()}};
      }
      case RibbonToken::Kind::coupon: {
        std::vector<RibbonStrand> in(s.begin() + long(p), s.begin() + long(p + t.arity));
        return {coupon(t, in), coupon_outputs(t)};
      }
    }
    throw ShapeError("diagram: unknown token");
  }

  // Evaluates slices starting from the given strands.
  Morphism run(const std::vector<RibbonStrand>& start, const std::vector<std::vector<RibbonToken>>& slices) const {
    std::vector<RibbonStrand> s = start;
    std::vector<Object> factors = objects(s);
    Object current = tensor(factors);
    Morphism total = T::identity(current);
    for (const auto& slice : slices) {
      check_disjoint(slice, s.size());
      for (const RibbonToken* t : application_order(slice)) {
        auto [f, repl] = token(*t, s);
        const std::size_t w = width(*t);
        std::vector<RibbonStrand> ns = s;
        ns.erase(ns.begin() + long(t->pos), ns.begin() + long(t->pos + w));
        ns.insert(ns.begin() + long(t->pos), repl.begin(), repl.end());
        const std::vector<Object> nf = objects(ns);
        const Object next = tensor(nf);
        total = T::compose(local(factors, t->pos, w, objects(repl), f, current, next), total);
        s = std::move(ns);
        factors = nf;
        current = next;
      }
    }
    return total;
  }

  Morphism evaluate(const RibbonDiagram& d) const {
    check_shape(d);
    return run(d.source, d.slices);
  }

 private:
  Morphism local(const std::vector<Object>& factors, std::size_t pos, std::size_t w,
                 const std::vector<Object>& replacement, const Morphism& f, const Object& src,
                 const Object& tgt) const;

  const DiagramLabels<Object, Morphism>& labels_;
  HopfPtr algebra_;
  std::vector<Object> duals_;
};

template <>
RepMorphism Engine<RepTraits>::local(const std::vector<RepObject>& factors, std::size_t pos, std::size_t w,
                                     const std::vector<RepObject>&, const RepMorphism& f, const RepObject& src,
                                     const RepObject& tgt) const {
  return RepTraits::local(factors, pos, w, f, src, tgt);
}

template <>
ChainMap Engine<ChainTraits>::local(const std::vector<ChainObject>& factors, std::size_t pos, std::size_t w,
                                    const std::vector<ChainObject>& replacement, const ChainMap& f,
                                    const ChainObject& src, const ChainObject& tgt) const {
  return apply_local(factors, pos, w, replacement, f, &src, &tgt);
}

}  // namespace

RepMorphism evaluate(const RibbonDiagram& d, const RepLabels& labels) { return Engine<RepTraits>(labels).evaluate(d); }

ChainMap evaluate(const RibbonDiagram& d, const ChainLabels& labels) { return Engine<ChainTraits>(labels).evaluate(d); }

// ------------------------------------------------------------ separation

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  std::vector<std::size_t> label;

  std::size_t fresh(std::size_t lab) {
    parent.push_back(parent.size());
    label.push_back(lab);
    return parent.size() - 1;
  }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// One walk over the diagram that tracks a segment id per strand. Segments
// are joined through crossings, twists, caps and cups; coupons start new
// ones. The callback sees every token together with the ids of the strands
// entering it and of those it creates.
template <class Fn>
void walk_segments(const RibbonDiagram& d, UnionFind& uf, std::vector<std::size_t>& source_ids,
                   std::vector<std::size_t>& target_ids, Fn&& fn) {
  std::vector<RibbonStrand> s = d.source;
  std::vector<std::size_t> ids;
  for (const auto& st : s) ids.push_back(uf.fresh(st.label));
  source_ids = ids;
  for (std::size_t k = 0; k < d.slices.size(); ++k) {
    check_disjoint(d.slices[k], s.size());
    for (const RibbonToken* t : application_order(d.slices[k])) {
      const std::size_t p = t->pos;
      std::vector<std::size_t> created;
      switch (t->kind) {
        case RibbonToken::Kind::cross_pos:
        case RibbonToken::Kind::cross_neg:
          fn(k, *t, s, ids, created);
          std::swap(ids[p], ids[p + 1]);
          break;
        case RibbonToken::Kind::twist_pos:
        case RibbonToken::Kind::twist_neg:
          fn(k, *t, s, ids, created);
          break;
        case RibbonToken::Kind::cap:
          uf.unite(ids[p], ids[p + 1]);
          fn(k, *t, s, ids, created);
          ids.erase(ids.begin() + long(p), ids.begin() + long(p + 2));
          break;
        case RibbonToken::Kind::cup: {
          const std::size_t id = uf.fresh(t->strand.label);
          created = {id, id};
          fn(k, *t, s, ids, created);
          ids.insert(ids.begin() + long(p), created.begin(), created.end());
          break;
        }
        case RibbonToken::Kind::coupon: {
          for (const auto& o : coupon_outputs(*t)) created.push_back(uf.fresh(o.label));
          fn(k, *t, s, ids, created);
          ids.erase(ids.begin() + long(p), ids.begin() + long(p + t->arity));
          ids.insert(ids.begin() + long(p), created.begin(), created.end());
          break;
        }
      }
      s = apply_token(std::move(s), *t);
    }
  }
  target_ids = ids;
}


}  // namespace

ChainMap evaluate_separated(const RibbonDiagram& d, const ChainLabels& labels) {
  check_shape(d);
  const Engine<ChainTraits> chain_engine(labels);
  const HopfPtr algebra = labels.objects.empty() ? HopfAlgebra::trivial() : labels.objects.front().algebra_ptr();

  // Pass 1: segment classes and the chain-level coupon values.
  UnionFind uf;
  std::vector<std::size_t> src_ids, tgt_ids;
  std::vector<ChainMap> coupon_values;
  std::vector<std::vector<RibbonStrand>> coupon_inputs;
  walk_segments(d, uf, src_ids, tgt_ids,
                [&](std::size_t, const RibbonToken& t, const std::vector<RibbonStrand>& s,
                    const std::vector<std::size_t>&, const std::vector<std::size_t>&) {
                  if (t.kind != RibbonToken::Kind::coupon) return;
                  std::vector<RibbonStrand> in(s.begin() + long(t.pos), s.begin() + long(t.pos + t.arity));
                  coupon_values.push_back(chain_engine.coupon(t, in));
                  coupon_inputs.push_back(in);
                });
  std::vector<std::size_t> classes;
  std::map<std::size_t, std::size_t> class_index;
  for (std::size_t i = 0; i < uf.parent.size(); ++i)
    if (uf.find(i) == i) {
      class_index[i] = classes.size();
      classes.push_back(i);
    }

  // Degrees available to each class: the support of its label.
  std::vector<std::vector<int>> choices(classes.size());
  std::size_t combos = 1;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const ChainObject& x = labels.objects.at(uf.label[classes[c]]);
    for (int m = x.lo(); m <= x.hi(); ++m)
      if (x.dim(m) > 0) choices[c].push_back(m);
    combos *= choices[c].size();
  }

  const std::vector<ChainObject> src_factors = chain_engine.objects(d.source);
  const std::vector<ChainObject> tgt_factors = chain_engine.objects(d.target);
  const ChainObject src_total = chain_engine.tensor(src_factors);
  const ChainObject tgt_total = chain_engine.tensor(tgt_factors);
  const TensorLayout src_layout(src_factors), tgt_layout(tgt_factors);

  struct Term {
    int degree = 0;
    Matrix block;
    bool present = false;
  };
  std::vector<Term> terms(combos);

  parallel_for(combos, [&](std::size_t idx) {
    std::vector<int> deg(classes.size());
    std::size_t rem = idx;
    for (std::size_t c = classes.size(); c-- > 0;) {
      deg[c] = choices[c][rem % choices[c].size()];
      rem /= choices[c].size();
    }
    UnionFind local = uf;
    auto degree_of = [&](std::size_t id) { return deg[class_index.at(local.find(id))]; };
    auto class_of = [&](std::size_t id) { return class_index.at(local.find(id)); };

    // A-level labels: one object per class, one morphism per coupon.
    RepLabels rl;
    for (std::size_t c = 0; c < classes.size(); ++c)
      rl.objects.push_back(labels.objects[uf.label[classes[c]]].component(deg[c]));
    auto a_strand = [&](const RibbonStrand& s, std::size_t id) { return RibbonStrand{class_of(id), s.up}; };
    auto g_strand = [&](const RibbonStrand& s, std::size_t id) { return GradedStrand{degree_of(id), s.up}; };

    RibbonDiagram ad;
    GradedStringDiagram gd;
    for (std::size_t i = 0; i < d.source.size(); ++i) {
      ad.source.push_back(a_strand(d.source[i], src_ids[i]));
      gd.source.push_back(g_strand(d.source[i], src_ids[i]));
    }
    for (std::size_t i = 0; i < d.target.size(); ++i) {
      ad.target.push_back(a_strand(d.target[i], tgt_ids[i]));
      gd.target.push_back(g_strand(d.target[i], tgt_ids[i]));
    }
    bool consistent = true;
    std::size_t coupon_no = 0;
    UnionFind replay;
    std::vector<std::size_t> sids, tids;
    walk_segments(d, replay, sids, tids,
                  [&](std::size_t, const RibbonToken& t, const std::vector<RibbonStrand>& s,
                      const std::vector<std::size_t>& ids, const std::vector<std::size_t>& created) {
                    // Each token becomes its own slice, in application order.
                    RibbonToken at = t;
                    at.label = {};
                    GradedToken gt;
                    switch (t.kind) {
                      case RibbonToken::Kind::cross_pos:
                      case RibbonToken::Kind::cross_neg:
                        gt = GradedToken::cross(t.pos);
                        break;
                      case RibbonToken::Kind::twist_pos:
                      case RibbonToken::Kind::twist_neg:
                        gt = GradedToken::identity(t.pos, g_strand(s[t.pos], ids[t.pos]));
                        break;
                      case RibbonToken::Kind::cap:
                        gt = GradedToken::cap(t.pos);
                        break;
                      case RibbonToken::Kind::cup:
                        at.strand = a_strand(t.strand, created[0]);
                        gt = GradedToken::cup(t.pos, g_strand(t.strand, created[0]));
                        break;
                      case RibbonToken::Kind::coupon: {
                        const auto outs = coupon_outputs(t);
                        std::vector<GradedStrand> gouts;
                        at.outputs.clear();
                        int in_deg = 0, out_deg = 0;
                        std::vector<int> in_degrees, out_degrees;
                        std::vector<ChainObject> in_f, out_f;
                        for (std::size_t i = 0; i < t.arity; ++i) {
                          const GradedStrand g = g_strand(s[t.pos + i], ids[t.pos + i]);
                          in_deg += g.degree();
                          in_degrees.push_back(g.degree());
                          in_f.push_back(chain_engine.object(s[t.pos + i]));
                        }
                        for (std::size_t i = 0; i < outs.size(); ++i) {
                          const GradedStrand g = g_strand(outs[i], created[i]);
                          gouts.push_back(g);
                          out_deg += g.degree();
                          out_degrees.push_back(g.degree());
                          out_f.push_back(chain_engine.object(outs[i]));
                          at.outputs.push_back(a_strand(outs[i], created[i]));
                        }
                        if (in_deg != out_deg) {
                          consistent = false;
                          return;
                        }
                        gt = GradedToken::coupon(t.pos, t.arity, gouts);
                        // The A-level coupon is the block of the chain-level value.
                        const ChainMap& cv = coupon_values[coupon_no];
                        const TensorLayout li(in_f), lo(out_f);
                        const Matrix pin = multidegree_embedding(in_f, li, in_degrees, cv.source.dim(in_deg));
                        const Matrix pout = multidegree_embedding(out_f, lo, out_degrees, cv.target.dim(out_deg));
                        const Matrix blk = pout.transpose() * cv.component(in_deg) * pin;
                        std::vector<RepObject> ins, ous;
                        for (std::size_t i = 0; i < t.arity; ++i) {
                          const RibbonStrand st = a_strand(s[t.pos + i], ids[t.pos + i]);
                          ins.push_back(st.up ? rl.objects[st.label] : dual_rep(rl.objects[st.label]));
                        }
                        for (const auto& st : at.outputs)
                          ous.push_back(st.up ? rl.objects[st.label] : dual_rep(rl.objects[st.label]));
                        const RepObject si = RepTraits::tensor(algebra, ins), so = RepTraits::tensor(algebra, ous);
                        at.label.word = {rl.morphisms.size()};
                        rl.morphisms.push_back({si, so, blk});
                        ++coupon_no;
                        break;
                      }
                    }
                    ad.slices.push_back({at});
                    gd.slices.push_back({gt});
                  });
    if (!consistent) return;
    // Zero-dimensional components contribute nothing.
    for (const auto& x : rl.objects)
      if (x.dim() == 0) return;
    const int sign = eval_string(gd);
    const RepMorphism value = evaluate(ad, rl);
    std::vector<int> sdeg, tdeg;
    int n = 0;
    for (const auto& g : gd.source) {
      sdeg.push_back(g.degree());
      n += g.degree();
    }
    for (const auto& g : gd.target) tdeg.push_back(g.degree());
    const Matrix ps = multidegree_embedding(src_factors, src_layout, sdeg, src_total.dim(n));
    const Matrix pt = multidegree_embedding(tgt_factors, tgt_layout, tdeg, tgt_total.dim(n));
    terms[idx] = {n, ScalarCyclo(sign) * (pt * value.matrix * ps.transpose()), true};
  });

  ChainMap out{src_total, tgt_total, {}};
  for (auto& t : terms) {
    if (!t.present || t.block.is_zero()) continue;
    auto it = out.components.find(t.degree);
    if (it == out.components.end())
      out.components.emplace(t.degree, std::move(t.block));
    else
      it->second += t.block;
  }
  for (auto it = out.components.begin(); it != out.components.end();)
    it = it->second.is_zero() ? out.components.erase(it) : std::next(it);
  return out;
}

ScalarCyclo graded_link_invariant(const RibbonDiagram& d, const ChainLabels& labels) {
  if (!d.source.empty() || !d.target.empty()) throw ShapeError("link invariant: diagram has open boundary");
  return evaluate(d, labels).component(0).at(0, 0);
}

ScalarCyclo knot_alternating_sum(const RibbonDiagram& d, const ChainObject& x) {
  if (!d.source.empty() || !d.target.empty()) throw ShapeError("link invariant: diagram has open boundary");
  ScalarCyclo sum;
  for (int m = x.lo(); m <= x.hi(); ++m) {
    if (x.dim(m) == 0) continue;
    const RepLabels rl{{x.component(m)}, {}};
    const ScalarCyclo v = evaluate(d, rl).matrix.at(0, 0);
    sum += m % 2 == 0 ? v : -v;
  }
  return sum;
}

ChainLabels chain_labels(const RepLabels& labels) {
  ChainLabels out;
  for (const auto& x : labels.objects) out.objects.push_back(single_chain(x, 0));
  for (const auto& f : labels.morphisms) {
    ChainMap m{single_chain(f.source, 0), single_chain(f.target, 0), {}};
    m.components[0] = f.matrix;
    out.morphisms.push_back(std::move(m));
  }
  return out;
}

namespace {

void relabel_token(RibbonToken& t, const std::vector<std::size_t>& mapping) {
  t.strand.label = mapping.at(t.strand.label);
  for (auto& o : t.outputs) o.label = mapping.at(o.label);
  for (auto& slice : t.label.post)
    for (auto& tok : slice) relabel_token(tok, mapping);
}

}  // namespace

RibbonDiagram relabel(const RibbonDiagram& d, const std::vector<std::size_t>& mapping) {
  RibbonDiagram out = d;
  for (auto& s : out.source) s.label = mapping.at(s.label);
  for (auto& s : out.target) s.label = mapping.at(s.label);
  for (auto& slice : out.slices)
    for (auto& t : slice) {
      if (t.kind == RibbonToken::Kind::cup || t.kind == RibbonToken::Kind::coupon) relabel_token(t, mapping);
    }
  return out;
}

RibbonDiagram unknot(int framing) {
  RibbonDiagram d;
  d.slices.push_back({RibbonToken::cup(0, {0, true})});
  for (int k = 0; k < std::abs(framing); ++k) d.slices.push_back({RibbonToken::twist(0, framing > 0)});
  d.slices.push_back({RibbonToken::cap(0)});
  return d;
}

RibbonDiagram hopf_link(bool positive) {
  RibbonDiagram d;
  d.slices.push_back({RibbonToken::cup(0, {0, false})});
  d.slices.push_back({RibbonToken::cup(2, {1, true})});
  d.slices.push_back({RibbonToken::cross(1, positive)});
  d.slices.push_back({RibbonToken::cross(1, positive)});
  d.slices.push_back({RibbonToken::cap(2)});
  d.slices.push_back({RibbonToken::cap(0)});
  return d;
}

RibbonDiagram trefoil() {
  RibbonDiagram d;
  d.slices.push_back({RibbonToken::cup(0, {0, false})});
  d.slices.push_back({RibbonToken::cup(1, {0, false})});
  for (int k = 0; k < 3; ++k) d.slices.push_back({RibbonToken::cross(2)});
  d.slices.push_back({RibbonToken::cap(1)});
  d.slices.push_back({RibbonToken::cap(0)});
  return d;
}

}  // namespace chainrt

#include "chainrt/state.hpp"

#include <set>

#include "chainrt/errors.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace chainrt;
using namespace testing;

namespace {

HopfPtr triv() { return HopfAlgebra::trivial(); }

ChainObject k_to_k(int lo = 0) {
  return make_complex(triv(), lo, {unit_rep(triv()), unit_rep(triv())}, {Matrix::scalar(1, 1)});
}

MarkedSurface surface(const HopfPtr& h, std::size_t genus, std::vector<Marking> markings = {}) {
  return {h, genus, std::move(markings)};
}

// Invariants of a module counted directly: the kernel of all (a - eps(a)) stacked.
std::size_t invariants_oracle(const RepObject& v) {
  const HopfAlgebra& h = v.algebra();
  std::vector<Vector> rows;
  for (std::size_t b = 0; b < h.dim(); ++b) {
    const Matrix m = v.act(h.basis_element(b)) - Matrix::scalar(v.dim(), h.counit(h.basis_element(b)));
    for (std::size_t r = 0; r < m.rows(); ++r) {
      Vector row(v.dim());
      for (std::size_t c = 0; c < v.dim(); ++c) row[c] = m.at(r, c);
      rows.push_back(row);
    }
  }
  Matrix sys(rows.size(), v.dim());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < v.dim(); ++c)
      if (!rows[r][c].is_zero()) sys.set(r, c, rows[r][c]);
  return v.dim() - rank(sys);
}

// Ambient map of a bordism built multidegree by multidegree from Kronecker
// products of whole components, then read on state coordinates.
Matrix bordism_oracle(const StateComplex& s, const StateComplex& t, const std::vector<ChainMap>& ambient_factors,
                      int n) {
  const TensorLayout ls(s.factors), lt(t.factors);
  Matrix amb(t.ambient.dim(n), s.ambient.dim(n));
  std::set<std::vector<int>> seen;
  for (const auto& e : ls.entries(n)) {
    std::vector<int> m;
    for (const auto& p : e.parts) m.push_back(p.first);
    if (!seen.insert(m).second) continue;
    Matrix k = Matrix::identity(1);
    for (std::size_t i = 0; i < m.size(); ++i) k = kron(k, ambient_factors[i].component(m[i]));
    amb += multidegree_embedding(t.factors, lt, m, t.ambient.dim(n)) * k *
           multidegree_embedding(s.factors, ls, m, s.ambient.dim(n)).transpose();
  }
  Matrix out(t.hom->dim(n), s.hom->dim(n));
  for (std::size_t c = 0; c < s.hom->dim(n); ++c) {
    Vector e(s.hom->dim(n));
    e[c] = 1;
    const GradedFamily fam = s.hom->unpack(n, e);
    const Vector img = t.hom->pack(n, {{0, amb * fam.at(0)}});
    for (std::size_t r = 0; r < img.size(); ++r)
      if (!img[r].is_zero()) out.set(r, c, img[r]);
  }
  return out;
}

bool same_components(const ChainMap& f, const ChainMap& g) {
  const int lo = std::min(f.source.lo(), g.source.lo()), hi = std::max(f.source.hi(), g.source.hi());
  for (int n = lo; n <= hi; ++n)
    if (f.component(n) != g.component(n)) return false;
  return true;
}

std::vector<Marking> random_markings(std::mt19937_64& rng, const HopfPtr& h, std::size_t count,
                                     const RandomComplexOptions& opts) {
  std::vector<Marking> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back({random_complex(rng, standard_blocks(h), opts), rng() % 2 == 0});
  return out;
}

}  // namespace

TEST_CASE("oriented product") {
  CHECK(oriented_product(fun_z3(), {}) == unit_chain(fun_z3()));
  const ChainObject x = k_to_k(1);
  CHECK(oriented_product(triv(), {{x, false}}) == dual_chain(x));
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const ChainObject a = random_complex(rng, standard_blocks(triv()));
    const ChainObject b = random_complex(rng, standard_blocks(triv()));
    CHECK(oriented_product(triv(), {{a, true}, {b, false}}).euler_characteristic() ==
          a.euler_characteristic() * b.euler_characteristic());
  }
}

TEST_CASE("state spaces of unmarked surfaces") {
  for (std::size_t g = 0; g <= 4; ++g) {
    const StateComplex s = state_complex(surface(triv(), g));
    CHECK(s.complex.lo() == 0);
    CHECK(s.complex.hi() == 0);
    CHECK(s.complex.dim(0) == 1);
  }
  // Fun(Z/n) is commutative, so its adjoint action is trivial
  const RepObject ad = adjoint_rep(fun_z3());
  CHECK(invariants_oracle(ad) == 3);
  CHECK(state_complex(surface(fun_z3(), 1)).complex.dim(0) == 3);
  std::size_t expect = 1;
  for (std::size_t g = 0; g <= 3; ++g, expect *= 5) CHECK(state_complex(surface(fun_z5(), g)).complex.dim(0) == expect);

  // Sweedler: compare with invariants of Ad (x) Ad computed directly
  const RepObject sad = adjoint_rep(sweedler());
  CHECK(state_complex(surface(sweedler(), 1)).complex.dim(0) == invariants_oracle(sad));
  CHECK(state_complex(surface(sweedler(), 2)).complex.dim(0) == invariants_oracle(tensor_rep(sad, sad)));
}

TEST_CASE("marked state spaces") {
  const StateComplex s = state_complex(surface(triv(), 0, {{k_to_k(), true}}));
  for (const auto& [n, r] : cohomology(s.complex)) CHECK(r == 0);
  // a single positive two-term marking over k: Hom*(1, x) is x with its own d
  CHECK(s.complex.diff(0) == Matrix::scalar(1, 1));

  std::mt19937_64 rng(32);
  RandomComplexOptions opts;
  opts.max_width = 2;
  opts.max_terms = 2;
  for (const HopfPtr& h : {triv(), fun_z3(), sweedler()}) {
    for (int trial = 0; trial < 3; ++trial) {
      const MarkedSurface ms = surface(h, std::size_t(trial % 2), random_markings(rng, h, 2, opts));
      const StateComplex st = state_complex(ms);
      CHECK(st.complex.validate().empty());
      for (int n = st.ambient.lo(); n <= st.ambient.hi(); ++n)
        CHECK(st.complex.dim(n) == invariants_oracle(st.ambient.component(n)));
    }
  }

  // (x, -) and (x*, +) give the same complex
  for (const HopfPtr& h : {fun_z3(), sweedler()}) {
    const ChainObject x = random_complex(rng, standard_blocks(h), opts);
    const StateComplex neg = state_complex(surface(h, 1, {{x, false}}));
    const StateComplex pos = state_complex(surface(h, 1, {{dual_chain(x), true}}));
    CHECK(neg.complex == pos.complex);
  }
  CHECK_THROWS_AS(state_complex(surface(fun_z3(), 0, {{k_to_k(), true}})), ShapeError);
}

TEST_CASE("explicit differential") {
  // one degree per marking: no differential at all
  const ChainObject a = single_chain(zn_char(fun_z3(), 1), 2), b = single_chain(zn_char(fun_z3(), 2), -1);
  const StateComplex flat = state_differential_explicit(surface(fun_z3(), 1, {{a, true}, {b, true}}));
  for (int n = flat.complex.lo(); n <= flat.complex.hi(); ++n) CHECK(flat.complex.diff(n).is_zero());

  // two summands in one degree of the first label: a multidegree's blocks
  // are not contiguous in the layout
  const ChainObject split = direct_sum_chain(k_to_k(0), single_chain(unit_rep(triv()), 0));
  for (int signs = 0; signs < 8; ++signs) {
    const MarkedSurface ms =
        surface(triv(), 0, {{split, bool(signs & 1)}, {k_to_k(0), bool(signs & 2)}, {k_to_k(-1), bool(signs & 4)}});
    CHECK(state_differential_explicit(ms).complex == state_complex(ms).complex);
  }

  std::mt19937_64 rng(33);
  RandomComplexOptions opts;
  opts.max_width = 3;
  opts.max_terms = 2;
  for (const HopfPtr& h : {triv(), fun_z3(), sweedler()}) {
    for (int trial = 0; trial < 4; ++trial) {
      const std::size_t g = h == sweedler() ? std::size_t(trial % 2) : std::size_t(trial % 3);
      const std::size_t count = 1 + std::size_t(trial) % 3;
      const MarkedSurface ms = surface(h, g, random_markings(rng, h, count, opts));
      const StateComplex st = state_complex(ms);
      const StateComplex ex = state_differential_explicit(ms);
      CHECK(ex.complex == st.complex);
      CHECK(ex.complex.validate().empty());
    }
  }
}

TEST_CASE("cylinder bordisms") {
  std::mt19937_64 rng(34);
  RandomComplexOptions opts;
  opts.max_width = 2;
  opts.max_terms = 2;

  // over k with one positive marking the map is f itself
  const auto tblocks = standard_blocks(triv());
  for (int trial = 0; trial < 3; ++trial) {
    const ChainObject x = random_complex(rng, tblocks, opts), y = random_complex(rng, tblocks, opts);
    const ChainMap f = random_chain_map(rng, x, y);
    const StateComplex sx = state_complex(surface(triv(), 0, {{x, true}}));
    const StateComplex sy = state_complex(surface(triv(), 0, {{y, true}}));
    const ChainMap z = bordism_map(sx, sy, {f});
    for (int n = x.lo(); n <= x.hi(); ++n) CHECK(z.component(n) == f.component(n));
  }

  for (const HopfPtr& h : {triv(), fun_z3(), sweedler()}) {
    const auto blocks = standard_blocks(h);
    for (int trial = 0; trial < 3; ++trial) {
      const std::size_t g = std::size_t(trial % 2);
      const auto xs = random_markings(rng, h, 2, opts);
      std::vector<Marking> ys = xs, zs = xs;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        ys[i].label = random_complex(rng, blocks, opts);
        zs[i].label = random_complex(rng, blocks, opts);
      }
      const StateComplex sx = state_complex(surface(h, g, xs)), sy = state_complex(surface(h, g, ys)),
                         sz = state_complex(surface(h, g, zs));
      std::vector<ChainMap> f, gg, gf, ids, amb_f;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        ids.push_back(identity_chain(xs[i].label));
        if (xs[i].positive) {
          f.push_back(random_chain_map(rng, xs[i].label, ys[i].label));
          gg.push_back(random_chain_map(rng, ys[i].label, zs[i].label));
          gf.push_back(compose_chain(gg[i], f[i]));
        } else {
          f.push_back(random_chain_map(rng, ys[i].label, xs[i].label));
          gg.push_back(random_chain_map(rng, zs[i].label, ys[i].label));
          gf.push_back(compose_chain(f[i], gg[i]));
        }
      }
      const ChainMap bf = bordism_map(sx, sy, f), bg = bordism_map(sy, sz, gg);
      CHECK(is_chain_map(bf));
      CHECK(is_chain_map(bg));
      CHECK(same_components(bordism_map(sx, sz, gf), compose_chain(bg, bf)));
      CHECK(same_components(bordism_map(sx, sx, ids), identity_chain(sx.complex)));

      for (std::size_t k = 0; k < g; ++k) amb_f.push_back(identity_chain(single_chain(adjoint_rep(h), 0)));
      for (std::size_t i = 0; i < xs.size(); ++i) amb_f.push_back(xs[i].positive ? f[i] : dual_chain_map(f[i]));
      for (int n = sx.complex.lo(); n <= sx.complex.hi(); ++n)
        CHECK(bf.component(n) == bordism_oracle(sx, sy, amb_f, n));
    }
  }

  const StateComplex s = state_complex(surface(triv(), 0, {{k_to_k(), true}}));
  const StateComplex neg = state_complex(surface(triv(), 0, {{k_to_k(), false}}));
  CHECK_THROWS_AS(bordism_map(s, neg, {identity_chain(k_to_k())}), ShapeError);
  CHECK_THROWS_AS(bordism_map(s, s, {}), ShapeError);
  CHECK_THROWS_AS(bordism_map(s, s, {identity_chain(k_to_k(1))}), ShapeError);
}

TEST_CASE("dual homotopies") {
  std::mt19937_64 rng(35);
  RandomComplexOptions opts;
  opts.max_width = 2;
  for (const HopfPtr& h : {triv(), fun_z3(), sweedler()}) {
    const auto blocks = standard_blocks(h);
    const ChainObject x = random_complex(rng, blocks, opts);
    const auto [f, w] = random_equivalence(rng, x, blocks);
    const ChainMap p = compose_chain(w.inverse, f);
    const ChainHomotopy k = dual_chain_homotopy(w.left);
    CHECK(is_homotopy(k, dual_chain_map(p), identity_chain(dual_chain(x))));
  }
}

TEST_CASE("homotopy preservation") {
  // identities: every homotopy vanishes
  const ChainObject c = k_to_k();
  const StateComplex s = state_complex(surface(triv(), 1, {{c, true}}));
  const auto wid = is_homotopy_equivalence(identity_chain(c));
  REQUIRE(wid);
  HomotopyEquivalence plain{identity_chain(c), {c, c, {}}, {c, c, {}}};
  const PreservationResult ri = verify_homotopy_preservation(s, s, {identity_chain(c)}, {plain});
  CHECK(ri.witness_verified);
  CHECK(ri.witness.left.components.empty());
  CHECK(ri.witness.right.components.empty());

  // 0 -> (k -> k): both state complexes are acyclic
  const ChainObject zero = zero_chain(triv());
  const ChainMap into{zero, c, {}};
  const auto wz = is_homotopy_equivalence(into);
  REQUIRE(wz);
  const StateComplex s0 = state_complex(surface(triv(), 0, {{zero, true}}));
  const StateComplex s1 = state_complex(surface(triv(), 0, {{c, true}}));
  const PreservationResult rz = verify_homotopy_preservation(s0, s1, {into}, {*wz});
  CHECK(rz.witness_verified);
  CHECK(rz.fallback_verified);

  const ChainMap bad = zero_map(single_chain(unit_rep(triv()), 0), single_chain(unit_rep(triv()), 0));
  const StateComplex sb = state_complex(surface(triv(), 0, {{bad.source, true}}));
  const HomotopyEquivalence wrong{identity_chain(bad.source), {bad.source, bad.source, {}}, {bad.source, bad.source, {}}};
  CHECK_THROWS_AS(verify_homotopy_preservation(sb, sb, {bad}, {wrong}), MathError);

  std::mt19937_64 rng(36);
  RandomComplexOptions opts;
  opts.max_width = 2;
  opts.max_terms = 2;
  for (const HopfPtr& h : {fun_z3(), sweedler(), triv()}) {
    const auto blocks = standard_blocks(h);
    for (int trial = 0; trial < 3; ++trial) {
      const std::size_t g = std::size_t(trial % 2);
      const auto xs = random_markings(rng, h, 1 + std::size_t(trial % 2), opts);
      std::vector<Marking> ys = xs;
      std::vector<ChainMap> mus;
      std::vector<HomotopyEquivalence> ws;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        // at a negative marking the map runs from the new label to the old
        auto [mu, w] = random_equivalence(rng, xs[i].label, blocks);
        ys[i].label = mu.target;
        if (xs[i].positive) {
          mus.push_back(mu);
          ws.push_back(w);
        } else {
          mus.push_back(w.inverse);
          ws.push_back({mu, w.right, w.left});
        }
      }
      const StateComplex sx = state_complex(surface(h, g, xs));
      const StateComplex sy = state_complex(surface(h, g, ys));
      const PreservationResult r = verify_homotopy_preservation(sx, sy, mus, ws);
      CHECK(is_chain_map(r.map));
      CHECK(r.witness_verified);
      CHECK(r.fallback_verified);
      std::map<int, std::size_t> hx, hy;
      for (const auto& [n, d] : cohomology(sx.complex))
        if (d) hx[n] = d;
      for (const auto& [n, d] : cohomology(sy.complex))
        if (d) hy[n] = d;
      CHECK(hx == hy);
    }
  }
}

TEST_CASE("monoidality") {
  const MonoidalityResult kk = monoidality_check(surface(triv(), 0), surface(triv(), 3));
  CHECK(kk.ok());
  CHECK(kk.united.dim(0) == 1);

  const MonoidalityResult z = monoidality_check(surface(fun_z3(), 1), surface(fun_z3(), 1));
  CHECK(z.ok());
  CHECK(z.united.dim(0) == 9);

  // marked spheres with shifted labels
  const ChainObject a = shift_chain(k_to_k(), 1), b = shift_chain(k_to_k(0), -1);
  const MonoidalityResult sh = monoidality_check(surface(triv(), 0, {{a, true}}), surface(triv(), 0, {{b, false}}));
  CHECK(sh.chain_map);
  CHECK(sh.invertible);

  std::mt19937_64 rng(37);
  RandomComplexOptions opts;
  opts.max_width = 2;
  opts.max_terms = 2;
  const std::vector<HopfPtr> algs = {triv(), fun_z3(), sweedler()};
  for (int trial = 0; trial < 6; ++trial) {
    const HopfPtr h0 = algs[std::size_t(trial) % 3], h1 = algs[std::size_t(trial + 1 + trial / 3) % 3];
    const MarkedSurface s0 = surface(h0, std::size_t(trial % 2), random_markings(rng, h0, 1, opts));
    const MarkedSurface s1 = surface(h1, 0, random_markings(rng, h1, 1 + std::size_t(trial % 2), opts));
    const MonoidalityResult r = monoidality_check(s0, s1);
    CHECK(r.chain_map);
    CHECK(r.invertible);
  }
}

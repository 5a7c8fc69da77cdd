#include "chainrt/state.hpp"

#include <numeric>
#include <set>

#include "chainrt/errors.hpp"
#include "chainrt/graded_strings.hpp"
#include "chainrt/parallel.hpp"

namespace chainrt {

namespace {

int koszul(long k) { return (k % 2 == 0) ? 1 : -1; }

std::vector<ChainObject> ambient_factors(const MarkedSurface& s) {
  std::vector<ChainObject> f(s.genus, single_chain(adjoint_rep(s.algebra), 0));
  for (const auto& m : s.markings) f.push_back(m.positive ? m.label : dual_chain(m.label));
  return f;
}

// Right-nested tensor of a list of chain maps; the identity of 1 when empty.
ChainMap tensor_maps(const HopfPtr& algebra, const std::vector<ChainMap>& maps) {
  if (maps.empty()) return identity_chain(unit_chain(algebra));
  ChainMap acc = maps.back();
  for (std::size_t k = maps.size() - 1; k-- > 0;) acc = tensor_chain_map(maps[k], acc);
  return acc;
}

// phi -> f^n phi on Hom^n(1, amb) for an ambient map or homotopy of degree `shift`.
Matrix post_compose(const HomComplex& from, int n, const HomComplex& to, int shift, const Matrix& fn) {
  return from.matrix_of(n, to, n + shift, [&](const GradedFamily& fam) {
    GradedFamily out;
    auto it = fam.find(0);
    if (it != fam.end() && fn.cols() == it->second.rows() && fn.rows() > 0) out[0] = fn * it->second;
    return out;
  });
}

int support_lo(const ChainObject& x, const ChainObject& y) { return std::min(x.lo(), y.lo()); }
int support_hi(const ChainObject& x, const ChainObject& y) { return std::max(x.hi(), y.hi()); }

void check_pairing(const StateComplex& a, const StateComplex& b, std::size_t maps) {
  const auto& sa = a.surface;
  const auto& sb = b.surface;
  if (sa.algebra != sb.algebra || sa.genus != sb.genus || sa.markings.size() != sb.markings.size())
    throw ShapeError("bordism_map: surfaces differ in algebra, genus or marking count");
  if (maps != sa.markings.size()) throw ShapeError("bordism_map: one map per marking expected");
  for (std::size_t i = 0; i < sa.markings.size(); ++i)
    if (sa.markings[i].positive != sb.markings[i].positive)
      throw ShapeError("bordism_map: marking " + std::to_string(i) + " changes sign");
}

// The factor maps for a bordism, dualized at negative markings.
std::vector<ChainMap> factor_maps(const StateComplex& source, const StateComplex& target,
                                  const std::vector<ChainMap>& maps) {
  check_pairing(source, target, maps.size());
  const auto& ms = source.surface.markings;
  const auto& mt = target.surface.markings;
  std::vector<ChainMap> out(source.surface.genus, identity_chain(single_chain(adjoint_rep(source.surface.algebra), 0)));
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const ChainMap& f = maps[i];
    const ChainObject& from = ms[i].positive ? ms[i].label : mt[i].label;
    const ChainObject& to = ms[i].positive ? mt[i].label : ms[i].label;
    if (!(f.source == from) || !(f.target == to))
      throw ShapeError("bordism_map: map " + std::to_string(i) + " does not match its labels");
    out.push_back(ms[i].positive ? f : dual_chain_map(f));
  }
  return out;
}

ChainMap state_map(const StateComplex& source, const StateComplex& target, const ChainMap& ambient) {
  ChainMap out{source.complex, target.complex, {}};
  const int lo = source.complex.lo(), hi = source.complex.hi();
  std::vector<Matrix> comps(hi >= lo ? hi - lo + 1 : 0);
  parallel_for(comps.size(), [&](std::size_t k) {
    const int n = lo + int(k);
    comps[k] = post_compose(*source.hom, n, *target.hom, 0, ambient.component(n));
  });
  for (std::size_t k = 0; k < comps.size(); ++k)
    if (!comps[k].is_zero()) out.components[lo + int(k)] = std::move(comps[k]);
  return out;
}

// Homotopy for prod(a_k) - id on the tensor of the factors, assembled from
// homotopies h_k for a_k - id:
//   sum_k 1 (x) ... (x) 1 (x) h_k (x) a_{k+1} (x) ... (x) a_t.
std::map<int, Matrix> leibniz_homotopy(const std::vector<ChainMap>& a, const std::vector<ChainHomotopy>& h) {
  std::map<int, Matrix> total;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (h[k].components.empty()) continue;
    std::vector<GradedMapFactor> fs;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (j < k) fs.push_back({a[j].source, a[j].source, identity_chain(a[j].source).components, 0});
      if (j == k) fs.push_back({h[j].source, h[j].target, h[j].components, -1});
      if (j > k) fs.push_back({a[j].source, a[j].target, a[j].components, 0});
    }
    for (auto& [n, m] : tensor_graded_maps(fs)) {
      auto it = total.find(n);
      if (it == total.end())
        total.emplace(n, std::move(m));
      else
        it->second += m;
    }
  }
  return total;
}

ChainHomotopy state_homotopy(const StateComplex& s, const std::map<int, Matrix>& ambient) {
  ChainHomotopy out{s.complex, s.complex, {}};
  for (int n = s.complex.lo(); n <= s.complex.hi(); ++n) {
    auto it = ambient.find(n);
    if (it == ambient.end() || s.hom->dim(n - 1) == 0) continue;
    Matrix m = post_compose(*s.hom, n, *s.hom, -1, it->second);
    if (!m.is_zero()) out.components[n] = std::move(m);
  }
  return out;
}

}  // namespace

void check_surface(const MarkedSurface& s) {
  if (!s.algebra) throw ShapeError("surface: no algebra");
  for (std::size_t i = 0; i < s.markings.size(); ++i) {
    const ChainObject& x = s.markings[i].label;
    if (x.algebra_ptr() != s.algebra) throw ShapeError("surface: marking " + std::to_string(i) + " over another algebra");
    if (!x.validate().empty()) throw ShapeError("surface: marking " + std::to_string(i) + " is not a complex");
  }
}

ChainObject oriented_product(const HopfPtr& algebra, const std::vector<Marking>& markings) {
  std::vector<ChainObject> f;
  for (const auto& m : markings) f.push_back(m.positive ? m.label : dual_chain(m.label));
  return f.empty() ? unit_chain(algebra) : tensor_chain(f);
}

StateComplex state_complex(const MarkedSurface& s) {
  check_surface(s);
  StateComplex st;
  st.surface = s;
  st.factors = ambient_factors(s);
  st.ambient = st.factors.empty() ? unit_chain(s.algebra) : tensor_chain(st.factors);
  st.hom = std::make_shared<const HomComplex>(unit_chain(s.algebra), st.ambient);
  st.complex = st.hom->complex();
  return st;
}

StateComplex state_differential_explicit(const MarkedSurface& s) {
  StateComplex st = state_complex(s);
  const std::size_t g = s.genus, t = s.markings.size();
  const TensorLayout layout(st.factors);
  const ChainObject& amb = st.ambient;
  const int lo = st.complex.lo(), hi = st.complex.hi();
  std::vector<Matrix> diffs(hi > lo ? hi - lo : 0);

  parallel_for(diffs.size(), [&](std::size_t k) {
    const int n = lo + int(k);
    // the differential on amb^n, one multidegree and one marking at a time
    Matrix d(amb.dim(n + 1), amb.dim(n));
    std::set<std::vector<int>> seen;
    for (const auto& e : layout.entries(n)) {
      std::vector<int> m;
      for (const auto& p : e.parts) m.push_back(p.first);
      if (!seen.insert(m).second) continue;
      const Matrix pin = multidegree_embedding(st.factors, layout, m, amb.dim(n));
      for (std::size_t i = 0; i < t; ++i) {
        const Marking& mk = s.markings[i];
        const std::size_t f = g + i;
        const int deg = m[f];
        if (st.factors[f].dim(deg + 1) == 0) continue;
        // d on the i-th factor, read off the label itself
        Matrix di;
        if (mk.positive) {
          di = mk.label.diff(deg);
        } else {
          const int mx = -deg;
          di = ScalarCyclo(-koszul(mx)) * mk.label.diff(mx - 1).transpose();
        }
        if (di.is_zero()) continue;

        // k(m_i) -> k(-1) (x) k(m_i + 1), then k(-1) crosses to the left
        GradedStringDiagram sd;
        for (std::size_t j = 0; j < t; ++j)
          sd.source.push_back(s.markings[j].positive ? GradedStrand{m[g + j], true} : GradedStrand{-m[g + j], false});
        const GradedStrand next = mk.positive ? GradedStrand{deg + 1, true} : GradedStrand{-deg - 1, false};
        sd.slices.push_back({GradedToken::coupon(i, 1, {GradedStrand{-1, true}, next})});
        for (std::size_t p = i; p-- > 0;) sd.slices.push_back({GradedToken::cross(p)});
        sd.target = sd.source;
        sd.target[i] = next;
        sd.target.insert(sd.target.begin(), GradedStrand{-1, true});
        const int sign = eval_string(sd);

        std::size_t left = 1, right = 1;
        for (std::size_t j = 0; j < f; ++j) left *= st.factors[j].dim(m[j]);
        for (std::size_t j = f + 1; j < st.factors.size(); ++j) right *= st.factors[j].dim(m[j]);
        std::vector<int> m2 = m;
        ++m2[f];
        const Matrix pout = multidegree_embedding(st.factors, layout, m2, amb.dim(n + 1));
        const Matrix local = kron(Matrix::identity(left), kron(di, Matrix::identity(right)));
        d += ScalarCyclo(sign) * (pout * local * pin.transpose());
      }
    }
    diffs[k] = post_compose(*st.hom, n, *st.hom, 1, d);
  });

  std::vector<std::vector<RepObject>> summands;
  for (int n = lo; n <= hi; ++n) summands.push_back({vector_space(st.hom->dim(n))});
  st.complex = ChainObject(HopfAlgebra::trivial(), lo, std::move(summands), std::move(diffs));
  return st;
}

ChainMap bordism_map(const StateComplex& source, const StateComplex& target, const std::vector<ChainMap>& maps) {
  const ChainMap ambient = tensor_maps(source.surface.algebra, factor_maps(source, target, maps));
  return state_map(source, target, ambient);
}

PreservationResult verify_homotopy_preservation(const StateComplex& source, const StateComplex& target,
                                                const std::vector<ChainMap>& mus,
                                                const std::vector<HomotopyEquivalence>& witnesses) {
  if (witnesses.size() != mus.size()) throw ShapeError("verify_homotopy_preservation: one witness per map expected");
  for (std::size_t i = 0; i < mus.size(); ++i)
    if (!verify_equivalence(mus[i], witnesses[i]))
      throw MathError("verify_homotopy_preservation: witness " + std::to_string(i) + " does not check out");

  std::vector<ChainMap> inverses;
  for (const auto& w : witnesses) inverses.push_back(w.inverse);
  const std::vector<ChainMap> fs = factor_maps(source, target, mus);
  const std::vector<ChainMap> gs = factor_maps(target, source, inverses);

  // Per factor: homotopies for g_k f_k - id and f_k g_k - id.
  const std::size_t g = source.surface.genus;
  std::vector<ChainMap> gf, fg;
  std::vector<ChainHomotopy> hgf, hfg;
  for (std::size_t k = 0; k < fs.size(); ++k) {
    gf.push_back(compose_chain(gs[k], fs[k]));
    fg.push_back(compose_chain(fs[k], gs[k]));
    if (k < g) {
      hgf.push_back({fs[k].source, fs[k].source, {}});
      hfg.push_back({fs[k].target, fs[k].target, {}});
    } else if (source.surface.markings[k - g].positive) {
      hgf.push_back(witnesses[k - g].left);
      hfg.push_back(witnesses[k - g].right);
    } else {
      hgf.push_back(dual_chain_homotopy(witnesses[k - g].right));
      hfg.push_back(dual_chain_homotopy(witnesses[k - g].left));
    }
  }

  PreservationResult r;
  r.map = state_map(source, target, tensor_maps(source.surface.algebra, fs));
  r.witness.inverse = state_map(target, source, tensor_maps(source.surface.algebra, gs));
  r.witness.left = state_homotopy(source, leibniz_homotopy(gf, hgf));
  r.witness.right = state_homotopy(target, leibniz_homotopy(fg, hfg));
  r.witness_verified = verify_equivalence(r.map, r.witness);

  const ChainMap back = compose_chain(r.witness.inverse, r.map);
  const ChainMap forth = compose_chain(r.map, r.witness.inverse);
  r.fallback_verified = find_homotopy(back, identity_chain(source.complex)).has_value() &&
                        find_homotopy(forth, identity_chain(target.complex)).has_value();
  return r;
}

MonoidalityResult monoidality_check(const MarkedSurface& s0, const MarkedSurface& s1) {
  MonoidalityResult r;
  r.first = state_complex(s0);
  r.second = state_complex(s1);
  const HopfPtr ab = HopfAlgebra::product(s0.algebra, s1.algebra);
  const ChainObject& a0 = r.first.ambient;
  const ChainObject& a1 = r.second.ambient;
  const ChainObject amb = external_tensor_chain(ab, a0, a1);
  const HomComplex hc(unit_chain(ab), amb);
  r.united = hc.complex();

  const ChainObject& z0 = r.first.complex;
  const ChainObject& z1 = r.second.complex;
  const ChainObject pair = tensor_chain(z0, z1);
  const TensorLayout lp({z0, z1}), la({a0, a1});
  r.comparison = ChainMap{pair, r.united, {}};
  for (int n = pair.lo(); n <= pair.hi(); ++n) {
    Matrix m(hc.dim(n), pair.dim(n));
    for (const auto& e : lp.entries(n)) {
      const int p = e.parts[0].first, q = e.parts[1].first;
      const std::size_t d0 = z0.dim(p), d1 = z1.dim(q);
      for (std::size_t r0 = 0; r0 < d0; ++r0) {
        Vector c0(d0);
        c0[r0] = 1;
        const GradedFamily f0 = r.first.hom->unpack(p, c0);
        for (std::size_t r1 = 0; r1 < d1; ++r1) {
          Vector c1(d1);
          c1[r1] = 1;
          const GradedFamily f1 = r.second.hom->unpack(q, c1);
          const Matrix& phi0 = f0.at(0);
          const Matrix& phi1 = f1.at(0);
          Matrix phi(amb.dim(n), 1);
          for (std::size_t i = 0; i < a0.summands(p).size(); ++i)
            for (std::size_t j = 0; j < a1.summands(q).size(); ++j) {
              const Matrix b0 = phi0.block(a0.summand_offset(p, i), 0, a0.summands(p)[i].dim(), 1);
              const Matrix b1 = phi1.block(a1.summand_offset(q, j), 0, a1.summands(q)[j].dim(), 1);
              const auto& t = la.entries(n)[la.find(n, {{p, i}, {q, j}})];
              phi.set_block(t.offset, 0, kron(b0, b1));
            }
          const Vector col = hc.pack(n, {{0, phi}});
          const std::size_t c = e.offset + r0 * d1 + r1;
          for (std::size_t row = 0; row < col.size(); ++row)
            if (!col[row].is_zero()) m.set(row, c, col[row]);
        }
      }
    }
    if (!m.is_zero()) r.comparison.components[n] = std::move(m);
  }

  r.chain_map = is_chain_map(r.comparison);
  r.invertible = true;
  for (int n = support_lo(pair, r.united); n <= support_hi(pair, r.united); ++n) {
    const std::size_t d = pair.dim(n);
    if (d != r.united.dim(n) || (d > 0 && rank(r.comparison.component(n)) != d)) r.invertible = false;
  }
  return r;
}

}  // namespace chainrt

#include "chainrt/chain.hpp"

#include <algorithm>
#include <numeric>

#include "chainrt/errors.hpp"
#include "chainrt/parallel.hpp"

namespace chainrt {

namespace {

int koszul(long k) { return (k % 2 == 0) ? 1 : -1; }

const Matrix& empty_matrix() {
  static const Matrix m;
  return m;
}

const std::vector<RepObject>& no_summands() {
  static const std::vector<RepObject> v;
  return v;
}

void require_same_algebra(const ChainObject& x, const ChainObject& y, const char* what) {
  if (x.algebra_ptr() != y.algebra_ptr())
    throw ShapeError(std::string(what) + ": complexes over different algebras");
}

// Block of a component matrix between summand i of the source and summand
// j of the target.
Matrix summand_block(const Matrix& m, const ChainObject& src, int ns, std::size_t i,
                     const ChainObject& tgt, int nt, std::size_t j) {
  return m.block(tgt.summand_offset(nt, j), src.summand_offset(ns, i), tgt.summands(nt)[j].dim(),
                 src.summands(ns)[i].dim());
}

int support_lo(const ChainObject& x, const ChainObject& y) { return std::min(x.lo(), y.lo()); }
int support_hi(const ChainObject& x, const ChainObject& y) { return std::max(x.hi(), y.hi()); }

}  // namespace

// ---------------------------------------------------------------- objects

ChainObject::ChainObject() : ChainObject(HopfAlgebra::trivial(), 0, {}, {}) {}

ChainObject::ChainObject(HopfPtr algebra, int lo, std::vector<std::vector<RepObject>> summands,
                         std::vector<Matrix> diffs)
    : algebra_(std::move(algebra)), lo_(lo) {
  auto data = std::make_shared<Data>();
  data->zero = zero_rep(algebra_);
  const std::size_t count = summands.size();
  if (!(diffs.size() + 1 == count || (count == 0 && diffs.empty()) || diffs.size() == count))
    throw ShapeError("complex: expected one differential between consecutive components");
  for (std::size_t k = 0; k < count; ++k) {
    Degree deg;
    std::size_t off = 0;
    for (const auto& s : summands[k]) {
      if (s.algebra_ptr() != algebra_) throw ShapeError("complex: component over a different algebra");
      deg.offsets.push_back(off);
      off += s.dim();
    }
    deg.total = summands[k].empty() ? data->zero : direct_sum_rep(algebra_, summands[k]);
    deg.summands = std::move(summands[k]);
    data->degrees.push_back(std::move(deg));
  }
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t rows = k + 1 < count ? data->degrees[k + 1].total.dim() : 0;
    const std::size_t cols = data->degrees[k].total.dim();
    Matrix d = k < diffs.size() ? std::move(diffs[k]) : Matrix(rows, cols);
    if (k + 1 == count && k < diffs.size() && !d.is_zero())
      throw ShapeError("complex: nonzero differential out of the top degree");
    if (k + 1 == count) d = Matrix(0, cols);
    if (d.rows() != rows || d.cols() != cols)
      throw ShapeError("complex: differential in degree " + std::to_string(lo + int(k)) + " has shape " +
                       std::to_string(d.rows()) + "x" + std::to_string(d.cols()) + ", expected " +
                       std::to_string(rows) + "x" + std::to_string(cols));
    data->degrees[k].d = std::move(d);
  }
  data->below = Matrix(count ? data->degrees[0].total.dim() : 0, 0);
  data_ = std::move(data);
}

std::size_t ChainObject::dim(int n) const { return in_support(n) ? data_->degrees[n - lo_].total.dim() : 0; }

std::size_t ChainObject::total_dim() const {
  std::size_t t = 0;
  for (const auto& d : data_->degrees) t += d.total.dim();
  return t;
}

const std::vector<RepObject>& ChainObject::summands(int n) const {
  return in_support(n) ? data_->degrees[n - lo_].summands : no_summands();
}

std::size_t ChainObject::summand_offset(int n, std::size_t i) const { return data_->degrees[n - lo_].offsets[i]; }

RepObject ChainObject::component(int n) const { return in_support(n) ? data_->degrees[n - lo_].total : data_->zero; }

const Matrix& ChainObject::diff(int n) const {
  if (in_support(n)) return data_->degrees[n - lo_].d;
  if (n == lo_ - 1) return data_->below;
  return empty_matrix();
}

RepMorphism ChainObject::diff_morphism(int n) const { return {component(n), component(n + 1), diff(n)}; }

std::vector<std::string> ChainObject::validate() const {
  std::vector<std::string> out;
  for (int n = lo(); n <= hi(); ++n)
    if (!diff_morphism(n).is_intertwiner()) {
      out.push_back("intertwiner");
      break;
    }
  for (int n = lo(); n < hi(); ++n)
    if (!(diff(n + 1) * diff(n)).is_zero()) {
      out.push_back("d_squared");
      break;
    }
  return out;
}

long ChainObject::euler_characteristic() const {
  long chi = 0;
  for (int n = lo(); n <= hi(); ++n) chi += koszul(n) * long(dim(n));
  return chi;
}

bool operator==(const ChainObject& a, const ChainObject& b) {
  if (a.data_ == b.data_ && a.lo_ == b.lo_ && a.algebra_ == b.algebra_) return true;
  if (a.algebra_ != b.algebra_) return false;
  const int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
  for (int n = lo; n <= hi; ++n) {
    if (a.summands(n) != b.summands(n)) return false;
    if (a.diff(n).rows() != b.diff(n).rows() || a.diff(n).cols() != b.diff(n).cols()) {
      if (!a.diff(n).is_zero() || !b.diff(n).is_zero()) return false;
      continue;
    }
    if (a.diff(n) != b.diff(n)) return false;
  }
  return true;
}

ChainObject make_complex(const HopfPtr& algebra, int lo, const std::vector<RepObject>& components,
                         const std::vector<Matrix>& diffs) {
  std::vector<std::vector<RepObject>> summands;
  for (const auto& c : components) summands.push_back({c});
  ChainObject x(algebra, lo, std::move(summands), diffs);
  const auto failures = x.validate();
  if (!failures.empty()) {
    std::string msg = "invalid complex:";
    for (const auto& f : failures) msg += " " + f;
    throw MathError(msg);
  }
  return x;
}

ChainObject unit_chain(const HopfPtr& algebra) { return ChainObject(algebra, 0, {{unit_rep(algebra)}}, {}); }

ChainObject zero_chain(const HopfPtr& algebra) { return ChainObject(algebra, 0, {}, {}); }

ChainObject single_chain(const RepObject& x, int degree) { return ChainObject(x.algebra_ptr(), degree, {{x}}, {}); }

ChainObject cone_of_identity(const RepObject& b, int n) {
  return ChainObject(b.algebra_ptr(), n, {{b}, {b}}, {Matrix::identity(b.dim())});
}

ChainObject direct_sum_chain(const ChainObject& x, const ChainObject& y) {
  require_same_algebra(x, y, "direct_sum_chain");
  if (x.hi() < x.lo()) return y;
  if (y.hi() < y.lo()) return x;
  const int lo = support_lo(x, y), hi = support_hi(x, y);
  std::vector<std::vector<RepObject>> summands;
  std::vector<Matrix> diffs;
  for (int n = lo; n <= hi; ++n) {
    auto s = x.summands(n);
    s.insert(s.end(), y.summands(n).begin(), y.summands(n).end());
    summands.push_back(std::move(s));
    if (n < hi) diffs.push_back(direct_sum(x.diff(n), y.diff(n)));
  }
  return ChainObject(x.algebra_ptr(), lo, std::move(summands), std::move(diffs));
}

namespace {

template <class Combine>
ChainObject tensor_impl(const HopfPtr& algebra, const ChainObject& x, const ChainObject& y, Combine combine) {
  if (x.hi() < x.lo() || y.hi() < y.lo()) return zero_chain(algebra);
  const int lo = x.lo() + y.lo(), hi = x.hi() + y.hi();
  struct Slot {
    int a;
    std::size_t i, j, offset;
  };
  std::vector<std::vector<Slot>> slots(hi - lo + 1);
  std::vector<std::map<std::tuple<int, std::size_t, std::size_t>, std::size_t>> where(hi - lo + 1);
  std::vector<std::vector<RepObject>> summands(hi - lo + 1);
  for (int n = lo; n <= hi; ++n) {
    std::size_t off = 0;
    for (int a = x.lo(); a <= x.hi(); ++a) {
      const int b = n - a;
      if (!y.in_support(b)) continue;
      for (std::size_t i = 0; i < x.summands(a).size(); ++i)
        for (std::size_t j = 0; j < y.summands(b).size(); ++j) {
          const RepObject t = combine(x.summands(a)[i], y.summands(b)[j]);
          where[n - lo][{a, i, j}] = slots[n - lo].size();
          slots[n - lo].push_back({a, i, j, off});
          summands[n - lo].push_back(t);
          off += t.dim();
        }
    }
  }
  std::vector<Matrix> diffs;
  for (int n = lo; n < hi; ++n) {
    std::size_t rows = 0, cols = 0;
    for (const auto& s : summands[n + 1 - lo]) rows += s.dim();
    for (const auto& s : summands[n - lo]) cols += s.dim();
    Matrix d(rows, cols);
    const auto& next = where[n + 1 - lo];
    for (const auto& s : slots[n - lo]) {
      const int b = n - s.a;
      const RepObject& xi = x.summands(s.a)[s.i];
      const RepObject& yj = y.summands(b)[s.j];
      // d_x (x) 1
      for (std::size_t i2 = 0; i2 < x.summands(s.a + 1).size(); ++i2) {
        const Matrix blk = summand_block(x.diff(s.a), x, s.a, s.i, x, s.a + 1, i2);
        if (blk.is_zero()) continue;
        const Slot& t = slots[n + 1 - lo][next.at({s.a + 1, i2, s.j})];
        d.add_block(t.offset, s.offset, kron(blk, Matrix::identity(yj.dim())));
      }
      // (-1)^a 1 (x) d_y
      for (std::size_t j2 = 0; j2 < y.summands(b + 1).size(); ++j2) {
        Matrix blk = summand_block(y.diff(b), y, b, s.j, y, b + 1, j2);
        if (blk.is_zero()) continue;
        blk *= ScalarCyclo(koszul(s.a));
        const Slot& t = slots[n + 1 - lo][next.at({s.a, s.i, j2})];
        d.add_block(t.offset, s.offset, kron(Matrix::identity(xi.dim()), blk));
      }
    }
    diffs.push_back(std::move(d));
  }
  return ChainObject(algebra, lo, std::move(summands), std::move(diffs));
}

}  // namespace

ChainObject tensor_chain(const ChainObject& x, const ChainObject& y) {
  require_same_algebra(x, y, "tensor_chain");
  return tensor_impl(x.algebra_ptr(), x, y, [](const RepObject& a, const RepObject& b) { return tensor_rep(a, b); });
}

ChainObject external_tensor_chain(const HopfPtr& ab, const ChainObject& x, const ChainObject& y) {
  return tensor_impl(ab, x, y, [&ab](const RepObject& a, const RepObject& b) { return external_tensor_rep(ab, a, b); });
}

ChainObject tensor_chain(const std::vector<ChainObject>& factors) {
  if (factors.empty()) return unit_chain(HopfAlgebra::trivial());
  ChainObject acc = factors.back();
  for (std::size_t k = factors.size() - 1; k-- > 0;) acc = tensor_chain(factors[k], acc);
  return acc;
}

ChainObject shift_chain(const ChainObject& x, int r) {
  std::vector<std::vector<RepObject>> summands;
  std::vector<Matrix> diffs;
  for (int n = x.lo(); n <= x.hi(); ++n) {
    summands.push_back(x.summands(n));
    if (n < x.hi()) diffs.push_back(ScalarCyclo(koszul(r)) * x.diff(n));
  }
  return ChainObject(x.algebra_ptr(), x.lo() - r, std::move(summands), std::move(diffs));
}

ChainObject dual_chain(const ChainObject& x) {
  if (x.hi() < x.lo()) return x;
  std::vector<std::vector<RepObject>> summands;
  std::vector<Matrix> diffs;
  for (int l = -x.hi(); l <= -x.lo(); ++l) {
    std::vector<RepObject> s;
    for (const auto& c : x.summands(-l)) s.push_back(dual_rep(c));
    summands.push_back(std::move(s));
    if (l < -x.lo()) diffs.push_back(ScalarCyclo(-koszul(l)) * x.diff(-l - 1).transpose());
  }
  return ChainObject(x.algebra_ptr(), -x.hi(), std::move(summands), std::move(diffs));
}

// ------------------------------------------------------------------- maps

Matrix ChainMap::component(int n) const {
  if (auto it = components.find(n); it != components.end()) return it->second;
  return Matrix(target.dim(n), source.dim(n));
}

Matrix ChainHomotopy::component(int n) const {
  if (auto it = components.find(n); it != components.end()) return it->second;
  return Matrix(target.dim(n - 1), source.dim(n));
}

ChainMap identity_chain(const ChainObject& x) {
  ChainMap f{x, x, {}};
  for (int n = x.lo(); n <= x.hi(); ++n) f.components[n] = Matrix::identity(x.dim(n));
  return f;
}

ChainMap zero_map(const ChainObject& x, const ChainObject& y) { return {x, y, {}}; }

ChainMap compose_chain(const ChainMap& g, const ChainMap& f) {
  ChainMap h{f.source, g.target, {}};
  for (const auto& [n, m] : f.components) {
    const Matrix gn = g.component(n);
    if (gn.cols() != m.rows()) throw ShapeError("compose_chain: shape mismatch in degree " + std::to_string(n));
    Matrix p = gn * m;
    if (!p.is_zero()) h.components[n] = std::move(p);
  }
  return h;
}

namespace {

ChainMap combine_maps(const ChainMap& f, const ChainMap& g, const ScalarCyclo& c) {
  ChainMap h = f;
  for (const auto& [n, m] : g.components) {
    Matrix add = c * m;
    auto it = h.components.find(n);
    if (it == h.components.end()) {
      h.components[n] = std::move(add);
    } else {
      if (it->second.rows() != add.rows() || it->second.cols() != add.cols())
        throw ShapeError("chain map sum: shape mismatch");
      it->second += add;
    }
  }
  return h;
}

}  // namespace

ChainMap operator+(const ChainMap& f, const ChainMap& g) { return combine_maps(f, g, ScalarCyclo(1)); }
ChainMap operator-(const ChainMap& f, const ChainMap& g) { return combine_maps(f, g, ScalarCyclo(-1)); }

ChainMap operator*(const ScalarCyclo& c, const ChainMap& f) {
  ChainMap h = f;
  for (auto& [n, m] : h.components) m *= c;
  return h;
}

ChainMap tensor_chain_map(const ChainMap& f, const ChainMap& g) {
  const ChainObject src = tensor_chain(f.source, g.source);
  const ChainObject tgt = tensor_chain(f.target, g.target);
  const TensorLayout ls({f.source, g.source}), lt({f.target, g.target});
  ChainMap h{src, tgt, {}};
  for (int n = src.lo(); n <= src.hi(); ++n) {
    Matrix m(tgt.dim(n), src.dim(n));
    for (const auto& e : ls.entries(n)) {
      const auto [a, i] = e.parts[0];
      const auto [b, j] = e.parts[1];
      const Matrix fa = f.component(a), gb = g.component(b);
      for (std::size_t i2 = 0; i2 < f.target.summands(a).size(); ++i2) {
        const Matrix fb = summand_block(fa, f.source, a, i, f.target, a, i2);
        if (fb.is_zero()) continue;
        for (std::size_t j2 = 0; j2 < g.target.summands(b).size(); ++j2) {
          const Matrix gbk = summand_block(gb, g.source, b, j, g.target, b, j2);
          if (gbk.is_zero()) continue;
          const auto& t = lt.entries(n)[lt.find(n, {{a, i2}, {b, j2}})];
          m.add_block(t.offset, e.offset, kron(fb, gbk));
        }
      }
    }
    if (!m.is_zero()) h.components[n] = std::move(m);
  }
  return h;
}

ChainMap dual_chain_map(const ChainMap& f) {
  ChainMap h{dual_chain(f.target), dual_chain(f.source), {}};
  for (const auto& [n, m] : f.components) h.components[-n] = m.transpose();
  return h;
}

ChainHomotopy dual_chain_homotopy(const ChainHomotopy& h) {
  ChainHomotopy k{dual_chain(h.target), dual_chain(h.source), {}};
  for (const auto& [n, m] : h.components) k.components[1 - n] = ScalarCyclo(koszul(1 - n)) * m.transpose();
  return k;
}

std::map<int, Matrix> tensor_graded_maps(const std::vector<GradedMapFactor>& factors) {
  std::vector<ChainObject> sources, targets;
  int shift = 0;
  for (const auto& f : factors) {
    sources.push_back(f.source);
    targets.push_back(f.target);
    shift += f.degree;
  }
  const TensorLayout ls(sources), lt(targets);
  const ChainObject src = tensor_chain(sources), tgt = tensor_chain(targets);
  std::map<int, Matrix> out;
  for (int n = ls.lo(); n <= ls.hi(); ++n) {
    if (tgt.dim(n + shift) == 0) continue;
    Matrix m(tgt.dim(n + shift), src.dim(n));
    for (const auto& e : ls.entries(n)) {
      // Koszul sign: each factor map passes the degrees to its left.
      long sign_exp = 0, passed = 0;
      for (std::size_t k = 0; k < factors.size(); ++k) {
        sign_exp += long(factors[k].degree) * passed;
        passed += e.parts[k].first;
      }
      // blocks[k][t] is factor k from its source summand to target summand t
      std::vector<std::vector<Matrix>> blocks(factors.size());
      bool dead = false;
      for (std::size_t k = 0; k < factors.size() && !dead; ++k) {
        const auto& f = factors[k];
        const auto [a, i] = e.parts[k];
        const int b = a + f.degree;
        const auto it = f.components.find(a);
        if (it == f.components.end() || !f.target.in_support(b)) {
          dead = true;
          break;
        }
        for (std::size_t t = 0; t < f.target.summands(b).size(); ++t)
          blocks[k].push_back(summand_block(it->second, f.source, a, i, f.target, b, t));
      }
      if (dead) continue;
      // every choice of target summands
      std::vector<std::size_t> pick(factors.size(), 0);
      while (true) {
        Matrix blk = Matrix::identity(1);
        std::vector<std::pair<int, std::size_t>> parts;
        for (std::size_t k = 0; k < factors.size() && !blk.is_zero(); ++k) {
          blk = kron(blk, blocks[k][pick[k]]);
          parts.push_back({e.parts[k].first + factors[k].degree, pick[k]});
        }
        if (!blk.is_zero()) {
          const auto& t = lt.entries(n + shift)[lt.find(n + shift, parts)];
          m.add_block(t.offset, e.offset, ScalarCyclo(koszul(sign_exp)) * blk);
        }
        std::size_t k = factors.size();
        while (k > 0 && ++pick[k - 1] == blocks[k - 1].size()) pick[--k] = 0;
        if (k == 0) break;
      }
    }
    if (!m.is_zero()) out[n] = std::move(m);
  }
  return out;
}

ChainMap shift_chain_map(const ChainMap& f, int r) {
  ChainMap h{shift_chain(f.source, r), shift_chain(f.target, r), {}};
  for (const auto& [n, m] : f.components) h.components[n - r] = m;
  return h;
}

ChainMap direct_sum_chain_map(const ChainMap& f, const ChainMap& g) {
  ChainMap h{direct_sum_chain(f.source, g.source), direct_sum_chain(f.target, g.target), {}};
  for (int n = h.source.lo(); n <= h.source.hi(); ++n) {
    Matrix m = direct_sum(f.component(n), g.component(n));
    if (!m.is_zero()) h.components[n] = std::move(m);
  }
  return h;
}

ChainMap inclusion_first(const ChainObject& x, const ChainObject& y) {
  const ChainObject s = direct_sum_chain(x, y);
  ChainMap h{x, s, {}};
  for (int n = x.lo(); n <= x.hi(); ++n) {
    Matrix m(s.dim(n), x.dim(n));
    m.set_block(0, 0, Matrix::identity(x.dim(n)));
    h.components[n] = std::move(m);
  }
  return h;
}

ChainMap projection_first(const ChainObject& x, const ChainObject& y) {
  const ChainObject s = direct_sum_chain(x, y);
  ChainMap h{s, x, {}};
  for (int n = x.lo(); n <= x.hi(); ++n) {
    Matrix m(x.dim(n), s.dim(n));
    m.set_block(0, 0, Matrix::identity(x.dim(n)));
    h.components[n] = std::move(m);
  }
  return h;
}

bool is_chain_map(const ChainMap& f) {
  if (f.source.algebra_ptr() != f.target.algebra_ptr()) return false;
  for (const auto& [n, m] : f.components) {
    if (m.rows() != f.target.dim(n) || m.cols() != f.source.dim(n)) return false;
    if (!RepMorphism{f.source.component(n), f.target.component(n), m}.is_intertwiner()) return false;
  }
  const int lo = support_lo(f.source, f.target) - 1, hi = support_hi(f.source, f.target);
  for (int n = lo; n <= hi; ++n) {
    const Matrix lhs = f.target.diff(n).rows() == f.target.dim(n + 1) && f.target.diff(n).cols() == f.target.dim(n)
                           ? f.target.diff(n) * f.component(n)
                           : Matrix(f.target.dim(n + 1), f.source.dim(n));
    const Matrix rhs = f.component(n + 1) * f.source.diff(n);
    if (lhs != rhs) return false;
  }
  return true;
}

bool is_homotopy(const ChainHomotopy& h, const ChainMap& f, const ChainMap& g) {
  const ChainObject& x = f.source;
  const ChainObject& y = f.target;
  for (const auto& [n, m] : h.components)
    if (m.rows() != y.dim(n - 1) || m.cols() != x.dim(n)) return false;
  const int lo = support_lo(x, y), hi = support_hi(x, y);
  for (int n = lo; n <= hi; ++n) {
    const Matrix diff = f.component(n) - g.component(n);
    Matrix rhs = h.component(n + 1) * x.diff(n);
    if (y.dim(n - 1) > 0 && x.dim(n) > 0) rhs += y.diff(n - 1) * h.component(n);
    if (diff != rhs) return false;
  }
  return true;
}

// ----------------------------------------------------- structure maps

ChainMap ev_chain(const ChainObject& x) {
  const ChainObject xd = dual_chain(x);
  const ChainObject src = tensor_chain(xd, x);
  const TensorLayout layout({xd, x});
  const ChainObject one = unit_chain(x.algebra_ptr());
  ChainMap f{src, one, {}};
  if (src.hi() < src.lo()) return f;
  Matrix m(1, src.dim(0));
  for (const auto& e : layout.entries(0)) {
    const auto [l, i] = e.parts[0];
    const auto [a, j] = e.parts[1];
    if (i == j) m.set_block(0, e.offset, ev(x.summands(a)[j]).matrix);
  }
  f.components[0] = std::move(m);
  return f;
}

ChainMap coev_chain(const ChainObject& x) {
  const ChainObject xd = dual_chain(x);
  const ChainObject tgt = tensor_chain(x, xd);
  const TensorLayout layout({x, xd});
  ChainMap f{unit_chain(x.algebra_ptr()), tgt, {}};
  if (tgt.hi() < tgt.lo()) return f;
  Matrix m(tgt.dim(0), 1);
  for (const auto& e : layout.entries(0)) {
    const auto [a, i] = e.parts[0];
    const auto [l, j] = e.parts[1];
    if (i == j) m.set_block(e.offset, 0, coev(x.summands(a)[i]).matrix);
  }
  f.components[0] = std::move(m);
  return f;
}

ChainMap ev_right_chain(const ChainObject& x) {
  const ChainObject xd = dual_chain(x);
  const ChainObject src = tensor_chain(x, xd);
  const TensorLayout layout({x, xd});
  ChainMap f{src, unit_chain(x.algebra_ptr()), {}};
  if (src.hi() < src.lo()) return f;
  Matrix m(1, src.dim(0));
  for (const auto& e : layout.entries(0)) {
    const auto [a, i] = e.parts[0];
    const auto [l, j] = e.parts[1];
    if (i == j) m.set_block(0, e.offset, ScalarCyclo(koszul(a)) * ev_right(x.summands(a)[i]).matrix);
  }
  f.components[0] = std::move(m);
  return f;
}

ChainMap coev_right_chain(const ChainObject& x) {
  const ChainObject xd = dual_chain(x);
  const ChainObject tgt = tensor_chain(xd, x);
  const TensorLayout layout({xd, x});
  ChainMap f{unit_chain(x.algebra_ptr()), tgt, {}};
  if (tgt.hi() < tgt.lo()) return f;
  Matrix m(tgt.dim(0), 1);
  for (const auto& e : layout.entries(0)) {
    const auto [l, i] = e.parts[0];
    const auto [a, j] = e.parts[1];
    if (i == j) m.set_block(e.offset, 0, ScalarCyclo(koszul(a)) * coev_right(x.summands(a)[j]).matrix);
  }
  f.components[0] = std::move(m);
  return f;
}

namespace {

ChainMap braiding_impl(const ChainObject& x, const ChainObject& y, bool inverse) {
  const ChainObject src = tensor_chain(x, y), tgt = tensor_chain(y, x);
  const TensorLayout ls({x, y}), lt({y, x});
  ChainMap f{src, tgt, {}};
  for (int n = src.lo(); n <= src.hi(); ++n) {
    Matrix m(tgt.dim(n), src.dim(n));
    for (const auto& e : ls.entries(n)) {
      const auto [a, i] = e.parts[0];
      const auto [b, j] = e.parts[1];
      const RepObject& xi = x.summands(a)[i];
      const RepObject& yj = y.summands(b)[j];
      Matrix c = inverse ? braiding_inv(xi, yj).matrix : braiding(xi, yj).matrix;
      c *= ScalarCyclo(koszul(long(a) * b));
      m.set_block(lt.entries(n)[lt.find(n, {{b, j}, {a, i}})].offset, e.offset, c);
    }
    f.components[n] = std::move(m);
  }
  return f;
}

ChainMap twist_impl(const ChainObject& x, bool inverse) {
  ChainMap f{x, x, {}};
  for (int n = x.lo(); n <= x.hi(); ++n) {
    const RepObject c = x.component(n);
    f.components[n] = inverse ? twist_inv(c).matrix : twist(c).matrix;
  }
  return f;
}

}  // namespace

ChainMap braiding_chain(const ChainObject& x, const ChainObject& y) { return braiding_impl(x, y, false); }
ChainMap braiding_inv_chain(const ChainObject& x, const ChainObject& y) { return braiding_impl(x, y, true); }
ChainMap twist_chain(const ChainObject& x) { return twist_impl(x, false); }
ChainMap twist_inv_chain(const ChainObject& x) { return twist_impl(x, true); }

// ---------------------------------------------------------------- layout

TensorLayout::TensorLayout(const std::vector<ChainObject>& factors) : factors_(factors) {
  std::map<int, std::vector<Entry>> suffix;
  suffix[0].push_back(Entry{{}, 0, 1});
  for (std::size_t t = factors.size(); t-- > 0;) {
    const ChainObject& x = factors[t];
    std::map<int, std::vector<Entry>> next;
    for (int a = x.lo(); a <= x.hi(); ++a)
      for (std::size_t i = 0; i < x.summands(a).size(); ++i)
        for (const auto& [m, list] : suffix)
          for (const auto& e : list) {
            Entry ne;
            ne.parts.reserve(e.parts.size() + 1);
            ne.parts.push_back({a, i});
            ne.parts.insert(ne.parts.end(), e.parts.begin(), e.parts.end());
            ne.dim = x.summands(a)[i].dim() * e.dim;
            next[a + m].push_back(std::move(ne));
          }
    // Within a degree, entries must be ordered by the first part; the loop
    // order above already guarantees this.
    suffix = std::move(next);
  }
  bool empty_factor = false;
  for (const auto& x : factors) empty_factor = empty_factor || x.hi() < x.lo();
  if (empty_factor) suffix.clear();
  if (!suffix.empty()) {
    lo_ = suffix.begin()->first;
    hi_ = suffix.rbegin()->first;
  }
  // Degrees inside the support with no entries still exist as empty lists.
  for (int n = lo_; n <= hi_; ++n) {
    auto& list = suffix[n];
    std::size_t off = 0;
    for (std::size_t k = 0; k < list.size(); ++k) {
      list[k].offset = off;
      off += list[k].dim;
      index_[n][list[k].parts] = k;
    }
  }
  entries_ = std::move(suffix);
}

const std::vector<TensorLayout::Entry>& TensorLayout::entries(int n) const {
  static const std::vector<Entry> none;
  auto it = entries_.find(n);
  return it == entries_.end() ? none : it->second;
}

std::size_t TensorLayout::find(int n, const std::vector<std::pair<int, std::size_t>>& parts) const {
  auto it = index_.find(n);
  if (it == index_.end()) return npos;
  auto jt = it->second.find(parts);
  return jt == it->second.end() ? npos : jt->second;
}

Matrix multidegree_embedding(const std::vector<ChainObject>& factors, const TensorLayout& layout,
                             const std::vector<int>& degrees, std::size_t total_dim) {
  const std::size_t k = factors.size();
  std::vector<std::size_t> stride(k, 1);
  std::size_t cols = 1;
  for (std::size_t i = k; i-- > 0;) {
    stride[i] = cols;
    cols *= factors[i].dim(degrees[i]);
  }
  const int n = std::accumulate(degrees.begin(), degrees.end(), 0);
  Matrix p(total_dim, cols);
  for (const auto& e : layout.entries(n)) {
    bool match = true;
    for (std::size_t i = 0; i < k && match; ++i) match = e.parts[i].first == degrees[i];
    if (!match) continue;
    std::vector<std::size_t> dims(k), offs(k);
    for (std::size_t i = 0; i < k; ++i) {
      dims[i] = factors[i].summands(degrees[i])[e.parts[i].second].dim();
      offs[i] = factors[i].summand_offset(degrees[i], e.parts[i].second);
    }
    for (std::size_t r = 0; r < e.dim; ++r) {
      std::size_t rem = r, col = 0;
      for (std::size_t i = k; i-- > 0;) {
        col += (offs[i] + rem % dims[i]) * stride[i];
        rem /= dims[i];
      }
      p.set(e.offset + r, col, 1);
    }
  }
  return p;
}

ChainMap apply_local(const std::vector<ChainObject>& factors, std::size_t pos, std::size_t width,
                     const std::vector<ChainObject>& replacement, const ChainMap& f,
                     const ChainObject* source_total, const ChainObject* target_total) {
  if (pos + width > factors.size()) throw ShapeError("apply_local: range exceeds the factors");
  std::vector<ChainObject> tgt_factors(factors.begin(), factors.begin() + long(pos));
  tgt_factors.insert(tgt_factors.end(), replacement.begin(), replacement.end());
  tgt_factors.insert(tgt_factors.end(), factors.begin() + long(pos + width), factors.end());
  const std::vector<ChainObject> local_src(factors.begin() + long(pos), factors.begin() + long(pos + width));

  const TensorLayout full_src(factors), full_tgt(tgt_factors);
  const TensorLayout lsrc(local_src), ltgt(replacement);
  const ChainObject src = source_total ? *source_total : tensor_chain(factors);
  const ChainObject tgt = target_total ? *target_total : tensor_chain(tgt_factors);
  if (!factors.empty() && src.algebra_ptr() != factors.front().algebra_ptr())
    throw ShapeError("apply_local: source complex does not match the factors");

  // Blocks of f between local entries, computed on demand.
  std::map<std::tuple<int, std::size_t, std::size_t>, Matrix> cache;
  std::map<int, Matrix> fcomp;
  auto block = [&](int ld, std::size_t se, std::size_t te) -> const Matrix& {
    auto key = std::make_tuple(ld, se, te);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto ft = fcomp.find(ld);
    if (ft == fcomp.end()) ft = fcomp.emplace(ld, f.component(ld)).first;
    const auto& s = lsrc.entries(ld)[se];
    const auto& t = ltgt.entries(ld)[te];
    return cache.emplace(key, ft->second.block(t.offset, s.offset, t.dim, s.dim)).first->second;
  };

  auto part_dim = [](const std::vector<ChainObject>& fs, std::size_t k, const std::pair<int, std::size_t>& p) {
    return fs[k].summands(p.first)[p.second].dim();
  };

  ChainMap out{src, tgt, {}};
  for (int n = full_src.lo(); n <= full_src.hi(); ++n) {
    Matrix m(tgt.dim(n), src.dim(n));
    for (const auto& e : full_src.entries(n)) {
      std::vector<std::pair<int, std::size_t>> left(e.parts.begin(), e.parts.begin() + long(pos));
      std::vector<std::pair<int, std::size_t>> mid(e.parts.begin() + long(pos), e.parts.begin() + long(pos + width));
      std::vector<std::pair<int, std::size_t>> right(e.parts.begin() + long(pos + width), e.parts.end());
      int ld = 0;
      for (const auto& p : mid) ld += p.first;
      std::size_t dl = 1, dr = 1;
      for (std::size_t k = 0; k < left.size(); ++k) dl *= part_dim(factors, k, left[k]);
      for (std::size_t k = 0; k < right.size(); ++k) dr *= part_dim(factors, pos + width + k, right[k]);
      const std::size_t se = lsrc.find(ld, mid);
      const auto& targets = ltgt.entries(ld);
      for (std::size_t te = 0; te < targets.size(); ++te) {
        const Matrix& b = block(ld, se, te);
        if (b.is_zero()) continue;
        std::vector<std::pair<int, std::size_t>> parts = left;
        parts.insert(parts.end(), targets[te].parts.begin(), targets[te].parts.end());
        parts.insert(parts.end(), right.begin(), right.end());
        const std::size_t ti = full_tgt.find(n, parts);
        Matrix big = kron(Matrix::identity(dl), kron(b, Matrix::identity(dr)));
        m.add_block(full_tgt.entries(n)[ti].offset, e.offset, big);
      }
    }
    if (!m.is_zero()) out.components[n] = std::move(m);
  }
  return out;
}

// ------------------------------------------------------------ Hom complex

HomComplex::HomComplex(const ChainObject& x, const ChainObject& y) : x_(x), y_(y) {
  if (x.algebra_ptr() != y.algebra_ptr()) throw ShapeError("hom_complex: complexes over different algebras");
  const bool empty = x.hi() < x.lo() || y.hi() < y.lo();
  const int lo = empty ? 0 : y.lo() - x.hi();
  const int hi = empty ? -1 : y.hi() - x.lo();

  struct Task {
    int n;
    std::size_t block;
  };
  std::vector<Task> tasks;
  for (int n = lo; n <= hi; ++n) {
    auto& list = blocks_[n];
    for (int a = x.lo(); a <= x.hi(); ++a) {
      if (!y.in_support(a + n)) continue;
      for (std::size_t i = 0; i < x.summands(a).size(); ++i)
        for (std::size_t j = 0; j < y.summands(a + n).size(); ++j) {
          tasks.push_back({n, list.size()});
          list.push_back(Block{a, i, j, nullptr, 0});
        }
    }
  }
  parallel_for(tasks.size(), [&](std::size_t k) {
    Block& b = blocks_[tasks[k].n][tasks[k].block];
    b.space = std::make_shared<const HomSpace>(x.summands(b.a)[b.i], y.summands(b.a + tasks[k].n)[b.j]);
  });
  for (auto& [n, list] : blocks_) {
    std::size_t off = 0;
    for (auto& b : list) {
      b.offset = off;
      off += b.space->dim();
    }
    dims_[n] = off;
  }

  // Differential, one degree per task.
  std::vector<Matrix> diffs(hi > lo ? hi - lo : 0);
  parallel_for(diffs.size(), [&](std::size_t k) {
    const int n = lo + int(k);
    std::map<std::tuple<int, std::size_t, std::size_t>, const Block*> next;
    for (const auto& b : blocks_.at(n + 1)) next[{b.a, b.i, b.j}] = &b;
    Matrix d(dims_.at(n + 1), dims_.at(n));
    const ScalarCyclo sign(-koszul(n));
    for (const auto& b : blocks_.at(n)) {
      const int tn = b.a + n;
      for (std::size_t k2 = 0; k2 < b.space->dim(); ++k2) {
        const Matrix phi = b.space->element(k2);
        const std::size_t col = b.offset + k2;
        // d_y phi
        for (std::size_t j2 = 0; j2 < y.summands(tn + 1).size(); ++j2) {
          const Matrix dy = summand_block(y.diff(tn), y, tn, b.j, y, tn + 1, j2);
          if (dy.is_zero()) continue;
          const Matrix img = dy * phi;
          if (img.is_zero()) continue;
          const Block* t = next.at({b.a, b.i, j2});
          const Vector c = t->space->lead_coordinates(img);
          for (std::size_t r = 0; r < c.size(); ++r)
            if (!c[r].is_zero()) d.add_to(t->offset + r, col, c[r]);
        }
        // -(-1)^n phi d_x
        for (std::size_t i2 = 0; i2 < x.summands(b.a - 1).size(); ++i2) {
          const Matrix dx = summand_block(x.diff(b.a - 1), x, b.a - 1, i2, x, b.a, b.i);
          if (dx.is_zero()) continue;
          const Matrix img = phi * dx;
          if (img.is_zero()) continue;
          const Block* t = next.at({b.a - 1, i2, b.j});
          const Vector c = t->space->lead_coordinates(img);
          for (std::size_t r = 0; r < c.size(); ++r)
            if (!c[r].is_zero()) d.add_to(t->offset + r, col, sign * c[r]);
        }
      }
    }
    diffs[k] = std::move(d);
  });

  std::vector<std::vector<RepObject>> summands;
  for (int n = lo; n <= hi; ++n) summands.push_back({vector_space(dims_[n])});
  complex_ = ChainObject(HopfAlgebra::trivial(), lo, std::move(summands), std::move(diffs));
}

std::size_t HomComplex::dim(int n) const {
  auto it = dims_.find(n);
  return it == dims_.end() ? 0 : it->second;
}

const std::vector<HomComplex::Block>& HomComplex::blocks(int n) const {
  static const std::vector<Block> none;
  auto it = blocks_.find(n);
  return it == blocks_.end() ? none : it->second;
}

GradedFamily HomComplex::unpack(int n, const Vector& coords) const {
  if (coords.size() != dim(n)) throw ShapeError("HomComplex::unpack: wrong coordinate count");
  GradedFamily fam;
  for (const auto& b : blocks(n)) {
    const Vector part(coords.begin() + long(b.offset), coords.begin() + long(b.offset + b.space->dim()));
    bool zero = true;
    for (const auto& c : part) zero = zero && c.is_zero();
    auto it = fam.find(b.a);
    if (it == fam.end()) it = fam.emplace(b.a, Matrix(y_.dim(b.a + n), x_.dim(b.a))).first;
    if (zero) continue;
    it->second.add_block(y_.summand_offset(b.a + n, b.j), x_.summand_offset(b.a, b.i), b.space->combine(part));
  }
  return fam;
}

Vector HomComplex::pack(int n, const GradedFamily& family) const {
  Vector coords(dim(n));
  for (const auto& [a, m] : family) {
    if (m.is_zero()) continue;
    if (!x_.in_support(a) || !y_.in_support(a + n))
      throw MathError("HomComplex::pack: nonzero component outside the support");
    if (m.rows() != y_.dim(a + n) || m.cols() != x_.dim(a)) throw ShapeError("HomComplex::pack: shape mismatch");
  }
  for (const auto& b : blocks(n)) {
    auto it = family.find(b.a);
    if (it == family.end()) continue;
    const Matrix blk = it->second.block(y_.summand_offset(b.a + n, b.j), x_.summand_offset(b.a, b.i),
                                        b.space->target().dim(), b.space->source().dim());
    const Vector c = b.space->coordinates(blk);
    std::copy(c.begin(), c.end(), coords.begin() + long(b.offset));
  }
  return coords;
}

Matrix HomComplex::matrix_of(int n, const HomComplex& other, int m,
                             const std::function<GradedFamily(const GradedFamily&)>& map) const {
  Matrix out(other.dim(m), dim(n));
  for (std::size_t k = 0; k < dim(n); ++k) {
    Vector e(dim(n));
    e[k] = 1;
    const Vector img = other.pack(m, map(unpack(n, e)));
    for (std::size_t r = 0; r < img.size(); ++r)
      if (!img[r].is_zero()) out.set(r, k, img[r]);
  }
  return out;
}

HomComplex hom_complex(const ChainObject& x, const ChainObject& y) { return HomComplex(x, y); }

std::map<int, std::size_t> cohomology(const ChainObject& x) {
  std::map<int, std::size_t> out;
  std::vector<std::size_t> ranks(x.hi() >= x.lo() ? x.hi() - x.lo() + 1 : 0);
  parallel_for(ranks.size(), [&](std::size_t k) { ranks[k] = rank(x.diff(x.lo() + int(k))); });
  for (int n = x.lo(); n <= x.hi(); ++n) {
    const std::size_t out_rank = ranks[n - x.lo()];
    const std::size_t in_rank = n > x.lo() ? ranks[n - 1 - x.lo()] : 0;
    out[n] = x.dim(n) - out_rank - in_rank;
  }
  return out;
}

// ------------------------------------------------------------- homotopy

namespace {

// Matrix of d^n : Hom^n -> Hom^{n+1}, zero-padded outside the support.
Matrix hom_diff(const HomComplex& hc, int n) {
  const Matrix& d = hc.complex().diff(n);
  if (d.rows() == hc.dim(n + 1) && d.cols() == hc.dim(n)) return d;
  return Matrix(hc.dim(n + 1), hc.dim(n));
}

GradedFamily family_of(const ChainMap& f) {
  GradedFamily fam;
  for (int n = f.source.lo(); n <= f.source.hi(); ++n)
    if (f.target.in_support(n)) fam[n] = f.component(n);
  return fam;
}

ChainMap map_of(const ChainObject& x, const ChainObject& y, const GradedFamily& fam) {
  ChainMap f{x, y, {}};
  for (const auto& [a, m] : fam)
    if (!m.is_zero()) f.components[a] = m;
  return f;
}

ChainHomotopy homotopy_of(const ChainObject& x, const ChainObject& y, const GradedFamily& fam) {
  ChainHomotopy h{x, y, {}};
  for (const auto& [a, m] : fam)
    if (!m.is_zero()) h.components[a] = m;
  return h;
}

// Composes families of degree-0 maps: (g o f)_a = g_a f_a.
GradedFamily compose_family(const GradedFamily& g, const GradedFamily& f) {
  GradedFamily out;
  for (const auto& [a, fm] : f) {
    auto it = g.find(a);
    if (it == g.end()) continue;
    out[a] = it->second * fm;
  }
  return out;
}

}  // namespace

std::optional<ChainHomotopy> find_homotopy(const ChainMap& f, const ChainMap& g) {
  const HomComplex hc(f.source, f.target);
  const Vector rhs = hc.pack(0, family_of(f - g));
  const auto sol = solve(hom_diff(hc, -1), rhs);
  if (!sol) return std::nullopt;
  return homotopy_of(f.source, f.target, hc.unpack(-1, *sol));
}

std::optional<HomotopyEquivalence> is_homotopy_equivalence(const ChainMap& f) {
  const ChainObject& x = f.source;
  const ChainObject& y = f.target;
  if (cohomology(x) != cohomology(y)) {
    // Supports may differ only by acyclic padding; compare nonzero ranks.
    auto nz = [](const std::map<int, std::size_t>& h) {
      std::map<int, std::size_t> out;
      for (const auto& [n, r] : h)
        if (r) out[n] = r;
      return out;
    };
    if (nz(cohomology(x)) != nz(cohomology(y))) return std::nullopt;
  }
  const HomComplex hyx(y, x), hxx(x, x), hyy(y, y);
  const GradedFamily ff = family_of(f);
  const Matrix dyx = hom_diff(hyx, 0);
  const Matrix p = hyx.matrix_of(0, hxx, 0, [&](const GradedFamily& eta) { return compose_family(eta, ff); });
  const Matrix q = hyx.matrix_of(0, hyy, 0, [&](const GradedFamily& eta) { return compose_family(ff, eta); });
  const Matrix dxx = hom_diff(hxx, -1), dyy = hom_diff(hyy, -1);

  const std::size_t ne = hyx.dim(0), nh = hxx.dim(-1), nk = hyy.dim(-1);
  const std::size_t r1 = hyx.dim(1), r2 = hxx.dim(0), r3 = hyy.dim(0);
  Matrix sys(r1 + r2 + r3, ne + nh + nk);
  sys.set_block(0, 0, dyx);
  sys.set_block(r1, 0, p);
  sys.set_block(r1, ne, -dxx);
  sys.set_block(r1 + r2, 0, q);
  sys.set_block(r1 + r2, ne + nh, -dyy);
  Vector rhs(r1 + r2 + r3);
  const Vector ix = hxx.pack(0, family_of(identity_chain(x)));
  const Vector iy = hyy.pack(0, family_of(identity_chain(y)));
  std::copy(ix.begin(), ix.end(), rhs.begin() + long(r1));
  std::copy(iy.begin(), iy.end(), rhs.begin() + long(r1 + r2));
  const auto sol = solve(sys, rhs);
  if (!sol) return std::nullopt;
  const Vector eta(sol->begin(), sol->begin() + long(ne));
  const Vector hl(sol->begin() + long(ne), sol->begin() + long(ne + nh));
  const Vector hr(sol->begin() + long(ne + nh), sol->end());
  return HomotopyEquivalence{map_of(y, x, hyx.unpack(0, eta)), homotopy_of(x, x, hxx.unpack(-1, hl)),
                             homotopy_of(y, y, hyy.unpack(-1, hr))};
}

bool verify_equivalence(const ChainMap& f, const HomotopyEquivalence& w) {
  if (!is_chain_map(f) || !is_chain_map(w.inverse)) return false;
  return is_homotopy(w.left, compose_chain(w.inverse, f), identity_chain(f.source)) &&
         is_homotopy(w.right, compose_chain(f, w.inverse), identity_chain(f.target));
}

// ---------------------------------------------------------------- random

namespace {

Matrix random_automorphism(std::mt19937_64& rng, const RepObject& x) {
  if (x.dim() == 0) return Matrix(0, 0);
  const HomSpace end(x, x);
  std::uniform_int_distribution<int> coef(-2, 2);
  for (int attempt = 0; attempt < 8; ++attempt) {
    Vector c(end.dim());
    for (auto& v : c) v = coef(rng);
    Matrix m = end.combine(c);
    if (inverse(m)) return m;
  }
  return Matrix::identity(x.dim());
}

// Conjugates the differentials of x by degreewise automorphisms; returns
// the new complex and the isomorphism x -> new.
std::pair<ChainObject, ChainMap> scramble(std::mt19937_64& rng, const ChainObject& x) {
  std::map<int, Matrix> p, pinv;
  for (int n = x.lo(); n <= x.hi(); ++n) {
    p[n] = random_automorphism(rng, x.component(n));
    pinv[n] = *inverse(p[n]);
  }
  std::vector<std::vector<RepObject>> summands;
  std::vector<Matrix> diffs;
  for (int n = x.lo(); n <= x.hi(); ++n) {
    summands.push_back(x.summands(n));
    if (n < x.hi()) diffs.push_back(p[n + 1] * x.diff(n) * pinv[n]);
  }
  ChainObject y(x.algebra_ptr(), x.lo(), std::move(summands), std::move(diffs));
  ChainMap iso{x, y, {}};
  for (auto& [n, m] : p) iso.components[n] = m;
  return {y, iso};
}

HomotopyEquivalence compose_witness(const ChainMap& f1, const HomotopyEquivalence& w1, const ChainMap& f2,
                                    const HomotopyEquivalence& w2) {
  // f = f2 f1 with inverse g1 g2.
  HomotopyEquivalence w;
  w.inverse = compose_chain(w1.inverse, w2.inverse);
  w.left = ChainHomotopy{f1.source, f1.source, {}};
  const int xlo = f1.source.lo(), xhi = f1.source.hi();
  for (int n = xlo; n <= xhi; ++n) {
    // g1 H2 f1 + H1
    Matrix m = w1.inverse.component(n - 1) * w2.left.component(n) * f1.component(n);
    m += w1.left.component(n);
    if (!m.is_zero()) w.left.components[n] = std::move(m);
  }
  const ChainObject& z = f2.target;
  w.right = ChainHomotopy{z, z, {}};
  for (int n = z.lo(); n <= z.hi(); ++n) {
    // f2 H1' g2 + H2'
    Matrix m = f2.component(n - 1) * w1.right.component(n) * w2.inverse.component(n);
    m += w2.right.component(n);
    if (!m.is_zero()) w.right.components[n] = std::move(m);
  }
  return w;
}

}  // namespace

std::vector<RepObject> standard_blocks(const HopfPtr& algebra) {
  std::vector<RepObject> out = small_characters(algebra);
  if (algebra->dim() > 1) out.push_back(regular_rep(algebra));
  return out;
}

ChainObject random_complex(std::mt19937_64& rng, const std::vector<RepObject>& blocks,
                           const RandomComplexOptions& options) {
  if (blocks.empty()) throw ShapeError("random_complex: no building blocks");
  const HopfPtr algebra = blocks.front().algebra_ptr();
  const int lo = std::uniform_int_distribution<int>(options.min_degree, options.min_degree + 1)(rng);
  const int width = std::uniform_int_distribution<int>(1, std::max(1, options.max_width))(rng);
  const int hi = lo + width - 1;
  const std::size_t terms = std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(1, options.max_terms))(rng);
  ChainObject acc(algebra, lo, std::vector<std::vector<RepObject>>(width), std::vector<Matrix>(width - 1));
  for (std::size_t t = 0; t < terms; ++t) {
    const RepObject& b = blocks[std::uniform_int_distribution<std::size_t>(0, blocks.size() - 1)(rng)];
    if (width >= 2 && rng() % 2) {
      acc = direct_sum_chain(acc, cone_of_identity(b, std::uniform_int_distribution<int>(lo, hi - 1)(rng)));
    } else {
      acc = direct_sum_chain(acc, single_chain(b, std::uniform_int_distribution<int>(lo, hi)(rng)));
    }
  }
  return scramble(rng, acc).first;
}

ChainMap random_chain_map(std::mt19937_64& rng, const ChainObject& x, const ChainObject& y) {
  const HomComplex hc(x, y);
  const Subspace cycles = kernel(hom_diff(hc, 0));
  std::uniform_int_distribution<int> coef(-2, 2);
  Vector c(cycles.dim());
  for (auto& v : c) v = coef(rng);
  const Vector coords = cycles.dim() ? cycles.combine(c) : Vector(hc.dim(0));
  return map_of(x, y, hc.unpack(0, coords));
}

std::pair<ChainMap, HomotopyEquivalence> random_equivalence(std::mt19937_64& rng, const ChainObject& x,
                                                            const std::vector<RepObject>& blocks) {
  ChainMap f = identity_chain(x);
  HomotopyEquivalence w{identity_chain(x), {x, x, {}}, {x, x, {}}};
  ChainObject cur = x;
  if (!blocks.empty() && rng() % 3 != 0) {
    // inclusion into cur (+) cone(b)
    const RepObject& b = blocks[std::uniform_int_distribution<std::size_t>(0, blocks.size() - 1)(rng)];
    const int lo = x.hi() >= x.lo() ? x.lo() : 0;
    const int hi = x.hi() >= x.lo() ? x.hi() : 0;
    const int n = std::uniform_int_distribution<int>(lo - 1, hi)(rng);
    const ChainObject cone = cone_of_identity(b, n);
    const ChainMap inc = inclusion_first(cur, cone);
    const ChainMap proj = projection_first(cur, cone);
    const ChainObject& s = inc.target;
    HomotopyEquivalence wi{proj, {cur, cur, {}}, {s, s, {}}};
    // inc proj - id is minus the identity on the cone; H = -id from its top to its bottom.
    Matrix h(s.dim(n), s.dim(n + 1));
    h.set_block(cur.dim(n), cur.dim(n + 1), -Matrix::identity(b.dim()));
    wi.right.components[n + 1] = std::move(h);
    w = compose_witness(f, w, inc, wi);
    f = compose_chain(inc, f);
    cur = s;
  }
  auto [scrambled, iso] = scramble(rng, cur);
  ChainMap inv{scrambled, cur, {}};
  for (const auto& [n, m] : iso.components) inv.components[n] = *inverse(m);
  const HomotopyEquivalence wiso{inv, {cur, cur, {}}, {scrambled, scrambled, {}}};
  w = compose_witness(f, w, iso, wiso);
  f = compose_chain(iso, f);
  return {f, w};
}

}  // namespace chainrt

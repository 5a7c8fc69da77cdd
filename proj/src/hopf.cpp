#include "chainrt/hopf.hpp"

#include <numeric>

#include <algorithm>
#include <map>
#include <mutex>

#include "chainrt/errors.hpp"

namespace chainrt {

namespace {

Matrix::Row sorted_row(std::map<std::size_t, ScalarCyclo> acc) {
  Matrix::Row row;
  for (auto& [c, v] : acc)
    if (!v.is_zero()) row.push_back({c, std::move(v)});
  return row;
}

/// Structure-constant arithmetic shared by verification and HopfAlgebra.
class Structure {
 public:
  explicit Structure(const HopfAlgebraData& d) : n_(d.dim) {
    if (n_ == 0) throw ShapeError("Hopf algebra dimension must be positive");
    if (d.unit.size() != n_ || d.counit.size() != n_ || d.ribbon.size() != n_)
      throw ShapeError("unit, counit and ribbon must have length dim");
    auto check = [&](std::size_t idx, const char* what) {
      if (idx >= n_) throw ShapeError(std::string(what) + ": basis index out of range");
    };
    std::vector<std::map<std::size_t, ScalarCyclo>> mult(n_ * n_), comult(n_);
    for (const auto& t : d.mult) {
      check(t.i, "mult");
      check(t.j, "mult");
      check(t.k, "mult");
      mult[t.i * n_ + t.j][t.k] += t.c;
    }
    for (const auto& t : d.comult) {
      check(t.i, "comult");
      check(t.j, "comult");
      check(t.k, "comult");
      comult[t.i][t.j * n_ + t.k] += t.c;
    }
    for (auto& m : mult) mult_.push_back(sorted_row(std::move(m)));
    for (auto& m : comult) comult_.push_back(sorted_row(std::move(m)));
    antipode_ = Matrix(n_, n_);
    for (const auto& t : d.antipode) {
      check(t.i, "antipode");
      check(t.j, "antipode");
      antipode_.add_to(t.j, t.i, t.c);
    }
    r_.assign(n_ * n_, ScalarCyclo());
    for (const auto& t : d.rmatrix) {
      check(t.i, "rmatrix");
      check(t.j, "rmatrix");
      r_[t.i * n_ + t.j] += t.c;
    }
    unit_ = d.unit;
    counit_ = d.counit;
  }

  std::size_t n() const { return n_; }
  const std::vector<Matrix::Row>& mult() const { return mult_; }
  const std::vector<Matrix::Row>& comult() const { return comult_; }
  const Matrix& antipode_matrix() const { return antipode_; }
  const Vector& r() const { return r_; }
  const Vector& unit() const { return unit_; }

  Vector basis(std::size_t i) const {
    Vector v(n_);
    v[i] = 1;
    return v;
  }

  Vector mul(const Vector& a, const Vector& b) const {
    Vector out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      if (a[i].is_zero()) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (b[j].is_zero()) continue;
        const ScalarCyclo c = a[i] * b[j];
        for (const auto& e : mult_[i * n_ + j]) out[e.col] += c * e.value;
      }
    }
    return out;
  }

  // Product in H^{(x) k} with factors of dimension n.
  Vector mul_tensor(const Vector& a, const Vector& b, unsigned k) const {
    std::size_t total = 1;
    for (unsigned f = 0; f < k; ++f) total *= n_;
    Vector out(total);
    for (std::size_t ia = 0; ia < total; ++ia) {
      if (a[ia].is_zero()) continue;
      for (std::size_t ib = 0; ib < total; ++ib) {
        if (b[ib].is_zero()) continue;
        // Expand the product factor by factor.
        std::vector<std::pair<std::size_t, ScalarCyclo>> partial{{0, a[ia] * b[ib]}};
        std::size_t stride = total;
        for (unsigned f = 0; f < k; ++f) {
          stride /= n_;
          const std::size_t ai = (ia / stride) % n_;
          const std::size_t bi = (ib / stride) % n_;
          std::vector<std::pair<std::size_t, ScalarCyclo>> next;
          for (const auto& [idx, c] : partial)
            for (const auto& e : mult_[ai * n_ + bi]) next.push_back({idx * n_ + e.col, c * e.value});
          partial = std::move(next);
        }
        for (const auto& [idx, c] : partial) out[idx] += c;
      }
    }
    return out;
  }

  Vector antipode(const Vector& a) const { return antipode_ * a; }

  Vector coproduct(const Vector& a) const {
    Vector out(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
      if (a[i].is_zero()) continue;
      for (const auto& e : comult_[i]) out[e.col] += a[i] * e.value;
    }
    return out;
  }

  ScalarCyclo counit(const Vector& a) const {
    ScalarCyclo s;
    for (std::size_t i = 0; i < n_; ++i)
      if (!a[i].is_zero()) s += a[i] * counit_[i];
    return s;
  }

  // Applies Delta to factor `slot` of an element of H^{(x) k}.
  Vector coproduct_at(const Vector& a, unsigned k, unsigned slot) const {
    std::size_t total = 1;
    for (unsigned f = 0; f < k; ++f) total *= n_;
    std::size_t after = 1;
    for (unsigned f = slot + 1; f < k; ++f) after *= n_;
    Vector out(total * n_);
    for (std::size_t idx = 0; idx < total; ++idx) {
      if (a[idx].is_zero()) continue;
      const std::size_t low = idx % after;
      const std::size_t mid = (idx / after) % n_;
      const std::size_t high = idx / after / n_;
      for (const auto& e : comult_[mid]) {
        const std::size_t out_idx = (high * n_ * n_ + e.col) * after + low;
        out[out_idx] += a[idx] * e.value;
      }
    }
    return out;
  }

  // Embeds a two-tensor into three factors at the given slots.
  Vector embed2(const Vector& r, unsigned first, unsigned second) const {
    Vector out(n_ * n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        const ScalarCyclo& c = r[i * n_ + j];
        if (c.is_zero()) continue;
        // The remaining slot carries the unit.
        for (std::size_t u = 0; u < n_; ++u) {
          if (unit_[u].is_zero()) continue;
          std::size_t idx[3];
          idx[first] = i;
          idx[second] = j;
          idx[3 - first - second] = u;
          out[(idx[0] * n_ + idx[1]) * n_ + idx[2]] += c * unit_[u];
        }
      }
    return out;
  }

  Vector flip(const Vector& r) const {
    Vector out(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) out[j * n_ + i] = r[i * n_ + j];
    return out;
  }

  Vector unit2() const {
    Vector out(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) out[i * n_ + j] = unit_[i] * unit_[j];
    return out;
  }

  // Left multiplication by a in H^{(x) k} as a matrix.
  Matrix left_mult(const Vector& a, unsigned k) const {
    std::size_t total = a.size();
    Matrix m(total, total);
    for (std::size_t col = 0; col < total; ++col) {
      Vector e(total);
      e[col] = 1;
      const Vector prod = mul_tensor(a, e, k);
      for (std::size_t row = 0; row < total; ++row)
        if (!prod[row].is_zero()) m.set(row, col, prod[row]);
    }
    return m;
  }

  std::optional<Vector> inverse(const Vector& a, unsigned k) const {
    const Vector one = k == 1 ? unit_ : unit2();
    auto x = solve(left_mult(a, k), one);
    if (!x) return std::nullopt;
    // Left inverse in a finite-dimensional algebra is two-sided; check anyway.
    if (mul_tensor(*x, a, k) != one) return std::nullopt;
    return x;
  }

  // u = sum S(r2) r1.
  Vector drinfeld() const {
    Vector u(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        const ScalarCyclo& c = r_[i * n_ + j];
        if (c.is_zero()) continue;
        const Vector prod = mul(antipode(basis(j)), basis(i));
        for (std::size_t k = 0; k < n_; ++k) u[k] += c * prod[k];
      }
    return u;
  }

 private:
  std::size_t n_;
  std::vector<Matrix::Row> mult_;
  std::vector<Matrix::Row> comult_;
  Matrix antipode_;
  Vector r_, unit_, counit_;
};

Vector scale(const Vector& v, const ScalarCyclo& s) {
  Vector out = v;
  for (auto& x : out) x *= s;
  return out;
}

}  // namespace

std::vector<std::string> verify_hopf_ribbon(const HopfAlgebraData& data) {
  const Structure h(data);
  const std::size_t n = h.n();
  std::vector<std::string> failures;
  auto fail = [&](const std::string& id) {
    if (std::find(failures.begin(), failures.end(), id) == failures.end()) failures.push_back(id);
  };

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (h.mul(h.mul(h.basis(i), h.basis(j)), h.basis(k)) !=
            h.mul(h.basis(i), h.mul(h.basis(j), h.basis(k))))
          fail("associativity");

  for (std::size_t i = 0; i < n; ++i) {
    const Vector e = h.basis(i);
    if (h.mul(h.unit(), e) != e || h.mul(e, h.unit()) != e) fail("unit");

    const Vector d = h.coproduct(e);
    if (h.coproduct_at(d, 2, 0) != h.coproduct_at(d, 2, 1)) fail("coassociativity");

    Vector left(n), right(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const ScalarCyclo& c = d[a * n + b];
        if (c.is_zero()) continue;
        left[b] += c * data.counit[a];
        right[a] += c * data.counit[b];
      }
    if (left != e || right != e) fail("counit");

    Vector s_left(n), s_right(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const ScalarCyclo& c = d[a * n + b];
        if (c.is_zero()) continue;
        const Vector p = h.mul(h.antipode(h.basis(a)), h.basis(b));
        const Vector q = h.mul(h.basis(a), h.antipode(h.basis(b)));
        for (std::size_t k = 0; k < n; ++k) {
          s_left[k] += c * p[k];
          s_right[k] += c * q[k];
        }
      }
    const Vector expected = scale(h.unit(), data.counit[i]);
    if (s_left != expected || s_right != expected) fail("antipode");

    for (std::size_t j = 0; j < n; ++j) {
      const Vector prod = h.mul(e, h.basis(j));
      if (h.coproduct(prod) != h.mul_tensor(d, h.coproduct(h.basis(j)), 2))
        fail("comultiplication_multiplicative");
      if (h.counit(prod) != data.counit[i] * data.counit[j]) fail("counit_multiplicative");
    }
  }
  if (h.coproduct(h.unit()) != h.unit2()) fail("comultiplication_unital");
  if (h.counit(h.unit()) != ScalarCyclo(1)) fail("counit_multiplicative");

  const Vector& r = h.r();
  const auto r_inv = h.inverse(r, 2);
  if (!r_inv) fail("rmatrix_invertible");

  for (std::size_t i = 0; i < n; ++i) {
    const Vector d = h.coproduct(h.basis(i));
    if (h.mul_tensor(h.flip(d), r, 2) != h.mul_tensor(r, d, 2)) fail("quasi_cocommutativity");
  }

  const Vector r13 = h.embed2(r, 0, 2);
  const Vector r23 = h.embed2(r, 1, 2);
  const Vector r12 = h.embed2(r, 0, 1);
  if (h.coproduct_at(r, 2, 0) != h.mul_tensor(r13, r23, 3)) fail("hexagon_1");
  if (h.coproduct_at(r, 2, 1) != h.mul_tensor(r13, r12, 3)) fail("hexagon_2");

  const Vector& v = data.ribbon;
  for (std::size_t i = 0; i < n; ++i)
    if (h.mul(v, h.basis(i)) != h.mul(h.basis(i), v)) fail("ribbon_central");
  if (!h.inverse(v, 1)) fail("ribbon_invertible");
  const Vector u = h.drinfeld();
  if (h.mul(v, v) != h.mul(u, h.antipode(u))) fail("ribbon_square");
  Vector vv(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) vv[a * n + b] = v[a] * v[b];
  if (h.mul_tensor(h.mul_tensor(h.flip(r), r, 2), h.coproduct(v), 2) != vv)
    fail("ribbon_coproduct");
  if (h.counit(v) != ScalarCyclo(1)) fail("ribbon_counit");
  return failures;
}

HopfAlgebra::HopfAlgebra(HopfAlgebraData data) : data_(std::move(data)) {
  const Structure h(data_);
  mult_ = h.mult();
  comult_ = h.comult();
  antipode_ = h.antipode_matrix();
  r_ = h.r();
  auto r_inv = h.inverse(r_, 2);
  auto v_inv = h.inverse(data_.ribbon, 1);
  if (!r_inv || !v_inv) throw MathError("R-matrix or ribbon element is not invertible");
  r_inv_ = *r_inv;
  v_inv_ = *v_inv;
  u_ = h.drinfeld();
  g_ = h.mul(u_, v_inv_);
  auto g_inv = h.inverse(g_, 1);
  if (!g_inv) throw MathError("pivotal element is not invertible");
  g_inv_ = *g_inv;
}

std::shared_ptr<const HopfAlgebra> HopfAlgebra::create(HopfAlgebraData data) {
  const auto failures = verify_hopf_ribbon(data);
  if (!failures.empty()) {
    std::string msg = "Hopf algebra '" + data.name + "' fails axioms:";
    for (const auto& f : failures) msg += " " + f;
    throw MathError(msg);
  }
  return std::shared_ptr<const HopfAlgebra>(new HopfAlgebra(std::move(data)));
}

std::shared_ptr<const HopfAlgebra> HopfAlgebra::trivial() {
  static const std::shared_ptr<const HopfAlgebra> instance = create(datasets::trivial());
  return instance;
}

Vector HopfAlgebra::basis_element(std::size_t i) const {
  Vector v(dim());
  v.at(i) = 1;
  return v;
}

Vector HopfAlgebra::multiply(const Vector& a, const Vector& b) const {
  const std::size_t n = dim();
  Vector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (b[j].is_zero()) continue;
      const ScalarCyclo c = a[i] * b[j];
      for (const auto& e : mult_[i * n + j]) out[e.col] += c * e.value;
    }
  }
  return out;
}

Vector HopfAlgebra::multiply2(const Vector& a, const Vector& b) const {
  const std::size_t n = dim();
  Vector out(n * n);
  for (std::size_t ia = 0; ia < n * n; ++ia) {
    if (a[ia].is_zero()) continue;
    for (std::size_t ib = 0; ib < n * n; ++ib) {
      if (b[ib].is_zero()) continue;
      const ScalarCyclo c = a[ia] * b[ib];
      for (const auto& e1 : mult_[(ia / n) * n + ib / n])
        for (const auto& e2 : mult_[(ia % n) * n + ib % n])
          out[e1.col * n + e2.col] += c * e1.value * e2.value;
    }
  }
  return out;
}

Vector HopfAlgebra::antipode(const Vector& a) const { return antipode_ * a; }

Vector HopfAlgebra::coproduct(const Vector& a) const {
  Vector out(dim() * dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    if (a[i].is_zero()) continue;
    for (const auto& e : comult_[i]) out[e.col] += a[i] * e.value;
  }
  return out;
}

ScalarCyclo HopfAlgebra::counit(const Vector& a) const {
  ScalarCyclo s;
  for (std::size_t i = 0; i < dim(); ++i)
    if (!a[i].is_zero()) s += a[i] * data_.counit[i];
  return s;
}

Matrix HopfAlgebra::left_multiplication(const Vector& a) const {
  Matrix m(dim(), dim());
  for (std::size_t col = 0; col < dim(); ++col) {
    const Vector prod = multiply(a, basis_element(col));
    for (std::size_t row = 0; row < dim(); ++row)
      if (!prod[row].is_zero()) m.set(row, col, prod[row]);
  }
  return m;
}

namespace datasets {

HopfAlgebraData trivial() {
  HopfAlgebraData d;
  d.name = "trivial";
  d.field_order = 1;
  d.dim = 1;
  d.mult = {{0, 0, 0, 1}};
  d.unit = {1};
  d.comult = {{0, 0, 0, 1}};
  d.counit = {1};
  d.antipode = {{0, 0, 1}};
  d.rmatrix = {{0, 0, 1}};
  d.ribbon = {1};
  return d;
}

HopfAlgebraData fun_zn(unsigned n) {
  if (n == 0 || n % 2 == 0) throw ShapeError("fun_zn: n must be odd");
  HopfAlgebraData d;
  d.name = "fun_z" + std::to_string(n);
  d.field_order = n;
  d.dim = n;
  d.unit.assign(n, ScalarCyclo(1));
  d.counit.assign(n, ScalarCyclo());
  d.counit[0] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    d.mult.push_back({i, i, i, 1});
    for (std::size_t j = 0; j < n; ++j) {
      d.comult.push_back({(i + j) % n, i, j, 1});
      d.rmatrix.push_back({i, j, root_of_unity(n, long(i * j))});
    }
    d.antipode.push_back({i, (n - i) % n, 1});
    d.ribbon.push_back(root_of_unity(n, -long(i * i)));
  }
  return d;
}

HopfAlgebraData sweedler() {
  // 0 = 1, 1 = g, 2 = x, 3 = gx
  HopfAlgebraData d;
  d.name = "sweedler";
  d.field_order = 1;
  d.dim = 4;
  d.mult = {{0, 0, 0, 1},  {0, 1, 1, 1},  {0, 2, 2, 1}, {0, 3, 3, 1},
            {1, 0, 1, 1},  {1, 1, 0, 1},  {1, 2, 3, 1}, {1, 3, 2, 1},
            {2, 0, 2, 1},  {2, 1, 3, -1}, {3, 0, 3, 1}, {3, 1, 2, -1}};
  d.unit = {1, 0, 0, 0};
  d.comult = {{0, 0, 0, 1}, {1, 1, 1, 1}, {2, 2, 0, 1}, {2, 1, 2, 1}, {3, 3, 1, 1}, {3, 0, 3, 1}};
  d.counit = {1, 1, 0, 0};
  d.antipode = {{0, 0, 1}, {1, 1, 1}, {2, 3, -1}, {3, 2, 1}};
  const ScalarCyclo half(mpq_class(1, 2));
  d.rmatrix = {{0, 0, half},  {0, 1, half}, {1, 0, half}, {1, 1, -half},
               {2, 2, half},  {2, 3, -half}, {3, 2, half}, {3, 3, half}};
  d.ribbon = {1, 0, 0, 0};
  return d;
}

}  // namespace datasets

HopfAlgebraData external_product(const HopfAlgebraData& a, const HopfAlgebraData& b) {
  const std::size_t nb = b.dim;
  auto idx = [nb](std::size_t i, std::size_t j) { return i * nb + j; };
  HopfAlgebraData d;
  d.name = a.name + "x" + b.name;
  d.field_order = std::lcm(a.field_order, b.field_order);
  d.dim = a.dim * b.dim;
  for (const auto& s : a.mult)
    for (const auto& t : b.mult) d.mult.push_back({idx(s.i, t.i), idx(s.j, t.j), idx(s.k, t.k), s.c * t.c});
  for (const auto& s : a.comult)
    for (const auto& t : b.comult) d.comult.push_back({idx(s.i, t.i), idx(s.j, t.j), idx(s.k, t.k), s.c * t.c});
  for (const auto& s : a.antipode)
    for (const auto& t : b.antipode) d.antipode.push_back({idx(s.i, t.i), idx(s.j, t.j), s.c * t.c});
  for (const auto& s : a.rmatrix)
    for (const auto& t : b.rmatrix) d.rmatrix.push_back({idx(s.i, t.i), idx(s.j, t.j), s.c * t.c});
  d.unit.assign(d.dim, ScalarCyclo());
  d.counit.assign(d.dim, ScalarCyclo());
  d.ribbon.assign(d.dim, ScalarCyclo());
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      d.unit[idx(i, j)] = a.unit[i] * b.unit[j];
      d.counit[idx(i, j)] = a.counit[i] * b.counit[j];
      d.ribbon[idx(i, j)] = a.ribbon[i] * b.ribbon[j];
    }
  return d;
}

namespace {

// Element of A (x) B, or of (A (x) B)^{(x) 2} when `legs` is 2, from
// elements of the factors.
Vector product_element(const Vector& x, const Vector& y, std::size_t na, std::size_t nb, int legs) {
  const std::size_t n = na * nb;
  Vector out(legs == 1 ? n : n * n);
  if (legs == 1) {
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j) out[i * nb + j] = x[i] * y[j];
    return out;
  }
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t k = 0; k < na; ++k) {
      const ScalarCyclo& c = x[i * na + k];
      if (c.is_zero()) continue;
      for (std::size_t j = 0; j < nb; ++j)
        for (std::size_t l = 0; l < nb; ++l) out[(i * nb + j) * n + (k * nb + l)] = c * y[j * nb + l];
    }
  return out;
}

}  // namespace

HopfAlgebra::HopfAlgebra(const HopfAlgebra& a, const HopfAlgebra& b) : data_(external_product(a.data_, b.data_)) {
  const Structure h(data_);
  mult_ = h.mult();
  comult_ = h.comult();
  antipode_ = h.antipode_matrix();
  const std::size_t na = a.dim(), nb = b.dim();
  r_ = product_element(a.r_, b.r_, na, nb, 2);
  r_inv_ = product_element(a.r_inv_, b.r_inv_, na, nb, 2);
  v_inv_ = product_element(a.v_inv_, b.v_inv_, na, nb, 1);
  u_ = product_element(a.u_, b.u_, na, nb, 1);
  g_ = product_element(a.g_, b.g_, na, nb, 1);
  g_inv_ = product_element(a.g_inv_, b.g_inv_, na, nb, 1);
}

std::shared_ptr<const HopfAlgebra> HopfAlgebra::product(const std::shared_ptr<const HopfAlgebra>& a,
                                                        const std::shared_ptr<const HopfAlgebra>& b) {
  // Products of verified algebras satisfy the axioms factorwise, so nothing
  // is re-verified. The cache keeps the factors alive with their product.
  using Key = std::pair<const HopfAlgebra*, const HopfAlgebra*>;
  struct Entry {
    std::shared_ptr<const HopfAlgebra> a, b, ab;
  };
  static std::mutex mutex;
  static std::map<Key, Entry> cache;
  const std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find({a.get(), b.get()});
  if (it == cache.end()) {
    auto ab = std::shared_ptr<const HopfAlgebra>(new HopfAlgebra(*a, *b));
    it = cache.emplace(Key{a.get(), b.get()}, Entry{a, b, std::move(ab)}).first;
  }
  return it->second.ab;
}

}  // namespace chainrt

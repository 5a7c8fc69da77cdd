#include "chainrt/rep.hpp"

#include <map>

#include "chainrt/errors.hpp"

namespace chainrt {

namespace {

void require_same_algebra(const RepObject& x, const RepObject& y, const char* what) {
  if (x.algebra_ptr() != y.algebra_ptr())
    throw ShapeError(std::string(what) + ": objects live over different algebras");
}

bool is_scalar_matrix(const Matrix& m, ScalarCyclo& value) {
  if (m.rows() != m.cols()) return false;
  if (m.rows() == 0) {
    value = ScalarCyclo();
    return true;
  }
  value = m.at(0, 0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto& row = m.row(r);
    if (value.is_zero()) {
      if (!row.empty()) return false;
      continue;
    }
    if (row.size() != 1 || row[0].col != r || row[0].value != value) return false;
  }
  return true;
}

Matrix flip_matrix(std::size_t dx, std::size_t dy) {
  // v_a (x) w_b  ->  w_b (x) v_a
  Matrix p(dx * dy, dx * dy);
  for (std::size_t a = 0; a < dx; ++a)
    for (std::size_t b = 0; b < dy; ++b) p.set(b * dx + a, a * dy + b, ScalarCyclo(1));
  return p;
}

}  // namespace

RepObject::RepObject()
    : algebra_(HopfAlgebra::trivial()),
      data_(std::make_shared<const Data>(Data{0, {Matrix(0, 0)}})) {}

RepObject::RepObject(HopfPtr algebra, std::size_t dim, std::vector<Matrix> actions)
    : algebra_(std::move(algebra)) {
  if (!algebra_) throw ShapeError("RepObject: null algebra");
  if (actions.size() != algebra_->dim())
    throw ShapeError("RepObject: expected " + std::to_string(algebra_->dim()) + " action matrices");
  for (const auto& m : actions)
    if (m.rows() != dim || m.cols() != dim) throw ShapeError("RepObject: action has wrong shape");
  data_ = std::make_shared<const Data>(Data{dim, std::move(actions)});
}

Matrix RepObject::act(const Vector& element) const {
  if (element.size() != algebra_->dim()) throw ShapeError("act: element has wrong length");
  Matrix out(dim(), dim());
  for (std::size_t i = 0; i < element.size(); ++i)
    if (!element[i].is_zero()) out += element[i] * action(i);
  return out;
}

Matrix RepObject::act2(const RepObject& other, const Vector& element) const {
  const std::size_t n = algebra_->dim();
  if (element.size() != n * n) throw ShapeError("act2: element has wrong length");
  Matrix out(dim() * other.dim(), dim() * other.dim());
  for (std::size_t i = 0; i < n; ++i) {
    Matrix right(other.dim(), other.dim());
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      const ScalarCyclo& c = element[i * n + j];
      if (c.is_zero()) continue;
      right += c * other.action(j);
      any = true;
    }
    if (any) out += kron(action(i), right);
  }
  return out;
}

std::vector<std::string> RepObject::validate() const {
  std::vector<std::string> failures;
  const HopfAlgebra& h = *algebra_;
  const std::size_t n = h.dim();
  for (std::size_t i = 0; i < n && failures.empty(); ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Matrix expected(dim(), dim());
      for (const auto& e : h.product_terms(i, j)) expected += e.value * action(e.col);
      if (action(i) * action(j) != expected) {
        failures.push_back("multiplication");
        break;
      }
    }
  if (act(h.unit()) != Matrix::identity(dim())) failures.push_back("unit");
  return failures;
}

bool operator==(const RepObject& a, const RepObject& b) {
  if (a.data_ == b.data_ && a.algebra_ == b.algebra_) return true;
  return a.algebra_ == b.algebra_ && a.dim() == b.dim() && a.actions() == b.actions();
}

bool RepMorphism::is_intertwiner() const {
  if (source.algebra_ptr() != target.algebra_ptr()) return false;
  if (matrix.rows() != target.dim() || matrix.cols() != source.dim()) return false;
  for (std::size_t i = 0; i < source.algebra().dim(); ++i)
    if (target.action(i) * matrix != matrix * source.action(i)) return false;
  return true;
}

RepObject unit_rep(const HopfPtr& algebra) {
  return character_rep(algebra, algebra->data().counit);
}

RepObject vector_space(std::size_t dim) {
  return RepObject(HopfAlgebra::trivial(), dim, {Matrix::identity(dim)});
}

RepObject character_rep(const HopfPtr& algebra, const Vector& chi) {
  if (chi.size() != algebra->dim()) throw ShapeError("character_rep: wrong length");
  std::vector<Matrix> actions;
  for (const auto& c : chi) actions.push_back(Matrix::scalar(1, c));
  return RepObject(algebra, 1, std::move(actions));
}

RepObject zero_rep(const HopfPtr& algebra) {
  return RepObject(algebra, 0, std::vector<Matrix>(algebra->dim(), Matrix(0, 0)));
}

RepObject tensor_rep(const RepObject& x, const RepObject& y) {
  require_same_algebra(x, y, "tensor_rep");
  const HopfAlgebra& h = x.algebra();
  const std::size_t n = h.dim();
  std::vector<Matrix> actions;
  actions.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    Matrix m(x.dim() * y.dim(), x.dim() * y.dim());
    for (const auto& e : h.coproduct_terms(k))
      m += e.value * kron(x.action(e.col / n), y.action(e.col % n));
    actions.push_back(std::move(m));
  }
  return RepObject(x.algebra_ptr(), x.dim() * y.dim(), std::move(actions));
}

RepObject direct_sum_rep(const RepObject& x, const RepObject& y) {
  require_same_algebra(x, y, "direct_sum_rep");
  std::vector<Matrix> actions;
  for (std::size_t i = 0; i < x.algebra().dim(); ++i)
    actions.push_back(direct_sum(x.action(i), y.action(i)));
  return RepObject(x.algebra_ptr(), x.dim() + y.dim(), std::move(actions));
}

RepObject direct_sum_rep(const HopfPtr& algebra, const std::vector<RepObject>& parts) {
  if (parts.size() == 1) return parts.front();
  std::size_t dim = 0;
  for (const auto& p : parts) {
    if (p.algebra_ptr() != algebra) throw ShapeError("direct_sum_rep: objects over different algebras");
    dim += p.dim();
  }
  std::vector<Matrix> actions;
  for (std::size_t i = 0; i < algebra->dim(); ++i) {
    Matrix m(dim, dim);
    std::size_t off = 0;
    for (const auto& p : parts) {
      m.set_block(off, off, p.action(i));
      off += p.dim();
    }
    actions.push_back(std::move(m));
  }
  return RepObject(algebra, dim, std::move(actions));
}

RepObject regular_rep(const HopfPtr& algebra) {
  std::vector<Matrix> actions;
  for (std::size_t i = 0; i < algebra->dim(); ++i)
    actions.push_back(algebra->left_multiplication(algebra->basis_element(i)));
  return RepObject(algebra, algebra->dim(), std::move(actions));
}

std::vector<RepObject> small_characters(const HopfPtr& algebra) {
  const std::size_t n = algebra->dim();
  std::vector<RepObject> out;
  if (n > 8) return {unit_rep(algebra)};
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    Vector chi(n);
    for (std::size_t i = 0, c = code; i < n; ++i, c /= 3) chi[i] = long(c % 3) - 1;
    const RepObject x = character_rep(algebra, chi);
    if (x.validate().empty()) out.push_back(x);
  }
  return out;
}

RepObject dual_rep(const RepObject& x) {
  const HopfAlgebra& h = x.algebra();
  std::vector<Matrix> actions;
  for (std::size_t i = 0; i < h.dim(); ++i)
    actions.push_back(x.act(h.antipode(h.basis_element(i))).transpose());
  return RepObject(x.algebra_ptr(), x.dim(), std::move(actions));
}

RepObject external_tensor_rep(const HopfPtr& ab, const RepObject& x, const RepObject& y) {
  const std::size_t na = x.algebra().dim(), nb = y.algebra().dim();
  if (ab->dim() != na * nb) throw ShapeError("external_tensor_rep: algebra dimension mismatch");
  std::vector<Matrix> actions;
  actions.reserve(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) actions.push_back(kron(x.action(i), y.action(j)));
  return RepObject(ab, x.dim() * y.dim(), std::move(actions));
}

RepObject adjoint_rep(const HopfPtr& algebra) {
  const HopfAlgebra& h = *algebra;
  const std::size_t n = h.dim();
  std::vector<Matrix> actions;
  for (std::size_t i = 0; i < n; ++i) {
    Matrix m(n, n);
    for (const auto& term : h.coproduct_terms(i)) {
      const Vector left = h.basis_element(term.col / n);
      const Vector right = h.antipode(h.basis_element(term.col % n));
      for (std::size_t j = 0; j < n; ++j) {
        const Vector image = h.multiply(h.multiply(left, h.basis_element(j)), right);
        for (std::size_t k = 0; k < n; ++k)
          if (!image[k].is_zero()) m.add_to(k, j, term.value * image[k]);
      }
    }
    actions.push_back(std::move(m));
  }
  return RepObject(algebra, n, std::move(actions));
}

RepMorphism identity(const RepObject& x) { return {x, x, Matrix::identity(x.dim())}; }

RepMorphism zero_morphism(const RepObject& source, const RepObject& target) {
  return {source, target, Matrix(target.dim(), source.dim())};
}

RepMorphism compose(const RepMorphism& g, const RepMorphism& f) {
  if (g.matrix.cols() != f.matrix.rows()) throw ShapeError("compose: shape mismatch");
  return {f.source, g.target, g.matrix * f.matrix};
}

RepMorphism tensor(const RepMorphism& f, const RepMorphism& g) {
  return {tensor_rep(f.source, g.source), tensor_rep(f.target, g.target), kron(f.matrix, g.matrix)};
}

RepMorphism dual_morphism(const RepMorphism& f) {
  return {dual_rep(f.target), dual_rep(f.source), f.matrix.transpose()};
}

RepMorphism ev(const RepObject& x) {
  const std::size_t d = x.dim();
  Matrix m(1, d * d);
  for (std::size_t i = 0; i < d; ++i) m.set(0, i * d + i, ScalarCyclo(1));
  return {tensor_rep(dual_rep(x), x), unit_rep(x.algebra_ptr()), m};
}

RepMorphism coev(const RepObject& x) {
  const std::size_t d = x.dim();
  Matrix m(d * d, 1);
  for (std::size_t i = 0; i < d; ++i) m.set(i * d + i, 0, ScalarCyclo(1));
  return {unit_rep(x.algebra_ptr()), tensor_rep(x, dual_rep(x)), m};
}

RepMorphism ev_right(const RepObject& x) {
  const std::size_t d = x.dim();
  const Matrix g = x.act(x.algebra().pivotal());
  Matrix m(1, d * d);
  // v_j (x) b^i -> b^i(g v_j) = g_ij
  for (std::size_t i = 0; i < d; ++i)
    for (const auto& e : g.row(i)) m.set(0, e.col * d + i, e.value);
  return {tensor_rep(x, dual_rep(x)), unit_rep(x.algebra_ptr()), m};
}

RepMorphism coev_right(const RepObject& x) {
  const std::size_t d = x.dim();
  const Matrix g_inv = x.act(x.algebra().pivotal_inverse());
  Matrix m(d * d, 1);
  // 1 -> sum_i b^i (x) g^-1 b_i
  for (std::size_t k = 0; k < d; ++k)
    for (const auto& e : g_inv.row(k)) m.set(e.col * d + k, 0, e.value);
  return {unit_rep(x.algebra_ptr()), tensor_rep(dual_rep(x), x), m};
}

RepMorphism braiding(const RepObject& x, const RepObject& y) {
  require_same_algebra(x, y, "braiding");
  const Matrix m = flip_matrix(x.dim(), y.dim()) * x.act2(y, x.algebra().rmatrix());
  return {tensor_rep(x, y), tensor_rep(y, x), m};
}

RepMorphism braiding_inv(const RepObject& x, const RepObject& y) {
  require_same_algebra(x, y, "braiding_inv");
  const Matrix m = y.act2(x, x.algebra().rmatrix_inverse()) * flip_matrix(x.dim(), y.dim());
  return {tensor_rep(x, y), tensor_rep(y, x), m};
}

RepMorphism twist(const RepObject& x) { return {x, x, x.act(x.algebra().ribbon_inverse())}; }

RepMorphism twist_inv(const RepObject& x) { return {x, x, x.act(x.algebra().ribbon())}; }

HomSpace::HomSpace(const RepObject& source, const RepObject& target)
    : source_(source), target_(target) {
  require_same_algebra(source, target, "hom_basis");
  const std::size_t dx = source.dim();
  const std::size_t dy = target.dim();
  Echelon echelon(dx * dy);
  for (std::size_t i = 0; i < source.algebra().dim(); ++i) {
    const Matrix& ry = target.action(i);
    const Matrix& rx = source.action(i);
    ScalarCyclo sx, sy;
    if (is_scalar_matrix(rx, sx) && is_scalar_matrix(ry, sy) && (dx == 0 || dy == 0 || sx == sy))
      continue;
    const Matrix rxt = rx.transpose();
    std::map<std::size_t, ScalarCyclo> acc;
    for (std::size_t r = 0; r < dy; ++r)
      for (std::size_t c = 0; c < dx; ++c) {
        acc.clear();
        for (const auto& e : ry.row(r)) acc[e.col * dx + c] += e.value;
        for (const auto& e : rxt.row(c)) acc[r * dx + e.col] -= e.value;
        Matrix::Row row;
        for (auto& [col, v] : acc)
          if (!v.is_zero()) row.push_back({col, std::move(v)});
        if (!row.empty()) echelon.add(row);
      }
  }
  space_ = kernel(echelon);
}

Matrix HomSpace::element(std::size_t i) const {
  return Matrix::unflatten(space_.vector(i), target_.dim(), source_.dim());
}

Matrix HomSpace::combine(const Vector& coords) const {
  return Matrix::unflatten(space_.combine(coords), target_.dim(), source_.dim());
}

Vector HomSpace::coordinates(const Matrix& m) const {
  if (m.rows() != target_.dim() || m.cols() != source_.dim())
    throw ShapeError("HomSpace::coordinates: shape mismatch");
  return space_.coordinates(m.flatten());
}

Vector HomSpace::lead_coordinates(const Matrix& m) const {
  const std::size_t cols = source_.dim();
  Vector coords(space_.dim());
  for (std::size_t k = 0; k < coords.size(); ++k) coords[k] = m.at(space_.lead[k] / cols, space_.lead[k] % cols);
  return coords;
}

std::vector<RepMorphism> HomSpace::basis() const {
  std::vector<RepMorphism> out;
  for (std::size_t i = 0; i < dim(); ++i) out.push_back({source_, target_, element(i)});
  return out;
}

std::vector<RepMorphism> hom_basis(const RepObject& x, const RepObject& y) {
  return HomSpace(x, y).basis();
}

ScalarCyclo qdim(const RepObject& x) {
  const RepMorphism loop = compose(ev_right(x), coev(x));
  return loop.matrix.at(0, 0);
}

}  // namespace chainrt

#include "chainrt/matrix.hpp"

#include <algorithm>

#include "chainrt/errors.hpp"

namespace chainrt {

namespace {

// a + s * b on sorted sparse rows.
Matrix::Row axpy(const Matrix::Row& a, const ScalarCyclo& s, const Matrix::Row& b) {
  Matrix::Row out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].col < b[j].col)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].col < a[i].col) {
      out.push_back({b[j].col, s * b[j].value});
      ++j;
    } else {
      ScalarCyclo v = a[i].value + s * b[j].value;
      if (!v.is_zero()) out.push_back({a[i].col, std::move(v)});
      ++i;
      ++j;
    }
  }
  return out;
}

const ScalarCyclo* find_entry(const Matrix::Row& row, std::size_t col) {
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const Matrix::Entry& e, std::size_t c) { return e.col < c; });
  if (it == row.end() || it->col != col) return nullptr;
  return &it->value;
}

Matrix::Row to_row(const Vector& v) {
  Matrix::Row row;
  for (std::size_t c = 0; c < v.size(); ++c)
    if (!v[c].is_zero()) row.push_back({c, v[c]});
  return row;
}

}  // namespace

Matrix Matrix::identity(std::size_t n) { return scalar(n, ScalarCyclo(1)); }

Matrix Matrix::scalar(std::size_t n, const ScalarCyclo& value) {
  Matrix m(n, n);
  if (value.is_zero()) return m;
  for (std::size_t i = 0; i < n; ++i) m.data_[i].push_back({i, value});
  return m;
}

Matrix Matrix::from_dense(const std::vector<std::vector<ScalarCyclo>>& dense) {
  const std::size_t cols = dense.empty() ? 0 : dense.front().size();
  Matrix m(dense.size(), cols);
  for (std::size_t r = 0; r < dense.size(); ++r) {
    if (dense[r].size() != cols) throw ShapeError("ragged dense matrix");
    m.data_[r] = to_row(dense[r]);
  }
  return m;
}

Matrix Matrix::column(const Vector& v) {
  Matrix m(v.size(), 1);
  for (std::size_t r = 0; r < v.size(); ++r)
    if (!v[r].is_zero()) m.data_[r].push_back({0, v[r]});
  return m;
}

std::size_t Matrix::nnz() const {
  std::size_t n = 0;
  for (const auto& row : data_) n += row.size();
  return n;
}

bool Matrix::is_zero() const {
  for (const auto& row : data_)
    if (!row.empty()) return false;
  return true;
}

ScalarCyclo Matrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows() || c >= cols_) throw ShapeError("matrix index out of range");
  const ScalarCyclo* v = find_entry(data_[r], c);
  return v ? *v : ScalarCyclo();
}

void Matrix::set(std::size_t r, std::size_t c, const ScalarCyclo& value) {
  if (r >= rows() || c >= cols_) throw ShapeError("matrix index out of range");
  auto& row = data_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const Entry& e, std::size_t col) { return e.col < col; });
  if (it != row.end() && it->col == c) {
    if (value.is_zero())
      row.erase(it);
    else
      it->value = value;
  } else if (!value.is_zero()) {
    row.insert(it, Entry{c, value});
  }
}

void Matrix::add_to(std::size_t r, std::size_t c, const ScalarCyclo& value) {
  if (value.is_zero()) return;
  if (r >= rows() || c >= cols_) throw ShapeError("matrix index out of range");
  auto& row = data_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const Entry& e, std::size_t col) { return e.col < col; });
  if (it != row.end() && it->col == c) {
    it->value += value;
    if (it->value.is_zero()) row.erase(it);
  } else {
    row.insert(it, Entry{c, value});
  }
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows());
  for (std::size_t r = 0; r < rows(); ++r)
    for (const auto& e : data_[r]) t.data_[e.col].push_back({r, e.value});
  return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows() || c0 + nc > cols_) throw ShapeError("block out of range");
  Matrix b(nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    for (const auto& e : data_[r0 + r])
      if (e.col >= c0 && e.col < c0 + nc) b.data_[r].push_back({e.col - c0, e.value});
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& m) {
  if (r0 + m.rows() > rows() || c0 + m.cols() > cols_) throw ShapeError("block out of range");
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Row merged;
    const Row& old = data_[r0 + r];
    std::size_t i = 0;
    while (i < old.size() && old[i].col < c0) merged.push_back(old[i++]);
    for (const auto& e : m.data_[r]) merged.push_back({e.col + c0, e.value});
    while (i < old.size() && old[i].col < c0 + m.cols()) ++i;
    while (i < old.size()) merged.push_back(old[i++]);
    data_[r0 + r] = std::move(merged);
  }
}

void Matrix::add_block(std::size_t r0, std::size_t c0, const Matrix& m) {
  if (r0 + m.rows() > rows() || c0 + m.cols() > cols_) throw ShapeError("block out of range");
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (m.data_[r].empty()) continue;
    Row shifted;
    shifted.reserve(m.data_[r].size());
    for (const auto& e : m.data_[r]) shifted.push_back({e.col + c0, e.value});
    data_[r0 + r] = axpy(data_[r0 + r], ScalarCyclo(1), shifted);
  }
}

std::vector<std::vector<ScalarCyclo>> Matrix::to_dense() const {
  std::vector<std::vector<ScalarCyclo>> dense(rows(), std::vector<ScalarCyclo>(cols_));
  for (std::size_t r = 0; r < rows(); ++r)
    for (const auto& e : data_[r]) dense[r][e.col] = e.value;
  return dense;
}

Vector Matrix::flatten() const {
  Vector v(rows() * cols_);
  for (std::size_t r = 0; r < rows(); ++r)
    for (const auto& e : data_[r]) v[r * cols_ + e.col] = e.value;
  return v;
}

Matrix Matrix::unflatten(const Vector& v, std::size_t rows, std::size_t cols) {
  if (v.size() != rows * cols) throw ShapeError("unflatten: size mismatch");
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (!v[r * cols + c].is_zero()) m.data_[r].push_back({c, v[r * cols + c]});
  return m;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (rows() != other.rows() || cols_ != other.cols_) throw ShapeError("matrix sum: shape mismatch");
  for (std::size_t r = 0; r < rows(); ++r)
    if (!other.data_[r].empty()) data_[r] = axpy(data_[r], ScalarCyclo(1), other.data_[r]);
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  if (rows() != other.rows() || cols_ != other.cols_)
    throw ShapeError("matrix difference: shape mismatch");
  for (std::size_t r = 0; r < rows(); ++r)
    if (!other.data_[r].empty()) data_[r] = axpy(data_[r], ScalarCyclo(-1), other.data_[r]);
  return *this;
}

Matrix& Matrix::operator*=(const ScalarCyclo& s) {
  if (s.is_zero()) {
    for (auto& row : data_) row.clear();
    return *this;
  }
  for (auto& row : data_)
    for (auto& e : row) e.value *= s;
  return *this;
}

Matrix Matrix::operator-() const {
  Matrix out = *this;
  return out *= ScalarCyclo(-1);
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("matrix product: shape mismatch");
  Matrix out(a.rows(), b.cols());
  std::map<std::size_t, ScalarCyclo> acc;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto& arow = a.data_[r];
    if (arow.empty()) continue;
    if (arow.size() == 1) {
      const auto& e = arow.front();
      Matrix::Row row;
      row.reserve(b.data_[e.col].size());
      for (const auto& f : b.data_[e.col]) row.push_back({f.col, e.value * f.value});
      out.data_[r] = std::move(row);
      continue;
    }
    acc.clear();
    for (const auto& e : arow)
      for (const auto& f : b.data_[e.col]) {
        auto [it, inserted] = acc.try_emplace(f.col, e.value * f.value);
        if (!inserted) it->second += e.value * f.value;
      }
    Matrix::Row row;
    for (auto& [c, v] : acc)
      if (!v.is_zero()) row.push_back({c, std::move(v)});
    out.data_[r] = std::move(row);
  }
  return out;
}

Vector operator*(const Matrix& a, const Vector& v) {
  if (a.cols() != v.size()) throw ShapeError("matrix-vector product: shape mismatch");
  Vector out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (const auto& e : a.data_[r])
      if (!v[e.col].is_zero()) out[r] += e.value * v[e.col];
  return out;
}

bool operator==(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto& x = a.data_[r];
    const auto& y = b.data_[r];
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i].col != y[i].col || x[i].value != y[i].value) return false;
  }
  return true;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto& arow = a.row(i);
    for (std::size_t k = 0; k < b.rows(); ++k) {
      const auto& brow = b.row(k);
      Matrix::Row row;
      row.reserve(arow.size() * brow.size());
      for (const auto& e : arow)
        for (const auto& f : brow) row.push_back({e.col * b.cols() + f.col, e.value * f.value});
      out.set_row(i * b.rows() + k, std::move(row));
    }
  }
  return out;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() + b.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), a.cols(), b);
  return out;
}

Matrix::Row Echelon::reduce(const Matrix::Row& row) const {
  Matrix::Row out = row;
  for (const auto& e : row) {
    auto it = pivots_.find(e.col);
    if (it == pivots_.end()) continue;
    // Pivot rows vanish at other pivot columns, so the coefficient at e.col
    // is still the original one.
    out = axpy(out, -e.value, it->second);
  }
  return out;
}

bool Echelon::add(const Matrix::Row& row) {
  Matrix::Row r = reduce(row);
  if (r.empty()) return false;
  const std::size_t lead = r.front().col;
  if (lead >= cols_) throw ShapeError("echelon: column out of range");
  const ScalarCyclo inv = r.front().value.inverse();
  for (auto& e : r) e.value *= inv;
  for (auto& [col, prow] : pivots_) {
    const ScalarCyclo* v = find_entry(prow, lead);
    if (v) prow = axpy(prow, -ScalarCyclo(*v), r);
  }
  pivots_.emplace(lead, std::move(r));
  return true;
}

bool Echelon::add(const Vector& row) { return add(to_row(row)); }

void Echelon::add_rows(const Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (!m.row(r).empty()) add(m.row(r));
}

Vector Subspace::vector(std::size_t i) const {
  Vector v(ambient);
  for (const auto& e : basis.row(i)) v[e.col] = e.value;
  return v;
}

Vector Subspace::coordinates(const Vector& v) const {
  if (v.size() != ambient) throw ShapeError("subspace coordinates: size mismatch");
  Vector coords(dim());
  for (std::size_t i = 0; i < dim(); ++i) coords[i] = v[lead[i]];
  if (combine(coords) != v) throw MathError("vector is not in the subspace");
  return coords;
}

Vector Subspace::coordinates(const Matrix::Row& v) const {
  Vector dense(ambient);
  for (const auto& e : v) dense[e.col] = e.value;
  return coordinates(dense);
}

Vector Subspace::combine(const Vector& coords) const {
  if (coords.size() != dim()) throw ShapeError("subspace combine: size mismatch");
  Vector v(ambient);
  for (std::size_t i = 0; i < dim(); ++i) {
    if (coords[i].is_zero()) continue;
    for (const auto& e : basis.row(i)) v[e.col] += coords[i] * e.value;
  }
  return v;
}

bool Subspace::contains(const Vector& v) const {
  Vector coords(dim());
  for (std::size_t i = 0; i < dim(); ++i) coords[i] = v[lead[i]];
  return combine(coords) == v;
}

Subspace kernel(const Echelon& e) {
  const std::size_t n = e.cols();
  std::vector<char> is_pivot(n, 0);
  for (const auto& [c, row] : e.pivots()) is_pivot[c] = 1;
  std::vector<std::size_t> index(n, 0);
  Subspace s;
  s.ambient = n;
  for (std::size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) {
      index[c] = s.lead.size();
      s.lead.push_back(c);
    }
  std::vector<Matrix::Row> rows(s.lead.size());
  for (std::size_t i = 0; i < s.lead.size(); ++i) rows[i].push_back({s.lead[i], ScalarCyclo(1)});
  for (const auto& [c, prow] : e.pivots())
    for (const auto& entry : prow)
      if (entry.col != c) rows[index[entry.col]].push_back({c, -entry.value});
  s.basis = Matrix(s.lead.size(), n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::sort(rows[i].begin(), rows[i].end(),
              [](const Matrix::Entry& a, const Matrix::Entry& b) { return a.col < b.col; });
    s.basis.set_row(i, std::move(rows[i]));
  }
  return s;
}

Subspace kernel(const Matrix& m) {
  Echelon e(m.cols());
  e.add_rows(m);
  return kernel(e);
}

std::size_t rank(const Matrix& m) {
  Echelon e(m.cols());
  e.add_rows(m);
  return e.rank();
}

std::optional<Vector> solve(const Matrix& m, const Vector& b) {
  if (b.size() != m.rows()) throw ShapeError("solve: rhs size mismatch");
  const std::size_t n = m.cols();
  Echelon e(n + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Matrix::Row row = m.row(r);
    if (!b[r].is_zero()) row.push_back({n, b[r]});
    if (!row.empty()) e.add(row);
  }
  if (e.pivots().count(n)) return std::nullopt;
  Vector x(n);
  for (const auto& [c, prow] : e.pivots()) {
    const ScalarCyclo* v = find_entry(prow, n);
    if (v) x[c] = *v;
  }
  return x;
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  const std::size_t n = m.rows();
  Echelon e(2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    Matrix::Row row = m.row(r);
    row.push_back({n + r, ScalarCyclo(1)});
    e.add(row);
  }
  Matrix inv(n, n);
  for (const auto& [c, prow] : e.pivots()) {
    if (c >= n) return std::nullopt;
    Matrix::Row row;
    for (const auto& entry : prow)
      if (entry.col >= n) row.push_back({entry.col - n, entry.value});
    inv.set_row(c, std::move(row));
  }
  if (e.rank() != n) return std::nullopt;
  return inv;
}

}  // namespace chainrt

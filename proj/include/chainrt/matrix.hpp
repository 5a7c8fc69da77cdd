#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "chainrt/scalar.hpp"

namespace chainrt {

using Vector = std::vector<ScalarCyclo>;

/// Sparse row-major matrix over the cyclotomic scalars. Zero entries are
/// never stored; each row is sorted by column.
class Matrix {
 public:
  struct Entry {
    std::size_t col;
    ScalarCyclo value;
  };
  using Row = std::vector<Entry>;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : cols_(cols), data_(rows) {}

  static Matrix identity(std::size_t n);
  static Matrix scalar(std::size_t n, const ScalarCyclo& value);
  static Matrix from_dense(const std::vector<std::vector<ScalarCyclo>>& dense);
  static Matrix column(const Vector& v);

  std::size_t rows() const { return data_.size(); }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const;
  bool is_zero() const;

  ScalarCyclo at(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, const ScalarCyclo& value);
  void add_to(std::size_t r, std::size_t c, const ScalarCyclo& value);
  const Row& row(std::size_t r) const { return data_[r]; }
  /// Replaces a row; entries must be sorted and nonzero.
  void set_row(std::size_t r, Row row) { data_[r] = std::move(row); }

  Matrix transpose() const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& m);
  /// Adds m into the block starting at (r0, c0).
  void add_block(std::size_t r0, std::size_t c0, const Matrix& m);
  std::vector<std::vector<ScalarCyclo>> to_dense() const;
  /// Row-major flattening (r * cols + c).
  Vector flatten() const;
  static Matrix unflatten(const Vector& v, std::size_t rows, std::size_t cols);

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(const ScalarCyclo& s);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(const ScalarCyclo& s, Matrix m) { return m *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Vector operator*(const Matrix& a, const Vector& v);
  friend bool operator==(const Matrix& a, const Matrix& b);
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }
  Matrix operator-() const;

 private:
  std::size_t cols_ = 0;
  std::vector<Row> data_;
};

Matrix kron(const Matrix& a, const Matrix& b);
Matrix direct_sum(const Matrix& a, const Matrix& b);

/// Incremental reduced row-echelon form. Pivot rows are kept fully reduced:
/// every pivot row has a leading one and zeros in all other pivot columns.
class Echelon {
 public:
  explicit Echelon(std::size_t cols) : cols_(cols) {}

  /// Adds a row to the span; returns true iff the rank grew.
  bool add(const Matrix::Row& row);
  bool add(const Vector& row);
  void add_rows(const Matrix& m);

  std::size_t cols() const { return cols_; }
  std::size_t rank() const { return pivots_.size(); }
  const std::map<std::size_t, Matrix::Row>& pivots() const { return pivots_; }
  /// Reduces a row modulo the current span.
  Matrix::Row reduce(const Matrix::Row& row) const;

 private:
  std::size_t cols_;
  std::map<std::size_t, Matrix::Row> pivots_;
};

/// A subspace of k^n given by a basis in reduced echelon form relative to
/// its lead positions: basis vector i has a one at lead[i] and zeros at all
/// other leads. Coordinates of a vector in the span are its entries at the
/// lead positions.
struct Subspace {
  std::size_t ambient = 0;
  Matrix basis;  // dim x ambient
  std::vector<std::size_t> lead;

  std::size_t dim() const { return lead.size(); }
  Vector vector(std::size_t i) const;
  /// Coordinates of v; throws MathError if v is not in the span.
  Vector coordinates(const Vector& v) const;
  Vector coordinates(const Matrix::Row& v) const;
  /// Linear combination of the basis.
  Vector combine(const Vector& coords) const;
  bool contains(const Vector& v) const;
};

/// Kernel of m, basis ordered by free column. Deterministic.
Subspace kernel(const Matrix& m);
Subspace kernel(const Echelon& e);
std::size_t rank(const Matrix& m);
/// Particular solution of m x = b with all free variables zero.
std::optional<Vector> solve(const Matrix& m, const Vector& b);
std::optional<Matrix> inverse(const Matrix& m);

}  // namespace chainrt

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace chainrt {

class CycloField;

/// Element of the cyclotomic field Q(zeta_N).
///
/// Stored as the coefficient vector of 1, zeta, ..., zeta^(phi(N)-1) after
/// reduction modulo the N-th cyclotomic polynomial. Inside one field the
/// representation is canonical. Values of different orders are compared and
/// combined by embedding both into Q(zeta_lcm).
class ScalarCyclo {
 public:
  ScalarCyclo();
  ScalarCyclo(long value);  // NOLINT: integers embed implicitly
  ScalarCyclo(const mpq_class& value);  // NOLINT

  /// Reduces an arbitrary-length coefficient vector (powers of zeta_order)
  /// into canonical form.
  static ScalarCyclo from_coeffs(unsigned order, std::vector<mpq_class> coeffs);

  unsigned order() const;
  const std::vector<mpq_class>& coeffs() const { return coeffs_; }

  bool is_zero() const;
  bool is_one() const;
  bool is_rational() const;
  /// Throws MathError unless is_rational().
  mpq_class rational_value() const;

  /// Image under Q(zeta_N) -> Q(zeta_M); requires N | M.
  ScalarCyclo embed(unsigned new_order) const;

  ScalarCyclo inverse() const;

  ScalarCyclo& operator+=(const ScalarCyclo& other);
  ScalarCyclo& operator-=(const ScalarCyclo& other);
  ScalarCyclo& operator*=(const ScalarCyclo& other);
  ScalarCyclo& operator/=(const ScalarCyclo& other);
  ScalarCyclo operator-() const;

  friend ScalarCyclo operator+(ScalarCyclo a, const ScalarCyclo& b) { return a += b; }
  friend ScalarCyclo operator-(ScalarCyclo a, const ScalarCyclo& b) { return a -= b; }
  friend ScalarCyclo operator*(ScalarCyclo a, const ScalarCyclo& b) { return a *= b; }
  friend ScalarCyclo operator/(ScalarCyclo a, const ScalarCyclo& b) { return a /= b; }
  friend bool operator==(const ScalarCyclo& a, const ScalarCyclo& b);
  friend bool operator!=(const ScalarCyclo& a, const ScalarCyclo& b) { return !(a == b); }

  /// Exact text form, e.g. "-1 - zeta3" or "1/2*zeta5^3".
  std::string to_string() const;
  /// Decimal value of the principal embedding zeta_N = exp(2 pi i / N).
  /// Display only.
  std::complex<double> approx() const;

 private:
  ScalarCyclo(const CycloField* field, std::vector<mpq_class> coeffs);
  void promote_to(unsigned order);

  const CycloField* field_;
  std::vector<mpq_class> coeffs_;
};

/// zeta_n^k in canonical form. Throws ShapeError for n == 0.
ScalarCyclo root_of_unity(unsigned n, long k);

enum class FieldOp { add, sub, mul, div };

/// Binary field operation. With embed == false, operands of different
/// order are rejected instead of being embedded into the lcm field.
ScalarCyclo field_arith(const ScalarCyclo& a, const ScalarCyclo& b, FieldOp op,
                        bool embed = true);

/// Integer coefficients (constant term first) of the n-th cyclotomic
/// polynomial.
std::vector<long> cyclotomic_polynomial(unsigned n);

std::ostream& operator<<(std::ostream& out, const ScalarCyclo& value);

}  // namespace chainrt

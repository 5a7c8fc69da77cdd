#include "chainrt/scalar.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>

#include "chainrt/errors.hpp"

namespace chainrt {

namespace {

using IntPoly = std::vector<long>;

void trim(IntPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Exact division of integer polynomials where the divisor is monic.
IntPoly divide_monic(IntPoly num, const IntPoly& den) {
  trim(num);
  const std::size_t dd = den.size() - 1;
  if (num.size() <= dd) return {0};
  IntPoly quot(num.size() - dd, 0);
  for (std::size_t k = num.size(); k-- > dd;) {
    const long lead = num[k];
    if (lead == 0) continue;
    quot[k - dd] = lead;
    for (std::size_t j = 0; j <= dd; ++j) num[k - dd + j] -= lead * den[j];
  }
  return quot;
}

}  // namespace

std::vector<long> cyclotomic_polynomial(unsigned n) {
  if (n == 0) throw ShapeError("cyclotomic order must be positive");
  static std::mutex mutex;
  static std::map<unsigned, IntPoly> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  IntPoly poly(n + 1, 0);
  poly[0] = -1;
  poly[n] = 1;
  for (unsigned d = 1; d < n; ++d)
    if (n % d == 0) poly = divide_monic(poly, cyclotomic_polynomial(d));
  trim(poly);
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(n, poly);
  return poly;
}

/// Interned arithmetic tables for Q(zeta_N). Never destroyed.
class CycloField {
 public:
  explicit CycloField(unsigned order) : order_(order) {
    const IntPoly phi_poly = cyclotomic_polynomial(order);
    degree_ = phi_poly.size() - 1;
    powers_.reserve(order);
    std::vector<long> cur(degree_, 0);
    cur[0] = 1;
    for (unsigned j = 0; j < order; ++j) {
      powers_.push_back(cur);
      // cur <- zeta * cur
      const long top = cur[degree_ - 1];
      for (std::size_t k = degree_ - 1; k > 0; --k) cur[k] = cur[k - 1];
      cur[0] = 0;
      if (top != 0)
        for (std::size_t k = 0; k < degree_; ++k) cur[k] -= top * phi_poly[k];
    }
  }

  static const CycloField* get(unsigned order) {
    if (order == 0) throw ShapeError("cyclotomic order must be positive");
    static std::mutex mutex;
    static std::map<unsigned, std::unique_ptr<CycloField>> registry;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = registry[order];
    if (!slot) slot = std::make_unique<CycloField>(order);
    return slot.get();
  }

  unsigned order() const { return order_; }
  std::size_t degree() const { return degree_; }
  const std::vector<long>& power(std::size_t j) const { return powers_[j % order_]; }

  // Accumulates c * zeta^j into out (length degree()).
  void add_power(std::vector<mpq_class>& out, std::size_t j, const mpq_class& c) const {
    if (sgn(c) == 0) return;
    const std::size_t r = j % order_;
    if (r < degree_) {
      out[r] += c;
      return;
    }
    const auto& p = powers_[r];
    for (std::size_t k = 0; k < degree_; ++k)
      if (p[k] != 0) out[k] += c * p[k];
  }

 private:
  unsigned order_;
  std::size_t degree_ = 1;
  std::vector<std::vector<long>> powers_;
};

ScalarCyclo::ScalarCyclo() : field_(CycloField::get(1)), coeffs_(1) {}

ScalarCyclo::ScalarCyclo(long value) : field_(CycloField::get(1)), coeffs_{mpq_class(value)} {}

ScalarCyclo::ScalarCyclo(const mpq_class& value) : field_(CycloField::get(1)), coeffs_{value} {
  coeffs_[0].canonicalize();
}

ScalarCyclo::ScalarCyclo(const CycloField* field, std::vector<mpq_class> coeffs)
    : field_(field), coeffs_(std::move(coeffs)) {}

ScalarCyclo ScalarCyclo::from_coeffs(unsigned order, std::vector<mpq_class> coeffs) {
  const CycloField* field = CycloField::get(order);
  std::vector<mpq_class> out(field->degree());
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    coeffs[j].canonicalize();
    field->add_power(out, j, coeffs[j]);
  }
  return ScalarCyclo(field, std::move(out));
}

unsigned ScalarCyclo::order() const { return field_->order(); }

bool ScalarCyclo::is_zero() const {
  for (const auto& c : coeffs_)
    if (sgn(c) != 0) return false;
  return true;
}

bool ScalarCyclo::is_one() const {
  if (coeffs_[0] != 1) return false;
  for (std::size_t k = 1; k < coeffs_.size(); ++k)
    if (sgn(coeffs_[k]) != 0) return false;
  return true;
}

bool ScalarCyclo::is_rational() const {
  for (std::size_t k = 1; k < coeffs_.size(); ++k)
    if (sgn(coeffs_[k]) != 0) return false;
  return true;
}

mpq_class ScalarCyclo::rational_value() const {
  if (!is_rational()) throw MathError("scalar " + to_string() + " is not rational");
  return coeffs_[0];
}

ScalarCyclo ScalarCyclo::embed(unsigned new_order) const {
  const unsigned n = order();
  if (new_order == n) return *this;
  if (new_order == 0 || new_order % n != 0)
    throw MathError("cannot embed Q(zeta_" + std::to_string(n) + ") into Q(zeta_" +
                    std::to_string(new_order) + ")");
  const CycloField* target = CycloField::get(new_order);
  const std::size_t step = new_order / n;
  std::vector<mpq_class> out(target->degree());
  for (std::size_t k = 0; k < coeffs_.size(); ++k) target->add_power(out, k * step, coeffs_[k]);
  return ScalarCyclo(target, std::move(out));
}

void ScalarCyclo::promote_to(unsigned order) {
  if (order != this->order()) *this = embed(order);
}

namespace {

unsigned common_order(const ScalarCyclo& a, const ScalarCyclo& b) {
  return std::lcm(a.order(), b.order());
}

}  // namespace

ScalarCyclo& ScalarCyclo::operator+=(const ScalarCyclo& other) {
  if (other.order() == order()) {
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
    return *this;
  }
  if (other.order() == 1) {
    coeffs_[0] += other.coeffs_[0];
    return *this;
  }
  const unsigned n = common_order(*this, other);
  promote_to(n);
  return *this += other.embed(n);
}

ScalarCyclo& ScalarCyclo::operator-=(const ScalarCyclo& other) {
  if (other.order() == order()) {
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
    return *this;
  }
  if (other.order() == 1) {
    coeffs_[0] -= other.coeffs_[0];
    return *this;
  }
  const unsigned n = common_order(*this, other);
  promote_to(n);
  return *this -= other.embed(n);
}

ScalarCyclo& ScalarCyclo::operator*=(const ScalarCyclo& other) {
  if (other.order() == 1) {
    for (auto& c : coeffs_) c *= other.coeffs_[0];
    return *this;
  }
  if (order() == 1) {
    const mpq_class factor = coeffs_[0];
    *this = other;
    for (auto& c : coeffs_) c *= factor;
    return *this;
  }
  if (other.order() != order()) {
    const unsigned n = common_order(*this, other);
    promote_to(n);
    return *this *= other.embed(n);
  }
  const std::size_t d = coeffs_.size();
  std::vector<mpq_class> prod(2 * d - 1);
  for (std::size_t i = 0; i < d; ++i) {
    if (sgn(coeffs_[i]) == 0) continue;
    for (std::size_t j = 0; j < d; ++j)
      if (sgn(other.coeffs_[j]) != 0) prod[i + j] += coeffs_[i] * other.coeffs_[j];
  }
  std::vector<mpq_class> out(d);
  for (std::size_t k = 0; k < prod.size(); ++k) field_->add_power(out, k, prod[k]);
  coeffs_ = std::move(out);
  return *this;
}

ScalarCyclo ScalarCyclo::inverse() const {
  if (is_zero()) throw MathError("division by zero");
  const std::size_t d = coeffs_.size();
  if (d == 1) return ScalarCyclo(field_, {1 / coeffs_[0]});
  // Column j of the multiplication-by-this matrix is this * zeta^j.
  std::vector<std::vector<mpq_class>> aug(d, std::vector<mpq_class>(d + 1));
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<mpq_class> col(d);
    for (std::size_t i = 0; i < d; ++i) field_->add_power(col, i + j, coeffs_[i]);
    for (std::size_t i = 0; i < d; ++i) aug[i][j] = col[i];
  }
  aug[0][d] = 1;
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t p = c;
    while (p < d && sgn(aug[p][c]) == 0) ++p;
    if (p == d) throw MathError("singular multiplication matrix in cyclotomic inverse");
    std::swap(aug[p], aug[c]);
    const mpq_class lead = aug[c][c];
    for (auto& v : aug[c]) v /= lead;
    for (std::size_t r = 0; r < d; ++r) {
      if (r == c || sgn(aug[r][c]) == 0) continue;
      const mpq_class f = aug[r][c];
      for (std::size_t k = c; k <= d; ++k) aug[r][k] -= f * aug[c][k];
    }
  }
  std::vector<mpq_class> out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = aug[i][d];
  return ScalarCyclo(field_, std::move(out));
}

ScalarCyclo& ScalarCyclo::operator/=(const ScalarCyclo& other) {
  if (other.order() == 1) {
    if (sgn(other.coeffs_[0]) == 0) throw MathError("division by zero");
    for (auto& c : coeffs_) c /= other.coeffs_[0];
    return *this;
  }
  return *this *= other.inverse();
}

ScalarCyclo ScalarCyclo::operator-() const {
  ScalarCyclo out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

bool operator==(const ScalarCyclo& a, const ScalarCyclo& b) {
  if (a.order() == b.order()) return a.coeffs_ == b.coeffs_;
  const unsigned n = common_order(a, b);
  return a.embed(n).coeffs_ == b.embed(n).coeffs_;
}

std::string ScalarCyclo::to_string() const {
  std::ostringstream out;
  bool first = true;
  const std::string zeta = "zeta" + std::to_string(order());
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    mpq_class c = coeffs_[k];
    if (sgn(c) == 0) continue;
    const bool negative = sgn(c) < 0;
    if (negative) c = -c;
    if (first)
      out << (negative ? "-" : "");
    else
      out << (negative ? " - " : " + ");
    first = false;
    if (k == 0) {
      out << c.get_str();
      continue;
    }
    if (c != 1) out << c.get_str() << "*";
    out << zeta;
    if (k > 1) out << "^" << k;
  }
  if (first) return "0";
  return out.str();
}

std::complex<double> ScalarCyclo::approx() const {
  const double pi = std::acos(-1.0);
  std::complex<double> sum = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    sum += coeffs_[k].get_d() * std::polar(1.0, 2.0 * pi * double(k) / double(order()));
  return sum;
}

ScalarCyclo root_of_unity(unsigned n, long k) {
  if (n == 0) throw ShapeError("root_of_unity: order must be positive");
  long r = k % long(n);
  if (r < 0) r += long(n);
  std::vector<mpq_class> coeffs(std::size_t(r) + 1);
  coeffs[std::size_t(r)] = 1;
  return ScalarCyclo::from_coeffs(n, std::move(coeffs));
}

ScalarCyclo field_arith(const ScalarCyclo& a, const ScalarCyclo& b, FieldOp op, bool embed) {
  if (!embed && a.order() != b.order())
    throw MathError("field_arith: operands live in Q(zeta_" + std::to_string(a.order()) +
                    ") and Q(zeta_" + std::to_string(b.order()) + ")");
  switch (op) {
    case FieldOp::add: return a + b;
    case FieldOp::sub: return a - b;
    case FieldOp::mul: return a * b;
    case FieldOp::div: return a / b;
  }
  throw ShapeError("field_arith: unknown operation");
}

std::ostream& operator<<(std::ostream& out, const ScalarCyclo& value) {
  return out << value.to_string();
}

}  // namespace chainrt

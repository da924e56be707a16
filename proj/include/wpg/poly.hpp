#pragma once

// Dense univariate polynomials over a commutative ring, ascending powers.
// Instantiated with mpz_class / mpq_class (exact), double, and nested as
// Polynomial<Polynomial<mpz_class>> for polynomials in u whose coefficients
// are integer polynomials in alpha.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace wpg {

template <typename T>
class Polynomial;

inline bool is_zero_coeff(const mpz_class& c) { return sgn(c) == 0; }
inline bool is_zero_coeff(const mpq_class& c) { return sgn(c) == 0; }
inline bool is_zero_coeff(double c) { return c == 0.0; }
inline bool is_zero_coeff(long long c) { return c == 0; }
template <typename T>
bool is_zero_coeff(const Polynomial<T>& p) {
  return p.is_zero();
}

template <typename T>
class Polynomial {
 public:
  using coefficient_type = T;

  Polynomial() = default;
  explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }

  static Polynomial constant(T c) { return Polynomial(std::vector<T>{std::move(c)}); }
  // c * x^n
  static Polynomial monomial(T c, std::size_t n) {
    std::vector<T> v(n + 1, T(0));
    v[n] = std::move(c);
    return Polynomial(std::move(v));
  }

  bool is_zero() const { return c_.empty(); }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<T>& coeffs() const { return c_; }
  // Coefficient of x^i; zero beyond the degree.
  T coeff(std::size_t i) const { return i < c_.size() ? c_[i] : T(0); }
  const T& leading() const {
    if (c_.empty()) throw std::domain_error("leading coefficient of the zero polynomial");
    return c_.back();
  }

  template <typename X>
  X operator()(const X& x) const {
    X acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + X(*it);
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<T> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * T(static_cast<long>(i));
    return Polynomial(std::move(d));
  }

  // Coefficients in reverse order (x^n p(1/x) for n = degree).
  Polynomial reversed() const { return Polynomial(std::vector<T>(c_.rbegin(), c_.rend())); }

  template <typename F>
  auto map(F&& f) const -> Polynomial<decltype(f(std::declval<const T&>()))> {
    using U = decltype(f(std::declval<const T&>()));
    std::vector<U> out;
    out.reserve(c_.size());
    for (const T& c : c_) out.push_back(f(c));
    return Polynomial<U>(std::move(out));
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] + o.c_[i];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = c_[i] - o.c_[i];
    trim();
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(const Polynomial& a) {
    std::vector<T> v;
    v.reserve(a.c_.size());
    for (const T& c : a.c_) v.push_back(T(0) - c);
    return Polynomial(std::move(v));
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> v(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (is_zero_coeff(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] = v[i + j] + a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(v));
  }
  friend Polynomial operator*(const T& s, const Polynomial& p) {
    std::vector<T> v;
    v.reserve(p.c_.size());
    for (const T& c : p.c_) v.push_back(s * c);
    return Polynomial(std::move(v));
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      const T diff = a.c_[i] - b.c_[i];
      if (!is_zero_coeff(diff)) return false;
    }
    return true;
  }

  // T(0) constructor helper so nested polynomials behave like scalars.
  explicit Polynomial(int zero_or_const) {
    if (zero_or_const != 0) c_.push_back(T(zero_or_const));
  }

 private:
  void trim() {
    while (!c_.empty() && is_zero_coeff(c_.back())) c_.pop_back();
  }

  std::vector<T> c_;
};

template <typename T>
struct DivMod {
  Polynomial<T> quotient;
  Polynomial<T> remainder;
};

// Long division by a divisor whose leading coefficient is 1 (so it works over
// any ring, including Z[alpha]).
template <typename T>
DivMod<T> divmod_monic(const Polynomial<T>& num, const Polynomial<T>& den) {
  if (den.is_zero()) throw std::domain_error("division by the zero polynomial");
  if (!(den.leading() == T(1))) throw std::domain_error("divmod_monic: divisor is not monic");
  std::vector<T> r = num.coeffs();
  const int dn = den.degree();
  if (num.degree() < dn) return {Polynomial<T>{}, num};
  std::vector<T> q(static_cast<std::size_t>(num.degree() - dn + 1), T(0));
  for (int i = num.degree(); i >= dn; --i) {
    const T lead = r[static_cast<std::size_t>(i)];
    if (is_zero_coeff(lead)) continue;
    q[static_cast<std::size_t>(i - dn)] = lead;
    for (int j = 0; j <= dn; ++j) {
      auto& slot = r[static_cast<std::size_t>(i - dn + j)];
      slot = slot - lead * den.coeffs()[static_cast<std::size_t>(j)];
    }
  }
  r.resize(static_cast<std::size_t>(dn));
  return {Polynomial<T>(std::move(q)), Polynomial<T>(std::move(r))};
}

// Long division over a field (mpq_class, double).
template <typename T>
DivMod<T> divmod(const Polynomial<T>& num, const Polynomial<T>& den) {
  if (den.is_zero()) throw std::domain_error("division by the zero polynomial");
  const T inv_lead = T(1) / den.leading();
  std::vector<T> monic;
  for (const T& c : den.coeffs()) monic.push_back(c * inv_lead);
  auto [q, r] = divmod_monic(num, Polynomial<T>(std::move(monic)));
  return {inv_lead * q, r};
}

using IntPoly = Polynomial<mpz_class>;
using RationalPoly = Polynomial<mpq_class>;
using FloatPoly = Polynomial<double>;
// Polynomial in u with coefficients in Z[alpha].
using AlphaPoly = Polynomial<IntPoly>;

}  // namespace wpg

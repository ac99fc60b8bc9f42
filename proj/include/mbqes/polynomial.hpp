#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "mbqes/rational.hpp"

namespace mbqes {

namespace detail {

template <class To, class From>
To convert_coefficient(const From& x) {
  if constexpr (std::is_same_v<From, To>) {
    return x;
  } else if constexpr (std::is_same_v<From, Rational>) {
    return To(x.get_d());
  } else {
    return To(x);
  }
}

template <class T>
bool is_zero(const T& x) {
  return x == T(0);
}

}  // namespace detail

// Dense univariate polynomial, coefficients in ascending degree. Trailing
// zero coefficients are always trimmed, so the zero polynomial has no
// coefficients and degree -1.
template <class T>
class Polynomial {
 public:
  using value_type = T;

  Polynomial() = default;
  explicit Polynomial(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<T> coeffs) : coeffs_(coeffs) { trim(); }

  static Polynomial constant(const T& c) { return Polynomial(std::vector<T>{c}); }

  // c * z^power
  static Polynomial monomial(const T& c, std::size_t power) {
    std::vector<T> v(power + 1, T(0));
    v[power] = c;
    return Polynomial(std::move(v));
  }

  // prod_i (z - roots[i]), monic
  static Polynomial from_roots(std::span<const T> roots) {
    std::vector<T> c{T(1)};
    for (const T& a : roots) {
      std::vector<T> next(c.size() + 1, T(0));
      for (std::size_t i = 0; i < c.size(); ++i) {
        next[i + 1] += c[i];
        next[i] -= a * c[i];
      }
      c = std::move(next);
    }
    return Polynomial(std::move(c));
  }

  const std::vector<T>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }

  // Coefficient of z^i, zero beyond the degree.
  T coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : T(0); }

  template <class U>
  auto operator()(const U& x) const {
    using R = std::common_type_t<U, decltype(detail::convert_coefficient<U>(std::declval<T>()))>;
    R acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      acc = acc * x + detail::convert_coefficient<R>(*it);
    }
    return acc;
  }

  Polynomial derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<T> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * T(static_cast<long>(i));
    return Polynomial(std::move(d));
  }

  template <class U>
  Polynomial<U> cast() const {
    std::vector<U> v;
    v.reserve(coeffs_.size());
    for (const T& c : coeffs_) v.push_back(detail::convert_coefficient<U>(c));
    return Polynomial<U>(std::move(v));
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), T(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), T(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    trim();
    return *this;
  }
  Polynomial& operator*=(const T& s) {
    for (T& c : coeffs_) c *= s;
    trim();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const T& s) { return a *= s; }
  friend Polynomial operator*(const T& s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> c(a.coeffs_.size() + b.coeffs_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(c));
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim() {
    while (!coeffs_.empty() && detail::is_zero(coeffs_.back())) coeffs_.pop_back();
  }

  std::vector<T> coeffs_;
};

// Coefficients c_i of p(n) = sum_i c_i * n(n-1)...(n-i+1), from forward
// differences at n = 0: c_i = (Delta^i p)(0) / i!.
std::vector<Rational> falling_factorial_coefficients(const Polynomial<Rational>& p);

// Inverse of the above: expands sum_i c_i * n^(i) back into monomials.
Polynomial<Rational> from_falling_factorial(std::span<const Rational> c);

}  // namespace mbqes

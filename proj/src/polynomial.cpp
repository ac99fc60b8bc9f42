#include "mbqes/polynomial.hpp"

namespace mbqes {

std::vector<Rational> falling_factorial_coefficients(const Polynomial<Rational>& p) {
  const int d = p.degree();
  if (d < 0) return {};
  std::vector<Rational> values(static_cast<std::size_t>(d) + 1);
  for (int n = 0; n <= d; ++n) values[static_cast<std::size_t>(n)] = p(Rational(n));
  std::vector<Rational> c(values.size());
  Rational factorial = 1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) factorial *= static_cast<long>(i);
    c[i] = values[0] / factorial;
    for (std::size_t j = 0; j + 1 < values.size() - i; ++j) values[j] = values[j + 1] - values[j];
  }
  return c;
}

Polynomial<Rational> from_falling_factorial(std::span<const Rational> c) {
  Polynomial<Rational> result;
  Polynomial<Rational> basis = Polynomial<Rational>::constant(1);
  for (std::size_t i = 0; i < c.size(); ++i) {
    result += basis * c[i];
    basis = basis * Polynomial<Rational>{Rational(-static_cast<long>(i)), Rational(1)};
  }
  return result;
}

}  // namespace mbqes

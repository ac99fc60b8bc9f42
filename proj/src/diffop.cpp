#include "mbqes/diffop.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mbqes {

HopCoefficients hop_coefficients(const ModelSpec& model, const Sector& sector) {
  const ModelSpec cm = canonical_model(model, sector);
  const Rational& q_r = sector.q_r();

  HopCoefficients hop;
  hop.raise = Polynomial<Rational>::constant(cm.g);
  hop.lower = Polynomial<Rational>::constant(cm.g);
  for (int c = 0; c < cm.modes(); ++c) {
    const int k = cm.k[static_cast<std::size_t>(c)];
    const long kk = static_cast<long>(k) * k;
    for (int i = 1; i <= k; ++i) {
      const Rational shift = make_rational(static_cast<long>(i - 1) * k + 1, kk);
      if (c < cm.r) {
        const Rational constant = k * (q_r + sector.s1(c) - shift);
        hop.lower = hop.lower * Polynomial<Rational>{constant, Rational(k)};
      } else {
        const Rational constant = k * (2 * sector.kappa - q_r - sector.t + sector.s2(c - cm.r) - shift);
        hop.raise = hop.raise * Polynomial<Rational>{constant, Rational(-k)};
      }
    }
  }

  const auto m = occupation_polynomials(cm, sector);
  for (int a = 0; a < cm.modes(); ++a) {
    hop.diag += m[static_cast<std::size_t>(a)] * cm.w[static_cast<std::size_t>(a)];
    for (int b = a; b < cm.modes(); ++b) {
      hop.diag += (m[static_cast<std::size_t>(a)] * m[static_cast<std::size_t>(b)]) * cm.quadratic(a, b);
    }
  }
  return hop;
}

DiffOpForm expand_diffop(const ModelSpec& model, const Sector& sector) {
  DiffOpForm op;
  op.hop = hop_coefficients(model, sector);
  op.N = sector.N();
  int sum1 = 0;
  int sum2 = 0;
  for (int i = 0; i < model.modes(); ++i) (model.in_creation_group(i) ? sum1 : sum2) += model.k[static_cast<std::size_t>(i)];
  op.order = std::max({sum1, sum2, 2});

  std::vector<std::vector<Rational>> coeffs(static_cast<std::size_t>(op.order) + 1,
                                            std::vector<Rational>(static_cast<std::size_t>(op.order) + 2, Rational(0)));
  // z^(i+shift) (d/dz)^i z^n = n(n-1)...(n-i+1) z^(n+shift)
  auto scatter = [&](const Polynomial<Rational>& hop_poly, int shift) {
    const auto c = falling_factorial_coefficients(hop_poly);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0) continue;
      const long power = static_cast<long>(i) + shift;
      if (power < 0) throw std::logic_error("hop polynomial C(n) does not vanish at n = 0");
      if (i > static_cast<std::size_t>(op.order)) throw std::logic_error("hop polynomial exceeds operator order");
      coeffs[i][static_cast<std::size_t>(power)] += c[i];
    }
  };
  scatter(op.hop.raise, 1);
  scatter(op.hop.diag, 0);
  scatter(op.hop.lower, -1);
  for (auto& c : coeffs) op.p.emplace_back(std::move(c));
  return op;
}

template <class T>
Polynomial<T> apply_expanded(const DiffOpForm& op, const Polynomial<T>& psi) {
  Polynomial<T> result;
  Polynomial<T> derivative = psi;
  for (const auto& p : op.p) {
    if (derivative.is_zero()) break;
    result += p.template cast<T>() * derivative;
    derivative = derivative.derivative();
  }
  return result;
}

template <class T>
Polynomial<T> apply_to_polynomial(const DiffOpForm& op, const Polynomial<T>& psi) {
  if (psi.degree() > op.N) {
    throw std::invalid_argument("polynomial degree " + std::to_string(psi.degree()) + " exceeds sector N = " +
                                std::to_string(op.N));
  }
  Polynomial<T> result = apply_expanded(op, psi);
  if constexpr (std::is_same_v<T, Rational>) {
    if (result.degree() > op.N) throw std::logic_error("operator left the invariant polynomial subspace");
  } else {
    // Floating point: the z^(N+1) coefficient cancels only up to rounding.
    std::vector<T> c = result.coeffs();
    if (c.size() > static_cast<std::size_t>(op.N) + 1) c.resize(static_cast<std::size_t>(op.N) + 1);
    result = Polynomial<T>(std::move(c));
  }
  return result;
}

template Polynomial<Rational> apply_expanded(const DiffOpForm&, const Polynomial<Rational>&);
template Polynomial<double> apply_expanded(const DiffOpForm&, const Polynomial<double>&);
template Polynomial<std::complex<double>> apply_expanded(const DiffOpForm&, const Polynomial<std::complex<double>>&);
template Polynomial<Rational> apply_to_polynomial(const DiffOpForm&, const Polynomial<Rational>&);
template Polynomial<double> apply_to_polynomial(const DiffOpForm&, const Polynomial<double>&);
template Polynomial<std::complex<double>> apply_to_polynomial(const DiffOpForm&,
                                                              const Polynomial<std::complex<double>>&);

}  // namespace mbqes

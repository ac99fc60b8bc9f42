#pragma once

#include <complex>
#include <vector>

#include "mbqes/fock.hpp"
#include "mbqes/model.hpp"
#include "mbqes/polynomial.hpp"

namespace mbqes {

// H z^n = raise(n) z^(n+1) + diag(n) z^n + lower(n) z^(n-1), as exact
// polynomials in the level index n.
struct HopCoefficients {
  Polynomial<Rational> raise;  // A(n)
  Polynomial<Rational> diag;   // B(n)
  Polynomial<Rational> lower;  // C(n)
};

HopCoefficients hop_coefficients(const ModelSpec& model, const Sector& sector);

// H = sum_{i=0..order} p[i](z) (d/dz)^i on polynomials of degree <= N.
struct DiffOpForm {
  int order = 2;
  std::vector<Polynomial<Rational>> p;
  HopCoefficients hop;
  long N = 0;
};

DiffOpForm expand_diffop(const ModelSpec& model, const Sector& sector);

// sum_i p[i] * psi^(i), no restriction on deg psi.
template <class T>
Polynomial<T> apply_expanded(const DiffOpForm& op, const Polynomial<T>& psi);

// (H psi)(z) on the invariant subspace; throws std::invalid_argument when
// deg psi > N and std::logic_error if the result leaves the subspace.
template <class T>
Polynomial<T> apply_to_polynomial(const DiffOpForm& op, const Polynomial<T>& psi);

extern template Polynomial<Rational> apply_expanded(const DiffOpForm&, const Polynomial<Rational>&);
extern template Polynomial<double> apply_expanded(const DiffOpForm&, const Polynomial<double>&);
extern template Polynomial<std::complex<double>> apply_expanded(const DiffOpForm&,
                                                                const Polynomial<std::complex<double>>&);
extern template Polynomial<Rational> apply_to_polynomial(const DiffOpForm&, const Polynomial<Rational>&);
extern template Polynomial<double> apply_to_polynomial(const DiffOpForm&, const Polynomial<double>&);
extern template Polynomial<std::complex<double>> apply_to_polynomial(const DiffOpForm&,
                                                                     const Polynomial<std::complex<double>>&);

}  // namespace mbqes

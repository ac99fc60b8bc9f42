#pragma once

#include <complex>
#include <span>
#include <vector>

#include "mbqes/diffop.hpp"

namespace mbqes {

// Roots of eigenpolynomials whose roots cluster near a singular point of
// the operator are not determined by double-precision coefficients, so the
// eigenvalue and the eigenpolynomial are recomputed with `bits` of mantissa.
struct PreciseEigenpolynomial {
  double energy = 0;
  std::vector<std::complex<double>> roots;
  bool converged = false;
};

// Working precision used for a sector of dimension N+1.
unsigned precise_bits(long N);

// Newton on the characteristic function of the monomial block starting at
// energy_guess, coefficients by the downward recurrence from z^N, then
// Aberth iteration started at root_guess (N values). Requires A(n) != 0
// for n < N.
PreciseEigenpolynomial precise_eigenpolynomial(const HopCoefficients& hop, long N, double energy_guess,
                                               std::span<const std::complex<double>> root_guess, unsigned bits);

}  // namespace mbqes

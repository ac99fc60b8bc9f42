#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mbqes/fock.hpp"
#include "mbqes/model.hpp"
#include "mbqes/rational.hpp"

namespace mbqes {

// phi^(k)(x) = -prod_{i=1..k} (x + (ik-1)/k^2) + prod_{i=1..k} ((i-k)/k - 1/k^2)
Rational phi_polynomial(int k, const Rational& x);

// Value of Q_- Q_+ + phi^(k)(Q_0) in the one-mode boson realization.
Rational casimir_value(int k);

// Single-mode generators Q_+ = (a^+)^k / sqrt(k)^k, Q_- = a^k / sqrt(k)^k,
// Q_0 = (N + 1/k) / k on the first `trunc` Fock levels.
struct TruncatedGeneratorSet {
  int k = 1;
  int trunc = 0;
  Eigen::MatrixXd qplus;
  Eigen::MatrixXd qminus;
  Eigen::MatrixXd qzero;
};

TruncatedGeneratorSet make_generators(int k, int trunc);

// Largest absolute violation of each algebra identity over the basis states
// |m> with m <= trunc - 2k (the top of the window is cut off by truncation).
struct AlgebraResiduals {
  double raise = 0;       // [Q_0, Q_+] - Q_+
  double lower = 0;       // [Q_0, Q_-] + Q_-
  double commutator = 0;  // [Q_+, Q_-] - (phi(Q_0) - phi(Q_0 - 1))
  double casimir = 0;     // Q_- Q_+ + phi(Q_0) - C
  int interior_states = 0;
};

AlgebraResiduals check_algebra(const TruncatedGeneratorSet& gens);

// Matrix elements of P_0 and P_+/P_- in the (N+1)-dimensional irrep of a
// sector. down[0] = 0 because the lowering product vanishes at n = 0.
struct LadderCoefficients {
  std::vector<double> diag;  // P_0 eigenvalue at n = 0..N
  std::vector<double> up;    // <n+1| P_+ |n>, n = 0..N-1
  std::vector<double> down;  // <n-1| P_- |n>, n = 0..N
};

// Evaluates the product formulas of the irrep; each square root is taken of
// an exact rational product. Throws std::domain_error when a factor under a
// square root is negative.
LadderCoefficients ladder_coefficients(const ModelSpec& model, const Sector& sector);

// <occ + step| prod a_i^+k_i (creation) prod a_j^k_j (annihilation) |occ>,
// i.e. the raising part of the interaction without g or normalisation.
// Zero when an annihilation-group mode has fewer than k_j bosons.
double interaction_element(const ModelSpec& model, std::span<const long> occupations);

// prod_i sqrt(k_i)^k_i
double interaction_normalization(const ModelSpec& model);

}  // namespace mbqes

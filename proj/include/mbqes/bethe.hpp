#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mbqes/diffop.hpp"
#include "mbqes/fock.hpp"
#include "mbqes/model.hpp"

namespace mbqes {

using Complex = std::complex<double>;

struct SolverConfig {
  double tol = 1e-12;  // Newton target on scaled robust residuals
  int max_iter = 50;
  std::uint64_t seed = 0;
  bool direct = false;  // also run multi-start Newton on the Bethe equations
  int starts = 64;
  double accept_residual = 1e-10;
  double energy_tol = 1e-8;  // relative to the spectral radius of the block
  double degenerate_separation = 1e-6;
  double dedup = 1e-7;
  double deflation = 1e-13;
};

enum class RootSource { extracted, refined, direct };

const char* to_string(RootSource source);

struct BetheSolution {
  int level = 0;  // index into the ascending spectrum; -1 if unmatched
  std::vector<Complex> roots;
  double energy = 0;
  double oracle_energy = 0;
  double residual_bethe = 0;  // NaN when not evaluated (degenerate roots)
  double residual_robust = 0;
  double conjugate_defect = 0;  // largest move made when snapping conjugate pairs
  RootSource source = RootSource::extracted;
  bool degenerate = false;
  bool reduced = false;  // eigenpolynomial of degree below N
  bool converged = false;
  int iterations = 0;
};

// Left-hand sides of the Bethe ansatz equations,
//   sum_{i=2..M} P_i(a_p) i! e_{i-1}({1/(a_p - a_m)}_{m != p}) + P_1(a_p),
// with the elementary symmetric sums built by recurrence. Throws
// std::domain_error when two roots are closer than min_separation * max(1, max|a|).
std::vector<Complex> bethe_residuals(const DiffOpForm& op, std::span<const Complex> roots,
                                     double min_separation = 1e-6);

// (H psi)(a_p) for the monic psi with the given roots. Valid for repeated roots.
std::vector<Complex> robust_residuals(const DiffOpForm& op, std::span<const Complex> roots);

// Residuals divided by the magnitude of the terms that produced them, so
// that values near machine epsilon mean "zero to working precision".
double max_scaled_robust_residual(const DiffOpForm& op, std::span<const Complex> roots);
double max_scaled_bethe_residual(const DiffOpForm& op, std::span<const Complex> roots);

struct RootExtraction {
  std::vector<Complex> roots;
  bool reduced = false;
};

// Roots of sum_n coeffs[n] z^n. Trailing coefficients below
// deflation * max|coeffs| are dropped (reduced = true).
RootExtraction roots_from_eigenvector(std::span<const double> coeffs, double deflation = 1e-13);

// w-dependent part of the closed-form energy, which equals the diagonal
// energy of the n = N state.
Rational energy_constant(const ModelSpec& model, const Sector& sector);

// g prod_{j>r} prod_i k_j (q_{r+s} + 1 + s_j - ((i-1)k_j+1)/k_j^2)
Rational energy_root_prefactor(const ModelSpec& model, const Sector& sector);

// E = constant - prefactor * sum(roots). Needs exactly N roots. Throws
// std::domain_error when the imaginary part does not cancel.
double energy_from_roots(const ModelSpec& model, const Sector& sector, std::span<const Complex> roots,
                         double imag_tol = 1e-8);

// Snap conjugate pairs, zero negligible imaginary parts, then sort by real
// part and imaginary part. Returns the largest displacement applied.
double canonicalize_roots(std::vector<Complex>& roots);

// Newton iteration on the robust residuals. Returns iterations used.
int refine_roots(const DiffOpForm& op, std::vector<Complex>& roots, const SolverConfig& config, bool& converged);

// One solution per eigenlevel, ascending energy: diagonalise the monomial
// block, extract eigenpolynomial roots, refine by Newton, evaluate the
// closed-form energy.
std::vector<BetheSolution> solve_bethe(const ModelSpec& model, const Sector& sector, const SolverConfig& config = {});

// Multi-start Newton directly on the Bethe equations, deduplicated. Levels
// are assigned by matching against `reference` (level -1 if no match).
std::vector<BetheSolution> solve_bethe_direct(const ModelSpec& model, const Sector& sector, const SolverConfig& config,
                                              std::span<const BetheSolution> reference);

struct LevelRecord {
  int level = 0;
  double fock_energy = 0;
  double monomial_energy = 0;
  double bethe_energy = 0;
  double max_rel_diff = 0;
  double residual_bethe = 0;
  double residual_robust = 0;
  bool degenerate = false;
  bool reduced = false;
  bool pass = false;
  std::string note;
};

struct ValidationReport {
  std::string sector_summary;
  long dim = 0;
  double tolerance = 0;
  std::vector<LevelRecord> levels;
  std::vector<BetheSolution> solutions;
  double max_energy_error = 0;
  int direct_found = 0;
  int direct_unmatched = 0;
  bool pass = false;
};

// Checks the given solutions against both diagonalisations; energies and
// residuals are recomputed from the roots. Never throws on disagreement.
ValidationReport validate_solutions(const ModelSpec& model, const Sector& sector,
                                    std::vector<BetheSolution> solutions, double tol, const SolverConfig& config = {});

ValidationReport cross_validate(const ModelSpec& model, const Sector& sector, double tol,
                                const SolverConfig& config = {});

std::string describe(const Sector& sector);

}  // namespace mbqes

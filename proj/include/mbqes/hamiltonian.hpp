#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mbqes/fock.hpp"
#include "mbqes/model.hpp"

namespace mbqes {

enum class Basis { fock, monomial };

// Tridiagonal Hamiltonian block of one sector.
//   up[n]   = H(n+1, n), amplitude carried from level n to n+1
//   down[n] = H(n, n+1), amplitude carried from level n+1 to n
// In the Fock basis up == down. In the monomial basis up[n] = A(n) and
// down[n] = C(n+1).
struct TridiagonalBlock {
  Basis basis = Basis::fock;
  std::vector<double> diag;
  std::vector<double> up;
  std::vector<double> down;

  long dim() const { return static_cast<long>(diag.size()); }
  Eigen::MatrixXd dense() const;
};

struct SpectrumResult {
  std::vector<double> energies;  // ascending
  Eigen::MatrixXd vectors;       // column j belongs to energies[j]
  double residual_norm = 0;      // max_j |H v_j - E_j v_j| / |v_j|
  std::vector<std::string> warnings;
};

TridiagonalBlock build_sector_matrix(const ModelSpec& model, const Sector& sector);
TridiagonalBlock build_monomial_matrix(const ModelSpec& model, const Sector& sector);

// d with monomial = D fock D^-1, D = diag(d), d[0] = 1. Computed from the
// exact ratios A(n)/C(n+1) of the g-independent hop products.
std::vector<double> monomial_scaling(const ModelSpec& model, const Sector& sector);

// Symmetric block T and scale s with block = S T S^-1, S = diag(s),
// s[0] = 1. Needs up[n] * down[n] > 0 for every n; returns false otherwise.
bool symmetrize(const TridiagonalBlock& block, TridiagonalBlock& sym, std::vector<double>& scale);

// Fock blocks use the symmetric tridiagonal QR solver. Monomial blocks are
// symmetrised through their own off-diagonal ratios when possible (they are
// far from normal, so a general solver loses digits as N grows), otherwise
// balanced and handed to a general real eigensolver. Eigenvector sign:
// largest-magnitude entry positive. Throws std::runtime_error if the
// eigensolver fails to converge.
SpectrumResult diagonalize(const TridiagonalBlock& block);

}  // namespace mbqes

#pragma once

#include <cstddef>
#include <vector>

#include "mbqes/rational.hpp"

namespace mbqes {

// Parameters of the multi-mode boson Hamiltonian
//
//   H = sum_i w_i N_i + sum_{i<=j} w_ij N_i N_j
//     + g (a_1^+k1 ... a_r^+kr a_{r+1}^k(r+1) ... a_{r+s}^k(r+s) + h.c.)
//
// Modes 0..r-1 form the creation group, modes r..r+s-1 the annihilation
// group (0-based throughout the code). Couplings are exact rationals; a
// double converts exactly, so real-valued couplings lose nothing.
struct ModelSpec {
  int r = 1;
  int s = 1;
  std::vector<int> k;
  std::vector<Rational> w;
  // Upper triangle of w_ij, row major over i <= j.
  std::vector<Rational> wq;
  Rational g;

  // All couplings zero.
  static ModelSpec zero(int r, int s, std::vector<int> k);

  int modes() const { return r + s; }
  bool in_creation_group(int i) const { return i < r; }

  // w_ij for any order of i, j.
  const Rational& quadratic(int i, int j) const;
  Rational& quadratic(int i, int j);

  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  // Same physics with modes relabelled: mode c of the result is mode
  // order[c] of this model. order must permute each group within itself.
  ModelSpec permuted(const std::vector<int>& order) const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

inline std::size_t triangle_size(int modes) {
  return static_cast<std::size_t>(modes) * static_cast<std::size_t>(modes + 1) / 2;
}

std::size_t triangle_index(int modes, int i, int j);

}  // namespace mbqes

#pragma once

#include <span>
#include <vector>

#include "mbqes/model.hpp"
#include "mbqes/polynomial.hpp"
#include "mbqes/rational.hpp"

namespace mbqes {

using Occupations = std::vector<long>;

// Single-mode label |q, n>: occupation m = k n + j with q = (j k + 1) / k^2.
struct ModeLabel {
  Rational q;
  long n = 0;

  friend bool operator==(const ModeLabel&, const ModeLabel&) = default;
};

ModeLabel q_from_occupation(int k, long m);
long occupation_from_label(int k, const ModeLabel& label);

// True when q is one of 1/k^2, (k+1)/k^2, ..., ((k-1)k+1)/k^2.
bool is_valid_q(int k, const Rational& q);

// One invariant block of the Hamiltonian, labelled by the values of the
// central elements.
//
// Quantum numbers are kept in canonical mode order: within each group the
// mode with the smallest level index sits last, so that the internal index
// n = 0 is the state annihilated by the lowering interaction term. order[c]
// is the original mode at canonical position c; for the usual labelling
// (last mode of each group has the smallest level) it is the identity.
struct Sector {
  std::vector<int> order;
  std::vector<Rational> q1;  // creation group, canonical order
  std::vector<Rational> q2;  // annihilation group, canonical order
  std::vector<Rational> l1;  // r-1 central values of the creation group
  std::vector<Rational> l2;  // s-1 central values of the annihilation group
  Rational kappa;
  Rational t;
  long dim = 0;                 // N + 1
  Occupations base_occupations;  // original mode order, at n = 0

  long N() const { return dim - 1; }
  int r() const { return static_cast<int>(q1.size()); }
  int s() const { return static_cast<int>(q2.size()); }

  // s^(1)_c = l1[c] + ... + l1[r-2]; zero for the last mode of the group.
  Rational s1(int c) const;
  // s^(2) for the c-th mode of the annihilation group (0-based in the group).
  Rational s2(int c) const;

  const Rational& q_r() const { return q1.back(); }
  const Rational& q_rs() const { return q2.back(); }

  bool natural_order() const;

  // Identity is (order, q, l, kappa); the rest is derived.
  friend bool operator==(const Sector& a, const Sector& b) {
    return a.order == b.order && a.q1 == b.q1 && a.q2 == b.q2 && a.l1 == b.l1 && a.l2 == b.l2 &&
           a.kappa == b.kappa;
  }
};

// The unique sector containing the Fock state with the given occupations.
Sector sector_from_occupations(const ModelSpec& model, std::span<const long> occupations);

// Sector from explicit labels in the usual (identity) mode order. Throws
// std::invalid_argument when N is not a non-negative integer or a mode
// would need a negative or fractional occupation.
Sector sector_from_labels(const ModelSpec& model, std::vector<Rational> q1, std::vector<Rational> q2,
                          std::vector<Rational> l1, std::vector<Rational> l2, const Rational& kappa);

// Occupations (original mode order) of the state with internal index n.
Occupations occupations_at(const Sector& sector, const ModelSpec& model, long n);

// The model with modes relabelled into the sector's canonical order.
ModelSpec canonical_model(const ModelSpec& model, const Sector& sector);

// m_c(n) for each canonical mode c as an exact linear polynomial in n:
//   creation group:      k_c (n + q_r + s_c) - 1/k_c
//   annihilation group:  k_c (2 kappa - q_r - t + s_c - n) - 1/k_c
// `canonical` must be canonical_model(model, sector).
std::vector<Polynomial<Rational>> occupation_polynomials(const ModelSpec& canonical, const Sector& sector);

// Occupation change of one raising step of the interaction, original order:
// +k_i on the creation group, -k_i on the annihilation group.
Occupations interaction_step(const ModelSpec& model);

}  // namespace mbqes

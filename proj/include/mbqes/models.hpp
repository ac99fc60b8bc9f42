#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mbqes/fock.hpp"
#include "mbqes/model.hpp"
#include "mbqes/rational.hpp"

namespace mbqes {

// A: r=2, s=1, k=(1,1,1)   g(a1+ a2+ a3 + h.c.)
// B: r=2, s=1, k=(1,1,2)   g(a1+ a2+ a3^2 + h.c.)
// C: r=2, s=2, k=(1,1,1,1) g(a1+ a2+ a3 a4 + h.c.)
enum class PresetId { A, B, C };

const char* to_string(PresetId id);
PresetId parse_preset(std::string_view text);

// Empty w / wq mean all zero. Throws std::invalid_argument on size mismatch.
ModelSpec preset(PresetId id, std::vector<Rational> w = {}, std::vector<Rational> wq = {}, Rational g = 1);

// Labels used by the closed forms of each case. q3 only matters for B,
// l3 only for C.
struct PresetLabels {
  long N = 0;
  long l1 = 0;
  long l3 = 0;
  Rational q3 = make_rational(1, 4);
};

// The sector with the given labels: occupations (l1, 0, .) at n = 0.
Sector preset_sector(PresetId id, const ModelSpec& model, const PresetLabels& labels);

// Printed closed forms, evaluated verbatim with kappa and l taken from the
// sector. Keys: "N", the named coefficients (A11, B11, A21, ...), "E.const"
// and "E.pref" for the energy E = E.const - E.pref * sum(alpha).
using PrintedCoefficients = std::map<std::string, Rational>;

PrintedCoefficients printed_coefficients(PresetId id, const ModelSpec& model, const Sector& sector);

enum class CheckStatus { match, known_discrepancy, mismatch };

const char* to_string(CheckStatus status);

struct CoefficientCheck {
  std::string name;
  Rational printed;
  Rational general;
  CheckStatus status = CheckStatus::match;
};

// Printed-text errors whose exact size is known: general - printed equals
// the registered correction. Anything else that differs is a mismatch.
struct KnownDiscrepancy {
  PresetId id;
  std::string name;
  std::string description;
};

const std::vector<KnownDiscrepancy>& known_discrepancies();

std::optional<Rational> discrepancy_correction(PresetId id, const std::string& name, const ModelSpec& model,
                                               const Sector& sector);

// Printed formulas against the general expansion and energy for one model
// and sector, including the printed Bethe equations at `roots` (exact,
// pairwise distinct; skipped when empty).
std::vector<CoefficientCheck> compare_preset(PresetId id, const ModelSpec& model, const Sector& sector,
                                             const std::vector<Rational>& roots = {});

struct CheckSummary {
  std::string name;
  int matches = 0;
  int known = 0;
  int mismatches = 0;
  std::string example;  // first non-matching draw, "printed vs general"
};

struct PresetReport {
  PresetId id = PresetId::A;
  int draws = 0;
  std::vector<CheckSummary> checks;  // sorted by name

  bool has_mismatch() const;
  // Names with at least one known-discrepancy classification.
  std::vector<std::string> annotations() const;
};

// Random rational couplings, labels and roots; deterministic in the seed.
PresetReport verify_preset(PresetId id, int draws, std::uint64_t seed);

}  // namespace mbqes

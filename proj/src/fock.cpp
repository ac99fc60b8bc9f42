#include "mbqes/fock.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace mbqes {

ModeLabel q_from_occupation(int k, long m) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (m < 0) throw std::invalid_argument("occupation must be >= 0");
  const long j = m % k;
  return {make_rational(j * k + 1, static_cast<long>(k) * k), m / k};
}

long occupation_from_label(int k, const ModeLabel& label) {
  if (!is_valid_q(k, label.q)) throw std::invalid_argument("q = " + to_string(label.q) + " is not valid for k");
  const Rational j = (label.q * (k * k) - 1) / k;
  return k * label.n + to_long(j);
}

bool is_valid_q(int k, const Rational& q) {
  const Rational j = (q * (k * k) - 1) / k;
  return is_integer(j) && j >= 0 && j < k;
}

Rational Sector::s1(int c) const {
  Rational acc = 0;
  for (std::size_t j = static_cast<std::size_t>(c); j < l1.size(); ++j) acc += l1[j];
  return acc;
}

Rational Sector::s2(int c) const {
  Rational acc = 0;
  for (std::size_t j = static_cast<std::size_t>(c); j < l2.size(); ++j) acc += l2[j];
  return acc;
}

bool Sector::natural_order() const {
  for (std::size_t c = 0; c < order.size(); ++c) {
    if (order[c] != static_cast<int>(c)) return false;
  }
  return true;
}

ModelSpec canonical_model(const ModelSpec& model, const Sector& sector) {
  if (sector.natural_order()) return model;
  return model.permuted(sector.order);
}

std::vector<Polynomial<Rational>> occupation_polynomials(const ModelSpec& canonical, const Sector& sector) {
  std::vector<Polynomial<Rational>> out;
  out.reserve(static_cast<std::size_t>(canonical.modes()));
  for (int c = 0; c < canonical.r; ++c) {
    const Rational k = canonical.k[static_cast<std::size_t>(c)];
    const Rational offset = k * (sector.q_r() + sector.s1(c)) - 1 / k;
    out.emplace_back(std::vector<Rational>{offset, k});
  }
  for (int c = 0; c < canonical.s; ++c) {
    const Rational k = canonical.k[static_cast<std::size_t>(canonical.r + c)];
    const Rational offset = k * (2 * sector.kappa - sector.q_r() - sector.t + sector.s2(c)) - 1 / k;
    out.emplace_back(std::vector<Rational>{offset, Rational(-k)});
  }
  return out;
}

namespace {

// Fills t, dim and base_occupations from the defining labels, checking that
// every state n = 0..N has non-negative integer occupations.
void finalize(Sector& sector, const ModelSpec& model) {
  const int r = model.r;
  const int s = model.s;
  Rational sum1 = 0;
  for (int c = 0; c < r; ++c) sum1 += sector.s1(c);
  Rational sum2 = 0;
  for (int c = 0; c < s; ++c) sum2 += sector.s2(c);
  sector.t = sum1 / r + sum2 / s;

  const Rational n_top = 2 * sector.kappa - sector.q_r() - sector.q_rs() - sector.t;
  if (!is_integer(n_top) || n_top < 0) {
    throw std::invalid_argument("sector labels give N = " + to_string(n_top) +
                                ", expected a non-negative integer");
  }
  sector.dim = to_long(n_top) + 1;

  const ModelSpec canonical = canonical_model(model, sector);
  const auto polys = occupation_polynomials(canonical, sector);
  sector.base_occupations.assign(static_cast<std::size_t>(model.modes()), 0);
  for (std::size_t c = 0; c < polys.size(); ++c) {
    for (const Rational& m : {polys[c](Rational(0)), polys[c](Rational(sector.N()))}) {
      if (!is_integer(m) || m < 0) {
        throw std::invalid_argument("sector labels give occupation " + to_string(m) + " for mode " +
                                    std::to_string(sector.order[c] + 1));
      }
    }
    sector.base_occupations[static_cast<std::size_t>(sector.order[c])] = to_long(polys[c](Rational(0)));
  }
}

}  // namespace

Sector sector_from_occupations(const ModelSpec& model, std::span<const long> occupations) {
  model.validate();
  const int n_modes = model.modes();
  if (static_cast<int>(occupations.size()) != n_modes) {
    throw std::invalid_argument("occupation vector must have r+s = " + std::to_string(n_modes) + " entries");
  }
  std::vector<ModeLabel> labels;
  for (int i = 0; i < n_modes; ++i) {
    labels.push_back(q_from_occupation(model.k[static_cast<std::size_t>(i)], occupations[static_cast<std::size_t>(i)]));
  }

  Sector sector;
  sector.order.resize(static_cast<std::size_t>(n_modes));
  std::iota(sector.order.begin(), sector.order.end(), 0);
  // Pivot: the mode that runs out first when its group is lowered; ties go
  // to the highest index so the usual labelling keeps the identity order.
  auto place_pivot = [&](int first, int last) {
    int pivot = last;
    for (int i = last; i >= first; --i) {
      if (labels[static_cast<std::size_t>(i)].n < labels[static_cast<std::size_t>(pivot)].n) pivot = i;
    }
    std::swap(sector.order[static_cast<std::size_t>(pivot)], sector.order[static_cast<std::size_t>(last)]);
  };
  place_pivot(0, model.r - 1);
  place_pivot(model.r, n_modes - 1);

  std::vector<Rational> q0(static_cast<std::size_t>(n_modes));
  for (int c = 0; c < n_modes; ++c) {
    const ModeLabel& label = labels[static_cast<std::size_t>(sector.order[static_cast<std::size_t>(c)])];
    q0[static_cast<std::size_t>(c)] = label.q + label.n;
    (c < model.r ? sector.q1 : sector.q2).push_back(label.q);
  }
  for (int c = 0; c + 1 < model.r; ++c) sector.l1.push_back(q0[static_cast<std::size_t>(c)] - q0[static_cast<std::size_t>(c + 1)]);
  for (int c = model.r; c + 1 < n_modes; ++c) sector.l2.push_back(q0[static_cast<std::size_t>(c)] - q0[static_cast<std::size_t>(c + 1)]);

  Rational avg1 = 0;
  for (int c = 0; c < model.r; ++c) avg1 += q0[static_cast<std::size_t>(c)];
  avg1 /= model.r;
  Rational avg2 = 0;
  for (int c = model.r; c < n_modes; ++c) avg2 += q0[static_cast<std::size_t>(c)];
  avg2 /= model.s;
  sector.kappa = (avg1 + avg2) / 2;

  finalize(sector, model);
  return sector;
}

Sector sector_from_labels(const ModelSpec& model, std::vector<Rational> q1, std::vector<Rational> q2,
                          std::vector<Rational> l1, std::vector<Rational> l2, const Rational& kappa) {
  model.validate();
  if (static_cast<int>(q1.size()) != model.r || static_cast<int>(q2.size()) != model.s) {
    throw std::invalid_argument("sector q values must have r and s entries");
  }
  if (static_cast<int>(l1.size()) != model.r - 1 || static_cast<int>(l2.size()) != model.s - 1) {
    throw std::invalid_argument("sector l values must have r-1 and s-1 entries");
  }
  for (int i = 0; i < model.modes(); ++i) {
    const Rational& q = i < model.r ? q1[static_cast<std::size_t>(i)] : q2[static_cast<std::size_t>(i - model.r)];
    if (!is_valid_q(model.k[static_cast<std::size_t>(i)], q)) {
      throw std::invalid_argument("q = " + to_string(q) + " is not allowed for mode " + std::to_string(i + 1));
    }
  }
  Sector sector;
  sector.order.resize(static_cast<std::size_t>(model.modes()));
  std::iota(sector.order.begin(), sector.order.end(), 0);
  sector.q1 = std::move(q1);
  sector.q2 = std::move(q2);
  sector.l1 = std::move(l1);
  sector.l2 = std::move(l2);
  sector.kappa = kappa;
  finalize(sector, model);
  return sector;
}

Occupations occupations_at(const Sector& sector, const ModelSpec& model, long n) {
  if (n < 0 || n > sector.N()) {
    throw std::out_of_range("internal index " + std::to_string(n) + " outside 0.." + std::to_string(sector.N()));
  }
  const ModelSpec canonical = canonical_model(model, sector);
  const auto polys = occupation_polynomials(canonical, sector);
  Occupations out(polys.size());
  for (std::size_t c = 0; c < polys.size(); ++c) {
    out[static_cast<std::size_t>(sector.order[c])] = to_long(polys[c](Rational(n)));
  }
  return out;
}

Occupations interaction_step(const ModelSpec& model) {
  Occupations step(static_cast<std::size_t>(model.modes()));
  for (int i = 0; i < model.modes(); ++i) {
    const long k = model.k[static_cast<std::size_t>(i)];
    step[static_cast<std::size_t>(i)] = model.in_creation_group(i) ? k : -k;
  }
  return step;
}

}  // namespace mbqes

#include <doctest.h>

#include <random>

#include "../oracles.hpp"
#include "mbqes/diffop.hpp"
#include "mbqes/models.hpp"

using namespace mbqes;

TEST_SUITE("diffop") {
  TEST_CASE("model A two-level operator") {
    const ModelSpec model = preset(PresetId::A);
    const Sector s = sector_from_occupations(model, std::vector<long>{0, 0, 1});
    const DiffOpForm op = expand_diffop(model, s);
    CHECK(op.hop.raise(Rational(0)) == 1);
    CHECK(op.hop.lower(Rational(1)) == 1);
    CHECK(op.hop.diag.is_zero());
    const Polynomial<Rational> plus{1, 1};
    const Polynomial<Rational> minus{1, -1};
    CHECK(apply_to_polynomial(op, plus) == plus);
    CHECK(apply_to_polynomial(op, minus) == minus * Rational(-1));
    CHECK_THROWS_AS(apply_to_polynomial(op, Polynomial<Rational>{0, 0, 1}), std::invalid_argument);
  }

  TEST_CASE("closure and hop consistency on random sectors") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
      const int r = 1 + static_cast<int>(rng() % 3);
      const int s = 1 + static_cast<int>(rng() % 3);
      std::vector<int> k;
      for (int i = 0; i < r + s; ++i) k.push_back(1 + static_cast<int>(rng() % 3));
      ModelSpec model = ModelSpec::zero(r, s, k);
      for (auto& w : model.w) w = oracle::random_rational(rng, 9, 5);
      for (auto& w : model.wq) w = oracle::random_rational(rng, 9, 5);
      model.g = oracle::random_rational(rng, 9, 5);
      std::vector<long> occ;
      for (int i = 0; i < r + s; ++i) occ.push_back(static_cast<long>(rng() % 10));
      const Sector sector = sector_from_occupations(model, occ);
      const DiffOpForm op = expand_diffop(model, sector);
      const Rational N(sector.N());
      CHECK(op.hop.raise(N) == 0);
      CHECK(op.hop.lower(Rational(0)) == 0);
      // H z^n from the expanded operator equals the hop form exactly.
      for (long n = 0; n <= sector.N(); ++n) {
        const auto out = apply_to_polynomial(op, Polynomial<Rational>::monomial(1, static_cast<std::size_t>(n)));
        const Rational x(n);
        CHECK(out.coeff(static_cast<std::size_t>(n + 1)) == op.hop.raise(x));
        CHECK(out.coeff(static_cast<std::size_t>(n)) == op.hop.diag(x));
        if (n > 0) CHECK(out.coeff(static_cast<std::size_t>(n - 1)) == op.hop.lower(x));
      }
    }
  }

  TEST_CASE("leading coefficient of H z^N vanishes") {
    const ModelSpec model = preset(PresetId::B, {1, 2, 3}, {}, 2);
    const Sector s = preset_sector(PresetId::B, model, {4, 1, 0, make_rational(3, 4)});
    const DiffOpForm op = expand_diffop(model, s);
    const auto out = apply_expanded(op, Polynomial<Rational>::monomial(1, static_cast<std::size_t>(s.N())));
    CHECK(out.coeff(static_cast<std::size_t>(s.N() + 1)) == 0);
  }
}

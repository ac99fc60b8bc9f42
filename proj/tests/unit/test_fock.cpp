#include <doctest.h>

#include <random>

#include "../oracles.hpp"
#include "mbqes/fock.hpp"
#include "mbqes/models.hpp"

using namespace mbqes;

TEST_SUITE("fock") {
  TEST_CASE("single mode labels") {
    CHECK(q_from_occupation(1, 7) == ModeLabel{1, 7});
    CHECK(q_from_occupation(2, 5) == ModeLabel{make_rational(3, 4), 2});
    CHECK(q_from_occupation(3, 4) == ModeLabel{make_rational(4, 9), 1});
    for (int k = 1; k <= 4; ++k) {
      for (long m = 0; m < 20; ++m) {
        const auto label = q_from_occupation(k, m);
        CHECK(is_valid_q(k, label.q));
        CHECK(occupation_from_label(k, label) == m);
      }
    }
    CHECK_FALSE(is_valid_q(2, make_rational(1, 2)));
  }

  TEST_CASE("sector of (2,1,4) with k=(1,1,2)") {
    const ModelSpec model = preset(PresetId::B);
    const std::vector<long> occ{2, 1, 4};
    const Sector s = sector_from_occupations(model, occ);
    CHECK(s.q1 == std::vector<Rational>{1, 1});
    CHECK(s.q2 == std::vector<Rational>{make_rational(1, 4)});
    CHECK(s.l1 == std::vector<Rational>{1});
    CHECK(s.kappa == make_rational(19, 8));
    CHECK(s.t == make_rational(1, 2));
    CHECK(s.N() == 3);
    CHECK(s.base_occupations == Occupations{1, 0, 6});
    CHECK(occupations_at(s, model, 0) == Occupations{1, 0, 6});
    CHECK(occupations_at(s, model, 3) == Occupations{4, 3, 0});
    CHECK(oracle::reachable(model, occ).size() == 4);
  }

  TEST_CASE("small sectors") {
    const ModelSpec a = preset(PresetId::A);
    const Sector sa = sector_from_occupations(a, std::vector<long>{0, 0, 1});
    CHECK(sa.N() == 1);
    CHECK(sa.base_occupations == Occupations{0, 0, 1});
    const ModelSpec c = preset(PresetId::C);
    const Sector sc = sector_from_occupations(c, std::vector<long>{1, 1, 0, 0});
    CHECK(sc.N() == 1);
    CHECK(sc.base_occupations == Occupations{0, 0, 1, 1});
  }

  TEST_CASE("dimension and ordering agree with the state graph") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      const int r = 1 + static_cast<int>(rng() % 3);
      const int s = 1 + static_cast<int>(rng() % 3);
      std::vector<int> k;
      for (int i = 0; i < r + s; ++i) k.push_back(1 + static_cast<int>(rng() % 3));
      const ModelSpec model = ModelSpec::zero(r, s, k);
      std::vector<long> occ;
      for (int i = 0; i < r + s; ++i) occ.push_back(static_cast<long>(rng() % 9));
      const Sector sector = sector_from_occupations(model, occ);
      const auto graph = oracle::reachable(model, occ);
      REQUIRE(static_cast<long>(graph.size()) == sector.dim);
      for (long n = 0; n <= sector.N(); ++n) {
        const auto at = occupations_at(sector, model, n);
        CHECK(at == graph[static_cast<std::size_t>(n)]);
        CHECK(sector_from_occupations(model, at) == sector);
      }
    }
  }

  TEST_CASE("pivoted groups") {
    // Mode 0 has fewer levels than mode 1, so the canonical order swaps them.
    const ModelSpec model = ModelSpec::zero(2, 1, {1, 1, 1});
    const std::vector<long> occ{0, 3, 5};
    const Sector s = sector_from_occupations(model, occ);
    CHECK(s.dim == static_cast<long>(oracle::reachable(model, occ).size()));
    CHECK(s.N() == 5);
  }

  TEST_CASE("labels round trip and bad input") {
    const ModelSpec model = preset(PresetId::B);
    const Sector s = sector_from_occupations(model, std::vector<long>{2, 1, 4});
    const Sector t = sector_from_labels(model, s.q1, s.q2, s.l1, s.l2, s.kappa);
    CHECK(t == s);
    CHECK(t.dim == s.dim);
    CHECK_THROWS_AS(sector_from_labels(model, s.q1, s.q2, s.l1, s.l2, s.kappa + make_rational(1, 3)),
                    std::invalid_argument);
    CHECK_THROWS_AS(sector_from_occupations(model, std::vector<long>{1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(sector_from_occupations(model, std::vector<long>{1, -2, 0}), std::invalid_argument);
  }

  TEST_CASE("occupation polynomials") {
    const ModelSpec model = preset(PresetId::B);
    const Sector s = sector_from_occupations(model, std::vector<long>{2, 1, 4});
    const auto polys = occupation_polynomials(canonical_model(model, s), s);
    for (long n = 0; n <= s.N(); ++n) {
      const auto occ = occupations_at(s, model, n);
      for (int c = 0; c < 3; ++c) CHECK(polys[static_cast<std::size_t>(c)](Rational(n)) == occ[static_cast<std::size_t>(c)]);
    }
  }
}

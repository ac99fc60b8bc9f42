#include <doctest.h>

#include <algorithm>

#include "mbqes/diffop.hpp"
#include "mbqes/models.hpp"

using namespace mbqes;

TEST_SUITE("models") {
  TEST_CASE("preset shapes") {
    const ModelSpec a = preset(PresetId::A);
    CHECK(a.r == 2);
    CHECK(a.s == 1);
    CHECK(a.k == std::vector<int>{1, 1, 1});
    CHECK(preset(PresetId::B).k == std::vector<int>{1, 1, 2});
    const ModelSpec c = preset(PresetId::C);
    CHECK(c.s == 2);
    CHECK(c.k == std::vector<int>{1, 1, 1, 1});
    CHECK_THROWS_AS(preset(PresetId::A, {1, 2}), std::invalid_argument);
    CHECK(parse_preset("b") == PresetId::B);
    CHECK_THROWS(parse_preset("D"));
  }

  TEST_CASE("printed coefficients at w = 0") {
    const ModelSpec a = preset(PresetId::A);
    const auto pa = printed_coefficients(PresetId::A, a, preset_sector(PresetId::A, a, {3, 1}));
    CHECK(pa.at("A11") == 0);
    CHECK(pa.at("B11") == 0);

    const ModelSpec b = preset(PresetId::B);
    const Sector sb = preset_sector(PresetId::B, b, {1, 0});
    CHECK(sb.kappa == make_rational(9, 8));
    CHECK(printed_coefficients(PresetId::B, b, sb).at("B21") == -2);

    const ModelSpec c = preset(PresetId::C);
    const Sector sc = preset_sector(PresetId::C, c, {1, 0, 0});
    CHECK(sc.kappa == make_rational(3, 2));
    CHECK(printed_coefficients(PresetId::C, c, sc).at("B22") == -1);
  }

  TEST_CASE("case A general expansion") {
    const ModelSpec a = preset(PresetId::A, {make_rational(1, 2), 2, -3}, {1, 0, make_rational(2, 3), -1, 0, 4},
                               make_rational(5, 7));
    const Sector s = preset_sector(PresetId::A, a, {4, 2});
    const auto printed = printed_coefficients(PresetId::A, a, s);
    const DiffOpForm op = expand_diffop(a, s);
    CHECK(op.p[2].coeff(2) == printed.at("A11"));
    CHECK(op.p[2].coeff(1) == a.g);
    CHECK(op.p[1].coeff(2) == -a.g);
    CHECK(op.p[1].coeff(0) == a.g * 3);
  }

  TEST_CASE("random draws have no unexplained mismatch") {
    for (PresetId id : {PresetId::A, PresetId::B, PresetId::C}) {
      const PresetReport rep = verify_preset(id, 20, 99);
      CHECK(rep.draws == 20);
      CHECK_FALSE(rep.has_mismatch());
      const auto ann = rep.annotations();
      for (const auto& name : ann) {
        // The printed Bethe equations inherit the registered coefficient errors.
        if (name == "BAE") continue;
        const auto& reg = known_discrepancies();
        CHECK(std::any_of(reg.begin(), reg.end(), [&](const KnownDiscrepancy& k) { return k.id == id && k.name == name; }));
      }
    }
    const auto b = verify_preset(PresetId::B, 20, 99).annotations();
    CHECK(std::find(b.begin(), b.end(), "P0[1]") != b.end());
  }

  TEST_CASE("a wrong coefficient is a mismatch") {
    const ModelSpec b = preset(PresetId::B, {1, 0, 0}, {}, 1);
    const Sector s = preset_sector(PresetId::B, b, {3, 1});
    for (const auto& c : compare_preset(PresetId::B, b, s)) {
      if (c.name == "B21") CHECK(c.status == CheckStatus::match);
    }
    CHECK(std::string(to_string(CheckStatus::known_discrepancy)) == "known-discrepancy");
  }
}

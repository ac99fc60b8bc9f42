#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "../oracles.hpp"
#include "mbqes/bethe.hpp"
#include "mbqes/hamiltonian.hpp"
#include "mbqes/models.hpp"

using namespace mbqes;

namespace {

struct TwoLevel {
  ModelSpec model = preset(PresetId::A);
  Sector sector = sector_from_occupations(model, std::vector<long>{0, 0, 1});
  DiffOpForm op = expand_diffop(model, sector);
};

}  // namespace

TEST_SUITE("bethe") {
  TEST_CASE("residual examples") {
    TwoLevel t;
    const std::vector<Complex> one{1.0}, minus{-1.0}, zero{0.0};
    CHECK(std::abs(bethe_residuals(t.op, one)[0]) < 1e-15);
    CHECK(bethe_residuals(t.op, zero)[0] == Complex(1.0));
    CHECK(std::abs(robust_residuals(t.op, one)[0]) < 1e-15);
    CHECK(std::abs(robust_residuals(t.op, minus)[0]) < 1e-15);
    CHECK(std::abs(robust_residuals(t.op, zero)[0]) > 0.5);
    const std::vector<Complex> close{1.0, 1.0 + 1e-9};
    CHECK_THROWS_AS(bethe_residuals(t.op, close), std::domain_error);
  }

  TEST_CASE("roots from eigenvectors") {
    const std::vector<double> a{1, 1}, b{1, -1}, c{0, 0, 0, 1}, d{2, 1, 1e-20};
    CHECK(std::abs(roots_from_eigenvector(a).roots[0] + 1.0) < 1e-15);
    CHECK_FALSE(roots_from_eigenvector(a).reduced);
    CHECK(std::abs(roots_from_eigenvector(b).roots[0] - 1.0) < 1e-15);
    const auto zs = roots_from_eigenvector(c);
    REQUIRE(zs.roots.size() == 3);
    for (auto z : zs.roots) CHECK(std::abs(z) < 1e-12);
    const auto red = roots_from_eigenvector(d);
    CHECK(red.reduced);
    CHECK(red.roots.size() == 1);
    const std::vector<double> nil{0, 0};
    CHECK_THROWS(roots_from_eigenvector(nil));
  }

  TEST_CASE("energy from roots") {
    TwoLevel t;
    const std::vector<Complex> one{1.0}, minus{-1.0};
    CHECK(energy_from_roots(t.model, t.sector, one) == doctest::Approx(-1));
    CHECK(energy_from_roots(t.model, t.sector, minus) == doctest::Approx(1));
    const std::vector<Complex> lonely{Complex(0, 1)};
    CHECK_THROWS_AS(energy_from_roots(t.model, t.sector, lonely), std::domain_error);
  }

  TEST_CASE("energy constant is the diagonal energy of the top state") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 60; ++trial) {
      const int r = 1 + static_cast<int>(rng() % 3);
      const int s = 1 + static_cast<int>(rng() % 3);
      std::vector<int> k;
      for (int i = 0; i < r + s; ++i) k.push_back(1 + static_cast<int>(rng() % 3));
      ModelSpec model = ModelSpec::zero(r, s, k);
      for (auto& w : model.w) w = oracle::random_rational(rng, 9, 4);
      for (auto& w : model.wq) w = oracle::random_rational(rng, 9, 4);
      model.g = 1;
      std::vector<long> occ;
      for (int i = 0; i < r + s; ++i) occ.push_back(static_cast<long>(rng() % 8));
      const Sector sector = sector_from_occupations(model, occ);
      const auto top = occupations_at(sector, model, sector.N());
      CHECK(energy_constant(model, sector).get_d() == doctest::Approx(oracle::diagonal_energy(model, top)));
    }
  }

  TEST_CASE("two-level solve") {
    TwoLevel t;
    const auto sols = solve_bethe(t.model, t.sector);
    REQUIRE(sols.size() == 2);
    CHECK(sols[0].energy == doctest::Approx(-1));
    CHECK(std::abs(sols[0].roots[0] - 1.0) < 1e-12);
    CHECK(sols[1].energy == doctest::Approx(1));
    CHECK(std::abs(sols[1].roots[0] + 1.0) < 1e-12);
  }

  TEST_CASE("empty sector") {
    const ModelSpec model = preset(PresetId::A, {1, 2, 3});
    const Sector s = sector_from_occupations(model, std::vector<long>{2, 0, 0});
    REQUIRE(s.N() == 0);
    const auto sols = solve_bethe(model, s);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].roots.empty());
    CHECK(sols[0].energy == doctest::Approx(energy_constant(model, s).get_d()));
  }

  TEST_CASE("residual forms agree with the subset and hop oracles") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-2, 2);
    int done = 0;
    while (done < 50) {
      const int r = 1 + static_cast<int>(rng() % 2);
      const int s = 1 + static_cast<int>(rng() % 2);
      std::vector<int> k;
      for (int i = 0; i < r + s; ++i) k.push_back(1 + static_cast<int>(rng() % 2));
      ModelSpec model = ModelSpec::zero(r, s, k);
      for (auto& w : model.w) w = oracle::random_rational(rng, 9, 4);
      for (auto& w : model.wq) w = oracle::random_rational(rng, 9, 4);
      model.g = oracle::random_rational(rng, 9, 4);
      if (model.g == 0) continue;
      std::vector<long> occ;
      for (int i = 0; i < r + s; ++i) occ.push_back(static_cast<long>(rng() % 9));
      const Sector sector = sector_from_occupations(model, occ);
      const DiffOpForm op = expand_diffop(model, sector);
      if (sector.N() < 1 || sector.N() > 8 || op.order > 4) continue;
      std::vector<Complex> roots;
      for (long i = 0; i < sector.N(); ++i) roots.emplace_back(u(rng), u(rng));
      const auto pole = bethe_residuals(op, roots);
      const auto robust = robust_residuals(op, roots);
      const auto subset = oracle::subset_residuals(op.p, roots);
      const auto psi = oracle::monic_from_roots(roots);
      std::vector<oracle::cplx> dpsi;
      for (std::size_t n = 1; n < psi.size(); ++n) dpsi.push_back(psi[n] * static_cast<double>(n));
      for (std::size_t p = 0; p < roots.size(); ++p) {
        const auto d = oracle::horner(dpsi, roots[p]);
        const auto hop = oracle::hop_apply(op.hop.raise, op.hop.diag, op.hop.lower, psi, roots[p]);
        const double scale = std::max({1.0, std::abs(robust[p]), std::abs(pole[p] * d)});
        CHECK(std::abs(pole[p] * d - robust[p]) <= 1e-10 * scale);
        CHECK(std::abs(pole[p] - subset[p]) <= 1e-10 * std::max(1.0, std::abs(subset[p])));
        CHECK(std::abs(robust[p] - hop) <= 1e-10 * std::max(1.0, std::abs(hop)));
      }
      ++done;
    }
  }

  TEST_CASE("cross validation examples") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1, 1);
    ModelSpec a = preset(PresetId::A);
    for (auto& w : a.w) w = u(rng);
    for (auto& w : a.wq) w = u(rng);
    a.g = 0.7;
    const auto rep = cross_validate(a, preset_sector(PresetId::A, a, {10, 1}), 1e-8);
    CHECK(rep.pass);
    CHECK(rep.levels.size() == 11);

    const ModelSpec c = preset(PresetId::C);
    CHECK(cross_validate(c, preset_sector(PresetId::C, c, {6, 0, 0}), 1e-8).pass);
  }

  TEST_CASE("perturbed root fails validation") {
    const ModelSpec model = preset(PresetId::B, {make_rational(1, 3), -1, make_rational(1, 2)}, {}, make_rational(3, 5));
    const Sector s = preset_sector(PresetId::B, model, {5, 1});
    auto sols = solve_bethe(model, s);
    CHECK(validate_solutions(model, s, sols, 1e-8).pass);
    sols[2].roots[1] += 1e-2;
    const auto rep = validate_solutions(model, s, sols, 1e-8);
    CHECK_FALSE(rep.pass);
    CHECK_FALSE(rep.levels[2].pass);
    CHECK(rep.levels[2].residual_robust > 1e-6);
  }

  TEST_CASE("direct mode finds a subset of the extracted levels") {
    const ModelSpec model = preset(PresetId::A, {make_rational(1, 2), 1, -1}, {}, make_rational(4, 5));
    const Sector s = preset_sector(PresetId::A, model, {4, 1});
    SolverConfig cfg;
    cfg.direct = true;
    cfg.seed = 3;
    const auto rep = cross_validate(model, s, 1e-8, cfg);
    CHECK(rep.pass);
    CHECK(rep.direct_found > 0);
    CHECK(rep.direct_unmatched == 0);
  }

  TEST_CASE("properties of solved levels") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1, 1);
    ModelSpec model = ModelSpec::zero(2, 2, {1, 2, 1, 1});
    for (auto& w : model.w) w = u(rng);
    for (auto& w : model.wq) w = u(rng);
    model.g = 1.3;
    const Sector s = sector_from_occupations(model, std::vector<long>{1, 2, 9, 8});
    REQUIRE(s.N() >= 4);
    const auto sols = solve_bethe(model, s);
    const double pref = energy_root_prefactor(model, s).get_d();
    for (const auto& sol : sols) {
      // conjugate closure
      for (const auto& z : sol.roots) {
        double best = 1e300;
        for (const auto& w : sol.roots) best = std::min(best, std::abs(w - std::conj(z)));
        CHECK(best <= 1e-8 * std::max(1.0, std::abs(z)));
      }
    }
    for (std::size_t j = 1; j < sols.size(); ++j) {
      Complex s0 = 0, s1 = 0;
      for (auto z : sols[0].roots) s0 += z;
      for (auto z : sols[j].roots) s1 += z;
      const double de = sols[j].energy - sols[0].energy;
      CHECK(std::abs(de + pref * (s1 - s0).real()) <= 1e-8 * std::max(1.0, std::abs(de)));
    }
  }
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "../oracles.hpp"
#include "mbqes/hamiltonian.hpp"
#include "mbqes/models.hpp"

using namespace mbqes;

namespace {

ModelSpec random_model(std::mt19937_64& rng, int r, int s, std::vector<int> k) {
  ModelSpec m = ModelSpec::zero(r, s, std::move(k));
  std::uniform_real_distribution<double> u(-1, 1);
  for (auto& w : m.w) w = u(rng);
  for (auto& w : m.wq) w = u(rng);
  m.g = 0.1 + 1.9 * (u(rng) + 1) / 2;
  return m;
}

}  // namespace

TEST_SUITE("hamiltonian") {
  TEST_CASE("model A two-level block") {
    const ModelSpec model = preset(PresetId::A);
    const Sector s = sector_from_occupations(model, std::vector<long>{0, 0, 1});
    const auto fock = build_sector_matrix(model, s);
    CHECK(fock.diag == std::vector<double>{0, 0});
    CHECK(fock.up == std::vector<double>{1});
    const auto mono = build_monomial_matrix(model, s);
    CHECK(mono.up[0] == doctest::Approx(1));
    CHECK(mono.down[0] == doctest::Approx(1));
    const auto spec = diagonalize(fock);
    CHECK(spec.energies[0] == doctest::Approx(-1));
    CHECK(spec.energies[1] == doctest::Approx(1));
  }

  TEST_CASE("fock block of (2,1,4)") {
    const ModelSpec model = preset(PresetId::B);
    const Sector s = sector_from_occupations(model, std::vector<long>{2, 1, 4});
    CHECK(build_sector_matrix(model, s).up[0] == doctest::Approx(std::sqrt(60.0)));
  }

  TEST_CASE("fock block equals the brute-force second-quantized matrix") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
      const int r = 1 + static_cast<int>(rng() % 3);
      const int s = 1 + static_cast<int>(rng() % 2);
      std::vector<int> k;
      for (int i = 0; i < r + s; ++i) k.push_back(1 + static_cast<int>(rng() % 3));
      const ModelSpec model = random_model(rng, r, s, k);
      std::vector<long> occ;
      for (int i = 0; i < r + s; ++i) occ.push_back(static_cast<long>(rng() % 8));
      const Sector sector = sector_from_occupations(model, occ);
      std::vector<oracle::Occ> basis;
      for (long n = 0; n <= sector.N(); ++n) basis.push_back(occupations_at(sector, model, n));
      const Eigen::MatrixXd brute = oracle::dense_block(model, basis);
      const Eigen::MatrixXd mine = build_sector_matrix(model, sector).dense();
      CHECK((brute - mine).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, brute.cwiseAbs().maxCoeff()));
    }
  }

  TEST_CASE("fock and monomial spectra agree") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 40; ++trial) {
      const int r = 1 + static_cast<int>(rng() % 3);
      const int s = 1 + static_cast<int>(rng() % 3);
      std::vector<int> k;
      for (int i = 0; i < r + s; ++i) k.push_back(1 + static_cast<int>(rng() % 3));
      const ModelSpec model = random_model(rng, r, s, k);
      std::vector<long> occ;
      for (int i = 0; i < r + s; ++i) occ.push_back(static_cast<long>(rng() % 12));
      const Sector sector = sector_from_occupations(model, occ);
      if (sector.N() > 20) continue;
      const auto a = diagonalize(build_sector_matrix(model, sector));
      const auto b = diagonalize(build_monomial_matrix(model, sector));
      REQUIRE(a.energies.size() == b.energies.size());
      double scale = 1;
      for (double e : a.energies) scale = std::max(scale, std::abs(e));
      for (std::size_t j = 0; j < a.energies.size(); ++j) CHECK(std::abs(a.energies[j] - b.energies[j]) <= 1e-10 * scale);
    }
  }

  TEST_CASE("diagonal block sorts") {
    TridiagonalBlock b;
    b.diag = {3, -1, 2};
    b.up = {0, 0};
    b.down = {0, 0};
    CHECK(diagonalize(b).energies == std::vector<double>{-1, 2, 3});
  }

  TEST_CASE("monomial similarity scaling") {
    const ModelSpec model = preset(PresetId::C, {}, {}, make_rational(7, 10));
    const Sector s = preset_sector(PresetId::C, model, {5, 1, 2});
    const auto fock = build_sector_matrix(model, s);
    const auto mono = build_monomial_matrix(model, s);
    const auto d = monomial_scaling(model, s);
    for (std::size_t n = 0; n < fock.up.size(); ++n) {
      CHECK(mono.up[n] == doctest::Approx(fock.up[n] * d[n + 1] / d[n]));
      CHECK(mono.down[n] == doctest::Approx(fock.down[n] * d[n] / d[n + 1]));
    }
  }
}

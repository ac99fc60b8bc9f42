#include "mbqes/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "mbqes/diffop.hpp"
#include "mbqes/linalg.hpp"
#include "mbqes/polyalg.hpp"

namespace mbqes {

Eigen::MatrixXd TridiagonalBlock::dense() const {
  const long n = dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (long i = 0; i < n; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
  for (long i = 0; i + 1 < n; ++i) {
    m(i + 1, i) = up[static_cast<std::size_t>(i)];
    m(i, i + 1) = down[static_cast<std::size_t>(i)];
  }
  return m;
}

namespace {

Rational diagonal_energy(const ModelSpec& model, const Occupations& occ) {
  Rational e = 0;
  for (int i = 0; i < model.modes(); ++i) {
    const long mi = occ[static_cast<std::size_t>(i)];
    e += model.w[static_cast<std::size_t>(i)] * mi;
    for (int j = i; j < model.modes(); ++j) e += model.quadratic(i, j) * mi * occ[static_cast<std::size_t>(j)];
  }
  return e;
}

}  // namespace

TridiagonalBlock build_sector_matrix(const ModelSpec& model, const Sector& sector) {
  TridiagonalBlock block;
  block.basis = Basis::fock;
  const double g = to_double(model.g);
  for (long n = 0; n <= sector.N(); ++n) {
    const Occupations occ = occupations_at(sector, model, n);
    block.diag.push_back(to_double(diagonal_energy(model, occ)));
    if (n < sector.N()) block.up.push_back(g * interaction_element(model, occ));
  }
  block.down = block.up;
  return block;
}

TridiagonalBlock build_monomial_matrix(const ModelSpec& model, const Sector& sector) {
  const HopCoefficients hop = hop_coefficients(model, sector);
  TridiagonalBlock block;
  block.basis = Basis::monomial;
  for (long n = 0; n <= sector.N(); ++n) {
    block.diag.push_back(to_double(hop.diag(Rational(n))));
    if (n < sector.N()) {
      block.up.push_back(to_double(hop.raise(Rational(n))));
      block.down.push_back(to_double(hop.lower(Rational(n + 1))));
    }
  }
  return block;
}

std::vector<double> monomial_scaling(const ModelSpec& model, const Sector& sector) {
  ModelSpec unit = model;
  unit.g = 1;
  const HopCoefficients hop = hop_coefficients(unit, sector);
  std::vector<double> d{1.0};
  for (long n = 0; n < sector.N(); ++n) {
    const Rational ratio = hop.raise(Rational(n)) / hop.lower(Rational(n + 1));
    d.push_back(d.back() * std::sqrt(to_double(ratio)));
  }
  return d;
}

namespace {

void fix_phase(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  if (v(idx) < 0) v = -v;
}

double max_residual(const TridiagonalBlock& block, const SpectrumResult& res) {
  const Eigen::MatrixXd h = block.dense();
  double worst = 0;
  for (std::size_t j = 0; j < res.energies.size(); ++j) {
    const Eigen::VectorXd v = res.vectors.col(static_cast<Eigen::Index>(j));
    worst = std::max(worst, (h * v - res.energies[j] * v).norm() / v.norm());
  }
  return worst;
}

SpectrumResult diagonalize_symmetric(const TridiagonalBlock& block) {
  const Eigen::Index n = block.dim();
  Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(block.diag.data(), n);
  Eigen::VectorXd sub(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index i = 0; i + 1 < n; ++i) sub(i) = block.up[static_cast<std::size_t>(i)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw std::runtime_error("symmetric tridiagonal eigensolver did not converge");
  SpectrumResult res;
  res.energies.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  res.vectors = solver.eigenvectors();
  return res;
}

SpectrumResult diagonalize_general(const TridiagonalBlock& block) {
  const Eigen::Index n = block.dim();
  Eigen::MatrixXd h = block.dense();
  const Eigen::VectorXd scale = balance(h);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(h, true);
  if (solver.info() != Eigen::Success) throw std::runtime_error("general eigensolver did not converge");

  const Eigen::VectorXcd values = solver.eigenvalues();
  const Eigen::MatrixXcd vectors = solver.eigenvectors();
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return values(a).real() < values(b).real(); });

  SpectrumResult res;
  res.vectors.resize(n, n);
  double spread = 0;
  for (Eigen::Index j = 0; j < n; ++j) spread = std::max(spread, std::abs(values(j)));
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = idx[static_cast<std::size_t>(j)];
    if (std::abs(values(src).imag()) > 1e-8 * std::max(spread, 1.0)) {
      res.warnings.push_back("eigenvalue " + std::to_string(j) + " has a non-negligible imaginary part");
    }
    res.energies.push_back(values(src).real());
    // Undo the balancing similarity; a real eigenvalue has a real
    // eigenvector up to a complex phase, removed via the largest entry.
    Eigen::VectorXcd v = scale.cwiseProduct(vectors.col(src).real()).cast<std::complex<double>>() +
                         std::complex<double>(0, 1) * scale.cwiseProduct(vectors.col(src).imag());
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    v *= std::abs(v(big)) / v(big);
    res.vectors.col(j) = v.real().normalized();
  }
  return res;
}

SpectrumResult diagonalize_symmetrized(const TridiagonalBlock& sym, const std::vector<double>& scale) {
  SpectrumResult res = diagonalize_symmetric(sym);
  for (Eigen::Index j = 0; j < res.vectors.cols(); ++j) {
    for (Eigen::Index n = 0; n < res.vectors.rows(); ++n) res.vectors(n, j) *= scale[static_cast<std::size_t>(n)];
    res.vectors.col(j).normalize();
  }
  return res;
}

}  // namespace

bool symmetrize(const TridiagonalBlock& block, TridiagonalBlock& sym, std::vector<double>& scale) {
  sym = TridiagonalBlock{};
  sym.basis = Basis::fock;
  sym.diag = block.diag;
  scale.assign(1, 1.0);
  for (std::size_t n = 0; n < block.up.size(); ++n) {
    const double a = block.up[n];
    const double c = block.down[n];
    if (!((a > 0 && c > 0) || (a < 0 && c < 0))) return false;
    scale.push_back(scale.back() * std::sqrt(a / c));
    sym.up.push_back(std::copysign(std::sqrt(std::abs(a)) * std::sqrt(std::abs(c)), a));
  }
  sym.down = sym.up;
  return true;
}

SpectrumResult diagonalize(const TridiagonalBlock& block) {
  const long n = block.dim();
  if (n == 0) throw std::invalid_argument("empty block");
  if (static_cast<long>(block.up.size()) != n - 1 || static_cast<long>(block.down.size()) != n - 1) {
    throw std::invalid_argument("malformed tridiagonal block");
  }
  SpectrumResult res;
  TridiagonalBlock sym;
  std::vector<double> scale;
  if (block.basis == Basis::fock) {
    res = diagonalize_symmetric(block);
  } else if (symmetrize(block, sym, scale)) {
    res = diagonalize_symmetrized(sym, scale);
  } else {
    res = diagonalize_general(block);
  }
  for (Eigen::Index j = 0; j < res.vectors.cols(); ++j) fix_phase(res.vectors.col(j));
  res.residual_norm = max_residual(block, res);

  double offdiag = 0;
  for (std::size_t i = 0; i < block.up.size(); ++i) {
    offdiag = std::max({offdiag, std::abs(block.up[i]), std::abs(block.down[i])});
  }
  if (n > 61 && offdiag > 1e12) {
    res.warnings.push_back("block of dimension " + std::to_string(n) +
                           " has off-diagonal elements up to " + std::to_string(offdiag) +
                           "; spectrum may be inaccurate");
  }
  return res;
}

}  // namespace mbqes

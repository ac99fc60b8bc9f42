#include "mbqes/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace mbqes {

Eigen::VectorXd balance(Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  constexpr double gamma = 0.95;
  bool changed = true;
  for (int sweep = 0; changed && sweep < 100; ++sweep) {
    changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double col = m.col(i).lpNorm<1>() - std::abs(m(i, i));
      const double row = m.row(i).lpNorm<1>() - std::abs(m(i, i));
      if (col == 0 || row == 0) continue;
      int exponent = 0;
      std::frexp(row / col, &exponent);
      exponent /= 2;
      if (exponent == 0) continue;
      const double f = std::ldexp(1.0, exponent);
      if (col * f + row / f < gamma * (col + row)) {
        m.col(i) *= f;
        m.row(i) /= f;
        d(i) *= f;
        changed = true;
      }
    }
  }
  return d;
}

std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("polynomial has no coefficients");
  const auto degree = static_cast<Eigen::Index>(coeffs.size()) - 1;
  const double lead = coeffs.back();
  if (lead == 0) throw std::invalid_argument("leading coefficient is zero");
  if (degree == 0) return {};
  if (degree == 1) return {std::complex<double>(-coeffs[0] / lead, 0)};

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  companion.diagonal(-1).setOnes();
  for (Eigen::Index i = 0; i < degree; ++i) companion(i, degree - 1) = -coeffs[static_cast<std::size_t>(i)] / lead;
  balance(companion);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("companion matrix eigensolver did not converge");
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(degree));
  for (Eigen::Index i = 0; i < degree; ++i) roots[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  return roots;
}

}  // namespace mbqes

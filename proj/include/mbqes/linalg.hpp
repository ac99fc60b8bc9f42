#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mbqes {

// Parlett-Reinsch balancing with power-of-two scalings, in place. Returns
// d such that the balanced matrix is diag(d)^-1 * m * diag(d); eigenvectors
// of the original matrix are diag(d) times those of the balanced one.
Eigen::VectorXd balance(Eigen::MatrixXd& m);

// Roots of sum_i coeffs[i] z^i (ascending) as eigenvalues of the balanced
// companion matrix. The leading coefficient must be non-zero.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs);

}  // namespace mbqes

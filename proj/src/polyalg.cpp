#include "mbqes/polyalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mbqes {

Rational phi_polynomial(int k, const Rational& x) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const long kk = static_cast<long>(k) * k;
  Rational prod = 1;
  for (int i = 1; i <= k; ++i) prod *= x + make_rational(static_cast<long>(i) * k - 1, kk);
  return casimir_value(k) - prod;
}

Rational casimir_value(int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const long kk = static_cast<long>(k) * k;
  Rational prod = 1;
  for (int j = 1; j <= k; ++j) prod *= make_rational(j - k, k) - make_rational(1, kk);
  return prod;
}

TruncatedGeneratorSet make_generators(int k, int trunc) {
  if (k < 1 || trunc < 1) throw std::invalid_argument("k and trunc must be positive");
  TruncatedGeneratorSet g;
  g.k = k;
  g.trunc = trunc;
  g.qplus = Eigen::MatrixXd::Zero(trunc, trunc);
  g.qzero = Eigen::MatrixXd::Zero(trunc, trunc);
  const double norm = std::pow(std::sqrt(static_cast<double>(k)), k);
  for (int m = 0; m < trunc; ++m) {
    g.qzero(m, m) = (m + 1.0 / k) / k;
    if (m + k < trunc) {
      double ratio = 1;
      for (int i = 1; i <= k; ++i) ratio *= m + i;
      g.qplus(m + k, m) = std::sqrt(ratio) / norm;
    }
  }
  g.qminus = g.qplus.transpose();
  return g;
}

AlgebraResiduals check_algebra(const TruncatedGeneratorSet& gens) {
  const int k = gens.k;
  const int top = gens.trunc - 2 * k;
  AlgebraResiduals res;
  if (top < 0) return res;
  res.interior_states = top + 1;

  const Eigen::MatrixXd& qp = gens.qplus;
  const Eigen::MatrixXd& qm = gens.qminus;
  const Eigen::MatrixXd& q0 = gens.qzero;
  const Eigen::MatrixXd raise = q0 * qp - qp * q0 - qp;
  const Eigen::MatrixXd lower = q0 * qm - qm * q0 + qm;
  const Eigen::MatrixXd comm = qp * qm - qm * qp;
  const Eigen::MatrixXd mp = qm * qp;
  const double casimir = to_double(casimir_value(k));

  for (int m = 0; m <= top; ++m) {
    const Rational x = (Rational(m) + make_rational(1, k)) / k;
    const double phi0 = to_double(phi_polynomial(k, x));
    const double phi1 = to_double(phi_polynomial(k, x - 1));
    Eigen::VectorXd comm_col = comm.col(m);
    comm_col(m) -= phi0 - phi1;
    Eigen::VectorXd cas_col = mp.col(m);
    cas_col(m) += phi0 - casimir;
    res.raise = std::max(res.raise, raise.col(m).cwiseAbs().maxCoeff());
    res.lower = std::max(res.lower, lower.col(m).cwiseAbs().maxCoeff());
    res.commutator = std::max(res.commutator, comm_col.cwiseAbs().maxCoeff());
    res.casimir = std::max(res.casimir, cas_col.cwiseAbs().maxCoeff());
  }
  return res;
}

namespace {

// sqrt(prod factors), rejecting negative factors unless the product is zero.
double sqrt_of_product(const std::vector<Rational>& factors) {
  Rational prod = 1;
  bool has_zero = false;
  for (const Rational& f : factors) {
    if (f == 0) has_zero = true;
    prod *= f;
  }
  if (has_zero) return 0.0;
  for (const Rational& f : factors) {
    if (f < 0) throw std::domain_error("negative factor " + to_string(f) + " under a square root: invalid sector");
  }
  return std::sqrt(to_double(prod));
}

}  // namespace

LadderCoefficients ladder_coefficients(const ModelSpec& model, const Sector& sector) {
  const ModelSpec cm = canonical_model(model, sector);
  const long top = sector.N();
  const Rational& q_r = sector.q_r();

  Rational mean_s1 = 0;
  for (int c = 0; c < cm.r; ++c) mean_s1 += sector.s1(c);
  mean_s1 /= cm.r;

  // Factors of P_+ (sign = +1) or P_- (sign = -1) acting on level n.
  auto factors = [&](long n, int sign) {
    std::vector<Rational> f;
    for (int c = 0; c < cm.modes(); ++c) {
      const int k = cm.k[static_cast<std::size_t>(c)];
      const long kk = static_cast<long>(k) * k;
      for (int i = 1; i <= k; ++i) {
        const Rational rising = make_rational(static_cast<long>(i) * k - 1, kk);
        const Rational falling = make_rational(static_cast<long>(i - 1) * k + 1, kk);
        if (c < cm.r) {
          const Rational base = n + q_r + sector.s1(c);
          f.push_back(sign > 0 ? Rational(base + rising) : Rational(base - falling));
        } else {
          const Rational base = 2 * sector.kappa - n - q_r - sector.t + sector.s2(c - cm.r);
          f.push_back(sign > 0 ? Rational(base - falling) : Rational(base + rising));
        }
      }
    }
    return f;
  };

  LadderCoefficients out;
  for (long n = 0; n <= top; ++n) {
    out.diag.push_back(to_double(-sector.kappa + q_r + n + mean_s1));
    out.down.push_back(sqrt_of_product(factors(n, -1)));
    if (n < top) out.up.push_back(sqrt_of_product(factors(n, +1)));
  }
  return out;
}

double interaction_element(const ModelSpec& model, std::span<const long> occupations) {
  if (static_cast<int>(occupations.size()) != model.modes()) {
    throw std::invalid_argument("occupation vector has wrong length");
  }
  long largest = 0;
  for (int i = 0; i < model.modes(); ++i) {
    const long m = occupations[static_cast<std::size_t>(i)];
    const long k = model.k[static_cast<std::size_t>(i)];
    if (m < 0) throw std::invalid_argument("negative occupation");
    if (!model.in_creation_group(i) && m < k) return 0.0;
    largest = std::max(largest, model.in_creation_group(i) ? m + k : m);
  }
  if (largest <= 20) {
    Integer prod = 1;
    for (int i = 0; i < model.modes(); ++i) {
      const long m = occupations[static_cast<std::size_t>(i)];
      const long k = model.k[static_cast<std::size_t>(i)];
      for (long j = 1; j <= k; ++j) prod *= model.in_creation_group(i) ? m + j : m - j + 1;
    }
    return std::sqrt(prod.get_d());
  }
  double log_sum = 0;
  for (int i = 0; i < model.modes(); ++i) {
    const long m = occupations[static_cast<std::size_t>(i)];
    const long k = model.k[static_cast<std::size_t>(i)];
    for (long j = 1; j <= k; ++j) {
      log_sum += std::log(static_cast<double>(model.in_creation_group(i) ? m + j : m - j + 1));
    }
  }
  return std::exp(0.5 * log_sum);
}

double interaction_normalization(const ModelSpec& model) {
  double norm = 1;
  for (int k : model.k) norm *= std::pow(std::sqrt(static_cast<double>(k)), k);
  return norm;
}

}  // namespace mbqes

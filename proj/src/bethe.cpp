#include "mbqes/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "mbqes/hamiltonian.hpp"
#include "mbqes/linalg.hpp"
#include "mbqes/precise.hpp"

namespace mbqes {

const char* to_string(RootSource source) {
  switch (source) {
    case RootSource::extracted: return "extracted";
    case RootSource::refined: return "refined";
    case RootSource::direct: return "direct";
  }
  return "unknown";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double root_scale(std::span<const Complex> roots) {
  double scale = 1;
  for (const Complex& a : roots) scale = std::max(scale, std::abs(a));
  return scale;
}

double min_separation(std::span<const Complex> roots) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < roots.size(); ++p) {
    for (std::size_t q = p + 1; q < roots.size(); ++q) best = std::min(best, std::abs(roots[p] - roots[q]));
  }
  return best;
}

bool is_degenerate(std::span<const Complex> roots, double separation) {
  return min_separation(roots) < separation * root_scale(roots);
}

double abs_eval(const Polynomial<Complex>& p, double x) {
  double acc = 0;
  const auto& c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + std::abs(*it);
  return acc;
}

// The expanded operator in floating point, with coefficient magnitudes for
// residual scaling.
struct NumericOperator {
  std::vector<Polynomial<Complex>> p;
  std::vector<Polynomial<Complex>> dp;

  explicit NumericOperator(const DiffOpForm& op) {
    for (const auto& pi : op.p) {
      p.push_back(pi.cast<Complex>());
      dp.push_back(p.back().derivative());
    }
  }

  int order() const { return static_cast<int>(p.size()) - 1; }
};

// psi and its derivatives up to one past the operator order.
std::vector<Polynomial<Complex>> derivative_tower(const Polynomial<Complex>& psi, int count) {
  std::vector<Polynomial<Complex>> out{psi};
  for (int i = 1; i < count; ++i) out.push_back(out.back().derivative());
  return out;
}

struct PointValue {
  Complex value;
  double scale = 0;
};

// (H psi)(z) and the sum of term magnitudes.
PointValue apply_at(const NumericOperator& op, const std::vector<Polynomial<Complex>>& tower, Complex z) {
  PointValue out;
  const double az = std::abs(z);
  for (std::size_t i = 0; i < op.p.size() && i < tower.size(); ++i) {
    out.value += op.p[i](z) * tower[i](z);
    out.scale += abs_eval(op.p[i], az) * abs_eval(tower[i], az);
  }
  return out;
}

// d/dz (H psi)(z)
Complex apply_derivative_at(const NumericOperator& op, const std::vector<Polynomial<Complex>>& tower, Complex z) {
  Complex acc = 0;
  for (std::size_t i = 0; i < op.p.size() && i < tower.size(); ++i) {
    acc += op.dp[i](z) * tower[i](z);
    if (i + 1 < tower.size()) acc += op.p[i](z) * tower[i + 1](z);
  }
  return acc;
}

std::vector<PointValue> robust_values(const NumericOperator& op, std::span<const Complex> roots) {
  const auto psi = Polynomial<Complex>::from_roots(roots);
  const auto tower = derivative_tower(psi, op.order() + 1);
  std::vector<PointValue> out;
  out.reserve(roots.size());
  for (const Complex& a : roots) out.push_back(apply_at(op, tower, a));
  return out;
}

double max_scaled(const std::vector<PointValue>& values) {
  double worst = 0;
  for (const auto& v : values) {
    const double mag = std::abs(v.value);
    if (mag == 0) continue;
    worst = std::max(worst, v.scale > 0 ? mag / v.scale : std::numeric_limits<double>::infinity());
  }
  return worst;
}

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::vector<PointValue> bethe_values(const NumericOperator& op, std::span<const Complex> roots, double separation) {
  if (roots.size() > 1 && min_separation(roots) < separation * root_scale(roots)) {
    throw std::domain_error("Bethe roots are too close for the simple-pole equations");
  }
  const int order = op.order();
  std::vector<PointValue> out;
  for (std::size_t p = 0; p < roots.size(); ++p) {
    const Complex a = roots[p];
    std::vector<Complex> e(static_cast<std::size_t>(std::max(order, 1)), Complex(0));
    std::vector<double> e_abs(e.size(), 0.0);
    e[0] = 1;
    e_abs[0] = 1;
    std::size_t seen = 0;
    for (std::size_t m = 0; m < roots.size(); ++m) {
      if (m == p) continue;
      const Complex x = 1.0 / (a - roots[m]);
      ++seen;
      for (std::size_t j = std::min(seen, e.size() - 1); j >= 1; --j) {
        e[j] += e[j - 1] * x;
        e_abs[j] += e_abs[j - 1] * std::abs(x);
      }
    }
    const double aa = std::abs(a);
    PointValue v;
    if (order >= 1) {
      v.value = op.p[1](a);
      v.scale = abs_eval(op.p[1], aa);
    }
    for (int i = 2; i <= order; ++i) {
      const double fi = factorial(i);
      v.value += op.p[static_cast<std::size_t>(i)](a) * fi * e[static_cast<std::size_t>(i - 1)];
      v.scale += abs_eval(op.p[static_cast<std::size_t>(i)], aa) * fi * e_abs[static_cast<std::size_t>(i - 1)];
    }
    out.push_back(v);
  }
  return out;
}

// Largest distance in a greedy nearest-neighbour matching of two root sets.
double match_distance(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0;
  for (const Complex& x : a) {
    std::size_t best = b.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!used[j] && std::abs(x - b[j]) < best_d) {
        best_d = std::abs(x - b[j]);
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

}  // namespace

std::vector<Complex> bethe_residuals(const DiffOpForm& op, std::span<const Complex> roots, double min_separation) {
  const NumericOperator nop(op);
  std::vector<Complex> out;
  for (const auto& v : bethe_values(nop, roots, min_separation)) out.push_back(v.value);
  return out;
}

std::vector<Complex> robust_residuals(const DiffOpForm& op, std::span<const Complex> roots) {
  if (static_cast<long>(roots.size()) > op.N) throw std::invalid_argument("more roots than the sector allows");
  const NumericOperator nop(op);
  std::vector<Complex> out;
  for (const auto& v : robust_values(nop, roots)) out.push_back(v.value);
  return out;
}

double max_scaled_robust_residual(const DiffOpForm& op, std::span<const Complex> roots) {
  return max_scaled(robust_values(NumericOperator(op), roots));
}

double max_scaled_bethe_residual(const DiffOpForm& op, std::span<const Complex> roots) {
  return max_scaled(bethe_values(NumericOperator(op), roots, 0.0));
}

RootExtraction roots_from_eigenvector(std::span<const double> coeffs, double deflation) {
  double biggest = 0;
  for (double c : coeffs) biggest = std::max(biggest, std::abs(c));
  if (biggest == 0) throw std::invalid_argument("eigenvector is identically zero");
  std::size_t top = coeffs.size() - 1;
  while (std::abs(coeffs[top]) <= deflation * biggest) --top;
  RootExtraction out;
  out.reduced = top + 1 < coeffs.size();
  out.roots = polynomial_roots(coeffs.subspan(0, top + 1));
  return out;
}

Rational energy_constant(const ModelSpec& model, const Sector& sector) {
  const ModelSpec cm = canonical_model(model, sector);
  const int r = cm.r;
  const int modes = cm.modes();
  const long n_top = sector.N();
  // Occupations of the n = N state, written as in the closed form.
  std::vector<Rational> x(static_cast<std::size_t>(modes));
  for (int i = 0; i < modes; ++i) {
    const Rational k = cm.k[static_cast<std::size_t>(i)];
    x[static_cast<std::size_t>(i)] = i < r ? Rational(k * (n_top + sector.q_r() + sector.s1(i)) - 1 / k)
                                           : Rational(k * (sector.q_rs() + sector.s2(i - r)) - 1 / k);
  }
  auto X = [&](int i) -> const Rational& { return x[static_cast<std::size_t>(i)]; };

  Rational e = 0;
  for (int i = 0; i < r; ++i) e += cm.quadratic(i, i) * X(i) * X(i);
  for (int i = r; i < modes; ++i) e += cm.quadratic(i, i) * X(i) * X(i);
  for (int j = r; j < modes; ++j) {
    for (int i = 0; i < r; ++i) e += cm.quadratic(i, j) * X(i) * X(j);
  }
  for (int j = 1; j < r; ++j) {
    for (int i = 0; i < j; ++i) e += cm.quadratic(i, j) * X(i) * X(j);
  }
  for (int j = r + 1; j < modes; ++j) {
    for (int i = r; i < j; ++i) e += cm.quadratic(i, j) * X(i) * X(j);
  }
  for (int i = 0; i < r; ++i) e += cm.w[static_cast<std::size_t>(i)] * X(i);
  for (int i = r; i < modes; ++i) e += cm.w[static_cast<std::size_t>(i)] * X(i);
  return e;
}

Rational energy_root_prefactor(const ModelSpec& model, const Sector& sector) {
  const ModelSpec cm = canonical_model(model, sector);
  Rational pref = cm.g;
  for (int j = cm.r; j < cm.modes(); ++j) {
    const int k = cm.k[static_cast<std::size_t>(j)];
    const long kk = static_cast<long>(k) * k;
    for (int i = 1; i <= k; ++i) {
      pref *= k * (sector.q_rs() + 1 + sector.s2(j - cm.r) - make_rational(static_cast<long>(i - 1) * k + 1, kk));
    }
  }
  return pref;
}

double energy_from_roots(const ModelSpec& model, const Sector& sector, std::span<const Complex> roots,
                         double imag_tol) {
  if (static_cast<long>(roots.size()) != sector.N()) {
    throw std::invalid_argument("closed-form energy needs exactly N = " + std::to_string(sector.N()) + " roots");
  }
  const double constant = to_double(energy_constant(model, sector));
  const double pref = to_double(energy_root_prefactor(model, sector));
  Complex sum = 0;
  double magnitude = 0;
  for (const Complex& a : roots) {
    sum += a;
    magnitude += std::abs(a);
  }
  const Complex e = constant - pref * sum;
  const double scale = std::max(1.0, std::abs(constant) + std::abs(pref) * magnitude);
  if (std::abs(e.imag()) > imag_tol * scale) {
    throw std::domain_error("energy has imaginary part " + std::to_string(e.imag()) + ": roots not conjugate-closed");
  }
  return e.real();
}

double canonicalize_roots(std::vector<Complex>& roots) {
  const double scale = root_scale(roots);
  const double real_tol = 1e-10 * scale;
  double moved = 0;
  std::vector<bool> done(roots.size(), false);
  for (std::size_t p = 0; p < roots.size(); ++p) {
    if (done[p] || roots[p].imag() <= real_tol) continue;
    std::size_t partner = roots.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < roots.size(); ++q) {
      if (done[q] || q == p || roots[q].imag() >= -real_tol) continue;
      const double d = std::abs(roots[q] - std::conj(roots[p]));
      if (d < best) {
        best = d;
        partner = q;
      }
    }
    if (partner == roots.size()) continue;
    const Complex mid = 0.5 * (roots[p] + std::conj(roots[partner]));
    moved = std::max({moved, std::abs(mid - roots[p]), std::abs(std::conj(mid) - roots[partner])});
    roots[p] = mid;
    roots[partner] = std::conj(mid);
    done[p] = done[partner] = true;
  }
  for (std::size_t p = 0; p < roots.size(); ++p) {
    if (!done[p] && std::abs(roots[p].imag()) <= real_tol) {
      moved = std::max(moved, std::abs(roots[p].imag()));
      roots[p].imag(0);
    } else if (!done[p]) {
      // Unpaired complex root: report how far it is from its missing mirror.
      moved = std::max(moved, std::abs(roots[p].imag()));
    }
  }
  std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return moved;
}

namespace {

// Damped Newton on the simple-pole equations, central-difference Jacobian.
// Returns the final scaled residual.
double newton_bethe(const NumericOperator& nop, std::vector<Complex>& roots, double tol, int max_iter, int& iterations) {
  const auto n = static_cast<Eigen::Index>(roots.size());
  // Line-search merit: 2-norm of the scaled residuals.
  auto measure = [&](std::span<const Complex> a) -> double {
    try {
      double sum = 0;
      for (const auto& v : bethe_values(nop, a, 1e-12)) {
        if (v.value != Complex(0)) sum += std::norm(v.value) / (v.scale * v.scale);
      }
      return std::sqrt(sum);
    } catch (const std::domain_error&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  auto values = [&](std::span<const Complex> a) {
    Eigen::VectorXcd f(n);
    const auto v = bethe_values(nop, a, 1e-12);
    for (Eigen::Index p = 0; p < n; ++p) f(p) = v[static_cast<std::size_t>(p)].value;
    return f;
  };

  double current = measure(roots);
  iterations = 0;
  for (; iterations < max_iter && std::isfinite(current) && current > tol; ++iterations) {
    Eigen::VectorXcd f;
    Eigen::MatrixXcd jac(n, n);
    try {
      f = values(roots);
      for (Eigen::Index q = 0; q < n; ++q) {
        const double h = 1e-6 * std::max(1.0, std::abs(roots[static_cast<std::size_t>(q)]));
        std::vector<Complex> plus = roots;
        std::vector<Complex> minus = roots;
        plus[static_cast<std::size_t>(q)] += h;
        minus[static_cast<std::size_t>(q)] -= h;
        jac.col(q) = (values(plus) - values(minus)) / (2 * h);
      }
    } catch (const std::domain_error&) {
      break;
    }
    const Eigen::VectorXcd step = jac.fullPivLu().solve(f);
    if (!step.allFinite()) break;
    bool improved = false;
    double lambda = 1;
    for (int halving = 0; halving < 12; ++halving, lambda *= 0.5) {
      std::vector<Complex> trial = roots;
      for (Eigen::Index p = 0; p < n; ++p) trial[static_cast<std::size_t>(p)] -= lambda * step(p);
      const double value = measure(trial);
      if (value < current) {
        roots = std::move(trial);
        current = value;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  try {
    return max_scaled(bethe_values(nop, roots, 1e-12));
  } catch (const std::domain_error&) {
    return std::numeric_limits<double>::infinity();
  }
}

struct Eigenpolynomials {
  std::vector<double> energies;
  std::vector<std::vector<double>> coeffs;  // ascending, monic when g != 0
};

// Eigenvalues of the monomial block through its symmetrised form; each
// eigenpolynomial is then rebuilt from the three-term recurrence, run
// downward from z^N and upward from 1 and joined where the eigenvector
// peaks, so every coefficient carries a small relative error.
Eigenpolynomials monomial_eigenpolynomials(const ModelSpec& model, const Sector& sector) {
  const TridiagonalBlock block = build_monomial_matrix(model, sector);
  const long dim = block.dim();
  const long top = dim - 1;
  Eigenpolynomials out;
  if (model.g == 0 || dim == 1) {
    std::vector<long> idx(static_cast<std::size_t>(dim));
    for (long n = 0; n < dim; ++n) idx[static_cast<std::size_t>(n)] = n;
    std::stable_sort(idx.begin(), idx.end(), [&](long a, long b) {
      return block.diag[static_cast<std::size_t>(a)] < block.diag[static_cast<std::size_t>(b)];
    });
    for (long n : idx) {
      out.energies.push_back(block.diag[static_cast<std::size_t>(n)]);
      std::vector<double> e(static_cast<std::size_t>(dim), 0.0);
      e[static_cast<std::size_t>(n)] = 1;
      out.coeffs.push_back(std::move(e));
    }
    return out;
  }

  TridiagonalBlock sym;
  std::vector<double> scale;
  if (!symmetrize(block, sym, scale)) throw std::domain_error("monomial block has a vanishing hop inside the sector");
  const SpectrumResult res = diagonalize(sym);

  auto A = [&](long n) { return block.up[static_cast<std::size_t>(n)]; };
  auto B = [&](long n) { return block.diag[static_cast<std::size_t>(n)]; };
  auto C = [&](long n) { return block.down[static_cast<std::size_t>(n - 1)]; };
  for (long j = 0; j < dim; ++j) {
    const double e = res.energies[static_cast<std::size_t>(j)];
    Eigen::Index peak = 0;
    res.vectors.col(j).cwiseAbs().maxCoeff(&peak);
    const long k = peak;
    std::vector<double> u(static_cast<std::size_t>(dim), 0.0);
    auto U = [&](long n) -> double& { return u[static_cast<std::size_t>(n)]; };
    // A(n-1) u(n-1) + (B(n) - E) u(n) + C(n+1) u(n+1) = 0
    U(top) = 1;
    for (long n = top; n > k; --n) {
      U(n - 1) = -((B(n) - e) * U(n) + (n < top ? C(n + 1) * U(n + 1) : 0.0)) / A(n - 1);
    }
    std::vector<double> low(static_cast<std::size_t>(k + 1), 0.0);
    low[0] = 1;
    for (long n = 0; n < k; ++n) {
      const auto i = static_cast<std::size_t>(n);
      low[i + 1] = -((B(n) - e) * low[i] + (n > 0 ? A(n - 1) * low[i - 1] : 0.0)) / C(n + 1);
    }
    const double join = U(k) / low[static_cast<std::size_t>(k)];
    for (long n = 0; n < k; ++n) U(n) = low[static_cast<std::size_t>(n)] * join;
    out.energies.push_back(e);
    out.coeffs.push_back(std::move(u));
  }
  return out;
}

}  // namespace

int refine_roots(const DiffOpForm& op, std::vector<Complex>& roots, const SolverConfig& config, bool& converged) {
  const NumericOperator nop(op);
  const auto n = static_cast<Eigen::Index>(roots.size());
  converged = false;
  if (n == 0) {
    converged = true;
    return 0;
  }
  auto measure = [&](std::span<const Complex> a) { return max_scaled(robust_values(nop, a)); };

  double current = measure(roots);
  int iter = 0;
  for (; iter < config.max_iter; ++iter) {
    if (current <= config.tol) break;
    const auto psi = Polynomial<Complex>::from_roots(roots);
    const auto tower = derivative_tower(psi, nop.order() + 2);
    Eigen::VectorXcd f(n);
    Eigen::MatrixXcd jac(n, n);
    for (Eigen::Index p = 0; p < n; ++p) {
      const Complex a = roots[static_cast<std::size_t>(p)];
      f(p) = apply_at(nop, tower, a).value;
      jac(p, p) = apply_derivative_at(nop, tower, a);
    }
    for (Eigen::Index q = 0; q < n; ++q) {
      std::vector<Complex> others;
      for (Eigen::Index m = 0; m < n; ++m) {
        if (m != q) others.push_back(roots[static_cast<std::size_t>(m)]);
      }
      const auto psi_q = Polynomial<Complex>::from_roots(others);
      const auto tower_q = derivative_tower(psi_q, nop.order() + 1);
      for (Eigen::Index p = 0; p < n; ++p) jac(p, q) -= apply_at(nop, tower_q, roots[static_cast<std::size_t>(p)]).value;
    }
    const Eigen::VectorXcd step = jac.fullPivLu().solve(f);
    if (!step.allFinite()) break;

    bool improved = false;
    double lambda = 1;
    for (int halving = 0; halving < 12; ++halving, lambda *= 0.5) {
      std::vector<Complex> trial = roots;
      for (Eigen::Index p = 0; p < n; ++p) trial[static_cast<std::size_t>(p)] -= lambda * step(p);
      const double value = measure(trial);
      if (value < current) {
        roots = std::move(trial);
        current = value;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  converged = current <= config.tol;

  // Distinct roots: polish in root space, where the equations are better
  // conditioned than the expanded polynomial.
  if (!is_degenerate(roots, config.degenerate_separation)) {
    std::vector<Complex> polished = roots;
    int extra = 0;
    const double before = max_scaled(bethe_values(nop, roots, 0.0));
    const double pole = newton_bethe(nop, polished, config.tol, config.max_iter, extra);
    if (pole < before && measure(polished) <= std::max(current, config.accept_residual)) {
      roots = std::move(polished);
      iter += extra;
      converged = converged || pole <= config.tol;
    }
  }
  return iter;
}

std::vector<BetheSolution> solve_bethe(const ModelSpec& model, const Sector& sector, const SolverConfig& config) {
  const DiffOpForm op = expand_diffop(model, sector);
  const SpectrumResult fock = diagonalize(build_sector_matrix(model, sector));
  const Eigenpolynomials eig = monomial_eigenpolynomials(model, sector);

  std::vector<BetheSolution> out;
  for (std::size_t j = 0; j < eig.energies.size(); ++j) {
    BetheSolution sol;
    sol.level = static_cast<int>(j);
    sol.oracle_energy = fock.energies[j];
    // Only exact zeros are trimmed: the recurrence fixes the top coefficient.
    RootExtraction ext = roots_from_eigenvector(eig.coeffs[j], 0.0);
    sol.roots = std::move(ext.roots);
    sol.reduced = ext.reduced;
    sol.source = RootSource::extracted;
    if (!sol.reduced && model.g != 0 && !sol.roots.empty()) {
      const PreciseEigenpolynomial precise =
          precise_eigenpolynomial(op.hop, op.N, eig.energies[j], sol.roots, precise_bits(op.N));
      if (precise.converged) sol.roots = precise.roots;
    }
    if (!sol.reduced) {
      sol.iterations = refine_roots(op, sol.roots, config, sol.converged);
      if (sol.iterations > 0) sol.source = RootSource::refined;
    }
    sol.conjugate_defect = canonicalize_roots(sol.roots);
    sol.degenerate = sol.roots.size() > 1 && is_degenerate(sol.roots, config.degenerate_separation);
    sol.residual_robust = max_scaled_robust_residual(op, sol.roots);
    if (sol.reduced) sol.converged = sol.residual_robust <= config.accept_residual;
    sol.residual_bethe = sol.degenerate ? kNaN : max_scaled_bethe_residual(op, sol.roots);
    if (sol.reduced) {
      sol.energy = sol.oracle_energy;
    } else {
      try {
        sol.energy = energy_from_roots(model, sector, sol.roots);
      } catch (const std::domain_error&) {
        sol.energy = kNaN;
        sol.converged = false;
      }
    }
    out.push_back(std::move(sol));
  }
  return out;
}

std::vector<BetheSolution> solve_bethe_direct(const ModelSpec& model, const Sector& sector, const SolverConfig& config,
                                              std::span<const BetheSolution> reference) {
  const DiffOpForm op = expand_diffop(model, sector);
  const NumericOperator nop(op);
  const long n_roots = sector.N();
  std::vector<BetheSolution> found;
  if (n_roots == 0) {
    BetheSolution sol;
    sol.level = reference.empty() ? -1 : 0;
    sol.source = RootSource::direct;
    sol.energy = energy_from_roots(model, sector, {});
    sol.converged = true;
    found.push_back(sol);
    return found;
  }

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> log_radius(std::log(1.0 / 16), std::log(16.0));
  std::uniform_real_distribution<double> angle(0.0, 3.14159265358979323846);

  for (int start = 0; start < config.starts; ++start) {
    const double radius = std::exp(log_radius(rng));
    const auto pairs = std::uniform_int_distribution<long>(0, n_roots / 2)(rng);
    std::vector<Complex> roots;
    for (long i = 0; i < pairs; ++i) {
      const Complex z = std::polar(radius * (0.5 + 0.5 * std::abs(unit(rng))), angle(rng));
      roots.push_back(z);
      roots.push_back(std::conj(z));
    }
    while (static_cast<long>(roots.size()) < n_roots) roots.emplace_back(radius * unit(rng), 0.0);

    int iterations = 0;
    const double current = newton_bethe(nop, roots, config.tol, 2 * config.max_iter, iterations);
    if (!(current <= config.accept_residual)) continue;
    if (is_degenerate(roots, config.degenerate_separation)) continue;

    BetheSolution sol;
    sol.source = RootSource::direct;
    sol.roots = roots;
    sol.conjugate_defect = canonicalize_roots(sol.roots);
    const double scale = root_scale(sol.roots);
    bool duplicate = false;
    for (const auto& other : found) {
      if (match_distance(other.roots, sol.roots) <= config.dedup * scale) duplicate = true;
    }
    if (duplicate) continue;
    sol.residual_bethe = max_scaled_bethe_residual(op, sol.roots);
    sol.residual_robust = max_scaled_robust_residual(op, sol.roots);
    sol.converged = true;
    try {
      sol.energy = energy_from_roots(model, sector, sol.roots);
    } catch (const std::domain_error&) {
      sol.energy = kNaN;
    }
    sol.level = -1;
    for (const auto& ref : reference) {
      if (!ref.reduced && match_distance(ref.roots, sol.roots) <= 1e-6 * scale) {
        sol.level = ref.level;
        sol.oracle_energy = ref.oracle_energy;
      }
    }
    found.push_back(std::move(sol));
  }
  std::sort(found.begin(), found.end(), [](const BetheSolution& a, const BetheSolution& b) { return a.level < b.level; });
  return found;
}

ValidationReport validate_solutions(const ModelSpec& model, const Sector& sector, std::vector<BetheSolution> solutions,
                                    double tol, const SolverConfig& config) {
  ValidationReport report;
  report.sector_summary = describe(sector);
  report.dim = sector.dim;
  report.tolerance = tol;
  const DiffOpForm op = expand_diffop(model, sector);
  const SpectrumResult fock = diagonalize(build_sector_matrix(model, sector));
  const SpectrumResult mono = diagonalize(build_monomial_matrix(model, sector));
  double scale = 0;
  for (double e : fock.energies) scale = std::max(scale, std::abs(e));
  if (scale == 0) scale = 1;

  bool all_pass = static_cast<long>(solutions.size()) == sector.dim;
  for (auto& sol : solutions) {
    LevelRecord rec;
    rec.level = sol.level;
    const bool in_range = sol.level >= 0 && sol.level < sector.dim;
    rec.fock_energy = in_range ? fock.energies[static_cast<std::size_t>(sol.level)] : kNaN;
    rec.monomial_energy = in_range ? mono.energies[static_cast<std::size_t>(sol.level)] : kNaN;
    rec.reduced = static_cast<long>(sol.roots.size()) < sector.N();
    rec.degenerate = sol.roots.size() > 1 && is_degenerate(sol.roots, config.degenerate_separation);
    try {
      rec.residual_robust = max_scaled_robust_residual(op, sol.roots);
    } catch (const std::exception& e) {
      rec.residual_robust = kNaN;
      rec.note = e.what();
    }
    rec.residual_bethe = rec.degenerate ? kNaN : max_scaled_bethe_residual(op, sol.roots);
    if (rec.reduced) {
      rec.bethe_energy = rec.fock_energy;
      rec.note = "reduced-degree eigenpolynomial; energy taken from the oracle";
    } else {
      try {
        rec.bethe_energy = energy_from_roots(model, sector, sol.roots);
      } catch (const std::exception& e) {
        rec.bethe_energy = kNaN;
        rec.note = e.what();
      }
    }
    sol.energy = rec.bethe_energy;
    sol.residual_robust = rec.residual_robust;
    sol.residual_bethe = rec.residual_bethe;
    sol.degenerate = rec.degenerate;
    rec.max_rel_diff = std::max({std::abs(rec.fock_energy - rec.monomial_energy), std::abs(rec.fock_energy - rec.bethe_energy),
                                 std::abs(rec.monomial_energy - rec.bethe_energy)}) /
                       scale;
    if (std::isnan(rec.max_rel_diff)) rec.max_rel_diff = std::numeric_limits<double>::infinity();
    const bool residual_ok = rec.residual_robust <= config.accept_residual &&
                             (rec.degenerate || rec.residual_bethe <= config.accept_residual);
    rec.pass = in_range && rec.max_rel_diff <= tol && residual_ok;
    if (!residual_ok && rec.note.empty()) rec.note = "Bethe residual above acceptance threshold";
    report.max_energy_error = std::max(report.max_energy_error, rec.max_rel_diff);
    all_pass = all_pass && rec.pass;
    report.levels.push_back(rec);
  }
  report.solutions = std::move(solutions);
  report.pass = all_pass;
  return report;
}

ValidationReport cross_validate(const ModelSpec& model, const Sector& sector, double tol, const SolverConfig& config) {
  auto solutions = solve_bethe(model, sector, config);
  std::vector<BetheSolution> direct;
  if (config.direct) direct = solve_bethe_direct(model, sector, config, solutions);
  ValidationReport report = validate_solutions(model, sector, std::move(solutions), tol, config);
  if (config.direct) {
    report.direct_found = static_cast<int>(direct.size());
    for (const auto& d : direct) {
      if (d.level < 0) ++report.direct_unmatched;
    }
    report.pass = report.pass && report.direct_unmatched == 0;
  }
  return report;
}

std::string describe(const Sector& sector) {
  std::ostringstream os;
  auto list = [&os](const auto& v) {
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ')';
  };
  os << "q1=";
  list(sector.q1);
  os << " q2=";
  list(sector.q2);
  os << " l1=";
  list(sector.l1);
  os << " l2=";
  list(sector.l2);
  os << " kappa=" << sector.kappa << " t=" << sector.t << " N=" << sector.N() << " base=";
  list(sector.base_occupations);
  if (!sector.natural_order()) {
    os << " order=";
    list(sector.order);
  }
  return os.str();
}

}  // namespace mbqes

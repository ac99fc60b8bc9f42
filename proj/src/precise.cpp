#include "mbqes/precise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <gmpxx.h>

namespace mbqes {

namespace {

struct Mpc {
  mpf_class re;
  mpf_class im;
};

Mpc add(const Mpc& a, const Mpc& b) { return {a.re + b.re, a.im + b.im}; }
Mpc sub(const Mpc& a, const Mpc& b) { return {a.re - b.re, a.im - b.im}; }
Mpc mul(const Mpc& a, const Mpc& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }

Mpc div(const Mpc& a, const Mpc& b) {
  const mpf_class den = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}

double magnitude(const Mpc& a) { return std::hypot(a.re.get_d(), a.im.get_d()); }

}  // namespace

unsigned precise_bits(long N) { return static_cast<unsigned>(128 + 16 * std::max(N, 0L)); }

PreciseEigenpolynomial precise_eigenpolynomial(const HopCoefficients& hop, long N, double energy_guess,
                                               std::span<const std::complex<double>> root_guess, unsigned bits) {
  if (static_cast<long>(root_guess.size()) != N) throw std::invalid_argument("need N root guesses");
  auto F = [bits](const Rational& q) { return mpf_class(q, bits); };
  std::vector<mpf_class> A, B, C;
  for (long n = 0; n <= N; ++n) {
    A.push_back(F(hop.raise(Rational(n))));
    B.push_back(F(hop.diag(Rational(n))));
    C.push_back(F(hop.lower(Rational(n))));
  }
  for (long n = 0; n < N; ++n) {
    if (A[static_cast<std::size_t>(n)] == 0) throw std::domain_error("raising coefficient vanishes inside the sector");
  }

  // A(n-1) u(n-1) + (B(n) - E) u(n) + C(n+1) u(n+1) = 0, u(N) = 1; row 0
  // is left over as the characteristic function r(E).
  std::vector<mpf_class> u(static_cast<std::size_t>(N + 1), mpf_class(0, bits));
  std::vector<mpf_class> du(u);
  auto sweep = [&](const mpf_class& e, mpf_class& r, mpf_class& dr) {
    u[static_cast<std::size_t>(N)] = 1;
    du[static_cast<std::size_t>(N)] = 0;
    for (long n = N; n > 0; --n) {
      const auto i = static_cast<std::size_t>(n);
      mpf_class next(0, bits), dnext(0, bits);
      if (n < N) {
        next = C[i + 1] * u[i + 1];
        dnext = C[i + 1] * du[i + 1];
      }
      u[i - 1] = -((B[i] - e) * u[i] + next) / A[i - 1];
      du[i - 1] = -((B[i] - e) * du[i] - u[i] + dnext) / A[i - 1];
    }
    r = (B[0] - e) * u[0];
    dr = (B[0] - e) * du[0] - u[0];
    if (N > 0) {
      r += C[1] * u[1];
      dr += C[1] * du[1];
    }
  };

  PreciseEigenpolynomial out;
  mpf_class e(energy_guess, bits), r(0, bits), dr(0, bits);
  const mpf_class e_tol = [&] {
    mpf_class t(1, bits);
    mpf_div_2exp(t.get_mpf_t(), t.get_mpf_t(), bits / 2);
    return t;
  }();
  bool e_converged = false;
  for (int iter = 0; iter < 100; ++iter) {
    sweep(e, r, dr);
    if (dr == 0) break;
    const mpf_class step = r / dr;
    e -= step;
    if (abs(step) <= e_tol * (1 + abs(e))) {
      e_converged = true;
      break;
    }
  }
  sweep(e, r, dr);
  out.energy = e.get_d();

  // Aberth iteration on sum u_n z^n.
  const auto count = static_cast<std::size_t>(N);
  std::vector<Mpc> z;
  for (std::size_t p = 0; p < count; ++p) {
    z.push_back({mpf_class(root_guess[p].real(), bits), mpf_class(root_guess[p].imag(), bits)});
  }
  // Coincident starts stall the iteration; spread them slightly.
  for (std::size_t p = 0; p < count; ++p) {
    for (std::size_t m = 0; m < p; ++m) {
      if (magnitude(sub(z[p], z[m])) < 1e-12 * std::max(1.0, magnitude(z[p]))) {
        z[p].im += mpf_class(1e-8 * (static_cast<double>(p) + 1) * std::max(1.0, magnitude(z[p])), bits);
      }
    }
  }
  bool roots_converged = count == 0;
  for (int iter = 0; iter < 500 && !roots_converged; ++iter) {
    double worst = 0;
    for (std::size_t p = 0; p < count; ++p) {
      Mpc val{u[count], mpf_class(0, bits)};
      Mpc der{mpf_class(0, bits), mpf_class(0, bits)};
      for (std::size_t n = count; n-- > 0;) {
        der = add(mul(der, z[p]), val);
        val = add(mul(val, z[p]), Mpc{u[n], mpf_class(0, bits)});
      }
      if (der.re == 0 && der.im == 0) continue;
      const Mpc w = div(val, der);
      Mpc s{mpf_class(0, bits), mpf_class(0, bits)};
      for (std::size_t m = 0; m < count; ++m) {
        if (m != p) s = add(s, div(Mpc{mpf_class(1, bits), mpf_class(0, bits)}, sub(z[p], z[m])));
      }
      const Mpc delta = div(w, sub(Mpc{mpf_class(1, bits), mpf_class(0, bits)}, mul(w, s)));
      z[p] = sub(z[p], delta);
      worst = std::max(worst, magnitude(delta) / std::max(1.0, magnitude(z[p])));
    }
    roots_converged = worst < 1e-22;
  }
  for (const auto& root : z) out.roots.emplace_back(root.re.get_d(), root.im.get_d());
  out.converged = e_converged && roots_converged;
  return out;
}

}  // namespace mbqes

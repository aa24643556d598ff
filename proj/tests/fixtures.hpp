// Reference parameter sets and independent numerical oracles shared by the test binaries.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "gpl/modal.hpp"
#include "gpl/params.hpp"
#include "gpl/simulate.hpp"

namespace gpl::testing {

/// chi_g = 0: gamma_g = 1, rho/mu - J/alpha = -1, rho beta^2/(alpha gamma_g) = 1.
inline MaterialParams set_a() { return {1.0, 2.0, 2.0, 1.0, 1.0, 1.0, 2.0, 1.0}; }
/// SET-A with J = 1: equal speeds, chi_g = 1.
inline MaterialParams set_b() {
  auto p = set_a();
  p.J = 1.0;
  return p;
}
/// SET-A with c = 1: gamma_g = 0.
inline MaterialParams set_c() {
  auto p = set_a();
  p.c = 1.0;
  return p;
}
/// gamma_g = 0 and equal speeds.
inline MaterialParams set_d() {
  auto p = set_a();
  p.c = 1.0;
  p.J = 1.0;
  p.alpha = 1.0;
  return p;
}
inline PronyKernel unit_kernel() { return PronyKernel({{1.0, 1.0}}); }

struct RandomDraws {
  std::mt19937_64 rng;
  explicit RandomDraws(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

  MaterialParams params() {
    MaterialParams p;
    p.rho = uniform(0.5, 2.0);
    p.J = uniform(0.5, 2.0);
    p.c = uniform(0.5, 3.0);
    p.mu = uniform(0.5, 2.0);
    p.alpha = uniform(0.5, 2.0);
    p.xi = uniform(0.5, 3.0);
    const double bmax = std::sqrt(p.mu * p.xi);
    p.b = uniform(-0.95, 0.95) * bmax;
    if (std::abs(p.b) < 0.05) p.b = 0.05;
    p.beta = uniform(0.2, 1.5) * (integer(0, 1) ? 1.0 : -1.0);
    return p;
  }

  PronyKernel kernel(int max_terms = 3) {
    std::vector<PronyTerm> terms;
    const int m = integer(1, max_terms);
    for (int i = 0; i < m; ++i) terms.push_back({uniform(0.2, 2.0), uniform(0.3, 3.0)});
    return PronyKernel(std::move(terms));
  }
};

/// Adaptive Simpson quadrature, independent of every library quadrature path.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 50) {
  const auto simpson = [&](double lo, double hi, double flo, double fmid, double fhi) {
    return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  };
  const std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps,
          int d) -> double {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(lo, mid, flo, flm, fmid);
    const double right = simpson(mid, hi, fmid, frm, fhi);
    if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
      return left + right + (left + right - whole) / 15.0;
    }
    return rec(lo, mid, flo, flm, fmid, left, 0.5 * eps, d - 1) +
           rec(mid, hi, fmid, frm, fhi, right, 0.5 * eps, d - 1);
  };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, depth);
}

/// Classical RK4 for x' = F(t, x) on a fixed grid.
template <class State, class Rhs>
State rk4(Rhs&& rhs, State x, double t0, double t1, int steps) {
  const double h = (t1 - t0) / steps;
  double t = t0;
  for (int i = 0; i < steps; ++i) {
    const State k1 = rhs(t, x);
    const State k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1);
    const State k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2);
    const State k4 = rhs(t + h, x + h * k3);
    x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
  }
  return x;
}

/// Initial data exciting only the least damped eigenvalue pair of mode n: the real part of the
/// dominant eigenvector, rotated so its memory component vanishes (zero past history).
inline ModeInit dominant_mode_init(const MaterialParams& p, const PronyKernel& k, int n) {
  const auto pairs = eigenpairs(assemble_modal_matrix(p, k, n).entries);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < pairs.values.size(); ++i) {
    if (pairs.values(i).real() > pairs.values(best).real()) best = i;
  }
  const Eigen::VectorXcd v = pairs.vectors.col(best);
  const std::complex<double> scale = std::complex<double>(0.0, 1.0) / v(kMemory);
  const Eigen::VectorXd x = (scale * v).real();
  return {n, x(kU), x(kV), x(kPhi), x(kPsi), x(kTheta)};
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace gpl::testing

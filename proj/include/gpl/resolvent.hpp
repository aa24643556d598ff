/**
 * @file resolvent.hpp
 * @brief Resonant-mode resolvent analysis: with forcing sin(nx)/rho in the velocity equation
 *        at frequency lambda_n = n sqrt(mu/rho), the displacement amplitude is A_n = K1/K2 with
 *
 *          p1 = rho l^2 - mu n^2,  p2 = J l^2 - xi - alpha n^2,
 *          p3 = -c l^2 + n^2 (g(0) - khat(l)),
 *          K1 = p2 p3 + (beta n l)^2,  K2 = (b n)^2 p3.
 *
 *        Bounded amplitudes times lambda_n give unbounded resolvent norms unless chi_g = 0.
 */
#pragma once

#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "gpl/params.hpp"

namespace gpl {

using cplx = std::complex<double>;

struct ResonantMode {
  int n = 1;
  double lambda = 0.0;  ///< n sqrt(mu/rho), the root of p1
};

ResonantMode resonant_mode(const MaterialParams& p, int n);

struct PPolys {
  cplx p1, p2, p3;
};

PPolys p_polys(const MaterialParams& p, const PronyKernel& k, int n, double lambda);

struct AmplitudeTerms {
  ResonantMode mode;
  PPolys polys;
  cplx k1, k2;
  cplx amplitude;  ///< K1 / K2
};

/// Throws DivergentAmplitude when p3(lambda_n) vanishes to rounding.
AmplitudeTerms amplitude_terms(const MaterialParams& p, const PronyKernel& k, int n);
cplx modal_amplitude(const MaterialParams& p, const PronyKernel& k, int n);

enum class AmplitudeRegime {
  EqualSpeeds_GammaNonzero,
  UnequalSpeeds_GammaZero,
  DoubleDegenerate,
  Generic_ChiNonzero,
  Stable_ChiZero,
};

std::string_view to_string(AmplitudeRegime r) noexcept;

struct AmplitudeCase {
  AmplitudeRegime regime = AmplitudeRegime::Stable_ChiZero;
  std::optional<double> limit;  ///< empty: |A_n| grows without bound
};

/// Large-n limit of A_n. For gamma_g = 0 with unequal speeds the limit
/// -alpha mu (rho/mu - J/alpha)/(b^2 rho) is finite only when beta = 0; otherwise
/// A_n ~ -mu beta^2/(b^2 rho khat(lambda_n)) diverges and the limit is reported as unbounded.
AmplitudeCase amplitude_limit(const MaterialParams& p, const PronyKernel& k,
                              std::optional<double> tol = std::nullopt);

struct ResolventResponse {
  ResonantMode mode;
  Eigen::VectorXcd x;        ///< (u, v, phi, psi, theta, w...)
  double memory_norm_sq = 0.0;  ///< int kappa |eta(s)|^2 ds of the response
  double norm = 0.0;            ///< energy norm over (0, pi)
};

/// Solves (i lambda_n - M_n) x = f with f = e_v / rho. Throws SingularSystem.
ResolventResponse resolvent_solve(const MaterialParams& p, const PronyKernel& k, int n);

/// In the stationary response eta(s) = theta (1 - exp(-i l s))/(i l), so
/// int kappa |eta|^2 = 2 |theta|^2 (g(0) - Re khat(l)) / l^2.
double response_memory_norm_sq(const PronyKernel& k, double lambda, cplx theta);

struct ResolventEntry {
  AmplitudeTerms terms;
  double norm = 0.0;
};

struct ResolventReport {
  std::vector<ResolventEntry> entries;
  AmplitudeCase limit;
};

ResolventReport resolvent_report(const MaterialParams& p, const PronyKernel& k,
                                 const std::vector<int>& n_list, std::optional<double> tol = std::nullopt);

/// {n, lambda_n, p1, p2, p3, K1, K2, A_n, norm, regime, limit}; complex values as [re, im].
nlohmann::json to_json(const ResolventReport& r);

}  // namespace gpl

/**
 * @file params.hpp
 * @brief Constitutive constants, Prony memory kernels and the stability numbers
 *        gamma_g = c*mu - rho*g(0), chi_g = rho/mu - J/alpha + rho*beta^2/(alpha*gamma_g).
 */
#pragma once

#include <complex>
#include <optional>
#include <string_view>
#include <vector>

namespace gpl {

/// The eight constants of the porous thermoelastic system.
struct MaterialParams {
  double rho = 1.0;    ///< mass density
  double J = 1.0;      ///< equilibrated inertia
  double c = 1.0;      ///< thermal capacity
  double mu = 1.0;     ///< elastic modulus
  double b = 1.0;      ///< elastic-porous coupling
  double alpha = 1.0;  ///< porous stiffness
  double xi = 1.0;     ///< porous rigidity
  double beta = 1.0;   ///< thermal coupling
};

/// Throws NonPositiveConstant or NotPositiveDefinite (requires mu*xi > b^2).
void validate_params(const MaterialParams& p);

/// rho/mu - J/alpha; zero for equal wave speeds.
double speed_mismatch(const MaterialParams& p) noexcept;

struct PronyTerm {
  double weight;  ///< k_i > 0
  double rate;    ///< delta_i > 0
};

/// kappa(s) = sum_i k_i exp(-delta_i s). Construction rejects empty or non-positive terms,
/// which is enough for positivity, monotonicity and kappa' <= -min(delta_i) kappa.
class PronyKernel {
 public:
  explicit PronyKernel(std::vector<PronyTerm> terms);

  const std::vector<PronyTerm>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  double value(double s) const noexcept;
  double derivative(double s) const noexcept;
  /// int_s^inf kappa
  double tail_mass(double s) const noexcept;
  /// delta = min_i delta_i
  double decay_witness() const noexcept;
  double max_rate() const noexcept;

 private:
  std::vector<PronyTerm> terms_;
};

/// g(0) = int_0^inf kappa = sum k_i / delta_i
double kernel_g0(const PronyKernel& k) noexcept;

/// Single-term kernel -g' for g(s) = (kappa0/tau0) exp(-s/tau0).
PronyKernel cattaneo_kernel(double kappa0, double tau0);

/// Laplace transform at i*lambda: sum k_i / (delta_i + i lambda).
std::complex<double> kernel_hat(const PronyKernel& k, double lambda) noexcept;

enum class StabilityClass { ExpStable, NotExp_ChiNonzero, NotExp_GammaZero, NotExp_DoubleDegenerate };

std::string_view to_string(StabilityClass c) noexcept;

struct StabilityReport {
  double gamma_g = 0.0;
  std::optional<double> chi_g;  ///< empty when |gamma_g| <= tolerance
  StabilityClass classification = StabilityClass::ExpStable;
  double tolerance = 0.0;
};

/// 1e-9 * c * mu
double default_tolerance(const MaterialParams& p) noexcept;

StabilityReport stability_numbers(const MaterialParams& p, const PronyKernel& k,
                                  std::optional<double> tol = std::nullopt);

/// Stability number of the second-sound (Cattaneo) porous system:
/// beta^2 - (c alpha mu/rho - alpha kappa0/tau0)(J/alpha - rho/mu).
double cattaneo_chi(const MaterialParams& p, double kappa0, double tau0);

}  // namespace gpl

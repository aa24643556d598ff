#include "gpl/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gpl/error.hpp"

namespace gpl {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(Errc::NonPositiveConstant, std::string(name) + " must be positive and finite");
  }
}

}  // namespace

void validate_params(const MaterialParams& p) {
  require_positive(p.rho, "rho");
  require_positive(p.J, "J");
  require_positive(p.c, "c");
  require_positive(p.mu, "mu");
  require_positive(p.alpha, "alpha");
  require_positive(p.xi, "xi");
  if (!std::isfinite(p.b) || !std::isfinite(p.beta)) {
    throw Error(Errc::NonPositiveConstant, "b and beta must be finite");
  }
  if (!(p.mu * p.xi > p.b * p.b)) {
    throw Error(Errc::NotPositiveDefinite, "mu*xi must exceed b^2");
  }
}

double speed_mismatch(const MaterialParams& p) noexcept { return p.rho / p.mu - p.J / p.alpha; }

PronyKernel::PronyKernel(std::vector<PronyTerm> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) {
    throw Error(Errc::InvalidKernel, "kernel needs at least one term");
  }
  for (const auto& t : terms_) {
    if (!(t.weight > 0.0) || !(t.rate > 0.0) || !std::isfinite(t.weight) || !std::isfinite(t.rate)) {
      throw Error(Errc::InvalidKernel, "kernel weights and rates must be positive and finite");
    }
  }
}

double PronyKernel::value(double s) const noexcept {
  double sum = 0.0;
  for (const auto& t : terms_) sum += t.weight * std::exp(-t.rate * s);
  return sum;
}

double PronyKernel::derivative(double s) const noexcept {
  double sum = 0.0;
  for (const auto& t : terms_) sum -= t.weight * t.rate * std::exp(-t.rate * s);
  return sum;
}

double PronyKernel::tail_mass(double s) const noexcept {
  double sum = 0.0;
  for (const auto& t : terms_) sum += t.weight / t.rate * std::exp(-t.rate * s);
  return sum;
}

double PronyKernel::decay_witness() const noexcept {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& t : terms_) d = std::min(d, t.rate);
  return d;
}

double PronyKernel::max_rate() const noexcept {
  double d = 0.0;
  for (const auto& t : terms_) d = std::max(d, t.rate);
  return d;
}

double kernel_g0(const PronyKernel& k) noexcept {
  double sum = 0.0;
  for (const auto& t : k.terms()) sum += t.weight / t.rate;
  return sum;
}

PronyKernel cattaneo_kernel(double kappa0, double tau0) {
  require_positive(kappa0, "kappa0");
  require_positive(tau0, "tau0");
  return PronyKernel({{kappa0 / (tau0 * tau0), 1.0 / tau0}});
}

std::complex<double> kernel_hat(const PronyKernel& k, double lambda) noexcept {
  if (lambda == 0.0) return kernel_g0(k);
  std::complex<double> sum = 0.0;
  for (const auto& t : k.terms()) sum += t.weight / std::complex<double>(t.rate, lambda);
  return sum;
}

std::string_view to_string(StabilityClass c) noexcept {
  switch (c) {
    case StabilityClass::ExpStable: return "ExpStable";
    case StabilityClass::NotExp_ChiNonzero: return "NotExp_ChiNonzero";
    case StabilityClass::NotExp_GammaZero: return "NotExp_GammaZero";
    case StabilityClass::NotExp_DoubleDegenerate: return "NotExp_DoubleDegenerate";
  }
  return "Unknown";
}

double default_tolerance(const MaterialParams& p) noexcept { return 1e-9 * p.c * p.mu; }

StabilityReport stability_numbers(const MaterialParams& p, const PronyKernel& k,
                                  std::optional<double> tol) {
  StabilityReport r;
  r.tolerance = tol.value_or(default_tolerance(p));
  r.gamma_g = p.c * p.mu - p.rho * kernel_g0(k);
  const double mismatch = speed_mismatch(p);
  if (std::abs(r.gamma_g) <= r.tolerance) {
    r.classification = std::abs(mismatch) <= r.tolerance ? StabilityClass::NotExp_DoubleDegenerate
                                                         : StabilityClass::NotExp_GammaZero;
    return r;
  }
  const double chi = mismatch + p.rho * p.beta * p.beta / (p.alpha * r.gamma_g);
  r.chi_g = chi;
  r.classification =
      std::abs(chi) <= r.tolerance ? StabilityClass::ExpStable : StabilityClass::NotExp_ChiNonzero;
  return r;
}

double cattaneo_chi(const MaterialParams& p, double kappa0, double tau0) {
  return p.beta * p.beta -
         (p.c * p.alpha * p.mu / p.rho - p.alpha * kappa0 / tau0) * (p.J / p.alpha - p.rho / p.mu);
}

}  // namespace gpl

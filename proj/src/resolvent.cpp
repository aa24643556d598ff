#include "gpl/resolvent.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gpl/error.hpp"
#include "gpl/modal.hpp"

namespace gpl {

ResonantMode resonant_mode(const MaterialParams& p, int n) {
  if (n < 1) throw Error(Errc::InvalidMode, "mode index must be >= 1");
  return {n, n * std::sqrt(p.mu / p.rho)};
}

PPolys p_polys(const MaterialParams& p, const PronyKernel& k, int n, double lambda) {
  const double nn = n;
  const double l2 = lambda * lambda;
  return {cplx(p.rho * l2 - p.mu * nn * nn), cplx(p.J * l2 - p.xi - p.alpha * nn * nn),
          -p.c * l2 + nn * nn * (kernel_g0(k) - kernel_hat(k, lambda))};
}

AmplitudeTerms amplitude_terms(const MaterialParams& p, const PronyKernel& k, int n) {
  AmplitudeTerms t;
  t.mode = resonant_mode(p, n);
  const double nn = n;
  const double l = t.mode.lambda;
  t.polys = p_polys(p, k, n, l);
  const double scale = p.c * l * l + nn * nn * kernel_g0(k);
  if (std::abs(t.polys.p3) <= 1e-14 * scale) {
    throw Error(Errc::DivergentAmplitude, "p3 vanishes at lambda_n for n = " + std::to_string(n));
  }
  const double bl = p.beta * nn * l;
  t.k1 = t.polys.p2 * t.polys.p3 + bl * bl;
  t.k2 = (p.b * nn) * (p.b * nn) * t.polys.p3;
  t.amplitude = t.k1 / t.k2;
  return t;
}

cplx modal_amplitude(const MaterialParams& p, const PronyKernel& k, int n) {
  return amplitude_terms(p, k, n).amplitude;
}

std::string_view to_string(AmplitudeRegime r) noexcept {
  switch (r) {
    case AmplitudeRegime::EqualSpeeds_GammaNonzero: return "EqualSpeeds_GammaNonzero";
    case AmplitudeRegime::UnequalSpeeds_GammaZero: return "UnequalSpeeds_GammaZero";
    case AmplitudeRegime::DoubleDegenerate: return "DoubleDegenerate";
    case AmplitudeRegime::Generic_ChiNonzero: return "Generic_ChiNonzero";
    case AmplitudeRegime::Stable_ChiZero: return "Stable_ChiZero";
  }
  return "Unknown";
}

AmplitudeCase amplitude_limit(const MaterialParams& p, const PronyKernel& k,
                              std::optional<double> tol) {
  const StabilityReport s = stability_numbers(p, k, tol);
  const double mismatch = speed_mismatch(p);
  const double b2 = p.b * p.b;
  AmplitudeCase out;
  switch (s.classification) {
    case StabilityClass::NotExp_DoubleDegenerate:
      out.regime = AmplitudeRegime::DoubleDegenerate;
      break;
    case StabilityClass::NotExp_GammaZero:
      out.regime = AmplitudeRegime::UnequalSpeeds_GammaZero;
      if (std::abs(p.beta) <= s.tolerance) out.limit = -p.alpha * p.mu * mismatch / (b2 * p.rho);
      break;
    case StabilityClass::ExpStable:
      out.regime = AmplitudeRegime::Stable_ChiZero;
      out.limit = 0.0;
      break;
    case StabilityClass::NotExp_ChiNonzero:
      if (std::abs(mismatch) <= s.tolerance) {
        out.regime = AmplitudeRegime::EqualSpeeds_GammaNonzero;
        out.limit = -p.beta * p.beta * p.mu / (b2 * s.gamma_g);
      } else {
        out.regime = AmplitudeRegime::Generic_ChiNonzero;
        out.limit = -p.alpha * p.mu * *s.chi_g / (b2 * p.rho);
      }
      break;
  }
  return out;
}

double response_memory_norm_sq(const PronyKernel& k, double lambda, cplx theta) {
  return 2.0 * std::norm(theta) * (kernel_g0(k) - kernel_hat(k, lambda).real()) / (lambda * lambda);
}

ResolventResponse resolvent_solve(const MaterialParams& p, const PronyKernel& k, int n) {
  ResolventResponse r;
  r.mode = resonant_mode(p, n);
  const ModalMatrix mm = assemble_modal_matrix(p, k, n);
  const Eigen::Index dim = mm.entries.rows();
  const Eigen::MatrixXcd a =
      cplx(0.0, r.mode.lambda) * Eigen::MatrixXcd::Identity(dim, dim) - mm.entries.cast<cplx>();
  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(dim);
  f(kV) = 1.0 / p.rho;
  // Row then column equilibration: entries range from O(1) to O(n^2), and the singularity test
  // should see the conditioning of the problem, not of its units.
  Eigen::VectorXd row_scale(dim), col_scale(dim);
  for (Eigen::Index i = 0; i < dim; ++i) row_scale(i) = 1.0 / a.row(i).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd ar = row_scale.asDiagonal() * a;
  for (Eigen::Index j = 0; j < dim; ++j) col_scale(j) = 1.0 / ar.col(j).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd scaled = ar * col_scale.asDiagonal();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(scaled);
  if (!(lu.rcond() > 1e-14)) {
    throw Error(Errc::SingularSystem, "i*lambda_n is (numerically) an eigenvalue for n = " +
                                          std::to_string(n));
  }
  r.x = col_scale.asDiagonal() * lu.solve(row_scale.asDiagonal() * f);

  const double nn = n;
  const cplx u = r.x(kU), v = r.x(kV), phi = r.x(kPhi), psi = r.x(kPsi), theta = r.x(kTheta);
  r.memory_norm_sq = response_memory_norm_sq(k, r.mode.lambda, theta);
  const cplx sq = std::sqrt(p.mu) * nn * u + p.b / std::sqrt(p.mu) * phi;
  const double q = p.rho * std::norm(v) + p.J * std::norm(psi) + std::norm(sq) +
                   (p.xi - p.b * p.b / p.mu) * std::norm(phi) + p.alpha * nn * nn * std::norm(phi) +
                   p.c * std::norm(theta) + nn * nn * r.memory_norm_sq;
  r.norm = std::sqrt(0.5 * std::numbers::pi * q);
  return r;
}

ResolventReport resolvent_report(const MaterialParams& p, const PronyKernel& k,
                                 const std::vector<int>& n_list, std::optional<double> tol) {
  validate_params(p);
  if (n_list.empty()) throw Error(Errc::InvalidConfig, "resolvent.n_list must not be empty");
  ResolventReport rep;
  rep.limit = amplitude_limit(p, k, tol);
  for (int n : n_list) rep.entries.push_back({amplitude_terms(p, k, n), resolvent_solve(p, k, n).norm});
  return rep;
}

nlohmann::json to_json(const ResolventReport& r) {
  using nlohmann::json;
  const auto c = [](cplx z) { return json::array({z.real(), z.imag()}); };
  json n = json::array(), lambda = json::array(), p1 = json::array(), p2 = json::array(),
       p3 = json::array(), k1 = json::array(), k2 = json::array(), a = json::array(),
       norm = json::array();
  for (const auto& e : r.entries) {
    n.push_back(e.terms.mode.n);
    lambda.push_back(e.terms.mode.lambda);
    p1.push_back(c(e.terms.polys.p1));
    p2.push_back(c(e.terms.polys.p2));
    p3.push_back(c(e.terms.polys.p3));
    k1.push_back(c(e.terms.k1));
    k2.push_back(c(e.terms.k2));
    a.push_back(c(e.terms.amplitude));
    norm.push_back(e.norm);
  }
  return json{{"n", n},   {"lambda_n", lambda}, {"p1", p1}, {"p2", p2},
              {"p3", p3}, {"K1", k1},           {"K2", k2}, {"A_n", a},
              {"norm", norm}, {"regime", std::string(to_string(r.limit.regime))},
              {"limit", r.limit.limit ? json(*r.limit.limit) : json(nullptr)},
              {"limit_unbounded", !r.limit.limit.has_value()}};
}

}  // namespace gpl

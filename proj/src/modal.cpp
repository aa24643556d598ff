#include "gpl/modal.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "gpl/error.hpp"
#include "gpl/parallel.hpp"

namespace gpl {

ModalMatrix assemble_modal_matrix(const MaterialParams& p, const PronyKernel& k, int n) {
  if (n < 1) throw Error(Errc::InvalidMode, "mode index must be >= 1, got " + std::to_string(n));
  const int dim = state_dim(k);
  const double nn = static_cast<double>(n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);

  m(kU, kV) = 1.0;
  m(kV, kU) = -p.mu * nn * nn / p.rho;
  m(kV, kPhi) = -p.b * nn / p.rho;

  m(kPhi, kPsi) = 1.0;
  m(kPsi, kPhi) = -(p.alpha * nn * nn + p.xi) / p.J;
  m(kPsi, kU) = -p.b * nn / p.J;
  m(kPsi, kTheta) = -p.beta * nn / p.J;

  m(kTheta, kPsi) = p.beta * nn / p.c;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const int w = kMemory + static_cast<int>(i);
    const auto& term = k.terms()[i];
    m(kTheta, w) = -nn * nn / p.c;
    m(w, kTheta) = term.weight / term.rate;
    m(w, w) = -term.rate;
  }
  return {n, std::move(m)};
}

namespace {

void require_square(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(Errc::InvalidConfig, "eigen-analysis needs a non-empty square matrix");
  }
}

}  // namespace

ComplexVector eigenvalues(const Eigen::MatrixXd& m) {
  require_square(m);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::NoConvergence, "QR iteration did not converge");
  }
  const auto& ev = solver.eigenvalues();
  return ComplexVector(ev.data(), ev.data() + ev.size());
}

EigenPairs eigenpairs(const Eigen::MatrixXd& m) {
  require_square(m);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::NoConvergence, "QR iteration did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double spectral_abscissa(const MaterialParams& p, const PronyKernel& k, int n) {
  const auto ev = eigenvalues(assemble_modal_matrix(p, k, n).entries);
  double a = -std::numeric_limits<double>::infinity();
  for (const auto& z : ev) a = std::max(a, z.real());
  return a;
}

SpectrumScan abscissa_scan(const MaterialParams& p, const PronyKernel& k, int n_max,
                           unsigned threads) {
  if (n_max < 1) throw Error(Errc::InvalidMode, "n_max must be >= 1");
  SpectrumScan scan;
  scan.n_max = n_max;
  scan.abscissa.assign(static_cast<std::size_t>(n_max), 0.0);
  parallel_for(scan.abscissa.size(), threads,
               [&](std::size_t i) { scan.abscissa[i] = spectral_abscissa(p, k, static_cast<int>(i) + 1); });
  scan.sup_abscissa = *std::max_element(scan.abscissa.begin(), scan.abscissa.end());
  return scan;
}

}  // namespace gpl

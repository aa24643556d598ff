/**
 * @file modal.hpp
 * @brief Per-mode reduction of the porous thermoelastic system with Prony memory closure.
 *
 * With u, theta, eta ~ sin(nx) and phi ~ cos(nx), each spatial mode n >= 1 evolves by a closed
 * linear system x' = M_n x on the state (u, v, phi, psi, theta, w_1..w_m), where
 * w_i = int_0^inf k_i exp(-delta_i s) eta(s) ds carries the memory of term i:
 *
 *   rho v'   = -mu n^2 u - b n phi
 *   J psi'   = -(alpha n^2 + xi) phi - b n u - beta n theta
 *   c theta' = beta n psi - n^2 sum_i w_i
 *   w_i'     = (k_i/delta_i) theta - delta_i w_i
 */
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "gpl/params.hpp"

namespace gpl {

/// Slots of the per-mode state vector.
enum StateSlot : int { kU = 0, kV = 1, kPhi = 2, kPsi = 3, kTheta = 4, kMemory = 5 };

inline int state_dim(const PronyKernel& k) { return kMemory + static_cast<int>(k.size()); }

struct ModalMatrix {
  int n = 1;
  Eigen::MatrixXd entries;
};

ModalMatrix assemble_modal_matrix(const MaterialParams& p, const PronyKernel& k, int n);

using ComplexVector = std::vector<std::complex<double>>;

/// All eigenvalues with multiplicity. Throws NoConvergence.
ComplexVector eigenvalues(const Eigen::MatrixXd& m);

struct EigenPairs {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;  ///< columns, unit 2-norm
};

EigenPairs eigenpairs(const Eigen::MatrixXd& m);

double spectral_abscissa(const MaterialParams& p, const PronyKernel& k, int n);

struct SpectrumScan {
  int n_max = 0;
  std::vector<double> abscissa;  ///< abscissa[i] belongs to mode n = i + 1
  double sup_abscissa = 0.0;
};

SpectrumScan abscissa_scan(const MaterialParams& p, const PronyKernel& k, int n_max,
                           unsigned threads = 1);

}  // namespace gpl

#include <cmath>

#include "gpl/error.hpp"
#include "gpl/simulate.hpp"

namespace gpl {

namespace {

constexpr double kTheta13 = 5.371920351148152;
constexpr int kMaxSquarings = 64;

constexpr double kPade13[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                              1187353796428800.0,  129060195264000.0,   10559470521600.0,
                              670442572800.0,      33522128640.0,       1323241920.0,
                              40840800.0,          960960.0,            16380.0,
                              182.0,               1.0};

}  // namespace

Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
  const Eigen::Index dim = a.rows();
  if (dim != a.cols()) throw Error(Errc::InvalidConfig, "expm needs a square matrix");
  if (dim == 0) return a;
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(norm1)) throw Error(Errc::OverflowScale, "matrix has non-finite entries");

  int squarings = 0;
  if (norm1 > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
  if (squarings > kMaxSquarings) {
    throw Error(Errc::OverflowScale, "norm too large for scaling and squaring");
  }
  const Eigen::MatrixXd as = a / std::ldexp(1.0, squarings);

  const auto& b = kPade13;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
  const Eigen::MatrixXd a2 = as * as;
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a4 * a2;
  const Eigen::MatrixXd u =
      as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const Eigen::MatrixXd v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  Eigen::MatrixXd r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  if (!r.allFinite()) throw Error(Errc::OverflowScale, "exponential overflowed during squaring");
  return r;
}

Eigen::MatrixXd propagator(const Eigen::MatrixXd& m, double dt) {
  if (!(dt > 0.0)) throw Error(Errc::InvalidConfig, "propagator needs dt > 0");
  return expm(m * dt);
}

std::vector<Eigen::VectorXd> evolve(const Eigen::MatrixXd& m, const Eigen::VectorXd& state0,
                                    double dt, std::size_t steps) {
  if (m.cols() != state0.size()) throw Error(Errc::InvalidConfig, "state dimension mismatch");
  std::vector<Eigen::VectorXd> out;
  out.reserve(steps + 1);
  out.push_back(state0);
  if (steps == 0) return out;
  const Eigen::MatrixXd step = propagator(m, dt);
  for (std::size_t j = 0; j < steps; ++j) out.push_back(step * out.back());
  return out;
}

}  // namespace gpl

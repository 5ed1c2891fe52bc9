#include "zeno/state.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace zeno {

SystemState::SystemState(const Matrix2c& block, double destroyed) : rho_(Matrix3c::Zero())
{
  rho_.topLeftCorner<2, 2>() = block;
  rho_(kDestroyed, kDestroyed) = destroyed;
}

SystemState SystemState::marked()
{
  Matrix2c b = Matrix2c::Zero();
  b(kMarked, kMarked) = 1.0;
  return SystemState(b, 0.0);
}

SystemState SystemState::destroyed() { return SystemState(Matrix2c::Zero(), 1.0); }

SystemState SystemState::pure(const Vector2c& psi) { return SystemState(psi * psi.adjoint(), 0.0); }

SystemState SystemState::renormalized() const
{
  Matrix2c b = block();
  b = 0.5 * (b + b.adjoint()).eval();
  const double tr = b.trace().real() + destroyed_population();
  return SystemState(b / tr, destroyed_population() / tr);
}

bool SystemState::is_valid(double tol) const
{
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(rho_.trace().real() - 1.0) > tol) return false;
  if (rho_(0, 2) != Complex(0) || rho_(1, 2) != Complex(0) || rho_(2, 0) != Complex(0) || rho_(2, 1) != Complex(0)) {
    return false;
  }
  Eigen::SelfAdjointEigenSolver<Matrix3c> es(rho_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

double marked_probability(const SystemState& state) { return state.rho()(kMarked, kMarked).real(); }

double destroyed_probability(const SystemState& state) { return state.destroyed_population(); }

double purity(const SystemState& state) { return (state.rho() * state.rho()).trace().real(); }

double trace(const SystemState& state) { return state.rho().trace().real(); }

double purity_lower_bound(double tr_rho_sq)
{
  if (tr_rho_sq < 0.5 - 1e-12 || tr_rho_sq > 1.0 + 1e-12) {
    throw std::domain_error("purity_lower_bound: Tr rho^2 must lie in [1/2, 1] for a two-level state");
  }
  const double disc = std::clamp(1.0 - 2.0 * (1.0 - tr_rho_sq), 0.0, 1.0);
  return 0.5 * (1.0 - std::sqrt(disc));
}

Matrix2c PmDecomposition::reconstruct() const
{
  Matrix2c m = p_psi * psi * psi.adjoint();
  m(kMarked, kMarked) += p_m;
  return m;
}

PmDecomposition decompose_pm(const Matrix2c& block)
{
  const double rho_ww = block(kOmega, kOmega).real();
  PmDecomposition out;
  if (rho_ww <= 0.0) {
    out.p_m = 1.0;
    out.p_psi = 0.0;
    out.psi = Vector2c(0.0, 1.0);
    return out;
  }
  const double det = (block(kMarked, kMarked) * block(kOmega, kOmega) - block(kMarked, kOmega) * block(kOmega, kMarked)).real();
  out.p_m = std::clamp(det / rho_ww, 0.0, 1.0);
  out.p_psi = 1.0 - out.p_m;
  if (out.p_psi <= 0.0) {
    out.psi = Vector2c(0.0, 1.0);
    return out;
  }
  // Phase convention: <w~|psi> real and positive.
  const double psi_w = std::sqrt(rho_ww / out.p_psi);
  const Complex psi_m = block(kMarked, kOmega) / (out.p_psi * psi_w);
  out.psi = Vector2c(psi_m, psi_w);
  return out;
}

PmDecomposition decompose_pm(const SystemState& state)
{
  if (state.destroyed_population() != 0.0) {
    throw std::domain_error("decompose_pm: state has |d> population; renormalize the two-level block first");
  }
  return decompose_pm(state.block());
}

}  // namespace zeno

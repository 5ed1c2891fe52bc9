#include "zeno/channels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace zeno {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Apply a 2x2 Kraus operator to the block: K rho K^dagger.
Matrix2c conjugate(const Matrix2c& k, const Matrix2c& block) { return k * block * k.adjoint(); }

}  // namespace

std::string to_string(Family family)
{
  switch (family) {
    case Family::PhaseRotation: return "phase_rotation";
    case Family::Decoherence: return "decoherence";
    case Family::Destruction: return "destruction";
  }
  return "?";
}

std::string to_string(Manifestation manifestation)
{
  return manifestation == Manifestation::FullDiscrete ? "full_discrete" : "partial_discrete";
}

Family family_from_string(const std::string& name)
{
  if (name == "phase_rotation") return Family::PhaseRotation;
  if (name == "decoherence") return Family::Decoherence;
  if (name == "destruction") return Family::Destruction;
  throw std::invalid_argument("unknown family '" + name + "'");
}

Manifestation manifestation_from_string(const std::string& name)
{
  if (name == "full_discrete") return Manifestation::FullDiscrete;
  if (name == "partial_discrete") return Manifestation::PartialDiscrete;
  throw std::invalid_argument("unknown manifestation '" + name + "'");
}

void ChannelSpec::validate() const
{
  if (!(phi >= 0.0 && phi < kTwoPi)) throw std::domain_error("ChannelSpec: phi must lie in [0, 2pi)");
  if (!(t_rot >= 0.0)) throw std::domain_error("ChannelSpec: t_rot must be non-negative");
}

Matrix2c eigenbasis(double gamma)
{
  const auto p = eigenpair(gamma);
  Matrix2c u;
  u.col(0) = p.ground.cast<Complex>();
  u.col(1) = p.excited.cast<Complex>();
  return u;
}

SystemState phase_rotation(const SystemState& state, double gamma, double phi)
{
  const Matrix2c u = eigenbasis(gamma);
  const Matrix2c k = u * Eigen::Vector2cd(1.0, std::polar(1.0, phi)).asDiagonal() * u.adjoint();
  return SystemState(conjugate(k, state.block()), state.destroyed_population());
}

Matrix2c walk_propagator(double gamma, double t)
{
  // exp(-i (t/2) s n.sigma) = cos(s t/2) - i sin(s t/2) n.sigma with s = |(gamma, -1)|.
  const double s = gap(gamma);
  const double c = std::cos(0.5 * s * t);
  const double sn = std::sin(0.5 * s * t);
  const Matrix2c h = crossing_hamiltonian(gamma).cast<Complex>() * (2.0 / s);
  return c * Matrix2c::Identity() - Complex(0.0, sn) * h;
}

SystemState walk_step(const SystemState& state, double gamma, double t)
{
  return SystemState(conjugate(walk_propagator(gamma, t), state.block()), state.destroyed_population());
}

SystemState projective_measurement(const SystemState& state, double gamma)
{
  return partial_dephasing(state, gamma, 0.5 * std::numbers::pi);
}

SystemState partial_dephasing(const SystemState& state, double gamma, double phi)
{
  const Matrix2c u = eigenbasis(gamma);
  Matrix2c eig = u.adjoint() * state.block() * u;
  // cos(pi/2) is not exactly zero in floating point.
  const double factor = phi == 0.5 * std::numbers::pi ? 0.0 : std::cos(phi);
  eig(0, 1) *= factor;
  eig(1, 0) *= factor;
  return SystemState(u * eig * u.adjoint(), state.destroyed_population());
}

SystemState destructive_measurement(const SystemState& state, double gamma)
{
  return partial_destruction(state, gamma, 0.5 * std::numbers::pi);
}

SystemState partial_destruction(const SystemState& state, double gamma, double phi)
{
  const Matrix2c u = eigenbasis(gamma);
  Matrix2c eig = u.adjoint() * state.block() * u;
  const bool full = phi == 0.5 * std::numbers::pi;
  const double c = full ? 0.0 : std::cos(phi);
  const double s2 = full ? 1.0 : std::sin(phi) * std::sin(phi);
  const double removed = s2 * eig(1, 1).real();
  eig(0, 1) *= c;
  eig(1, 0) *= c;
  eig(1, 1) *= c * c;
  return SystemState(u * eig * u.adjoint(), state.destroyed_population() + removed);
}

SystemState apply_channel(const ChannelSpec& spec, const SystemState& state, double gamma)
{
  const bool full = spec.manifestation == Manifestation::FullDiscrete;
  switch (spec.family) {
    case Family::PhaseRotation: return phase_rotation(state, gamma, full ? std::numbers::pi : spec.phi);
    case Family::Decoherence: return full ? projective_measurement(state, gamma) : partial_dephasing(state, gamma, spec.phi);
    case Family::Destruction: return full ? destructive_measurement(state, gamma) : partial_destruction(state, gamma, spec.phi);
  }
  throw std::logic_error("apply_channel: unhandled family");
}

}  // namespace zeno

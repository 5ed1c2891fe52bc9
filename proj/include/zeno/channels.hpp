// Discrete quantum channels acting on SystemState at a schedule point gamma.
//
// Eigenbasis channels conjugate with the basis-change matrix built from
// eigenpair(gamma); rho is always stored in the fixed computational basis.
//
// Angle conventions: phi = g(tau) t for phase rotation and dephasing spread,
// phi = g(tau) t / 2 for destruction (per-step removal probability sin^2 phi).
#pragma once

#include "zeno/model.hpp"
#include "zeno/state.hpp"

#include <string>

namespace zeno {

enum class Family { PhaseRotation, Decoherence, Destruction };
enum class Manifestation { FullDiscrete, PartialDiscrete };

std::string to_string(Family family);
std::string to_string(Manifestation manifestation);
Family family_from_string(const std::string& name);
Manifestation manifestation_from_string(const std::string& name);

struct ChannelSpec {
  Family family = Family::Decoherence;
  Manifestation manifestation = Manifestation::FullDiscrete;
  double phi = 0.0;    ///< Rotation angle, radians, [0, 2pi). Ignored when full discrete.
  double t_rot = 0.0;  ///< Pointer rotation time; only used for pointer cross-checks.

  void validate() const;
};

/// Columns are |g(gamma)>, |e(gamma)> in the computational basis.
Matrix2c eigenbasis(double gamma);

/// |g><g| + e^{i phi} |e><e| on the two-level block.
SystemState phase_rotation(const SystemState& state, double gamma, double phi);

/// exp(-i (t/2) (gamma Z - X)).
Matrix2c walk_propagator(double gamma, double t);

/// Conjugation by walk_propagator(gamma, t).
SystemState walk_step(const SystemState& state, double gamma, double t);

/// Pi_g rho Pi_g + Pi_e rho Pi_e.
SystemState projective_measurement(const SystemState& state, double gamma);

/// Eigenbasis coherences scaled by cos(phi), populations fixed. phi in [0, pi/2].
SystemState partial_dephasing(const SystemState& state, double gamma, double phi);

/// Pi_g rho Pi_g + |d><e| rho |e><d| + |d><d| rho |d><d|.
SystemState destructive_measurement(const SystemState& state, double gamma);

/// Kraus pair {Pi_g + cos(phi) Pi_e, sin(phi) |d><e|}. phi in [0, pi/2].
SystemState partial_destruction(const SystemState& state, double gamma, double phi);

/// Dispatch on family/manifestation. The full-discrete phase-rotation channel
/// is the phase flip (phi = pi).
SystemState apply_channel(const ChannelSpec& spec, const SystemState& state, double gamma);

}  // namespace zeno

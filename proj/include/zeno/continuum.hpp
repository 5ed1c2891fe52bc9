// Continuous-time manifestations: adiabatic evolution and the dephasing and
// destruction master equations with schedule-dependent rates.
//
// All equations are integrated in tau with an explicit t_scale factor:
//   adiabatic:   d rho/dtau = -i t_scale [ (f Z - X)/2, rho ]
//   dephasing:   d rho/dtau = t_scale kappa(tau) (Zt rho Zt - rho)
//   destruction: d rho/dtau = t_scale kappa(tau) (L rho L^+ - {L^+ L, rho}/2),  L = |d><e|
// with kappa(tau) = (f(tau)^2 + 1) kappa0 and Zt = |g><g| - |e><e|.
#pragma once

#include "zeno/channels.hpp"
#include "zeno/integrator.hpp"
#include "zeno/model.hpp"
#include "zeno/protocols.hpp"
#include "zeno/state.hpp"

#include <Eigen/Dense>

namespace zeno {

enum class ContinuumFamily { AdiabaticPhase, Dephasing, Destruction };

std::string to_string(ContinuumFamily family);
ContinuumFamily continuum_family_from_string(const std::string& name);

struct LindbladSpec {
  ContinuumFamily family = ContinuumFamily::Dephasing;
  double kappa0 = 0.0;
  double t_scale = 1.0;
  Schedule schedule = Schedule::optimal();
  double tau_clip = 1e-6;  ///< Integration runs over (tau_clip, 1 - tau_clip).

  /// kappa0 = t_z / 2.
  static LindbladSpec dephasing_from_zeno_time(double t_scale, double t_z);
  /// kappa0 = 4 t_rot^2 t_z.
  static LindbladSpec destruction_from_rotation(double t_scale, double t_z, double t_rot);

  void validate() const;
};

/// (f(tau)^2 + 1) kappa0.
double kappa(const LindbladSpec& spec, double tau);

/// The 9x9 generator acting on column-major vec(rho), including t_scale.
Eigen::MatrixXcd lindblad_generator(const LindbladSpec& spec, double tau);

Eigen::VectorXcd vectorize(const SystemState& state);
SystemState devectorize(const Eigen::VectorXcd& v);

struct ContinuumResult {
  ProtocolTrace trace;
  IntegrationStats stats;
};

ContinuumResult integrate(const LindbladSpec& spec, const IntegratorConfig& integrator = {});

ContinuumResult integrate_adiabatic(double t_scale, const IntegratorConfig& integrator = {},
                                    const Schedule& schedule = Schedule::optimal());
ContinuumResult integrate_dephasing(const LindbladSpec& spec, const IntegratorConfig& integrator = {});
ContinuumResult integrate_destruction(const LindbladSpec& spec, const IntegratorConfig& integrator = {});

/// Discrete q-segment approximation of a dephasing or destruction master
/// equation: one partial channel per segment at the segment's right end, with
/// the angle that reproduces the frozen-generator decay over the segment
/// (cos phi = exp(-2 t_scale kappa dtau) for dephasing, exp(-t_scale kappa dtau / 2)
/// for destruction).
SystemState discrete_segments(const LindbladSpec& spec, int q);

struct DiscreteLimit {
  int q = 0;
  double deviation = 0.0;  ///< Max |population difference| against the master equation.
};

DiscreteLimit discrete_limit_check(const LindbladSpec& spec, int q, const IntegratorConfig& integrator = {});

}  // namespace zeno

// Von Neumann pointer model: system (labelled by eigenstate g/e of a
// reference gamma) coupled to an idealized pointer position and an ancilla
// qubit.
//
// A BranchState is an incoherent ensemble of components. Each component is a
// coherent superposition of branches; branch weights live in the (unnormalized)
// amplitudes, so that
//   sum |amp|^2 (|a0|^2 + |a1|^2) + destroyed = 1.
// Mixed inputs enter as their eigen-decomposition, one component per nonzero
// eigenvalue.
#pragma once

#include "zeno/state.hpp"

#include <vector>

namespace zeno {

enum class Label { G, E };
enum class Direction { Forward, Inverse };

struct Branch {
  Label label = Label::G;
  double x = 0.0;
  Complex a0 = 1.0;
  Complex a1 = 0.0;
  Complex amp = 1.0;

  double weight() const { return std::norm(amp) * (std::norm(a0) + std::norm(a1)); }
};

struct BranchState {
  double gamma = 0.0;  ///< Schedule value whose eigenbasis defines the labels.
  std::vector<std::vector<Branch>> components;
  double destroyed = 0.0;

  double total_probability() const;
  /// Every branch at x = 0 with ancilla |0>.
  bool is_reset(double tol = 1e-12) const;

  static BranchState from_system(const SystemState& state, double gamma);
  /// Requires is_reset(); collapses back to a density matrix.
  SystemState to_system() const;
  /// Re-express the labels in the eigenbasis of another gamma. Requires is_reset().
  BranchState rebased(double new_gamma) const;
};

/// t_scale sqrt(gamma^2 + 1): pointer displacement of the eigenbranches.
double x_mag(double t_scale, double gamma);

BranchState apply_u_meas(const BranchState& bs, double t_scale, double gamma, Direction direction);
/// Ancilla rotation about X by t_rot (x_mag - x) on each branch.
BranchState apply_u_rot(const BranchState& bs, double t_rot, double x_mag);
/// Measures the ancilla; the |1> weight moves to the destroyed accumulator.
BranchState project_and_abort(const BranchState& bs);
/// U_meas^-1 Pi_0 U_rot U_meas at gamma.
BranchState dissipation_step(const BranchState& bs, double gamma, double t_scale, double t_rot);
/// As dissipation_step, but the |1> outcome is flipped back to |0> and kept.
BranchState decoherence_alt_step(const BranchState& bs, double gamma, double t_scale, double t_rot);

}  // namespace zeno

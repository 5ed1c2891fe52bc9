// Discrete protocol runners: channel sequences placed on the tau grid.
#pragma once

#include "zeno/channels.hpp"
#include "zeno/model.hpp"
#include "zeno/state.hpp"

#include <cstdint>
#include <vector>

namespace zeno {

struct StepRecord {
  int step = 0;
  double tau = 0.0;  ///< 0 for the initial record.
  double p_marked = 0.0;
  double p_destroyed = 0.0;
  double purity = 1.0;
};

struct ProtocolTrace {
  std::vector<StepRecord> steps;  ///< Initial record first.
  SystemState final_state;

  double final_marked() const { return marked_probability(final_state); }
  double final_destroyed() const { return destroyed_probability(final_state); }
};

/// How phi is interpreted for partial-discrete sequences.
enum class AngleMode {
  PerOperation,  ///< Every operation uses phi.
  FixedTotal,    ///< phi is split evenly over the m operations.
};

struct ProtocolConfig {
  Family family = Family::Decoherence;
  Manifestation manifestation = Manifestation::FullDiscrete;
  int m_ops = 1;
  Schedule schedule = Schedule::optimal();
  double t_scale = 0.0;  ///< Walk time shared across operations when include_walk_between is set.
  double phi = 0.0;
  AngleMode angle_mode = AngleMode::PerOperation;
  bool include_walk_between = false;

  void validate() const;
  /// Angle applied by each individual operation.
  double phi_per_operation() const;
  ChannelSpec channel() const;
};

/// Walks at gamma_j = f(j/(m+1)) for t_scale/m each, from |w~>.
ProtocolTrace run_multistage_walk(int m_stage, double t_scale, const Schedule& schedule = Schedule::optimal());

/// One channel application per tau_grid(m_ops) point, from |w~>.
ProtocolTrace run_operation_sequence(const ProtocolConfig& config);

/// Final state of the same protocols evaluated in raw units: Hamiltonian
/// g_min (gamma Z - X)/2, physical times t_scale/g_min, channel times from the
/// fixed-angle convention t = phi / g(tau).
SystemState run_multistage_walk_raw(int m_stage, double t_scale, double g_min,
                                    const Schedule& schedule = Schedule::optimal());
SystemState run_operation_sequence_raw(const ProtocolConfig& config, double g_min);

/// Max pairwise deviation of final populations (marked, w~, destroyed) across
/// raw-units reruns. Needs at least two distinct g_min in (0,1].
double audit_scale_invariance(const ProtocolConfig& config, const std::vector<double>& g_min_list);
double audit_multistage_invariance(int m_stage, double t_scale, const std::vector<double>& g_min_list);

struct ZenoPoint {
  int m = 0;
  double leaked = 0.0;     ///< 1 - marked probability.
  double destroyed = 0.0;  ///< |d> population.
};

/// Full-discrete protocol for each m; phase rotation uses the phi = pi flip.
std::vector<ZenoPoint> zeno_excitation_scaling(Family family, const std::vector<int>& m_list);

/// Least-squares slope of log(y) against log(x) over points with x >= x_max/10.
/// Returns the decay exponent p of y ~ C x^{-p}.
double fit_decay_exponent(const std::vector<double>& x, const std::vector<double>& y);

/// Monte Carlo unravelling of run_operation_sequence with sampled outcomes.
struct TrajectoryEstimate {
  int trajectories = 0;
  double p_marked = 0.0;
  double p_destroyed = 0.0;
  double stderr_marked = 0.0;
};

TrajectoryEstimate run_trajectories(const ProtocolConfig& config, int trajectories, std::uint64_t seed);

}  // namespace zeno

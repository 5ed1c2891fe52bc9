#include "zeno/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace zeno {

namespace {

StepRecord record(int step, double tau, const SystemState& s)
{
  return StepRecord{step, tau, marked_probability(s), destroyed_probability(s), purity(s)};
}

// exp(-i H t) for H = g_min (gamma Z - X)/2, built without reference to the scaled form.
Matrix2c raw_propagator(double gamma, double g_min, double t_raw)
{
  const Matrix2c h = (g_min * crossing_hamiltonian(gamma)).cast<Complex>();
  const Eigen::SelfAdjointEigenSolver<Matrix2c> es(h);
  const Eigen::Vector2cd phases = (es.eigenvalues().cast<Complex>() * Complex(0.0, -t_raw)).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

SystemState raw_walk(const SystemState& s, double gamma, double g_min, double t_raw)
{
  const Matrix2c u = raw_propagator(gamma, g_min, t_raw);
  return SystemState(u * s.block() * u.adjoint(), s.destroyed_population());
}

}  // namespace

void ProtocolConfig::validate() const
{
  if (m_ops < 0) throw std::domain_error("ProtocolConfig: m_ops must be >= 0");
  if (!(t_scale >= 0.0)) throw std::domain_error("ProtocolConfig: t_scale must be >= 0");
  channel().validate();
}

double ProtocolConfig::phi_per_operation() const
{
  if (angle_mode == AngleMode::FixedTotal && m_ops > 0) return phi / m_ops;
  return phi;
}

ChannelSpec ProtocolConfig::channel() const
{
  ChannelSpec spec;
  spec.family = family;
  spec.manifestation = manifestation;
  spec.phi = phi_per_operation();
  return spec;
}

ProtocolTrace run_multistage_walk(int m_stage, double t_scale, const Schedule& schedule)
{
  if (m_stage < 1) throw std::domain_error("run_multistage_walk: m_stage must be >= 1");
  ProtocolTrace trace;
  SystemState s = SystemState::omega();
  trace.steps.push_back(record(0, 0.0, s));
  const auto taus = tau_grid(m_stage);
  const double dt = t_scale / m_stage;
  for (int j = 0; j < m_stage; ++j) {
    s = walk_step(s, schedule(taus[j]), dt);
    trace.steps.push_back(record(j + 1, taus[j], s));
  }
  trace.final_state = s;
  return trace;
}

ProtocolTrace run_operation_sequence(const ProtocolConfig& config)
{
  config.validate();
  const ChannelSpec spec = config.channel();
  ProtocolTrace trace;
  SystemState s = SystemState::omega();
  trace.steps.push_back(record(0, 0.0, s));
  const auto taus = tau_grid(config.m_ops);
  const double dt = config.m_ops > 0 ? config.t_scale / config.m_ops : 0.0;
  for (int j = 0; j < config.m_ops; ++j) {
    const double gamma = config.schedule(taus[j]);
    if (config.include_walk_between) s = walk_step(s, gamma, dt);
    s = apply_channel(spec, s, gamma);
    trace.steps.push_back(record(j + 1, taus[j], s));
  }
  trace.final_state = s;
  return trace;
}

SystemState run_multistage_walk_raw(int m_stage, double t_scale, double g_min, const Schedule& schedule)
{
  if (m_stage < 1) throw std::domain_error("run_multistage_walk_raw: m_stage must be >= 1");
  const double total = t_scale / g_min;
  SystemState s = SystemState::omega();
  for (double tau : tau_grid(m_stage)) s = raw_walk(s, schedule(tau), g_min, total / m_stage);
  return s;
}

SystemState run_operation_sequence_raw(const ProtocolConfig& config, double g_min)
{
  config.validate();
  const double phi = config.phi_per_operation();
  const double total = config.t_scale / g_min;
  const bool full = config.manifestation == Manifestation::FullDiscrete;
  SystemState s = SystemState::omega();
  const auto taus = tau_grid(config.m_ops);
  for (double tau : taus) {
    const double gamma = config.schedule(tau);
    const double g_raw = g_min * gap(gamma);
    if (config.include_walk_between) s = raw_walk(s, gamma, g_min, total / config.m_ops);
    switch (config.family) {
      case Family::PhaseRotation: {
        // A walk of duration phi/g(tau) imprints relative phase phi on |e>.
        const double t_raw = (full ? std::numbers::pi : phi) / g_raw;
        s = phase_rotation(s, gamma, g_raw * t_raw);
        break;
      }
      case Family::Decoherence: {
        if (full) {
          s = projective_measurement(s, gamma);
        } else {
          const double t_raw = phi / g_raw;
          s = partial_dephasing(s, gamma, g_raw * t_raw);
        }
        break;
      }
      case Family::Destruction: {
        if (full) {
          s = destructive_measurement(s, gamma);
        } else {
          const double t_raw = 2.0 * phi / g_raw;
          s = partial_destruction(s, gamma, 0.5 * g_raw * t_raw);
        }
        break;
      }
    }
  }
  return s;
}

namespace {

double population_deviation(const SystemState& a, const SystemState& b)
{
  double d = 0.0;
  for (int k = 0; k < 3; ++k) d = std::max(d, std::abs(a.rho()(k, k).real() - b.rho()(k, k).real()));
  return d;
}

double max_pairwise(const std::vector<SystemState>& finals)
{
  double worst = 0.0;
  for (std::size_t i = 0; i < finals.size(); ++i) {
    for (std::size_t j = i + 1; j < finals.size(); ++j) worst = std::max(worst, population_deviation(finals[i], finals[j]));
  }
  return worst;
}

void check_g_min_list(const std::vector<double>& g_min_list)
{
  std::vector<double> sorted = g_min_list;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.size() < 2) throw std::domain_error("audit_scale_invariance: need >= 2 distinct g_min values");
  for (double g : sorted) {
    if (!(g > 0.0 && g <= 1.0)) throw std::domain_error("audit_scale_invariance: g_min must lie in (0,1]");
  }
}

}  // namespace

double audit_scale_invariance(const ProtocolConfig& config, const std::vector<double>& g_min_list)
{
  check_g_min_list(g_min_list);
  std::vector<SystemState> finals;
  for (double g : g_min_list) finals.push_back(run_operation_sequence_raw(config, g));
  return max_pairwise(finals);
}

double audit_multistage_invariance(int m_stage, double t_scale, const std::vector<double>& g_min_list)
{
  check_g_min_list(g_min_list);
  std::vector<SystemState> finals;
  for (double g : g_min_list) finals.push_back(run_multistage_walk_raw(m_stage, t_scale, g));
  return max_pairwise(finals);
}

std::vector<ZenoPoint> zeno_excitation_scaling(Family family, const std::vector<int>& m_list)
{
  std::vector<ZenoPoint> out;
  out.reserve(m_list.size());
  for (int m : m_list) {
    ProtocolConfig config;
    config.family = family;
    config.manifestation = Manifestation::FullDiscrete;
    config.m_ops = m;
    const auto trace = run_operation_sequence(config);
    out.push_back(ZenoPoint{m, 1.0 - trace.final_marked(), trace.final_destroyed()});
  }
  return out;
}

double fit_decay_exponent(const std::vector<double>& x, const std::vector<double>& y)
{
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("fit_decay_exponent: mismatched input");
  const double x_max = *std::max_element(x.begin(), x.end());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] < x_max / 10.0 || !(y[k] > 0.0)) continue;
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) throw std::domain_error("fit_decay_exponent: fewer than two usable points in the top decade");
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -slope;
}

TrajectoryEstimate run_trajectories(const ProtocolConfig& config, int trajectories, std::uint64_t seed)
{
  config.validate();
  if (trajectories < 1) throw std::domain_error("run_trajectories: need at least one trajectory");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double phi = config.phi_per_operation();
  const bool full = config.manifestation == Manifestation::FullDiscrete;
  const auto taus = tau_grid(config.m_ops);
  const double dt = config.m_ops > 0 ? config.t_scale / config.m_ops : 0.0;

  double sum = 0.0, sum_sq = 0.0;
  int destroyed = 0;
  for (int n = 0; n < trajectories; ++n) {
    Vector2c psi(0.0, 1.0);
    bool lost = false;
    for (double tau : taus) {
      const double gamma = config.schedule(tau);
      const Matrix2c u = eigenbasis(gamma);
      if (config.include_walk_between) psi = walk_propagator(gamma, dt) * psi;
      Vector2c c = u.adjoint() * psi;  // (ground, excited) amplitudes
      switch (config.family) {
        case Family::PhaseRotation:
          c(1) *= std::polar(1.0, full ? std::numbers::pi : phi);
          break;
        case Family::Decoherence:
          if (full) {
            const bool ground = uniform(rng) < std::norm(c(0));
            c = ground ? Vector2c(c(0) / std::abs(c(0)), 0.0) : Vector2c(0.0, c(1) / std::abs(c(1)));
          } else {
            c(1) *= std::polar(1.0, uniform(rng) < 0.5 ? phi : -phi);
          }
          break;
        case Family::Destruction: {
          const double s = full ? 1.0 : std::sin(phi);
          const double p_remove = s * s * std::norm(c(1));
          if (uniform(rng) < p_remove) {
            lost = true;
          } else {
            c(1) *= full ? 0.0 : std::cos(phi);
            c /= c.norm();
          }
          break;
        }
      }
      if (lost) break;
      psi = u * c;
    }
    if (lost) {
      ++destroyed;
      continue;
    }
    const double pm = std::norm(psi(kMarked));
    sum += pm;
    sum_sq += pm * pm;
  }
  TrajectoryEstimate est;
  est.trajectories = trajectories;
  est.p_marked = sum / trajectories;
  est.p_destroyed = static_cast<double>(destroyed) / trajectories;
  const double mean_sq = sum_sq / trajectories;
  est.stderr_marked = std::sqrt(std::max(0.0, mean_sq - est.p_marked * est.p_marked) / trajectories);
  return est;
}

}  // namespace zeno

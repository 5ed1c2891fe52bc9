#include "zeno/integrator.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace zeno {

namespace {

// Gauss-Legendre nodes and the commutator-free 4th-order Magnus weights.
const double kSqrt3 = std::sqrt(3.0);
const double kNode1 = 0.5 - kSqrt3 / 6.0;
const double kNode2 = 0.5 + kSqrt3 / 6.0;
const double kWeightSmall = 0.25 - kSqrt3 / 6.0;
const double kWeightLarge = 0.25 + kSqrt3 / 6.0;

Eigen::VectorXcd cf4_step(const LinearGenerator& generator, const Eigen::VectorXcd& y, double t, double h)
{
  const Eigen::MatrixXcd a1 = generator(t + kNode1 * h);
  const Eigen::MatrixXcd a2 = generator(t + kNode2 * h);
  const Eigen::MatrixXcd first = (h * (kWeightLarge * a1 + kWeightSmall * a2)).exp();
  const Eigen::MatrixXcd second = (h * (kWeightSmall * a1 + kWeightLarge * a2)).exp();
  return second * (first * y);
}

}  // namespace

void IntegratorConfig::validate() const
{
  if (method == Method::FixedStep && steps < 100) throw std::domain_error("IntegratorConfig: steps must be >= 100");
  if (method == Method::Adaptive && !(rtol > 0.0 && atol > 0.0)) {
    throw std::domain_error("IntegratorConfig: tolerances must be positive");
  }
  if (max_steps <= 0) throw std::domain_error("IntegratorConfig: max_steps must be positive");
  if (renormalize_every <= 0) throw std::domain_error("IntegratorConfig: renormalize_every must be positive");
  if (samples < 2) throw std::domain_error("IntegratorConfig: need at least 2 samples");
}

std::vector<double> linspace(double a, double b, int count)
{
  std::vector<double> out;
  if (count <= 0) return out;
  if (count == 1) return {a};
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out.push_back(k + 1 == count ? b : a + (b - a) * k / (count - 1));
  return out;
}

Eigen::VectorXcd propagate_linear(const LinearGenerator& generator, Eigen::VectorXcd y, double t0, double t1,
                                  const std::vector<double>& sample_times, const LinearObserver& observer,
                                  const IntegratorConfig& config, IntegrationStats* stats,
                                  const Renormalizer& renormalize)
{
  config.validate();
  IntegrationStats local;
  IntegrationStats& st = stats ? *stats : local;
  std::size_t next = 0;
  auto emit = [&](double t) {
    while (next < sample_times.size() && sample_times[next] <= t) {
      if (observer) observer(sample_times[next], y);
      ++next;
    }
  };
  auto after_accept = [&](double t) {
    ++st.accepted;
    if (renormalize && st.accepted % config.renormalize_every == 0) {
      st.max_drift = std::max(st.max_drift, renormalize(y));
    }
    if (!y.allFinite()) throw IntegratorError("propagate_linear: non-finite state", t);
  };

  double t = t0;
  emit(t);
  if (config.method == IntegratorConfig::Method::FixedStep) {
    const double h = (t1 - t0) / config.steps;
    for (int k = 0; k < config.steps; ++k) {
      const double t_next = k + 1 == config.steps ? t1 : t0 + (k + 1) * h;
      // Sample points inside the step are approximated by splitting the step.
      while (next < sample_times.size() && sample_times[next] < t_next) {
        const double ts = sample_times[next];
        if (ts > t) {
          y = cf4_step(generator, y, t, ts - t);
          t = ts;
        }
        emit(t);
      }
      y = cf4_step(generator, y, t, t_next - t);
      t = t_next;
      after_accept(t);
      emit(t);
    }
    return y;
  }

  double h = std::min(1e-4, t1 - t0);
  while (t < t1) {
    if (st.accepted + st.rejected > config.max_steps) {
      throw IntegratorError("propagate_linear: step limit exceeded", t);
    }
    double target = t1;
    if (next < sample_times.size()) target = std::min(target, sample_times[next]);
    const double step = std::min(h, target - t);
    const Eigen::VectorXcd full = cf4_step(generator, y, t, step);
    const Eigen::VectorXcd half = cf4_step(generator, cf4_step(generator, y, t, 0.5 * step), t + 0.5 * step, 0.5 * step);
    const double err = (half - full).cwiseAbs().maxCoeff() / 15.0;
    const double scale = config.atol + config.rtol * half.cwiseAbs().maxCoeff();
    const double ratio = err / scale;
    if (!std::isfinite(ratio)) throw IntegratorError("propagate_linear: non-finite error estimate", t);
    if (ratio <= 1.0) {
      // Richardson extrapolation of the two-half-step result.
      y = half + (half - full) / 15.0;
      t = (step == target - t) ? target : t + step;
      after_accept(t);
      emit(t);
    } else {
      ++st.rejected;
    }
    const double factor = ratio == 0.0 ? 4.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 4.0);
    h = (ratio <= 1.0 && step < h) ? std::max(h, step * factor) : step * factor;
    if (h < 1e-16 * std::max(1.0, std::abs(t))) throw IntegratorError("propagate_linear: step size underflow", t);
  }
  return y;
}

}  // namespace zeno

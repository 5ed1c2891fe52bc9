// Time integrators shared by the continuum and blockade modules.
//
//  * propagate_linear: y' = A(t) y with a commutator-free 4th-order Magnus
//    scheme (two matrix exponentials per step). Fixed step or adaptive with
//    step-doubling error control. Unconditionally stable, which matters for
//    the 1/sin^2 rates near the clipped schedule endpoints.
//  * dopri5: Dormand-Prince 5(4) embedded pair for general non-stiff ODEs.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace zeno {

class IntegratorError : public std::runtime_error {
 public:
  IntegratorError(const std::string& what, double where)
      : std::runtime_error(what + " at t=" + std::to_string(where)), where_(where)
  {
  }
  double where() const { return where_; }

 private:
  double where_;
};

struct IntegratorConfig {
  enum class Method { FixedStep, Adaptive };

  Method method = Method::Adaptive;
  int steps = 2000;              ///< FixedStep: steps over the whole interval.
  double rtol = 1e-9;            ///< Adaptive.
  double atol = 1e-12;           ///< Adaptive.
  long max_steps = 10'000'000;   ///< Stiffness guard.
  int renormalize_every = 1000;  ///< Density-matrix drift control cadence (steps).
  int samples = 1000;            ///< Trace sample count.

  void validate() const;
};

/// Statistics reported back by an integration.
struct IntegrationStats {
  long accepted = 0;
  long rejected = 0;
  double max_drift = 0.0;  ///< Largest correction applied by a renormalization hook.
};

using LinearGenerator = std::function<Eigen::MatrixXcd(double)>;
/// Called at each sample time with the current state.
using LinearObserver = std::function<void(double, const Eigen::VectorXcd&)>;
/// Optional in-place fix-up; returns the size of the correction it applied.
using Renormalizer = std::function<double(Eigen::VectorXcd&)>;

/// Integrates y' = A(t) y from t0 to t1, observing at `sample_times`
/// (sorted, inside [t0, t1]). Returns the final state.
Eigen::VectorXcd propagate_linear(const LinearGenerator& generator, Eigen::VectorXcd y, double t0, double t1,
                                  const std::vector<double>& sample_times, const LinearObserver& observer,
                                  const IntegratorConfig& config, IntegrationStats* stats = nullptr,
                                  const Renormalizer& renormalize = {});

/// Uniformly spaced samples including both ends.
std::vector<double> linspace(double a, double b, int count);

/// Dormand-Prince 5(4) with PI-free standard step control. `rhs(t, y)`
/// returns dy/dt. The observer sees every sample time exactly.
template <typename Vector, typename Rhs, typename Observer>
Vector dopri5(Rhs&& rhs, Vector y, double t0, double t1, const std::vector<double>& sample_times, Observer&& observer,
              double rtol = 1e-10, double atol = 1e-12, long max_steps = 10'000'000, IntegrationStats* stats = nullptr)
{
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  IntegrationStats local;
  IntegrationStats& st = stats ? *stats : local;
  double t = t0;
  double h = std::min(1e-3 * std::max(std::abs(t1 - t0), 1e-12), std::abs(t1 - t0));
  std::size_t next = 0;
  while (next < sample_times.size() && sample_times[next] <= t0) observer(sample_times[next++], y);

  Vector k1 = rhs(t, y);
  while (t < t1) {
    if (st.accepted + st.rejected > max_steps) throw IntegratorError("dopri5: step limit exceeded", t);
    double target = t1;
    if (next < sample_times.size()) target = std::min(target, sample_times[next]);
    const double step = std::min(h, target - t);
    const Vector k2 = rhs(t + c2 * step, (y + step * (a21 * k1)).eval());
    const Vector k3 = rhs(t + c3 * step, (y + step * (a31 * k1 + a32 * k2)).eval());
    const Vector k4 = rhs(t + c4 * step, (y + step * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
    const Vector k5 = rhs(t + c5 * step, (y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
    const Vector k6 = rhs(t + step, (y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
    const Vector y_new = (y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6)).eval();
    const Vector k7 = rhs(t + step, y_new);
    const Vector err = (step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7)).eval();
    const double scale = atol + rtol * std::max(y.cwiseAbs().maxCoeff(), y_new.cwiseAbs().maxCoeff());
    const double ratio = err.cwiseAbs().maxCoeff() / scale;
    if (!std::isfinite(ratio)) throw IntegratorError("dopri5: non-finite error estimate", t);
    if (ratio <= 1.0) {
      t = (step == target - t) ? target : t + step;
      y = y_new;
      k1 = k7;
      ++st.accepted;
      while (next < sample_times.size() && sample_times[next] <= t) observer(sample_times[next++], y);
    } else {
      ++st.rejected;
    }
    const double factor = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
    // A step shortened to land on a sample time says nothing about the natural step.
    h = (ratio <= 1.0 && step < h) ? std::max(h, step * factor) : step * factor;
    if (h < 1e-15 * std::max(1.0, std::abs(t))) throw IntegratorError("dopri5: step size underflow", t);
  }
  return y;
}

}  // namespace zeno

// Single avoided crossing model: schedules, gaps, instantaneous eigenpairs.
//
// Everything here lives in scaled units (g_min = 1, time = t_scale * tau).
// Basis order for 2-vectors is {|m> ~ |0>, |w~> ~ |1>}.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace zeno {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

inline void require_open_unit(double tau, const char* what)
{
  if (!(tau > 0.0 && tau < 1.0)) {
    throw std::domain_error(std::string(what) + ": tau must lie in (0,1), got " + std::to_string(tau));
  }
}

/// f(tau) = cot(pi tau).
template <typename Scalar = double>
Scalar optimal_schedule(Scalar tau)
{
  require_open_unit(static_cast<double>(tau), "optimal_schedule");
  using std::tan;
  // tan of the complement is exact at tau = 1/2 where cos(pi/2) is not.
  return tan(std::numbers::pi_v<Scalar> * (Scalar(0.5) - tau));
}

/// Optimal schedule clamped to |f| <= 1/g_min.
template <typename Scalar = double>
Scalar cutoff_schedule(Scalar tau, Scalar g_min)
{
  if (!(g_min > Scalar(0))) {
    throw std::domain_error("cutoff_schedule: g_min must be positive");
  }
  const Scalar f = optimal_schedule(tau);
  const Scalar bound = Scalar(1) / g_min;
  using std::abs;
  if (abs(f) < bound) return f;
  return f > Scalar(0) ? bound : -bound;
}

/// Scaled gap sqrt(gamma^2 + 1).
template <typename Scalar>
Scalar gap(Scalar gamma)
{
  using std::hypot;
  return hypot(gamma, Scalar(1));
}

/// Ground and first excited state of (gamma Z - X)/2.
template <typename Scalar>
struct Eigenpair {
  Vector2<Scalar> ground;
  Vector2<Scalar> excited;
};

/// Closed-form eigenvectors. With a = sqrt(gamma^2+1) + gamma the ground state is
/// (1, a)/N and the excited state (a, -1)/N. For gamma < 0 the equivalent form
/// a = 1/(sqrt(gamma^2+1) - gamma) avoids cancellation.
template <typename Scalar>
Eigenpair<Scalar> eigenpair(Scalar gamma)
{
  const Scalar s = gap(gamma);
  const Scalar a = gamma >= Scalar(0) ? s + gamma : Scalar(1) / (s - gamma);
  using std::hypot;
  const Scalar norm = hypot(a, Scalar(1));
  Eigenpair<Scalar> out;
  out.ground << Scalar(1) / norm, a / norm;
  out.excited << a / norm, Scalar(-1) / norm;
  return out;
}

/// H_ac / g_min = (gamma Z - X)/2.
template <typename Scalar>
Matrix2<Scalar> crossing_hamiltonian(Scalar gamma)
{
  Matrix2<Scalar> h;
  h << gamma / Scalar(2), Scalar(-0.5), Scalar(-0.5), -gamma / Scalar(2);
  return h;
}

/// Evenly spaced interior points {j/(m+1) : j = 1..m}.
inline std::vector<double> tau_grid(int m)
{
  if (m < 0) throw std::invalid_argument("tau_grid: negative count");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(m));
  for (int j = 1; j <= m; ++j) grid.push_back(static_cast<double>(j) / (m + 1));
  return grid;
}

/// Control function f(tau).
class Schedule {
 public:
  struct Optimal {};
  struct Cutoff {
    double g_min;
  };
  struct Constant {
    double gamma;
  };
  /// Piecewise-linear interpolation through (tau_k, gamma_k), flat outside the table.
  struct Table {
    std::vector<double> tau;
    std::vector<double> gamma;
  };
  using Kind = std::variant<Optimal, Cutoff, Constant, Table>;

  Schedule() : kind_(Optimal{}) {}

  static Schedule optimal() { return Schedule(Optimal{}); }
  static Schedule cutoff(double g_min);
  static Schedule constant(double gamma) { return Schedule(Constant{gamma}); }
  static Schedule table(std::vector<double> tau, std::vector<double> gamma);

  double operator()(double tau) const;

  const Kind& kind() const { return kind_; }
  std::string name() const;

 private:
  explicit Schedule(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// delta_j = <e(j/q) | g((j-1)/q)>, signed. Endpoints tau = 0 and 1 use the
/// asymptotic eigenvectors of the optimal schedule (f = +inf, -inf).
double basis_increment(const Schedule& schedule, int q, int j);

/// Ground-state rotation angle theta with g = (cos theta, sin theta).
double ground_angle(double gamma);

}  // namespace zeno

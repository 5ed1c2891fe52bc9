#include "zeno/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace zeno {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Eigenvectors of the schedule at tau in [0,1]. The endpoints are only
// reachable here; f diverges there for the optimal schedule.
Eigenpair<double> eigenpair_closed(const Schedule& schedule, double tau)
{
  if (tau > 0.0 && tau < 1.0) return eigenpair(schedule(tau));
  return std::visit(
      Overloaded{
          [&](const Schedule::Optimal&) {
            Eigenpair<double> p;
            if (tau <= 0.0) {
              p.ground << 0.0, 1.0;
              p.excited << 1.0, 0.0;
            } else {
              p.ground << 1.0, 0.0;
              p.excited << 0.0, -1.0;
            }
            return p;
          },
          [&](const Schedule::Cutoff& c) { return eigenpair(tau <= 0.0 ? 1.0 / c.g_min : -1.0 / c.g_min); },
          [&](const Schedule::Constant& c) { return eigenpair(c.gamma); },
          [&](const Schedule::Table& t) { return eigenpair(tau <= 0.0 ? t.gamma.front() : t.gamma.back()); },
      },
      schedule.kind());
}

}  // namespace

Schedule Schedule::cutoff(double g_min)
{
  if (!(g_min > 0.0 && g_min <= 1.0)) {
    throw std::domain_error("Schedule::cutoff: g_min must lie in (0,1]");
  }
  return Schedule(Cutoff{g_min});
}

Schedule Schedule::table(std::vector<double> tau, std::vector<double> gamma)
{
  if (tau.empty() || tau.size() != gamma.size()) {
    throw std::invalid_argument("Schedule::table: need equally sized, non-empty tau/gamma lists");
  }
  for (std::size_t k = 0; k < tau.size(); ++k) {
    if (!(tau[k] > 0.0 && tau[k] < 1.0)) throw std::domain_error("Schedule::table: tau outside (0,1)");
    if (k > 0 && !(tau[k] > tau[k - 1])) throw std::domain_error("Schedule::table: tau not strictly increasing");
    if (!std::isfinite(gamma[k])) throw std::domain_error("Schedule::table: non-finite gamma");
  }
  return Schedule(Table{std::move(tau), std::move(gamma)});
}

double Schedule::operator()(double tau) const
{
  return std::visit(
      Overloaded{
          [&](const Optimal&) { return optimal_schedule(tau); },
          [&](const Cutoff& c) { return cutoff_schedule(tau, c.g_min); },
          [&](const Constant& c) {
            require_open_unit(tau, "Schedule(constant)");
            return c.gamma;
          },
          [&](const Table& t) {
            require_open_unit(tau, "Schedule(table)");
            if (tau <= t.tau.front()) return t.gamma.front();
            if (tau >= t.tau.back()) return t.gamma.back();
            const auto hi = std::upper_bound(t.tau.begin(), t.tau.end(), tau);
            const auto k = static_cast<std::size_t>(hi - t.tau.begin());
            const double w = (tau - t.tau[k - 1]) / (t.tau[k] - t.tau[k - 1]);
            return (1.0 - w) * t.gamma[k - 1] + w * t.gamma[k];
          },
      },
      kind_);
}

std::string Schedule::name() const
{
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const Optimal&) { os << "optimal"; },
                 [&](const Cutoff& c) { os << "cutoff(g_min=" << c.g_min << ")"; },
                 [&](const Constant& c) { os << "constant(gamma=" << c.gamma << ")"; },
                 [&](const Table& t) { os << "table(" << t.tau.size() << " points)"; },
             },
             kind_);
  return os.str();
}

double basis_increment(const Schedule& schedule, int q, int j)
{
  if (q < 2 || j < 1 || j > q) throw std::domain_error("basis_increment: need q >= 2 and 1 <= j <= q");
  const auto now = eigenpair_closed(schedule, static_cast<double>(j) / q);
  const auto before = eigenpair_closed(schedule, static_cast<double>(j - 1) / q);
  return now.excited.dot(before.ground);
}

double ground_angle(double gamma)
{
  const auto p = eigenpair(gamma);
  return std::atan2(p.ground(1), p.ground(0));
}

}  // namespace zeno

#include "zeno/blockade.hpp"

#include "zeno/integrator.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace zeno {

namespace {

constexpr double kEdgeLimit = 1e-6;

void check_horizon(double t_max, int samples)
{
  if (!(t_max > 0.0)) throw std::domain_error("blockade: t_max must be positive");
  if (samples < 2) throw std::domain_error("blockade: need at least two samples");
}

// Mixed-radix Fock basis over (f, cav, cont, loss), each occupation 0..cutoff.
class FockBasis {
 public:
  static constexpr int kModes = 4;
  using Occupation = std::array<int, kModes>;

  explicit FockBasis(int cutoff) : levels_(cutoff + 1)
  {
    dim_ = 1;
    for (int k = 0; k < kModes; ++k) dim_ *= levels_;
  }

  int dim() const { return dim_; }
  int cutoff() const { return levels_ - 1; }

  int index(const Occupation& occ) const
  {
    int i = 0;
    for (int k = 0; k < kModes; ++k) i = i * levels_ + occ[k];
    return i;
  }

  Occupation occupation(int i) const
  {
    Occupation occ{};
    for (int k = kModes - 1; k >= 0; --k) {
      occ[k] = i % levels_;
      i /= levels_;
    }
    return occ;
  }

  bool contains(const Occupation& occ) const
  {
    for (int v : occ) {
      if (v < 0 || v > cutoff()) return false;
    }
    return true;
  }

 private:
  int levels_;
  int dim_;
};

enum Mode { kF = 0, kCav = 1, kCont = 2, kLoss = 3 };

// One Hamiltonian term: coefficient * prod_k (a_k^+)^{raise_k} (a_k)^{lower_k},
// with each mode either raised or lowered by one.
struct Term {
  double coefficient;
  std::array<int, 4> delta;  // +1 raise, -1 lower, 0 untouched
};

// Applies a single term to a basis state; returns the matrix element and the target.
double apply_term(const Term& term, FockBasis::Occupation& occ)
{
  double amp = term.coefficient;
  for (int k = 0; k < 4; ++k) {
    if (term.delta[k] == -1) {
      if (occ[k] == 0) return 0.0;
      amp *= std::sqrt(static_cast<double>(occ[k]));
      --occ[k];
    } else if (term.delta[k] == 1) {
      ++occ[k];
      amp *= std::sqrt(static_cast<double>(occ[k]));
    }
  }
  return amp;
}

}  // namespace

void BlockadeParams::validate() const
{
  if (m < 1 || n < 1) throw std::domain_error("BlockadeParams: m and n must be >= 1");
  if (!(G >= 0.0) || !(gamma >= 0.0) || !(c >= 0.0)) throw std::domain_error("BlockadeParams: rates must be >= 0");
}

std::string to_string(RegimeLabel label)
{
  switch (label) {
    case RegimeLabel::Underdamped: return "underdamped";
    case RegimeLabel::Critical: return "critical";
    case RegimeLabel::Overdamped: return "overdamped";
  }
  return "?";
}

RegimeLabel classify_regime(const BlockadeParams& params)
{
  params.validate();
  const double drive = 4.0 * std::sqrt(static_cast<double>(params.m) * params.n) * params.G;
  if (std::abs(drive - params.gamma) <= 1e-12 * std::max(drive, params.gamma)) return RegimeLabel::Critical;
  return drive > params.gamma ? RegimeLabel::Underdamped : RegimeLabel::Overdamped;
}

OffdiagSeries simulate_offdiag(const BlockadeParams& params, double im0, double v0, double t_max, int samples,
                               double rtol)
{
  params.validate();
  check_horizon(t_max, samples);
  const double omega2 = static_cast<double>(params.m) * params.n * params.G * params.G;
  const double damping = 0.5 * params.gamma;
  OffdiagSeries out;
  auto rhs = [&](double, const Eigen::Vector2d& y) { return Eigen::Vector2d(y(1), -omega2 * y(0) - damping * y(1)); };
  auto observer = [&](double t, const Eigen::Vector2d& y) {
    out.t.push_back(t);
    out.y.push_back(y(0));
    out.dy.push_back(y(1));
  };
  dopri5(rhs, Eigen::Vector2d(im0, v0), 0.0, t_max, linspace(0.0, t_max, samples), observer, rtol, 1e-14);
  return out;
}

CoupledSeries simulate_coupled(const BlockadeParams& params, const CoupledInit& init, double t_max, int samples,
                               double rtol)
{
  params.validate();
  check_horizon(t_max, samples);
  const double sn = std::sqrt(static_cast<double>(params.n));
  const double smn = std::sqrt(static_cast<double>(params.m) * params.n);
  const double source_cf = -sn * params.c * init.population_difference;
  const double source_lf = sn * params.c * init.im_lc;
  CoupledSeries out;
  auto rhs = [&](double, const Eigen::Vector2d& y) {
    return Eigen::Vector2d(source_cf - smn * params.G * y(1),
                           smn * params.G * y(0) + source_lf - 0.5 * params.gamma * y(1));
  };
  auto observer = [&](double t, const Eigen::Vector2d& y) {
    out.t.push_back(t);
    out.im_cf.push_back(y(0));
    out.re_lf.push_back(y(1));
  };
  dopri5(rhs, Eigen::Vector2d(init.im_cf, init.re_lf), 0.0, t_max, linspace(0.0, t_max, samples), observer, rtol,
         1e-14);
  return out;
}

double coupled_initial_re_lf(const BlockadeParams& params, double v0)
{
  params.validate();
  if (params.G == 0.0) {
    if (v0 != 0.0) throw std::domain_error("coupled_initial_re_lf: nonzero v0 needs G > 0");
    return 0.0;
  }
  return -v0 / (std::sqrt(static_cast<double>(params.m) * params.n) * params.G);
}

OracleSeries simulate_master_oracle(const BlockadeParams& params, int fock_cutoff, double t_max, int samples,
                                    double rtol)
{
  params.validate();
  check_horizon(t_max, samples);
  if (fock_cutoff < std::max(params.m, params.n)) {
    throw std::domain_error("simulate_master_oracle: fock_cutoff cannot hold the initial state");
  }
  const FockBasis basis(fock_cutoff);
  const int dim = basis.dim();
  if (dim > 4096) throw std::domain_error("simulate_master_oracle: truncated space too large");

  const std::array<Term, 4> terms{{
      {params.c, {-1, 1, 0, 0}},
      {params.c, {1, -1, 0, 0}},
      {params.G, {0, -1, -1, 1}},
      {params.G, {0, 1, 1, -1}},
  }};
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd a_loss = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::VectorXd edge = Eigen::VectorXd::Zero(dim);  // 1 where H leaks out of the truncation
  for (int i = 0; i < dim; ++i) {
    const auto occ = basis.occupation(i);
    for (const Term& term : terms) {
      auto target = occ;
      const double amp = apply_term(term, target);
      if (amp == 0.0) continue;
      if (basis.contains(target)) {
        h(basis.index(target), i) += amp;
      } else {
        edge(i) = 1.0;
      }
    }
    if (occ[kLoss] > 0) {
      auto target = occ;
      --target[kLoss];
      a_loss(basis.index(target), i) = std::sqrt(static_cast<double>(occ[kLoss]));
    }
  }
  const Eigen::MatrixXcd ldl = a_loss.adjoint() * a_loss;
  const std::complex<double> minus_i(0.0, -1.0);

  const int f_state = basis.index({params.n, 0, params.m, 0});
  const int a_state = basis.index({params.n - 1, 1, params.m, 0});
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi(f_state) = 1.0 / std::sqrt(2.0);
  psi(a_state) = std::complex<double>(0.0, 1.0 / std::sqrt(2.0));
  const Eigen::MatrixXcd rho0 = psi * psi.adjoint();

  auto rhs = [&](double, const Eigen::MatrixXcd& rho) -> Eigen::MatrixXcd {
    return minus_i * (h * rho - rho * h) +
           params.gamma * (a_loss * rho * a_loss.adjoint() - 0.5 * (ldl * rho + rho * ldl));
  };
  OracleSeries out;
  auto observer = [&](double t, const Eigen::MatrixXcd& rho) {
    const double edge_population = (rho.diagonal().real().array() * edge.array()).sum();
    out.max_edge_population = std::max(out.max_edge_population, edge_population);
    if (edge_population > kEdgeLimit) {
      throw IntegratorError("simulate_master_oracle: population at the Fock cutoff exceeds 1e-6", t);
    }
    out.t.push_back(t);
    out.im_coherence.push_back(rho(a_state, f_state).imag());
    out.trace.push_back(rho.trace().real());
    out.hermiticity.push_back((rho - rho.adjoint()).cwiseAbs().maxCoeff());
  };
  dopri5(rhs, rho0, 0.0, t_max, linspace(0.0, t_max, samples), observer, rtol, 1e-14);
  return out;
}

std::vector<double> sign_changes(const std::vector<double>& t, const std::vector<double>& y, double band)
{
  if (t.size() != y.size()) throw std::invalid_argument("sign_changes: mismatched series");
  std::vector<double> out;
  int last_sign = 0;
  std::size_t last_index = 0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    const int sign = y[k] > band ? 1 : (y[k] < -band ? -1 : 0);
    if (sign == 0) continue;
    if (last_sign != 0 && sign != last_sign) {
      std::size_t j = last_index + 1;
      while (y[j] * last_sign > 0.0) ++j;
      const double y0 = y[j - 1], y1 = y[j];
      out.push_back(y1 == y0 ? t[j] : t[j - 1] + (t[j] - t[j - 1]) * y0 / (y0 - y1));
    }
    last_sign = sign;
    last_index = k;
  }
  return out;
}

}  // namespace zeno

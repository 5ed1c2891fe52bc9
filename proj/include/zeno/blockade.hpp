// Zeno blockade: damped-oscillator reduction for the fiber/cavity coherence
// Im[rho_cf], its first-order parent pair, and a truncated-Fock master
// equation oracle over the modes (f, cav, cont, loss):
//
//   H = c (a_f a_cav^+ + h.c.) + G (a_cav a_cont a_loss^+ + h.c.)
//   d rho/dt = -i [H, rho] + gamma D[a_loss] rho
#pragma once

#include <string>
#include <vector>

namespace zeno {

struct BlockadeParams {
  int m = 1;  ///< Control-mode photons.
  int n = 1;  ///< Fiber photons.
  double G = 1.0;
  double gamma = 0.0;
  double c = 0.0;

  void validate() const;
};

enum class RegimeLabel { Underdamped, Critical, Overdamped };

std::string to_string(RegimeLabel label);

/// 4 sqrt(mn) G against gamma; equality within 1e-12 relative is Critical.
RegimeLabel classify_regime(const BlockadeParams& params);

struct OffdiagSeries {
  std::vector<double> t;
  std::vector<double> y;   ///< Im[rho_cf]
  std::vector<double> dy;  ///< d/dt Im[rho_cf]
};

/// y'' = -mn G^2 y - (gamma/2) y'.
OffdiagSeries simulate_offdiag(const BlockadeParams& params, double im0, double v0, double t_max, int samples = 1001,
                               double rtol = 1e-10);

/// Inputs of the first-order pair. The population difference rho_ff - rho_cc
/// and Im[rho_lc] have no equations of their own and are held fixed.
struct CoupledInit {
  double im_cf = 0.0;
  double re_lf = 0.0;
  double population_difference = 0.0;
  double im_lc = 0.0;
};

struct CoupledSeries {
  std::vector<double> t;
  std::vector<double> im_cf;
  std::vector<double> re_lf;
};

/// d Im[rho_cf]/dt = -sqrt(n) c (rho_ff - rho_cc) - sqrt(mn) G Re[rho_lf]
/// d Re[rho_lf]/dt =  sqrt(mn) G Im[rho_cf] + sqrt(n) c Im[rho_lc] - (gamma/2) Re[rho_lf]
CoupledSeries simulate_coupled(const BlockadeParams& params, const CoupledInit& init, double t_max, int samples = 1001,
                               double rtol = 1e-10);

/// Re[rho_lf] that gives d Im[rho_cf]/dt = v0 when c = 0.
double coupled_initial_re_lf(const BlockadeParams& params, double v0);

struct OracleSeries {
  std::vector<double> t;
  std::vector<double> im_coherence;  ///< Im <A|rho|F>
  std::vector<double> trace;
  std::vector<double> hermiticity;   ///< max |rho - rho^+|
  double max_edge_population = 0.0;
};

/// Truncated-Fock master equation with every mode occupation <= fock_cutoff.
/// Starts in (|F> + i|A>)/sqrt(2) with F = |f=n, cav=0, cont=m, loss=0> and
/// A = |f=n-1, cav=1, cont=m, loss=0>, so Im<A|rho|F> = 1/2 and its derivative
/// vanishes at t = 0 for c = 0. Throws when population on states that the
/// Hamiltonian couples out of the truncation exceeds 1e-6.
OracleSeries simulate_master_oracle(const BlockadeParams& params, int fock_cutoff, double t_max, int samples = 1001,
                                    double rtol = 1e-10);

/// Times where y crosses zero (linear interpolation), ignoring excursions
/// inside the dead band |y| <= band.
std::vector<double> sign_changes(const std::vector<double>& t, const std::vector<double>& y, double band);

}  // namespace zeno

#include "zeno/hypercube.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace zeno {

namespace {

void check(int n, double s, int marked_sign)
{
  if (n < 1 || n > 64) throw std::domain_error("hypercube: n must lie in [1, 64]");
  if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error("hypercube: s must lie in [0, 1]");
  if (marked_sign != 1 && marked_sign != -1) throw std::domain_error("hypercube: marked_sign must be +1 or -1");
}

constexpr int kScanPoints = 1000;

}  // namespace

SymmetricHamiltonian build_hamiltonian(int n, double s, int marked_sign)
{
  check(n, s, marked_sign);
  SymmetricHamiltonian h{n, s, marked_sign, Eigen::MatrixXd::Zero(n + 1, n + 1)};
  for (int k = 0; k < n; ++k) {
    const double v = -(1.0 - s) * std::sqrt(static_cast<double>(k + 1) * (n - k));
    h.matrix(k, k + 1) = v;
    h.matrix(k + 1, k) = v;
  }
  h.matrix(0, 0) = marked_sign * n * s;
  return h;
}

Eigen::VectorXd omega_tilde(int n)
{
  if (n < 1 || n > 64) throw std::domain_error("omega_tilde: n must lie in [1, 64]");
  Eigen::VectorXd w(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    w(k) = std::exp(0.5 * (log_binom - n * std::numbers::ln2));
  }
  w(0) = 0.0;
  return w.normalized();
}

SpectrumSlice spectrum(int n, double s, int marked_sign)
{
  const SymmetricHamiltonian h = build_hamiltonian(n, s, marked_sign);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix);
  if (es.info() != Eigen::Success) throw std::runtime_error("spectrum: eigensolver failed");
  SpectrumSlice out;
  out.s = s;
  out.eigenvalues = es.eigenvalues();
  out.eigenvectors = es.eigenvectors();
  out.marked_overlap = es.eigenvectors().row(0).array().square().transpose();
  out.omega_overlap = (omega_tilde(n).transpose() * es.eigenvectors()).array().square().transpose();
  return out;
}

double gap_at(int n, double s, int marked_sign)
{
  check(n, s, marked_sign);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n + 1);
  Eigen::VectorXd sub(n);
  diag(0) = marked_sign * n * s;
  for (int k = 0; k < n; ++k) sub(k) = -(1.0 - s) * std::sqrt(static_cast<double>(k + 1) * (n - k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("gap_at: eigensolver failed");
  return es.eigenvalues()(1) - es.eigenvalues()(0);
}

MinGap min_gap(int n, int marked_sign)
{
  check(n, 0.5, marked_sign);
  int best = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  auto grid = [](int i) { return (i + 0.5) / kScanPoints; };
  for (int i = 0; i < kScanPoints; ++i) {
    const double g = gap_at(n, grid(i), marked_sign);
    if (g < best_gap) {
      best_gap = g;
      best = i;
    }
  }
  double a = best > 0 ? grid(best - 1) : 0.0;
  double b = best + 1 < kScanPoints ? grid(best + 1) : 1.0;
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = gap_at(n, c, marked_sign), fd = gap_at(n, d, marked_sign);
  while (b - a > 1e-13) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = gap_at(n, c, marked_sign);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = gap_at(n, d, marked_sign);
    }
  }
  MinGap out{0.5 * (a + b), gap_at(n, 0.5 * (a + b), marked_sign)};
  if (best_gap < out.g_min) out = MinGap{grid(best), best_gap};
  return out;
}

}  // namespace zeno

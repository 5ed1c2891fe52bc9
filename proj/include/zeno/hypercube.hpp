// Transverse-field hypercube search restricted to the symmetric subspace.
//
// Basis |k>, k = Hamming distance from the marked string, k = 0..n:
//   H(s) = -(1-s) sum_i X_i + marked_sign n s |m><m|
// which is tridiagonal with H(k, k+1) = -(1-s) sqrt((k+1)(n-k)).
//
// marked_sign = -1 (default) makes |m> the ground state at s = 1. +1 follows
// the other sign convention and is kept for comparison.
#pragma once

#include <Eigen/Dense>

#include <utility>

namespace zeno {

struct SymmetricHamiltonian {
  int n = 1;
  double s = 0.0;
  int marked_sign = -1;
  Eigen::MatrixXd matrix;
};

struct SpectrumSlice {
  double s = 0.0;
  Eigen::VectorXd eigenvalues;      ///< Ascending.
  Eigen::VectorXd marked_overlap;   ///< |<m|E_j>|^2
  Eigen::VectorXd omega_overlap;    ///< |<omega~|E_j>|^2
  Eigen::MatrixXd eigenvectors;     ///< Columns, symmetric-subspace basis.
};

SymmetricHamiltonian build_hamiltonian(int n, double s, int marked_sign = -1);

/// |omega~> in the symmetric basis: binomial amplitudes sqrt(C(n,k)/2^n) with
/// the k = 0 component removed and the rest renormalized.
Eigen::VectorXd omega_tilde(int n);

SpectrumSlice spectrum(int n, double s, int marked_sign = -1);

/// E1 - E0 at s (eigenvalues only, from the tridiagonal form).
double gap_at(int n, double s, int marked_sign = -1);

struct MinGap {
  double s_star = 0.0;
  double g_min = 0.0;
};

/// 1000-point scan over (0,1) followed by golden-section refinement.
MinGap min_gap(int n, int marked_sign = -1);

}  // namespace zeno

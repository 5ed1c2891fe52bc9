// Density matrices over {|m>, |w~>, |d>} and the purity / marked-probability
// machinery for the two-level sector.
#pragma once

#include <Eigen/Dense>

#include <complex>

namespace zeno {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;
using Matrix3c = Eigen::Matrix3cd;

/// Basis indices.
enum Level : int { kMarked = 0, kOmega = 1, kDestroyed = 2 };

/// 3x3 density matrix. |d> carries population only: the (0,2), (1,2) entries
/// and their transposes are held at exactly zero.
class SystemState {
 public:
  SystemState() : rho_(Matrix3c::Zero()) { rho_(kOmega, kOmega) = 1.0; }

  /// Block is the 2x2 {|m>,|w~>} sector, destroyed is <d|rho|d>.
  SystemState(const Matrix2c& block, double destroyed);

  static SystemState omega() { return SystemState(); }
  static SystemState marked();
  static SystemState destroyed();
  static SystemState pure(const Vector2c& psi);

  const Matrix3c& rho() const { return rho_; }
  Matrix2c block() const { return rho_.topLeftCorner<2, 2>(); }
  double destroyed_population() const { return rho_(kDestroyed, kDestroyed).real(); }

  /// Re-Hermitize and rescale to unit trace.
  SystemState renormalized() const;

  /// Largest Hermiticity, trace and negativity defects.
  bool is_valid(double tol = 1e-10) const;

 private:
  Matrix3c rho_;
};

double marked_probability(const SystemState& state);
double destroyed_probability(const SystemState& state);
/// Tr rho^2.
double purity(const SystemState& state);
double trace(const SystemState& state);

/// 1/2 (1 - sqrt(1 - 2(1 - Tr rho^2))): the smaller eigenvalue of a 2x2 density
/// matrix with the given purity, and a lower bound on <m|rho|m>.
double purity_lower_bound(double tr_rho_sq);

/// rho = p_psi |psi><psi| + p_m |m><m|.
struct PmDecomposition {
  double p_m = 0.0;
  double p_psi = 1.0;
  Vector2c psi = Vector2c(0.0, 1.0);

  Matrix2c reconstruct() const;
};

/// Exact decomposition of a unit-trace 2x2 block. p_m is the unique value
/// leaving a rank-one remainder, det(rho)/<w~|rho|w~>, which is never below
/// purity_lower_bound(Tr rho^2). <w~|rho|w~> = 0 returns p_m = 1.
PmDecomposition decompose_pm(const Matrix2c& block);
PmDecomposition decompose_pm(const SystemState& state);

}  // namespace zeno

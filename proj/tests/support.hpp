// Shared helpers for the unit tests: seeded random states and small oracles.
#pragma once

#include "zeno/state.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>

namespace zeno::test {

inline std::mt19937_64& rng()
{
  static std::mt19937_64 engine(20240611);
  return engine;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

inline Vector2c random_ket()
{
  std::normal_distribution<double> normal;
  Vector2c v(Complex(normal(rng()), normal(rng())), Complex(normal(rng()), normal(rng())));
  return v.normalized();
}

/// Random 2x2 density matrix: Ginibre construction, full rank with probability one.
inline Matrix2c random_block()
{
  std::normal_distribution<double> normal;
  Matrix2c g;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) g(i, j) = Complex(normal(rng()), normal(rng()));
  }
  const Matrix2c rho = g * g.adjoint();
  return rho / rho.trace().real();
}

/// Random state with some population already on |d>.
inline SystemState random_state(double max_destroyed = 0.3)
{
  const double d = uniform(0.0, max_destroyed);
  return SystemState((1.0 - d) * random_block(), d);
}

inline double max_abs(const Eigen::MatrixXcd& a) { return a.cwiseAbs().maxCoeff(); }

/// Embed a 2x2 operator as the top-left block of a 3x3 one.
inline Matrix3c embed(const Matrix2c& a)
{
  Matrix3c out = Matrix3c::Zero();
  out.topLeftCorner<2, 2>() = a;
  return out;
}

}  // namespace zeno::test

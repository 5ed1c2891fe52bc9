#include "zeno/hypercube.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <bit>
#include <cmath>

using namespace zeno;

namespace {

// H on all 2^n bit strings, marked string 0...0.
Eigen::MatrixXd full_hamiltonian(int n, double s, int sign)
{
  const int dim = 1 << n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int x = 0; x < dim; ++x) {
    for (int bit = 0; bit < n; ++bit) h(x ^ (1 << bit), x) -= (1.0 - s);
  }
  h(0, 0) += sign * n * s;
  return h;
}

// Symmetric-basis vector lifted to 2^n amplitudes.
Eigen::VectorXd lift(int n, const Eigen::VectorXd& v)
{
  Eigen::VectorXd out(1 << n);
  for (int x = 0; x < (1 << n); ++x) {
    const int k = std::popcount(static_cast<unsigned>(x));
    out(x) = v(k) / std::sqrt(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
  }
  return out;
}

}  // namespace

TEST_CASE("symmetric subspace matches full-space diagonalization")
{
  for (int n = 1; n <= 10; ++n) {
    for (int sign : {-1, 1}) {
      for (double s : {0.0, 0.2, 0.5, 0.73, 1.0}) {
        const Eigen::MatrixXd h = full_hamiltonian(n, s, sign);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full(h);
        const SpectrumSlice slice = spectrum(n, s, sign);
        for (int j = 0; j <= n; ++j) {
          const double e = slice.eigenvalues(j);
          const double nearest = (full.eigenvalues().array() - e).abs().minCoeff();
          CHECK(nearest < 1e-10);
          const Eigen::VectorXd psi = lift(n, slice.eigenvectors.col(j));
          CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
          CHECK((h * psi - e * psi).norm() < 1e-10);
        }
        // The ground state is permutation symmetric, so it must be found here too.
        CHECK(slice.eigenvalues(0) == doctest::Approx(full.eigenvalues()(0)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("single qubit minimum gap is analytic")
{
  // H = [[-s, -(1-s)], [-(1-s), 0]]: gap^2 = s^2 + 4(1-s)^2, minimal at s = 4/5.
  const MinGap g = min_gap(1);
  // A flat minimum pins s* only to about sqrt(machine epsilon).
  CHECK(g.s_star == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(g.g_min == doctest::Approx(std::sqrt(0.8)).epsilon(1e-12));
  for (double s : {0.0, 0.3, 0.9}) CHECK(gap_at(1, s) == doctest::Approx(std::sqrt(s * s + 4 * (1 - s) * (1 - s))));
}

TEST_CASE("gap is continuous and min_gap is a true minimum")
{
  const int n = 12;
  const MinGap g = min_gap(n);
  double prev = gap_at(n, 0.0);
  for (int k = 1; k <= 2000; ++k) {
    const double s = k / 2000.0;
    const double v = gap_at(n, s);
    CHECK(v >= g.g_min - 1e-14);
    CHECK(std::abs(v - prev) < 0.05);
    prev = v;
  }
  CHECK(gap_at(n, g.s_star) == doctest::Approx(g.g_min));
}

TEST_CASE("normalized minimum gap converges")
{
  // g_min n^-1 2^(n/2) settles: each term carries an energy scale of n.
  double prev = 0.0;
  for (int n = 12; n <= 20; n += 2) {
    const double scaled = min_gap(n).g_min * std::pow(2.0, n / 2.0) / n;
    if (prev > 0.0) CHECK(std::abs(scaled / prev - 1.0) < 0.04);
    prev = scaled;
  }
}

TEST_CASE("spectrum slice bookkeeping")
{
  const int n = 8;
  const SpectrumSlice slice = spectrum(n, 0.4);
  CHECK(slice.marked_overlap.sum() == doctest::Approx(1.0));
  CHECK(slice.omega_overlap.sum() == doctest::Approx(1.0));
  for (int j = 1; j <= n; ++j) CHECK(slice.eigenvalues(j) >= slice.eigenvalues(j - 1));

  const Eigen::VectorXd w = omega_tilde(n);
  CHECK(w(0) == 0.0);
  CHECK(w.norm() == doctest::Approx(1.0));
  CHECK(w(1) / w(2) == doctest::Approx(std::sqrt(8.0 / 28.0)));

  // At s = 1 the marked state is an eigenstate with energy -n.
  const SpectrumSlice end = spectrum(n, 1.0);
  CHECK(end.eigenvalues(0) == doctest::Approx(-n));
  CHECK(end.marked_overlap(0) == doctest::Approx(1.0));

  const auto h = build_hamiltonian(5, 0.5);
  CHECK(h.matrix(0, 1) == doctest::Approx(-0.5 * std::sqrt(5.0)));
  CHECK(h.matrix(0, 0) == doctest::Approx(-2.5));
  CHECK(build_hamiltonian(5, 0.5, +1).matrix(0, 0) == doctest::Approx(2.5));

  CHECK_THROWS(build_hamiltonian(0, 0.5));
  CHECK_THROWS(build_hamiltonian(4, 1.5));
  CHECK_THROWS(build_hamiltonian(4, 0.5, 2));
}

#include "zeno/model.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace zeno;
using std::numbers::pi;

TEST_CASE("eigenpair diagonalizes the crossing Hamiltonian")
{
  for (double gamma : {-1e6, -30.0, -2.5, -1.0, -0.1, 0.0, 0.3, 1.0, 7.0, 1e6}) {
    const Matrix2<double> h = crossing_hamiltonian(gamma);
    const auto p = eigenpair(gamma);
    const double half_gap = 0.5 * gap(gamma);
    CHECK((h * p.ground + half_gap * p.ground).norm() <= 1e-12 * (1.0 + std::abs(gamma)));
    CHECK((h * p.excited - half_gap * p.excited).norm() <= 1e-12 * (1.0 + std::abs(gamma)));
    CHECK(p.ground.norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(p.ground.dot(p.excited)) < 1e-15);

    // Same spectrum as a generic solver.
    const Eigen::SelfAdjointEigenSolver<Matrix2<double>> es(h);
    CHECK(es.eigenvalues()(0) == doctest::Approx(-half_gap).epsilon(1e-13));
    CHECK(es.eigenvalues()(1) == doctest::Approx(half_gap).epsilon(1e-13));
  }
}

TEST_CASE("optimal-schedule eigenvectors have a closed form")
{
  // f = cot(pi tau) puts the ground state at angle pi(1 - tau)/2 from |m>.
  for (int k = 1; k < 200; ++k) {
    const double tau = k / 200.0;
    const auto p = eigenpair(optimal_schedule(tau));
    CHECK(p.ground(0) == doctest::Approx(std::sin(pi * tau / 2)).epsilon(1e-13));
    CHECK(p.ground(1) == doctest::Approx(std::cos(pi * tau / 2)).epsilon(1e-13));
    CHECK(p.excited(0) == doctest::Approx(std::cos(pi * tau / 2)).epsilon(1e-13));
    CHECK(p.excited(1) == doctest::Approx(-std::sin(pi * tau / 2)).epsilon(1e-13));
    CHECK(ground_angle(optimal_schedule(tau)) == doctest::Approx(pi * (1 - tau) / 2).epsilon(1e-13));
  }
  CHECK(optimal_schedule(0.5) == 0.0);
}

TEST_CASE("eigenpair stays accurate at huge |gamma|")
{
  for (double gamma : {1e8, 1e12, 1e150}) {
    const auto up = eigenpair(gamma);
    const auto down = eigenpair(-gamma);
    CHECK(std::isfinite(up.ground(0)));
    CHECK(up.ground(1) == doctest::Approx(1.0));
    CHECK(up.ground(0) == doctest::Approx(0.5 / gamma).epsilon(1e-12));
    CHECK(down.ground(0) == doctest::Approx(1.0));
    CHECK(down.ground(1) == doctest::Approx(0.5 / gamma).epsilon(1e-12));
  }
}

TEST_CASE("signed basis increments sum to -pi/2")
{
  for (int q : {2, 10, 100, 10000}) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int j = 1; j <= q; ++j) {
      const double d = basis_increment(Schedule::optimal(), q, j);
      CHECK(d == doctest::Approx(-std::sin(pi / (2.0 * q))).epsilon(1e-12));
      sum += d;
      sum_sq += d * d;
    }
    CHECK(sum == doctest::Approx(-q * std::sin(pi / (2.0 * q))).epsilon(1e-12));
    // The Zeno argument: the sum of squares vanishes like pi^2/(4q).
    if (q >= 100) CHECK(sum_sq * q == doctest::Approx(pi * pi / 4).epsilon(1e-4));
  }
  double sum = 0.0;
  for (int j = 1; j <= 100000; ++j) sum += basis_increment(Schedule::optimal(), 100000, j);
  CHECK(sum == doctest::Approx(-pi / 2).epsilon(1e-9));
}

TEST_CASE("cutoff schedule clamps at 1/g_min")
{
  const double g_min = 0.05;
  for (int k = 1; k < 1000; ++k) {
    const double tau = k / 1000.0;
    const double f = cutoff_schedule(tau, g_min);
    CHECK(std::abs(f) <= 1.0 / g_min);
    if (std::abs(optimal_schedule(tau)) < 1.0 / g_min) CHECK(f == optimal_schedule(tau));
  }
  CHECK(Schedule::cutoff(g_min)(1e-6) == doctest::Approx(20.0));
  CHECK(Schedule::cutoff(g_min)(1 - 1e-6) == doctest::Approx(-20.0));
  CHECK_THROWS_AS(Schedule::cutoff(0.0), std::domain_error);
  CHECK_THROWS_AS(Schedule::cutoff(2.0), std::domain_error);
}

TEST_CASE("table schedule interpolates linearly and holds its ends")
{
  const auto s = Schedule::table({0.2, 0.5, 0.8}, {4.0, 0.0, -2.0});
  CHECK(s(0.1) == 4.0);
  CHECK(s(0.35) == doctest::Approx(2.0));
  CHECK(s(0.65) == doctest::Approx(-1.0));
  CHECK(s(0.9) == -2.0);
  CHECK_THROWS_AS(Schedule::table({0.5, 0.4}, {1.0, 2.0}), std::domain_error);
  CHECK_THROWS_AS(Schedule::table({0.5}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(s(1.0), std::domain_error);
}

TEST_CASE("schedule domain and grid")
{
  CHECK_THROWS_AS(optimal_schedule(0.0), std::domain_error);
  CHECK_THROWS_AS(optimal_schedule(1.0), std::domain_error);
  CHECK_THROWS_AS(optimal_schedule(std::nan("")), std::domain_error);
  const auto grid = tau_grid(4);
  REQUIRE(grid.size() == 4);
  CHECK(grid.front() == doctest::Approx(0.2));
  CHECK(grid.back() == doctest::Approx(0.8));
  CHECK(tau_grid(0).empty());
  CHECK_THROWS(tau_grid(-1));
  CHECK(gap(0.0) == 1.0);
  CHECK(gap(3.0) == doctest::Approx(std::sqrt(10.0)));
  CHECK(Schedule::constant(1.5)(0.3) == 1.5);
  CHECK_THROWS_AS(basis_increment(Schedule::optimal(), 1, 1), std::domain_error);
}

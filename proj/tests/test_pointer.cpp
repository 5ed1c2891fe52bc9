#include "support.hpp"

#include "zeno/channels.hpp"
#include "zeno/pointer.hpp"

#include <doctest.h>

#include <numbers>

using namespace zeno;
using zeno::test::max_abs;
using std::numbers::pi;

TEST_CASE("pointer cycles reduce to the partial channels")
{
  for (int trial = 0; trial < 200; ++trial) {
    const SystemState s = zeno::test::random_state();
    const double gamma = zeno::test::uniform(-10.0, 10.0);
    const double label_gamma = zeno::test::uniform(-10.0, 10.0);
    const double t_scale = zeno::test::uniform(0.1, 5.0);
    const double phi = zeno::test::uniform(0.0, pi / 2);
    const double t_rot = phi / (2.0 * x_mag(t_scale, gamma));
    const BranchState bs = BranchState::from_system(s, label_gamma);
    CHECK(bs.total_probability() == doctest::Approx(1.0).epsilon(1e-13));

    const BranchState diss = dissipation_step(bs, gamma, t_scale, t_rot);
    CHECK(diss.is_reset());
    CHECK(diss.total_probability() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_abs(diss.to_system().rho() - partial_destruction(s, gamma, phi).rho()) < 1e-12);

    const BranchState alt = decoherence_alt_step(bs, gamma, t_scale, t_rot);
    CHECK(alt.is_reset());
    CHECK(max_abs(alt.to_system().rho() - partial_dephasing(s, gamma, phi).rho()) < 1e-12);
  }
}

TEST_CASE("only the product t_rot * x_mag matters")
{
  const SystemState s = zeno::test::random_state();
  const double gamma = 1.3;
  const BranchState bs = BranchState::from_system(s, gamma);
  const auto a = dissipation_step(bs, gamma, 1.0, 0.2).to_system();
  const auto b = dissipation_step(bs, gamma, 4.0, 0.05).to_system();
  CHECK(max_abs(a.rho() - b.rho()) < 1e-13);
}

TEST_CASE("full destruction at the crossing")
{
  // 2 t_rot x_mag = pi/2 removes the excited branch outright.
  const double t_scale = 1.0;
  const double t_rot = pi / (4.0 * x_mag(t_scale, 0.0));
  const auto out = dissipation_step(BranchState::from_system(SystemState::omega(), 0.0), 0.0, t_scale, t_rot);
  CHECK(out.destroyed == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(marked_probability(out.to_system()) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("individual operators")
{
  const SystemState s = zeno::test::random_state(0.0);
  const double gamma = -0.4;
  const BranchState bs = BranchState::from_system(s, gamma);
  const BranchState moved = apply_u_meas(bs, 2.0, gamma, Direction::Forward);
  CHECK_FALSE(moved.is_reset());
  for (const auto& component : moved.components) {
    for (const auto& b : component) {
      CHECK(std::abs(b.x) == doctest::Approx(x_mag(2.0, gamma)));
      CHECK((b.label == Label::G) == (b.x > 0.0));
    }
  }
  CHECK_THROWS(moved.to_system());
  const BranchState back = apply_u_meas(moved, 2.0, gamma, Direction::Inverse);
  CHECK(back.is_reset());
  CHECK(max_abs(back.to_system().rho() - s.rho()) < 1e-14);

  // The rotation conserves each branch's weight; the abort moves the |1> part out.
  const BranchState rotated = apply_u_rot(moved, 0.3, x_mag(2.0, gamma));
  CHECK(rotated.total_probability() == doctest::Approx(1.0).epsilon(1e-13));
  const BranchState kept = project_and_abort(rotated);
  CHECK(kept.total_probability() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(kept.destroyed > 0.0);

  CHECK_THROWS_AS(apply_u_meas(bs, 1.0, gamma + 0.1, Direction::Forward), std::invalid_argument);
  CHECK(x_mag(2.0, 0.0) == 2.0);
}

TEST_CASE("rebasing keeps the density matrix")
{
  const SystemState s = zeno::test::random_state();
  const BranchState bs = BranchState::from_system(s, 0.2);
  const BranchState other = bs.rebased(-7.0);
  CHECK(other.gamma == -7.0);
  CHECK(max_abs(other.to_system().rho() - s.rho()) < 1e-13);
  CHECK(BranchState::from_system(SystemState::destroyed(), 0.0).components.empty());
}

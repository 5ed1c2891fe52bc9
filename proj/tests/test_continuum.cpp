#include "support.hpp"

#include "zeno/continuum.hpp"

#include <doctest.h>

#include <numbers>

using namespace zeno;
using zeno::test::embed;
using zeno::test::max_abs;
using std::numbers::pi;

namespace {

// Right-hand side straight from the master equations, in matrix form.
Matrix3c direct_rhs(const LindbladSpec& spec, double tau, const Matrix3c& rho)
{
  const double f = spec.schedule(tau);
  const auto p = eigenpair(f);
  const Vector2c g = p.ground.cast<Complex>(), e = p.excited.cast<Complex>();
  const double rate = spec.t_scale * (f * f + 1.0) * spec.kappa0;
  switch (spec.family) {
    case ContinuumFamily::AdiabaticPhase: {
      const Matrix3c h = embed(crossing_hamiltonian(f).cast<Complex>());
      return Complex(0.0, -spec.t_scale) * (h * rho - rho * h);
    }
    case ContinuumFamily::Dephasing: {
      Matrix3c z = embed(g * g.adjoint() - e * e.adjoint());
      z(2, 2) = 1.0;
      return rate * (z * rho * z - rho);
    }
    case ContinuumFamily::Destruction: {
      Matrix3c l = Matrix3c::Zero();
      l.row(2).head<2>() = e.adjoint();
      const Matrix3c ldl = l.adjoint() * l;
      return rate * (l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl));
    }
  }
  return Matrix3c::Zero();
}

// Classical RK4 on the 3x3 matrix over the clipped interval.
Matrix3c rk4(const LindbladSpec& spec, int steps)
{
  Matrix3c rho = SystemState::omega().rho();
  const double a = spec.tau_clip, b = 1.0 - spec.tau_clip, h = (b - a) / steps;
  for (int k = 0; k < steps; ++k) {
    const double t = a + k * h;
    const Matrix3c k1 = direct_rhs(spec, t, rho);
    const Matrix3c k2 = direct_rhs(spec, t + h / 2, rho + h / 2 * k1);
    const Matrix3c k3 = direct_rhs(spec, t + h / 2, rho + h / 2 * k2);
    const Matrix3c k4 = direct_rhs(spec, t + h, rho + h * k3);
    rho += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return rho;
}

LindbladSpec make(ContinuumFamily family, double kappa0, double t_scale, double clip = 1e-6)
{
  LindbladSpec s;
  s.family = family;
  s.kappa0 = kappa0;
  s.t_scale = t_scale;
  s.tau_clip = clip;
  return s;
}

}  // namespace

TEST_CASE("vectorized generator equals the direct Lindblad form")
{
  for (ContinuumFamily family : {ContinuumFamily::AdiabaticPhase, ContinuumFamily::Dephasing,
                                 ContinuumFamily::Destruction}) {
    const LindbladSpec spec = make(family, 0.7, 3.0);
    for (double tau : {0.01, 0.3, 0.5, 0.77, 0.99}) {
      for (int k = 0; k < 5; ++k) {
        const SystemState s = zeno::test::random_state();
        const Eigen::VectorXcd out = lindblad_generator(spec, tau) * vectorize(s);
        const Matrix3c expected = direct_rhs(spec, tau, s.rho());
        const Matrix3c got = Eigen::Map<const Matrix3c>(out.data());
        CHECK(max_abs(got - expected) < 1e-10 * (1.0 + max_abs(expected)));
      }
    }
  }
  const SystemState s = zeno::test::random_state();
  CHECK(max_abs(devectorize(vectorize(s)).rho() - s.rho()) == 0.0);
}

TEST_CASE("master equations agree with an explicit RK4 oracle")
{
  for (ContinuumFamily family : {ContinuumFamily::AdiabaticPhase, ContinuumFamily::Dephasing,
                                 ContinuumFamily::Destruction}) {
    const LindbladSpec spec = make(family, 1.0, 5.0, 0.01);
    const Matrix3c expected = rk4(spec, 40000);
    IntegratorConfig cfg;
    cfg.rtol = 1e-11;
    cfg.atol = 1e-13;
    const auto result = integrate(spec, cfg);
    for (int k = 0; k < 3; ++k) {
      CHECK(result.trace.final_state.rho()(k, k).real() == doctest::Approx(expected(k, k).real()).epsilon(1e-8));
    }
    CHECK(std::abs(result.trace.final_state.rho()(0, 1) - expected(0, 1)) < 1e-8);
  }
}

TEST_CASE("constant schedule has closed-form decay")
{
  const double gamma = 0.8, kappa0 = 0.3, t = 2.0;
  const double span = 1.0 - 2e-6;
  const double rate = t * (gamma * gamma + 1.0) * kappa0 * span;
  const auto p = eigenpair(gamma);
  const double cg = p.ground(1), ce = p.excited(1);  // <g|w~>, <e|w~>
  IntegratorConfig cfg;
  cfg.rtol = 1e-11;

  auto marked = [&](double pg, double pe, double coherence) {
    return pg * p.ground(0) * p.ground(0) + pe * p.excited(0) * p.excited(0) +
           2.0 * coherence * p.ground(0) * p.excited(0);
  };

  LindbladSpec deph = make(ContinuumFamily::Dephasing, kappa0, t);
  deph.schedule = Schedule::constant(gamma);
  const auto rd = integrate_dephasing(deph, cfg).trace;
  CHECK(rd.final_marked() == doctest::Approx(marked(cg * cg, ce * ce, cg * ce * std::exp(-2.0 * rate))).epsilon(1e-9));

  LindbladSpec dest = make(ContinuumFamily::Destruction, kappa0, t);
  dest.schedule = Schedule::constant(gamma);
  const auto rx = integrate_destruction(dest, cfg).trace;
  CHECK(rx.final_destroyed() == doctest::Approx(ce * ce * (1.0 - std::exp(-rate))).epsilon(1e-9));
  CHECK(rx.final_marked() ==
        doctest::Approx(marked(cg * cg, ce * ce * std::exp(-rate), cg * ce * std::exp(-0.5 * rate))).epsilon(1e-9));
}

TEST_CASE("zero rate leaves |w~> alone")
{
  for (ContinuumFamily family : {ContinuumFamily::Dephasing, ContinuumFamily::Destruction}) {
    const auto r = integrate(make(family, 0.0, 10.0)).trace;
    CHECK(r.final_marked() < 1e-14);
    CHECK(r.final_destroyed() < 1e-14);
  }
}

TEST_CASE("physical invariants along the trace")
{
  for (ContinuumFamily family : {ContinuumFamily::AdiabaticPhase, ContinuumFamily::Dephasing,
                                 ContinuumFamily::Destruction}) {
    const auto result = integrate(make(family, 2.0, 4.0));
    CHECK(result.trace.steps.size() == 1000);
    double prev_purity = 1.0;
    for (const auto& r : result.trace.steps) {
      CHECK(r.p_marked >= -1e-12);
      CHECK(r.p_marked <= 1.0 + 1e-12);
      CHECK(r.p_destroyed >= -1e-12);
      if (family == ContinuumFamily::AdiabaticPhase) CHECK(r.purity == doctest::Approx(1.0).epsilon(1e-9));
      if (family == ContinuumFamily::Dephasing) {
        CHECK(r.purity <= prev_purity + 1e-10);
        CHECK(r.p_marked >= purity_lower_bound(r.purity) - 1e-10);
      }
      prev_purity = r.purity;
    }
    CHECK(result.trace.final_state.is_valid(1e-9));
  }
}

TEST_CASE("adiabatic limits")
{
  CHECK(integrate_adiabatic(1e-3).trace.final_marked() < 1e-4);
  CHECK(integrate_adiabatic(50.0).trace.final_marked() > 0.99);
  CHECK_THROWS_AS(integrate_adiabatic(0.0), std::domain_error);
}

TEST_CASE("discrete segments converge to the master equation")
{
  for (ContinuumFamily family : {ContinuumFamily::Dephasing, ContinuumFamily::Destruction}) {
    const LindbladSpec spec = make(family, 1.0, 5.0);
    const auto coarse = discrete_limit_check(spec, 64);
    const auto fine = discrete_limit_check(spec, 256);
    CHECK(fine.deviation <= 1e-2);
    CHECK(fine.deviation < coarse.deviation);
    CHECK(fine.q == 256);
  }
  CHECK_THROWS(discrete_limit_check(make(ContinuumFamily::AdiabaticPhase, 1.0, 1.0), 64));
  CHECK_THROWS(discrete_limit_check(make(ContinuumFamily::Dephasing, 1.0, 1.0), 4));
}

TEST_CASE("LindbladSpec factories, rates and family checks")
{
  const auto d = LindbladSpec::dephasing_from_zeno_time(3.0, 0.5);
  CHECK(d.kappa0 == doctest::Approx(0.25));
  CHECK(d.family == ContinuumFamily::Dephasing);
  const auto x = LindbladSpec::destruction_from_rotation(3.0, 0.5, 0.2);
  CHECK(x.kappa0 == doctest::Approx(4 * 0.04 * 0.5));
  CHECK(x.family == ContinuumFamily::Destruction);
  CHECK(kappa(d, 0.5) == doctest::Approx(0.25));
  CHECK(kappa(d, 0.25) == doctest::Approx(0.5));

  CHECK_THROWS(integrate_dephasing(x));
  CHECK_THROWS(integrate_destruction(d));
  LindbladSpec bad = d;
  bad.kappa0 = -1.0;
  CHECK_THROWS(bad.validate());
  bad = d;
  bad.tau_clip = 0.6;
  CHECK_THROWS(bad.validate());
  for (ContinuumFamily f : {ContinuumFamily::AdiabaticPhase, ContinuumFamily::Dephasing, ContinuumFamily::Destruction}) {
    CHECK(continuum_family_from_string(to_string(f)) == f);
  }
}

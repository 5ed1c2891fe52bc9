#include "zeno/continuum.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace zeno {

namespace {

using Matrix9c = Eigen::Matrix<Complex, 9, 9>;

// Column-major vectorization identities:
//   vec(A rho)   = (I kron A) vec(rho)
//   vec(rho B)   = (B^T kron I) vec(rho)
//   vec(L rho L^+) = (conj(L) kron L) vec(rho)
Matrix9c kron(const Matrix3c& a, const Matrix3c& b)
{
  Matrix9c out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out.block<3, 3>(3 * i, 3 * j) = a(i, j) * b;
  }
  return out;
}

Matrix9c dissipator(const Matrix3c& l)
{
  const Matrix3c id = Matrix3c::Identity();
  const Matrix3c ldl = l.adjoint() * l;
  return kron(l.conjugate(), l) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id);
}

Matrix3c embed(const Matrix2c& block, Complex dd)
{
  Matrix3c m = Matrix3c::Zero();
  m.topLeftCorner<2, 2>() = block;
  m(2, 2) = dd;
  return m;
}

// vec(rho) positions of rho_00, rho_10, rho_01, rho_11, rho_dd. Every generator
// here is block diagonal in {m, omega} + {d} apart from the feed into rho_dd, so
// the |d> coherences stay zero and these five entries evolve on their own.
constexpr std::array<int, 5> kReduced{0, 1, 3, 4, 8};

Eigen::MatrixXcd reduced_generator(const LindbladSpec& spec, double tau)
{
  const Eigen::MatrixXcd full = lindblad_generator(spec, tau);
  Eigen::MatrixXcd out(5, 5);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) out(i, j) = full(kReduced[i], kReduced[j]);
  }
  return out;
}

Eigen::VectorXcd reduce(const SystemState& s)
{
  const Eigen::VectorXcd v = vectorize(s);
  Eigen::VectorXcd out(5);
  for (int i = 0; i < 5; ++i) out(i) = v(kReduced[i]);
  return out;
}

SystemState expand(const Eigen::VectorXcd& r)
{
  Matrix2c block;
  block << r(0), r(2), r(1), r(3);
  return SystemState(block, r(4).real());
}

void require_family(const LindbladSpec& spec, ContinuumFamily family, const char* who)
{
  if (spec.family != family) throw std::invalid_argument(std::string(who) + ": wrong family " + to_string(spec.family));
}

}  // namespace

std::string to_string(ContinuumFamily family)
{
  switch (family) {
    case ContinuumFamily::AdiabaticPhase: return "adiabatic";
    case ContinuumFamily::Dephasing: return "dephasing";
    case ContinuumFamily::Destruction: return "destruction";
  }
  return "?";
}

ContinuumFamily continuum_family_from_string(const std::string& name)
{
  if (name == "adiabatic") return ContinuumFamily::AdiabaticPhase;
  if (name == "dephasing") return ContinuumFamily::Dephasing;
  if (name == "destruction") return ContinuumFamily::Destruction;
  throw std::invalid_argument("unknown continuum family '" + name + "'");
}

LindbladSpec LindbladSpec::dephasing_from_zeno_time(double t_scale, double t_z)
{
  LindbladSpec spec;
  spec.family = ContinuumFamily::Dephasing;
  spec.t_scale = t_scale;
  spec.kappa0 = 0.5 * t_z;
  return spec;
}

LindbladSpec LindbladSpec::destruction_from_rotation(double t_scale, double t_z, double t_rot)
{
  LindbladSpec spec;
  spec.family = ContinuumFamily::Destruction;
  spec.t_scale = t_scale;
  spec.kappa0 = 4.0 * t_rot * t_rot * t_z;
  return spec;
}

void LindbladSpec::validate() const
{
  if (!(kappa0 >= 0.0)) throw std::domain_error("LindbladSpec: kappa0 must be >= 0");
  if (!(t_scale >= 0.0)) throw std::domain_error("LindbladSpec: t_scale must be >= 0");
  if (!(tau_clip > 0.0 && tau_clip < 0.5)) throw std::domain_error("LindbladSpec: tau_clip must lie in (0, 1/2)");
}

double kappa(const LindbladSpec& spec, double tau)
{
  const double f = spec.schedule(tau);
  return (f * f + 1.0) * spec.kappa0;
}

Eigen::MatrixXcd lindblad_generator(const LindbladSpec& spec, double tau)
{
  const double gamma = spec.schedule(tau);
  const Matrix3c id = Matrix3c::Identity();
  switch (spec.family) {
    case ContinuumFamily::AdiabaticPhase: {
      const Matrix3c h = embed(crossing_hamiltonian(gamma).cast<Complex>(), 0.0);
      return Complex(0.0, -spec.t_scale) * (kron(id, h) - kron(h.transpose(), id));
    }
    case ContinuumFamily::Dephasing: {
      const Matrix2c u = eigenbasis(gamma);
      // Zt on the two-level sector, identity on |d> so its population is untouched.
      const Matrix3c z = embed(u * Eigen::Vector2cd(1.0, -1.0).asDiagonal() * u.adjoint(), 1.0);
      const double rate = spec.t_scale * (gamma * gamma + 1.0) * spec.kappa0;
      return rate * (kron(z.conjugate(), z) - kron(id, id));
    }
    case ContinuumFamily::Destruction: {
      const auto p = eigenpair(gamma);
      Matrix3c l = Matrix3c::Zero();
      l(2, 0) = p.excited(0);
      l(2, 1) = p.excited(1);
      const double rate = spec.t_scale * (gamma * gamma + 1.0) * spec.kappa0;
      return rate * dissipator(l);
    }
  }
  throw std::logic_error("lindblad_generator: unhandled family");
}

Eigen::VectorXcd vectorize(const SystemState& state)
{
  return Eigen::Map<const Eigen::VectorXcd>(state.rho().data(), 9);
}

SystemState devectorize(const Eigen::VectorXcd& v)
{
  const Eigen::Map<const Matrix3c> rho(v.data());
  return SystemState(rho.topLeftCorner<2, 2>(), rho(2, 2).real());
}

ContinuumResult integrate(const LindbladSpec& spec, const IntegratorConfig& integrator)
{
  spec.validate();
  integrator.validate();
  const double t0 = spec.tau_clip;
  const double t1 = 1.0 - spec.tau_clip;
  const auto samples = linspace(t0, t1, integrator.samples);

  ContinuumResult result;
  int index = 0;
  auto observer = [&](double tau, const Eigen::VectorXcd& y) {
    const SystemState s = expand(y);
    result.trace.steps.push_back(StepRecord{index++, tau, marked_probability(s), destroyed_probability(s), purity(s)});
  };
  auto renormalize = [](Eigen::VectorXcd& y) {
    const Eigen::VectorXcd fixed = reduce(expand(y).renormalized());
    const double drift = (fixed - y).cwiseAbs().maxCoeff();
    y = fixed;
    return drift;
  };
  const auto generator = [&](double tau) { return reduced_generator(spec, tau); };
  const Eigen::VectorXcd y = propagate_linear(generator, reduce(SystemState::omega()), t0, t1, samples, observer,
                                              integrator, &result.stats, renormalize);
  result.trace.final_state = expand(y);
  return result;
}

ContinuumResult integrate_adiabatic(double t_scale, const IntegratorConfig& integrator, const Schedule& schedule)
{
  if (!(t_scale > 0.0)) throw std::domain_error("integrate_adiabatic: t_scale must be positive");
  LindbladSpec spec;
  spec.family = ContinuumFamily::AdiabaticPhase;
  spec.t_scale = t_scale;
  spec.schedule = schedule;
  return integrate(spec, integrator);
}

ContinuumResult integrate_dephasing(const LindbladSpec& spec, const IntegratorConfig& integrator)
{
  require_family(spec, ContinuumFamily::Dephasing, "integrate_dephasing");
  return integrate(spec, integrator);
}

ContinuumResult integrate_destruction(const LindbladSpec& spec, const IntegratorConfig& integrator)
{
  require_family(spec, ContinuumFamily::Destruction, "integrate_destruction");
  return integrate(spec, integrator);
}

SystemState discrete_segments(const LindbladSpec& spec, int q)
{
  spec.validate();
  if (q < 1) throw std::domain_error("discrete_segments: q must be >= 1");
  if (spec.family == ContinuumFamily::AdiabaticPhase) {
    throw std::invalid_argument("discrete_segments: only dephasing and destruction have a segment channel");
  }
  const double t0 = spec.tau_clip;
  const double width = (1.0 - 2.0 * spec.tau_clip) / q;
  SystemState s = SystemState::omega();
  for (int k = 1; k <= q; ++k) {
    const double tau = k == q ? 1.0 - spec.tau_clip : t0 + k * width;
    const double gamma = spec.schedule(tau);
    const double exponent = spec.t_scale * kappa(spec, tau) * width;
    if (spec.family == ContinuumFamily::Dephasing) {
      s = partial_dephasing(s, gamma, std::acos(std::exp(-2.0 * exponent)));
    } else {
      s = partial_destruction(s, gamma, std::acos(std::exp(-0.5 * exponent)));
    }
  }
  return s;
}

DiscreteLimit discrete_limit_check(const LindbladSpec& spec, int q, const IntegratorConfig& integrator)
{
  if (q < 8) throw std::domain_error("discrete_limit_check: q must be >= 8");
  IntegratorConfig cfg = integrator;
  cfg.samples = 2;
  const SystemState reference = integrate(spec, cfg).trace.final_state;
  const SystemState discrete = discrete_segments(spec, q);
  DiscreteLimit out;
  out.q = q;
  for (int k = 0; k < 3; ++k) {
    out.deviation = std::max(out.deviation, std::abs(reference.rho()(k, k).real() - discrete.rho()(k, k).real()));
  }
  return out;
}

}  // namespace zeno

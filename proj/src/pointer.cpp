#include "zeno/pointer.hpp"

#include "zeno/channels.hpp"
#include "zeno/model.hpp"

#include <cmath>
#include <stdexcept>

namespace zeno {

namespace {

constexpr double kPrune = 1e-14;

void prune(BranchState& bs)
{
  for (auto& component : bs.components) {
    std::erase_if(component, [](const Branch& b) { return std::sqrt(b.weight()) < kPrune; });
  }
  std::erase_if(bs.components, [](const auto& c) { return c.empty(); });
}

// (g, e) amplitudes of a reset component.
Vector2c amplitudes(const std::vector<Branch>& component)
{
  Vector2c c = Vector2c::Zero();
  for (const Branch& b : component) c(b.label == Label::G ? 0 : 1) += b.amp * b.a0;
  return c;
}

std::vector<Branch> branches_from(const Vector2c& c)
{
  std::vector<Branch> out;
  out.push_back(Branch{Label::G, 0.0, 1.0, 0.0, c(0)});
  out.push_back(Branch{Label::E, 0.0, 1.0, 0.0, c(1)});
  return out;
}

void require_reset(const BranchState& bs, const char* who)
{
  if (!bs.is_reset()) throw std::invalid_argument(std::string(who) + ": pointer and ancilla must be reset");
}

// Shared body of the two composite steps. `keep_flipped` selects the
// decoherence variant, where the ancilla-|1> outcome survives as its own
// component after an X flip.
BranchState measure_cycle(const BranchState& input, double gamma, double t_scale, double t_rot, bool keep_flipped,
                          const char* who)
{
  require_reset(input, who);
  if (!(t_scale >= 0.0) || !(t_rot >= 0.0)) throw std::domain_error(std::string(who) + ": times must be >= 0");
  BranchState bs = input.rebased(gamma);
  bs = apply_u_meas(bs, t_scale, gamma, Direction::Forward);
  bs = apply_u_rot(bs, t_rot, x_mag(t_scale, gamma));
  if (keep_flipped) {
    BranchState out = bs;
    out.components.clear();
    for (const auto& component : bs.components) {
      std::vector<Branch> zero, one;
      for (const Branch& b : component) {
        zero.push_back(Branch{b.label, b.x, 1.0, 0.0, b.amp * b.a0});
        one.push_back(Branch{b.label, b.x, 1.0, 0.0, b.amp * b.a1});
      }
      out.components.push_back(std::move(zero));
      out.components.push_back(std::move(one));
    }
    prune(out);
    bs = std::move(out);
  } else {
    bs = project_and_abort(bs);
  }
  bs = apply_u_meas(bs, t_scale, gamma, Direction::Inverse);
  if (!bs.is_reset(1e-9)) throw std::logic_error(std::string(who) + ": pointer failed to return to x = 0");
  // Snap the returned positions; inverse shifts are exact up to rounding.
  for (auto& component : bs.components) {
    for (Branch& b : component) b.x = 0.0;
  }
  return bs;
}

}  // namespace

double BranchState::total_probability() const
{
  double p = destroyed;
  for (const auto& component : components) {
    for (const Branch& b : component) p += b.weight();
  }
  return p;
}

bool BranchState::is_reset(double tol) const
{
  for (const auto& component : components) {
    for (const Branch& b : component) {
      if (std::abs(b.x) > tol || std::abs(b.a1) > tol || std::abs(b.a0 - 1.0) > tol) return false;
    }
  }
  return true;
}

BranchState BranchState::from_system(const SystemState& state, double gamma)
{
  BranchState bs;
  bs.gamma = gamma;
  bs.destroyed = state.destroyed_population();
  const Eigen::SelfAdjointEigenSolver<Matrix2c> es(state.block());
  const Matrix2c u = eigenbasis(gamma);
  for (int k = 0; k < 2; ++k) {
    const double lambda = es.eigenvalues()(k);
    if (lambda <= 0.0) continue;
    bs.components.push_back(branches_from(std::sqrt(lambda) * (u.adjoint() * es.eigenvectors().col(k))));
  }
  prune(bs);
  return bs;
}

SystemState BranchState::to_system() const
{
  require_reset(*this, "BranchState::to_system");
  const Matrix2c u = eigenbasis(gamma);
  Matrix2c block = Matrix2c::Zero();
  for (const auto& component : components) {
    const Vector2c psi = u * amplitudes(component);
    block += psi * psi.adjoint();
  }
  return SystemState(block, destroyed);
}

BranchState BranchState::rebased(double new_gamma) const
{
  require_reset(*this, "BranchState::rebased");
  if (new_gamma == gamma) return *this;
  const Matrix2c change = eigenbasis(new_gamma).adjoint() * eigenbasis(gamma);
  BranchState out;
  out.gamma = new_gamma;
  out.destroyed = destroyed;
  for (const auto& component : components) out.components.push_back(branches_from(change * amplitudes(component)));
  prune(out);
  return out;
}

double x_mag(double t_scale, double gamma) { return t_scale * gap(gamma); }

BranchState apply_u_meas(const BranchState& bs, double t_scale, double gamma, Direction direction)
{
  if (gamma != bs.gamma) throw std::invalid_argument("apply_u_meas: gamma differs from the branch labelling basis");
  const double shift = (direction == Direction::Forward ? 1.0 : -1.0) * x_mag(t_scale, gamma);
  BranchState out = bs;
  for (auto& component : out.components) {
    for (Branch& b : component) b.x += b.label == Label::G ? shift : -shift;
  }
  return out;
}

BranchState apply_u_rot(const BranchState& bs, double t_rot, double x_mag)
{
  BranchState out = bs;
  for (auto& component : out.components) {
    for (Branch& b : component) {
      // exp(-i theta X)
      const double theta = t_rot * (x_mag - b.x);
      const double c = std::cos(theta);
      const Complex is(0.0, std::sin(theta));
      const Complex a0 = c * b.a0 - is * b.a1;
      const Complex a1 = c * b.a1 - is * b.a0;
      b.a0 = a0;
      b.a1 = a1;
    }
  }
  return out;
}

BranchState project_and_abort(const BranchState& bs)
{
  BranchState out = bs;
  for (auto& component : out.components) {
    for (Branch& b : component) {
      out.destroyed += std::norm(b.amp * b.a1);
      b.amp *= b.a0;
      b.a0 = 1.0;
      b.a1 = 0.0;
    }
  }
  prune(out);
  return out;
}

BranchState dissipation_step(const BranchState& bs, double gamma, double t_scale, double t_rot)
{
  return measure_cycle(bs, gamma, t_scale, t_rot, false, "dissipation_step");
}

BranchState decoherence_alt_step(const BranchState& bs, double gamma, double t_scale, double t_rot)
{
  return measure_cycle(bs, gamma, t_scale, t_rot, true, "decoherence_alt_step");
}

}  // namespace zeno

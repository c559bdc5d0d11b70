#include "mrfm/propagator.hpp"

#include <cmath>
#include <stdexcept>

#include "kernels/block.hpp"

namespace mrfm {

std::pair<cplx, cplx> spin_block_step(double d, double eps, double dt, cplx a, cplx b) {
  const double he = eps / 2.0;
  const double omega = std::sqrt(d * d + he * he);
  double c, s;
  kernels::detail::block_coefficients(omega, dt, c, s);
  kernels::detail::apply_block(1.0, 0.0, c, s * d, s * he, a, b);
  return {a, b};
}

StepPlan::StepPlan(GridPtr grid, double dt, PhysicalParams physics,
                   const kernels::KernelTable& kernels)
    : grid_(std::move(grid)),
      dt_(dt),
      physics_(physics),
      kernels_(&kernels),
      fft_(grid_->size(), SpinorField::kComponents) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be > 0");
  const std::size_t n = grid_->size();
  const double inv_n = 1.0 / static_cast<double>(n);
  kinetic_half_.resize(n);
  kinetic_half_scaled_.resize(n);
  kinetic_full_scaled_.resize(n);
  harmonic_.resize(n);
  const auto p = grid_->momenta();
  const auto z = grid_->positions();
  for (std::size_t j = 0; j < n; ++j) {
    const double e = p[j] * p[j] / 2.0;
    kinetic_half_[j] = std::polar(1.0, -e * dt / 2.0);
    kinetic_half_scaled_[j] = kinetic_half_[j] * inv_n;
    kinetic_full_scaled_[j] = std::polar(inv_n, -e * dt);
    harmonic_[j] = std::polar(1.0, -z[j] * z[j] / 2.0 * dt);
  }
}

void StepPlan::kinetic(SpinorField& f, std::span<const cplx> scaled_phase) {
  const std::size_t n = grid_->size();
  cplx* data = f.data().data();
  fft_.forward(data);
  for (std::size_t c = 0; c < SpinorField::kComponents; ++c) {
    kernels_->multiply_phase(data + c * n, scaled_phase.data(), n);
  }
  fft_.inverse(data);
}

void StepPlan::potential(SpinorField& f, const DriveSchedule& s, double tau_mid) {
  kernels::PotentialArgs args;
  args.z = grid_->positions().data();
  args.harmonic_phase = harmonic_.data();
  args.n = grid_->size();
  args.half_phi_dot = s.phi_dot(tau_mid) / 2.0;
  args.eta = physics_.eta;
  args.half_eps = s.epsilon(tau_mid) / 2.0;
  args.dt = dt_;
  kernels_->potential_step(args, f.component(Spin::Up, Spin::Up).data(),
                           f.component(Spin::Down, Spin::Up).data(),
                           f.component(Spin::Up, Spin::Down).data(),
                           f.component(Spin::Down, Spin::Down).data());
}

void StepPlan::step(SpinorField& f, const DriveSchedule& s, double tau) {
  advance(f, s, tau, 1);
}

void StepPlan::advance(SpinorField& f, const DriveSchedule& s, double tau_start,
                       std::int64_t n_steps) {
  if (f.representation() != Representation::Position) {
    throw std::invalid_argument("propagator expects a position-space field");
  }
  if (!(f.grid() == *grid_)) throw std::invalid_argument("field and plan grids differ");
  if (n_steps <= 0) return;
  kinetic(f, kinetic_half_scaled_);
  for (std::int64_t k = 0; k < n_steps; ++k) {
    potential(f, s, tau_start + (static_cast<double>(k) + 0.5) * dt_);
    kinetic(f, k + 1 < n_steps ? std::span<const cplx>(kinetic_full_scaled_)
                               : std::span<const cplx>(kinetic_half_scaled_));
  }
}

void step(SpinorField& f, StepPlan& plan, const DriveSchedule& s, double tau) {
  plan.step(f, s, tau);
}

}  // namespace mrfm

#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include "mrfm/aligned.hpp"
#include "mrfm/kernels.hpp"
#include "mrfm/params.hpp"
#include "mrfm/schedule.hpp"
#include "mrfm/spectral.hpp"
#include "mrfm/spinor_field.hpp"

namespace mrfm {

/// Exact exp(-i dt M) for M = [[d, -ε/2], [-ε/2, -d]] applied to (a, b).
///
/// Uses cos(Ω dt) I - i sin(Ω dt)/Ω M with Ω = sqrt(d² + ε²/4), switching to a
/// Taylor series when Ω dt < 1e-6.
std::pair<cplx, cplx> spin_block_step(double d, double eps, double dt, cplx a, cplx b);

/// Precomputed phases and transforms for Strang stepping at a fixed dt:
/// half kinetic (p²/2), full potential (z²/2 plus the spin block at the step
/// midpoint), half kinetic.
class StepPlan {
 public:
  StepPlan(GridPtr grid, double dt, PhysicalParams physics,
           const kernels::KernelTable& kernels = kernels::active_table());

  const SpatialGrid& grid() const noexcept { return *grid_; }
  double dt() const noexcept { return dt_; }
  const PhysicalParams& physics() const noexcept { return physics_; }
  const kernels::KernelTable& kernels() const noexcept { return *kernels_; }

  /// exp(-i p_j² dt/4); every entry has unit modulus.
  std::span<const cplx> kinetic_half_phase() const noexcept { return kinetic_half_; }
  /// exp(-i z_j² dt/2)
  std::span<const cplx> harmonic_phase() const noexcept { return harmonic_; }

  /// One full Strang step starting at tau.
  void step(SpinorField& f, const DriveSchedule& s, double tau);

  /// n_steps consecutive Strang steps from tau_start with adjacent half
  /// kinetic factors fused, so each step costs one forward/inverse transform
  /// pair. Step k uses the midpoint tau_start + (k + 1/2) dt.
  void advance(SpinorField& f, const DriveSchedule& s, double tau_start, std::int64_t n_steps);

 private:
  void kinetic(SpinorField& f, std::span<const cplx> scaled_phase);
  void potential(SpinorField& f, const DriveSchedule& s, double tau_mid);

  GridPtr grid_;
  double dt_;
  PhysicalParams physics_;
  const kernels::KernelTable* kernels_;
  SpectralTransform fft_;
  AlignedVector<cplx> kinetic_half_;
  // Kinetic phases with the 1/N inverse-transform normalization folded in.
  // N is a power of two, so the scaling is exact.
  AlignedVector<cplx> kinetic_half_scaled_;
  AlignedVector<cplx> kinetic_full_scaled_;
  AlignedVector<cplx> harmonic_;
};

/// Free-function form of StepPlan::step.
void step(SpinorField& f, StepPlan& plan, const DriveSchedule& s, double tau);

}  // namespace mrfm

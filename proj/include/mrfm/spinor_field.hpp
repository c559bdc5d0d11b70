#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

#include "mrfm/aligned.hpp"
#include "mrfm/grid.hpp"
#include "mrfm/params.hpp"

namespace mrfm {

enum class Spin : std::uint8_t { Up = 0, Down = 1 };

enum class Representation : std::uint8_t { Position, Momentum };

/// Component layout: index 2*s1 + s2, i.e. (↑↑, ↑↓, ↓↑, ↓↓). s1 is the measured
/// spin, s2 the remote one.
constexpr std::size_t component_index(Spin s1, Spin s2) noexcept {
  return 2 * static_cast<std::size_t>(s1) + static_cast<std::size_t>(s2);
}

/// Four complex functions u_{s1 s2} on a shared grid, stored contiguously
/// (component-major) in one 64-byte aligned block.
class SpinorField {
 public:
  static constexpr std::size_t kComponents = 4;

  /// All-zero field in position representation.
  explicit SpinorField(GridPtr grid);

  const SpatialGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grid_->size(); }

  Representation representation() const noexcept { return rep_; }
  void set_representation(Representation rep) noexcept { rep_ = rep; }

  std::span<cplx> component(std::size_t index);
  std::span<const cplx> component(std::size_t index) const;
  std::span<cplx> component(Spin s1, Spin s2) { return component(component_index(s1, s2)); }
  std::span<const cplx> component(Spin s1, Spin s2) const {
    return component(component_index(s1, s2));
  }

  /// All components back to back, length 4·size().
  std::span<cplx> data() noexcept { return values_; }
  std::span<const cplx> data() const noexcept { return values_; }

  SpinorField& operator*=(cplx factor) noexcept;

 private:
  GridPtr grid_;
  Representation rep_ = Representation::Position;
  AlignedVector<cplx> values_;
};

struct PairMasses {
  double up2 = 0.0;    ///< ∫ |u_↑↑|² + |u_↓↑|² dz
  double down2 = 0.0;  ///< ∫ |u_↑↓|² + |u_↓↓|² dz
};

/// Σ_components Σ_j |u|² times the cell measure (dz in position space, dp in
/// momentum space).
double field_norm2(const SpinorField& f);

/// Throws std::invalid_argument for a momentum-space field.
PairMasses pair_masses(const SpinorField& f);

/// Continuum-normalized momentum amplitudes ũ(p) = (2π)^{-1/2} ∫ u(z) e^{-ipz} dz.
SpinorField to_momentum_space(const SpinorField& f);
SpinorField to_position_space(const SpinorField& f);

/// Coherent oscillator packet π^{-1/4} exp(-(z - √2 Re α)²/2 + i √2 Im α z),
/// renormalized on the grid.
AlignedVector<cplx> coherent_packet(const SpatialGrid& grid, std::complex<double> alpha);

/// u(z) ⊗ Σ spin_amplitudes[k] |k⟩ with spin amplitudes in component order.
SpinorField product_state(const GridPtr& grid, std::span<const cplx> packet,
                          const std::array<cplx, 4>& spin_amplitudes);

/// The initial condition (1/√2) u_α(z) (|↑↑⟩ + |↓↓⟩).
SpinorField coherent_bell_state(const GridPtr& grid, const PhysicalParams& params);

/// sqrt(Σ |a - b|² dz); grids must match.
double l2_distance(const SpinorField& a, const SpinorField& b);

}  // namespace mrfm

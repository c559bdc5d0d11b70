#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace mrfm {

/// Uniform periodic grid in the cantilever coordinate z, with the conjugate
/// momenta laid out in unshifted FFT order (0, 1, ..., N/2-1, -N/2, ..., -1) * 2π/L.
///
/// Immutable after construction; share it through GridPtr.
class SpatialGrid {
 public:
  /// Throws std::invalid_argument unless n_points is a power of two >= 8 and
  /// z_max > z_min.
  SpatialGrid(double z_min, double z_max, std::size_t n_points);

  double z_min() const noexcept { return z_min_; }
  double z_max() const noexcept { return z_max_; }
  std::size_t size() const noexcept { return z_.size(); }
  double dz() const noexcept { return dz_; }
  double length() const noexcept { return z_max_ - z_min_; }
  /// Spacing of the momentum grid, 2π/L.
  double dp() const noexcept;
  /// Largest |p| on the grid (the Nyquist momentum), π/dz.
  double max_momentum() const noexcept;

  std::span<const double> positions() const noexcept { return z_; }
  std::span<const double> momenta() const noexcept { return p_; }

  bool operator==(const SpatialGrid& o) const noexcept {
    return z_min_ == o.z_min_ && z_max_ == o.z_max_ && size() == o.size();
  }

 private:
  double z_min_;
  double z_max_;
  double dz_;
  std::vector<double> z_;
  std::vector<double> p_;
};

using GridPtr = std::shared_ptr<const SpatialGrid>;

GridPtr make_grid(double z_min, double z_max, std::size_t n_points);

constexpr bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace mrfm

#include "mrfm/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mrfm {

SpatialGrid::SpatialGrid(double z_min, double z_max, std::size_t n_points)
    : z_min_(z_min), z_max_(z_max) {
  if (!std::isfinite(z_min) || !std::isfinite(z_max) || !(z_max > z_min)) {
    throw std::invalid_argument("degenerate grid interval: z_max must exceed z_min");
  }
  if (n_points < 8 || !is_power_of_two(n_points)) {
    throw std::invalid_argument("grid size must be a power of two >= 8, got " +
                                std::to_string(n_points));
  }
  dz_ = (z_max - z_min) / static_cast<double>(n_points);
  z_.resize(n_points);
  p_.resize(n_points);
  const double dp = 2.0 * std::numbers::pi / (z_max - z_min);
  const auto n = static_cast<std::ptrdiff_t>(n_points);
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    z_[j] = z_min + static_cast<double>(j) * dz_;
    const std::ptrdiff_t k = j < n / 2 ? j : j - n;
    p_[j] = static_cast<double>(k) * dp;
  }
}

double SpatialGrid::dp() const noexcept { return 2.0 * std::numbers::pi / length(); }

double SpatialGrid::max_momentum() const noexcept { return std::numbers::pi / dz_; }

GridPtr make_grid(double z_min, double z_max, std::size_t n_points) {
  return std::make_shared<const SpatialGrid>(z_min, z_max, n_points);
}

}  // namespace mrfm

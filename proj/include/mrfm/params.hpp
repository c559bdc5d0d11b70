#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "mrfm/grid.hpp"

namespace mrfm {

/// Physical constants of the spin-cantilever model in dimensionless units.
struct PhysicalParams {
  double eta = 0.3;                                       ///< spin-cantilever coupling
  std::complex<double> alpha{-10.0 * std::numbers::sqrt2, 0.0};  ///< coherent amplitude
  double larmor_detuning = 0.0;                           ///< always zero (rf at resonance)

  /// Mean initial cantilever coordinate, √2·Re(α).
  double z0() const noexcept { return std::numbers::sqrt2 * alpha.real(); }
  /// Mean initial cantilever momentum, √2·Im(α).
  double p0() const noexcept { return std::numbers::sqrt2 * alpha.imag(); }

  /// Throws ConfigError on eta < 0, non-finite α, or nonzero detuning.
  void validate() const;

  bool operator==(const PhysicalParams&) const = default;
};

struct GridSpec {
  double z_min = -60.0;
  double z_max = 60.0;
  std::size_t n_points = 2048;

  GridPtr build() const { return make_grid(z_min, z_max, n_points); }
  bool operator==(const GridSpec&) const = default;
};

struct ScheduleSpec {
  std::string id = "paper-eq6";
  /// Overrides of the schedule's default parameters.
  std::map<std::string, double> parameters;

  bool operator==(const ScheduleSpec&) const = default;
};

struct SimConfig {
  PhysicalParams physical;
  GridSpec grid;
  double dt = 2e-4;
  double t_final = 216.0;
  ScheduleSpec schedule;
  std::vector<double> snapshot_times;
  std::size_t observable_stride = 250;
  std::string output_dir = "runs/paper";
  double peak_threshold = 0.1;
  double merge_width = 2.0;

  /// Checks every invariant, including the per-step phase-advance bound
  /// dt·max|φ̇|/2 <= kMaxPhaseAdvance over [0, t_final]. Throws ConfigError.
  void validate() const;

  bool operator==(const SimConfig&) const = default;
};

inline constexpr double kMaxPhaseAdvance = 0.25;

}  // namespace mrfm

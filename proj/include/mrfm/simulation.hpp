#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mrfm/observables.hpp"
#include "mrfm/params.hpp"
#include "mrfm/schedule.hpp"
#include "mrfm/spinor_field.hpp"

namespace mrfm {

/// Everything recorded at one sampling instant.
struct ObservableSample {
  double tau = 0.0;
  double norm2 = 0.0;
  PairMasses masses;
  double mean_z = 0.0;
  SpinExpectations spins;
  std::vector<Peak> peaks;
  std::optional<CatDecomposition> branches;
};

ObservableSample measure(const SpinorField& f, double tau, const PeakOptions& options);

struct Snapshot {
  double requested_tau = 0.0;
  double tau = 0.0;  ///< requested time snapped to the step grid
  std::int64_t step = 0;
  SpinorField field;
};

struct Provenance {
  std::string code_version;
  std::string kernels;
  double wall_seconds = 0.0;
  double dt = 0.0;
  GridSpec grid;
  std::int64_t steps = 0;
};

struct RunRecord {
  SimConfig config;
  std::vector<ObservableSample> samples;
  std::vector<Snapshot> snapshots;  ///< requested times plus t_final, ascending
  Provenance provenance;

  const Snapshot& final_snapshot() const { return snapshots.back(); }
};

/// Optional streaming callbacks, invoked as data is produced.
struct ObservableSinks {
  std::function<void(const ObservableSample&)> on_sample;
  std::function<void(const Snapshot&)> on_snapshot;
};

/// Checks run every this many steps for non-finite values.
inline constexpr std::int64_t kNanGuardInterval = 1000;
/// Outer fraction of the position and momentum ranges watched by the leak monitor.
inline constexpr double kEdgeBandFraction = 0.05;
/// Largest probability tolerated inside those bands.
inline constexpr double kEdgeLeakLimit = 1e-6;

/// Probability in the outer kEdgeBandFraction of the z grid on either side.
double position_edge_probability(const SpinorField& f);
/// Same, for the momentum grid near ±p_max.
double momentum_edge_probability(const SpinorField& f);

/// Integrates from τ = 0 to round(t_final/dt)·dt. Samples observables every
/// observable_stride steps and at the final step; snapshots are taken at the
/// steps nearest the requested times and always at the final step.
///
/// Throws EdgeLeakError when either leak band exceeds kEdgeLeakLimit at a
/// sampling or snapshot instant, NonFiniteError when the field turns
/// non-finite. A config with t_final = 0 yields the initial sample only.
RunRecord evolve(const SpinorField& f0, const SimConfig& cfg, const DriveSchedule& s,
                 const ObservableSinks& sinks = {});

/// Number of integration steps for a config.
std::int64_t step_count(const SimConfig& cfg);

std::string code_version();

}  // namespace mrfm

#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrfm/observables.hpp"
#include "mrfm/simulation.hpp"

/// Plain-text export: decimal CSV with 17 significant digits so that every
/// double survives a write/read cycle exactly.
namespace mrfm::io {

/// timeseries.csv column order.
inline constexpr const char* kTimeseriesHeader =
    "tau,norm2,mass_up2,mass_down2,mean_z,sx1,sy1,sz1,sz2,n_peaks,peak1_z,peak1_mass,peak2_z,"
    "peak2_mass,branch_a_z,branch_b_z,branch_a_p_up2,branch_b_p_up2,branch_a_residual,"
    "branch_b_residual";

inline constexpr const char* kSnapshotHeader =
    "z,re_uu,im_uu,re_ud,im_ud,re_du,im_du,re_dd,im_dd";

std::string timeseries_row(const ObservableSample& s);

/// Streams samples to timeseries.csv as they are produced.
class TimeseriesWriter {
 public:
  explicit TimeseriesWriter(const std::filesystem::path& path);
  void append(const ObservableSample& s);

 private:
  std::ofstream out_;
};

/// One parsed timeseries.csv row; NaN marks unavailable values.
struct TimeseriesRow {
  double tau, norm2, mass_up2, mass_down2, mean_z, sx1, sy1, sz1, sz2;
  int n_peaks;
  double peak1_z, peak1_mass, peak2_z, peak2_mass;
  double branch_a_z, branch_b_z, branch_a_p_up2, branch_b_p_up2, branch_a_residual,
      branch_b_residual;
};

/// Throws MalformedFileError on a bad header, short rows or unparsable values.
std::vector<TimeseriesRow> read_timeseries(const std::filesystem::path& path);

/// Branch centroids from rows where the cat decomposition was available.
std::vector<BranchSample> branch_samples(std::span<const TimeseriesRow> rows);
std::vector<BranchSample> branch_samples(std::span<const ObservableSample> samples);

/// "snapshot_<tau>.csv" with tau printed to at most six decimals, trailing
/// zeros dropped.
std::string snapshot_filename(double tau);

void write_snapshot(const std::filesystem::path& path, const SpinorField& f);

/// Reads a snapshot. With a grid, the z column must match it exactly;
/// without one the grid is rebuilt from the z column.
SpinorField read_snapshot(const std::filesystem::path& path, GridPtr grid = nullptr);

/// Parses the tau encoded in a snapshot file name.
std::optional<double> snapshot_tau(const std::filesystem::path& path);

struct Summary {
  double tau = 0.0;
  std::vector<Peak> peaks;
  std::optional<CatDecomposition> branches;
  std::optional<ComponentRatio> ratio_up2;    ///< u_↑↑ / u_↓↑
  std::optional<ComponentRatio> ratio_down2;  ///< u_↑↓ / u_↓↓
  std::optional<PhaseWindow> first_window;
  std::optional<PhaseWindow> final_window;
  std::size_t phase_windows = 0;
};

Summary summarize(const SpinorField& f, double tau, std::span<const BranchSample> branch_series,
                  const PeakOptions& options);

std::string format_summary(const Summary& s);

}  // namespace mrfm::io

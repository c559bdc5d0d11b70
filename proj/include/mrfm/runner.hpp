#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mrfm/params.hpp"

namespace mrfm {

/// Process exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  ///< bad config, busy output directory, malformed input, I/O
  kExitEdgeLeak = 2,
  kExitNonFinite = 3,
};

struct RunFlags {
  bool dry_run = false;
  bool check_oracle = false;
  /// Overrides output_dir from the config when set.
  std::optional<std::filesystem::path> output_dir;
};

/// Holds `<dir>/.lock` for its lifetime. Throws std::runtime_error when the
/// lock already exists, i.e. another run owns the directory.
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path& dir);
  ~DirectoryLock();
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  std::filesystem::path path_;
};

/// Runs one config and writes config.cfg, timeseries.csv, snapshot_<tau>.csv,
/// summary.txt and provenance.txt into its output directory.
int run_config(const SimConfig& cfg, const RunFlags& flags, std::ostream& out, std::ostream& err);

/// Parses and runs each config file, up to `jobs` at a time. Returns the
/// largest exit code encountered.
int run_files(const std::vector<std::filesystem::path>& configs, const RunFlags& flags,
              unsigned jobs, std::ostream& out, std::ostream& err);

/// Prints the summary for a run directory or a single snapshot file.
int analyze(const std::filesystem::path& target, std::ostream& out, std::ostream& err);

/// Summary text of a run directory, recomputed from its files. Throws
/// MalformedFileError or ConfigError on bad input.
std::string analyze_run_dir(const std::filesystem::path& dir);
std::string analyze_snapshot(const std::filesystem::path& file);

}  // namespace mrfm

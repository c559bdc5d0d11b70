#include "mrfm/runner.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "mrfm/config_io.hpp"
#include "mrfm/errors.hpp"
#include "mrfm/export.hpp"
#include "mrfm/oracle.hpp"
#include "mrfm/schedule.hpp"
#include "mrfm/simulation.hpp"
#include "mrfm/spectral.hpp"

namespace fs = std::filesystem;

namespace mrfm {

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string provenance_text(const Provenance& p) {
  std::ostringstream out;
  out << "code_version = " << p.code_version << '\n'
      << "kernels = " << p.kernels << '\n'
      << "fft_threads = " << configured_threads() << '\n'
      << "wall_seconds = " << format_double(p.wall_seconds) << '\n'
      << "dt = " << format_double(p.dt) << '\n'
      << "z_min = " << format_double(p.grid.z_min) << '\n'
      << "z_max = " << format_double(p.grid.z_max) << '\n'
      << "n_points = " << p.grid.n_points << '\n'
      << "steps = " << p.steps << '\n';
  return out.str();
}

DriveSchedule schedule_for(const SimConfig& cfg) {
  try {
    return ScheduleRegistry::instance().make(cfg.schedule.id, cfg.schedule.parameters);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

DirectoryLock::DirectoryLock(const fs::path& dir) : path_(dir / ".lock") {
  const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    if (errno == EEXIST) {
      throw std::runtime_error(dir.string() +
                               " is in use by another run (remove .lock if that run is gone)");
    }
    throw std::runtime_error("cannot create " + path_.string() + ": " + std::strerror(errno));
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] const auto written = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

DirectoryLock::~DirectoryLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

int run_config(const SimConfig& config, const RunFlags& flags, std::ostream& out,
               std::ostream& err) {
  SimConfig cfg = config;
  if (flags.output_dir) cfg.output_dir = flags.output_dir->string();
  try {
    cfg.validate();
    const DriveSchedule schedule = schedule_for(cfg);
    if (flags.dry_run) {
      out << "config ok: " << step_count(cfg) << " steps, schedule " << cfg.schedule.id
          << ", output " << cfg.output_dir << '\n';
      return kExitOk;
    }

    const fs::path dir = cfg.output_dir;
    fs::create_directories(dir);
    DirectoryLock lock(dir);

    write_text(dir / "config.cfg", format_config(cfg));
    io::TimeseriesWriter timeseries(dir / "timeseries.csv");
    ObservableSinks sinks;
    sinks.on_sample = [&](const ObservableSample& s) { timeseries.append(s); };
    sinks.on_snapshot = [&](const Snapshot& s) {
      io::write_snapshot(dir / io::snapshot_filename(s.tau), s.field);
    };

    const SpinorField f0 = coherent_bell_state(cfg.grid.build(), cfg.physical);
    const RunRecord record = evolve(f0, cfg, schedule, sinks);

    const auto& last = record.final_snapshot();
    const auto branches = io::branch_samples(record.samples);
    const auto summary = io::summarize(last.field, last.tau, branches,
                                       PeakOptions{cfg.peak_threshold, cfg.merge_width});
    const std::string text = io::format_summary(summary);
    write_text(dir / "summary.txt", text);
    write_text(dir / "provenance.txt", provenance_text(record.provenance));
    out << text;

    if (flags.check_oracle) {
      const SpinorField reference = oracle::oracle_evolve(f0, cfg, schedule);
      out << "oracle L2 gap = " << format_double(l2_distance(last.field, reference)) << '\n';
    }
    return kExitOk;
  } catch (const EdgeLeakError& e) {
    err << "error: " << e.what() << '\n';
    return kExitEdgeLeak;
  } catch (const NonFiniteError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNonFinite;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int run_files(const std::vector<fs::path>& configs, const RunFlags& flags, unsigned jobs,
              std::ostream& out, std::ostream& err) {
  std::vector<int> codes(configs.size(), kExitOk);
  std::mutex io_mutex;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      std::ostringstream o, e;
      try {
        codes[i] = run_config(parse_config(configs[i]), flags, o, e);
      } catch (const std::exception& ex) {
        e << "error: " << configs[i].string() << ": " << ex.what() << '\n';
        codes[i] = kExitFailure;
      }
      std::lock_guard lock(io_mutex);
      if (configs.size() > 1) out << "== " << configs[i].string() << '\n';
      out << o.str();
      err << e.str();
    }
  };

  const unsigned n_workers =
      std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(std::max<std::size_t>(configs.size(), 1)));
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  return codes.empty() ? kExitOk : *std::max_element(codes.begin(), codes.end());
}

std::string analyze_run_dir(const fs::path& dir) {
  const SimConfig cfg = parse_config(dir / "config.cfg");
  const auto rows = io::read_timeseries(dir / "timeseries.csv");
  if (rows.empty()) throw MalformedFileError((dir / "timeseries.csv").string() + ": no rows");
  const double tau = rows.back().tau;
  const SpinorField f = io::read_snapshot(dir / io::snapshot_filename(tau), cfg.grid.build());
  const auto summary = io::summarize(f, tau, io::branch_samples(rows),
                                     PeakOptions{cfg.peak_threshold, cfg.merge_width});
  return io::format_summary(summary);
}

std::string analyze_snapshot(const fs::path& file) {
  const auto tau = io::snapshot_tau(file);
  if (!tau) throw MalformedFileError(file.string() + ": name is not snapshot_<tau>.csv");
  const SpinorField f = io::read_snapshot(file);
  return io::format_summary(io::summarize(f, *tau, {}, PeakOptions{}));
}

int analyze(const fs::path& target, std::ostream& out, std::ostream& err) {
  try {
    out << (fs::is_directory(target) ? analyze_run_dir(target) : analyze_snapshot(target));
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace mrfm

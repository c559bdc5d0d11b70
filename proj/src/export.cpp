#include "mrfm/export.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "mrfm/config_io.hpp"
#include "mrfm/errors.hpp"

namespace mrfm::io {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = line.find(',');
    out.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return out;
}

double field_value(std::string_view text, const std::filesystem::path& path, std::size_t line) {
  try {
    return parse_double(text);
  } catch (const std::invalid_argument&) {
    throw MalformedFileError(path.string() + ":" + std::to_string(line) + ": bad number '" +
                             std::string(text) + "'");
  }
}

bool ends_with_newline(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (in.tellg() <= 0) return false;
  in.seekg(-1, std::ios::end);
  return in.get() == '\n';
}

std::vector<std::vector<double>> read_table(const std::filesystem::path& path,
                                            std::string_view header) {
  std::ifstream in(path);
  if (!in) throw MalformedFileError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw MalformedFileError(path.string() + ": unexpected header");
  }
  const std::size_t columns = split_csv(header).size();
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  // a missing final newline means the writer was cut off
  const bool cut = !lines.empty() && !ends_with_newline(path);
  std::vector<std::vector<double>> rows;
  rows.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 2;
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    if (cut && i + 1 == lines.size()) throw MalformedFileError(where + "truncated final row");
    if (lines[i].empty()) continue;
    const auto cells = split_csv(lines[i]);
    if (cells.size() != columns) {
      throw MalformedFileError(where + "expected " + std::to_string(columns) + " columns, found " +
                               std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(columns);
    for (auto c : cells) row.push_back(field_value(c, path, line_no));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string timeseries_row(const ObservableSample& s) {
  std::string row;
  auto put = [&](double v) {
    if (!row.empty()) row += ',';
    row += format_double(v);
  };
  put(s.tau);
  put(s.norm2);
  put(s.masses.up2);
  put(s.masses.down2);
  put(s.mean_z);
  put(s.spins.s1.x);
  put(s.spins.s1.y);
  put(s.spins.s1.z);
  put(s.spins.s2z);
  row += ',' + std::to_string(s.peaks.size());
  for (std::size_t i = 0; i < 2; ++i) {
    put(i < s.peaks.size() ? s.peaks[i].position : kNaN);
    put(i < s.peaks.size() ? s.peaks[i].mass : kNaN);
  }
  if (s.branches) {
    const auto& b = *s.branches;
    for (double v : {b.a.centroid, b.b.centroid, b.a.p_up2, b.b.p_up2, b.a.residual,
                     b.b.residual}) {
      put(v);
    }
  } else {
    for (int i = 0; i < 6; ++i) put(kNaN);
  }
  return row;
}

TimeseriesWriter::TimeseriesWriter(const std::filesystem::path& path) : out_(path) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  out_ << kTimeseriesHeader << '\n';
}

void TimeseriesWriter::append(const ObservableSample& s) {
  out_ << timeseries_row(s) << '\n';
  out_.flush();
}

std::vector<TimeseriesRow> read_timeseries(const std::filesystem::path& path) {
  const auto table = read_table(path, kTimeseriesHeader);
  std::vector<TimeseriesRow> rows;
  rows.reserve(table.size());
  for (const auto& r : table) {
    TimeseriesRow t{};
    t.tau = r[0];
    t.norm2 = r[1];
    t.mass_up2 = r[2];
    t.mass_down2 = r[3];
    t.mean_z = r[4];
    t.sx1 = r[5];
    t.sy1 = r[6];
    t.sz1 = r[7];
    t.sz2 = r[8];
    t.n_peaks = static_cast<int>(r[9]);
    t.peak1_z = r[10];
    t.peak1_mass = r[11];
    t.peak2_z = r[12];
    t.peak2_mass = r[13];
    t.branch_a_z = r[14];
    t.branch_b_z = r[15];
    t.branch_a_p_up2 = r[16];
    t.branch_b_p_up2 = r[17];
    t.branch_a_residual = r[18];
    t.branch_b_residual = r[19];
    rows.push_back(t);
  }
  return rows;
}

std::vector<BranchSample> branch_samples(std::span<const TimeseriesRow> rows) {
  std::vector<BranchSample> out;
  for (const auto& r : rows) {
    if (std::isnan(r.branch_a_z) || std::isnan(r.branch_b_z)) continue;
    out.push_back({r.tau, r.branch_a_z, r.branch_b_z});
  }
  return out;
}

std::vector<BranchSample> branch_samples(std::span<const ObservableSample> samples) {
  std::vector<BranchSample> out;
  for (const auto& s : samples) {
    if (!s.branches) continue;
    out.push_back({s.tau, s.branches->a.centroid, s.branches->b.centroid});
  }
  return out;
}

std::string snapshot_filename(double tau) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", tau);
  std::string t = buf;
  while (!t.empty() && t.back() == '0') t.pop_back();
  if (!t.empty() && t.back() == '.') t.pop_back();
  if (t == "-0") t = "0";
  return "snapshot_" + t + ".csv";
}

std::optional<double> snapshot_tau(const std::filesystem::path& path) {
  const std::string name = path.filename().string();
  constexpr std::string_view prefix = "snapshot_", suffix = ".csv";
  if (!name.starts_with(prefix) || !name.ends_with(suffix)) return std::nullopt;
  try {
    return parse_double(std::string_view(name).substr(
        prefix.size(), name.size() - prefix.size() - suffix.size()));
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

void write_snapshot(const std::filesystem::path& path, const SpinorField& f) {
  if (f.representation() != Representation::Position) {
    throw std::invalid_argument("snapshots are written in position space");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << kSnapshotHeader << '\n';
  const auto z = f.grid().positions();
  std::string row;
  for (std::size_t j = 0; j < f.size(); ++j) {
    row = format_double(z[j]);
    for (std::size_t c = 0; c < SpinorField::kComponents; ++c) {
      const cplx v = f.component(c)[j];
      row += ',' + format_double(v.real()) + ',' + format_double(v.imag());
    }
    out << row << '\n';
  }
}

SpinorField read_snapshot(const std::filesystem::path& path, GridPtr grid) {
  const auto table = read_table(path, kSnapshotHeader);
  const std::size_t n = table.size();
  if (!grid) {
    if (n < 8 || !is_power_of_two(n)) {
      throw MalformedFileError(path.string() + ": " + std::to_string(n) +
                               " rows is not a valid grid size (truncated file?)");
    }
    const double z0 = table.front()[0];
    const double dz = (table.back()[0] - z0) / static_cast<double>(n - 1);
    try {
      grid = make_grid(z0, z0 + dz * static_cast<double>(n), n);
    } catch (const std::invalid_argument& e) {
      throw MalformedFileError(path.string() + ": " + e.what());
    }
  } else {
    if (n != grid->size()) {
      throw MalformedFileError(path.string() + ": expected " + std::to_string(grid->size()) +
                               " rows, found " + std::to_string(n) + " (truncated file?)");
    }
    const auto z = grid->positions();
    for (std::size_t j = 0; j < n; ++j) {
      if (table[j][0] != z[j]) {
        throw MalformedFileError(path.string() + ": z column does not match the grid");
      }
    }
  }
  SpinorField f(grid);
  for (std::size_t c = 0; c < SpinorField::kComponents; ++c) {
    auto u = f.component(c);
    for (std::size_t j = 0; j < n; ++j) u[j] = {table[j][1 + 2 * c], table[j][2 + 2 * c]};
  }
  return f;
}

Summary summarize(const SpinorField& f, double tau, std::span<const BranchSample> branch_series,
                  const PeakOptions& options) {
  Summary s;
  s.tau = tau;
  s.peaks = find_peaks(position_distribution(f), options);
  s.branches = decompose_cat(f, s.peaks);
  s.ratio_up2 = component_ratio(f, RemotePair::Up2);
  s.ratio_down2 = component_ratio(f, RemotePair::Down2);
  if (!branch_series.empty()) {
    try {
      const auto series = track_branch_phases(branch_series);
      s.first_window = series.windows.front();
      s.final_window = series.windows.back();
      s.phase_windows = series.windows.size();
    } catch (const std::invalid_argument&) {
      // not enough two-peak data; reported as unavailable
    }
  }
  return s;
}

std::string format_summary(const Summary& s) {
  std::ostringstream out;
  out << "tau = " << format_double(s.tau) << '\n';
  out << "peaks = " << s.peaks.size() << '\n';
  for (std::size_t i = 0; i < s.peaks.size(); ++i) {
    const auto& p = s.peaks[i];
    out << "peak " << i + 1 << ": z = " << format_double(p.position)
        << ", height = " << format_double(p.height) << ", mass = " << format_double(p.mass)
        << '\n';
  }
  if (s.branches) {
    const auto& d = *s.branches;
    out << "decomposition: split at z = " << format_double(d.split_point) << '\n';
    for (const auto* b : {&d.a, &d.b}) {
      out << "branch " << (b == &d.a ? 'a' : 'b') << " (" << (b->left ? "left" : "right")
          << "): mass = " << format_double(b->mass) << ", centroid = "
          << format_double(b->centroid) << ", p_up2 = " << format_double(b->p_up2)
          << ", residual = " << format_double(b->residual) << ", bloch = ("
          << format_double(b->bloch.x) << ", " << format_double(b->bloch.y) << ", "
          << format_double(b->bloch.z) << ")\n";
    }
  } else {
    out << "decomposition: unavailable\n";
  }
  auto ratio = [&](const char* label, const std::optional<ComponentRatio>& r) {
    out << label;
    if (!r) {
      out << "undefined\n";
      return;
    }
    out << "c = (" << format_double(r->c.real()) << ", " << format_double(r->c.imag())
        << "), |c| = " << format_double(std::abs(r->c))
        << ", residual = " << format_double(r->residual) << '\n';
  };
  ratio("ratio up2 pair u_uu/u_du: ", s.ratio_up2);
  ratio("ratio down2 pair u_ud/u_dd: ", s.ratio_down2);
  if (s.final_window) {
    auto window = [&](const char* label, const PhaseWindow& w) {
      out << label << "tau in [" << format_double(w.tau_begin) << ", "
          << format_double(w.tau_end) << "], dphi = " << format_double(w.delta_phi)
          << ", amplitude_a = " << format_double(w.amplitude_a)
          << ", amplitude_b = " << format_double(w.amplitude_b) << '\n';
    };
    out << "phase windows = " << s.phase_windows << '\n';
    window("phase first window: ", *s.first_window);
    window("phase final window: ", *s.final_window);
  } else {
    out << "phase difference: unavailable\n";
  }
  return out.str();
}

}  // namespace mrfm::io

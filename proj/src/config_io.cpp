#include "mrfm/config_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "mrfm/errors.hpp"

namespace mrfm {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

const std::set<std::string, std::less<>> kRequired = {
    "eta",     "alpha_re", "alpha_im", "z_min",    "z_max",
    "n_points", "dt",      "t_final",  "schedule", "observable_stride",
    "output_dir"};
const std::set<std::string, std::less<>> kOptional = {"snapshot_times", "peak_threshold",
                                                      "merge_width"};
constexpr std::string_view kSchedulePrefix = "schedule.";

std::size_t parse_count(std::string_view key, std::string_view text) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("key '" + std::string(key) + "': expected a non-negative integer, got '" +
                      std::string(text) + "'");
  }
  return value;
}

double parse_number(std::string_view key, std::string_view text) {
  try {
    return parse_double(text);
  } catch (const std::invalid_argument&) {
    throw ConfigError("key '" + std::string(key) + "': cannot parse number '" +
                      std::string(text) + "'");
  }
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_shortest(double value) {
  if (std::isnan(value)) return "nan";
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

SimConfig parse_config_text(std::string_view text) {
  std::map<std::string, std::string, std::less<>> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    const bool known = kRequired.contains(key) || kOptional.contains(key) ||
                       (key.starts_with(kSchedulePrefix) && key.size() > kSchedulePrefix.size());
    if (!known) throw ConfigError("unknown key '" + key + "' on line " + std::to_string(line_no));
    if (!entries.emplace(key, value).second) {
      throw ConfigError("duplicate key '" + key + "' on line " + std::to_string(line_no));
    }
  }
  for (const auto& key : kRequired) {
    if (!entries.contains(key)) throw ConfigError("missing required key '" + key + "'");
  }

  SimConfig cfg;
  cfg.physical.eta = parse_number("eta", entries["eta"]);
  cfg.physical.alpha = {parse_number("alpha_re", entries["alpha_re"]),
                        parse_number("alpha_im", entries["alpha_im"])};
  cfg.grid.z_min = parse_number("z_min", entries["z_min"]);
  cfg.grid.z_max = parse_number("z_max", entries["z_max"]);
  cfg.grid.n_points = parse_count("n_points", entries["n_points"]);
  cfg.dt = parse_number("dt", entries["dt"]);
  cfg.t_final = parse_number("t_final", entries["t_final"]);
  cfg.schedule.id = entries["schedule"];
  cfg.observable_stride = parse_count("observable_stride", entries["observable_stride"]);
  cfg.output_dir = entries["output_dir"];
  cfg.snapshot_times.clear();
  if (auto it = entries.find("snapshot_times"); it != entries.end()) {
    std::string_view rest = it->second;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto item = trim(rest.substr(0, comma));
      if (item.empty()) throw ConfigError("snapshot_times: empty entry");
      cfg.snapshot_times.push_back(parse_number("snapshot_times", item));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
      if (trim(rest).empty()) throw ConfigError("snapshot_times: trailing comma");
    }
  }
  if (auto it = entries.find("peak_threshold"); it != entries.end()) {
    cfg.peak_threshold = parse_number("peak_threshold", it->second);
  }
  if (auto it = entries.find("merge_width"); it != entries.end()) {
    cfg.merge_width = parse_number("merge_width", it->second);
  }
  for (const auto& [key, value] : entries) {
    if (key.starts_with(kSchedulePrefix)) {
      cfg.schedule.parameters[key.substr(kSchedulePrefix.size())] = parse_number(key, value);
    }
  }
  cfg.validate();
  return cfg;
}

SimConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string format_config(const SimConfig& cfg) {
  std::ostringstream out;
  out << "eta = " << format_shortest(cfg.physical.eta) << '\n'
      << "alpha_re = " << format_shortest(cfg.physical.alpha.real()) << '\n'
      << "alpha_im = " << format_shortest(cfg.physical.alpha.imag()) << '\n'
      << "z_min = " << format_shortest(cfg.grid.z_min) << '\n'
      << "z_max = " << format_shortest(cfg.grid.z_max) << '\n'
      << "n_points = " << cfg.grid.n_points << '\n'
      << "dt = " << format_shortest(cfg.dt) << '\n'
      << "t_final = " << format_shortest(cfg.t_final) << '\n'
      << "schedule = " << cfg.schedule.id << '\n';
  for (const auto& [name, value] : cfg.schedule.parameters) {
    out << kSchedulePrefix << name << " = " << format_shortest(value) << '\n';
  }
  out << "observable_stride = " << cfg.observable_stride << '\n'
      << "output_dir = " << cfg.output_dir << '\n';
  if (!cfg.snapshot_times.empty()) {
    out << "snapshot_times = ";
    for (std::size_t i = 0; i < cfg.snapshot_times.size(); ++i) {
      out << (i ? "," : "") << format_shortest(cfg.snapshot_times[i]);
    }
    out << '\n';
  }
  out << "peak_threshold = " << format_shortest(cfg.peak_threshold) << '\n'
      << "merge_width = " << format_shortest(cfg.merge_width) << '\n';
  return out.str();
}

SimConfig paper_preset() {
  SimConfig cfg;
  cfg.physical.eta = 0.3;
  cfg.physical.alpha = {-10.0 * std::numbers::sqrt2, 0.0};
  cfg.grid = {-60.0, 60.0, 2048};
  cfg.dt = 2e-4;
  cfg.t_final = 216.0;
  cfg.schedule = {"paper-eq6", {}};
  cfg.snapshot_times = {0.0, 50.0, 100.0, 216.0};
  cfg.observable_stride = 250;
  cfg.output_dir = "runs/paper";
  return cfg;
}

SimConfig toy_preset() {
  SimConfig cfg;
  cfg.physical.eta = 0.3;
  cfg.physical.alpha = {-2.0, 0.0};
  cfg.grid = {-8.0, 8.0, 64};
  cfg.dt = 1e-4;
  cfg.t_final = 1.0;
  cfg.schedule = {"sinusoidal", {{"epsilon", 5.0}, {"phi_dot_amplitude", 2.0}}};
  cfg.snapshot_times = {0.0, 1.0};
  cfg.observable_stride = 500;
  cfg.output_dir = "runs/toy";
  return cfg;
}

SimConfig coherent_preset() {
  SimConfig cfg = paper_preset();
  cfg.physical.eta = 0.0;
  cfg.schedule = {"constant", {{"epsilon", 0.0}, {"phi_dot", 0.0}}};
  cfg.t_final = 4.0 * std::numbers::pi;
  cfg.snapshot_times = {0.0};
  cfg.observable_stride = 50;
  cfg.output_dir = "runs/coherent";
  return cfg;
}

SimConfig preset(std::string_view name) {
  if (name == "paper") return paper_preset();
  if (name == "toy") return toy_preset();
  if (name == "coherent") return coherent_preset();
  throw ConfigError("unknown preset '" + std::string(name) + "' (paper, toy, coherent)");
}

}  // namespace mrfm

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mrfm/params.hpp"

namespace mrfm {

/// Reads a `key = value` config file (`#` starts a comment).
///
/// Required: eta, alpha_re, alpha_im, z_min, z_max, n_points, dt, t_final,
/// schedule, observable_stride, output_dir. Optional: snapshot_times
/// (comma-separated), peak_threshold, merge_width, and `schedule.<param>`
/// overrides of the chosen schedule's parameters. Unknown, duplicate, missing
/// or unparsable keys and invariant violations all throw ConfigError.
SimConfig parse_config(const std::filesystem::path& path);
SimConfig parse_config_text(std::string_view text);

/// Serializes every field in shortest round-trip form; parse_config_text of
/// the result reproduces the config exactly.
std::string format_config(const SimConfig& cfg);

/// The published parameter set: η = 0.3, α = -10√2, paper-eq6 schedule, τ = 216.
SimConfig paper_preset();

/// Small instance for oracle comparisons: 64 points on [-8, 8], constant
/// ε = 5, φ̇ = 2 sin τ, τ_end = 1, dt = 1e-4.
SimConfig toy_preset();

/// Free harmonic motion of the paper's coherent state (η = ε = φ̇ = 0) over
/// τ ∈ [0, 4π].
SimConfig coherent_preset();

/// Preset by name: "paper", "toy" or "coherent". Throws ConfigError otherwise.
SimConfig preset(std::string_view name);

/// 17-significant-digit decimal text for a double ("nan" for NaN).
std::string format_double(double value);

/// Shortest decimal text that parses back to the same double.
std::string format_shortest(double value);

/// Strict double parse of a whole string (leading/trailing spaces allowed).
double parse_double(std::string_view text);

}  // namespace mrfm

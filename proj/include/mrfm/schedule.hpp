#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "mrfm/vec3.hpp"

namespace mrfm {

using ScheduleParams = std::map<std::string, double>;

/// Time dependence of the rf amplitude ε(τ) and of the rf phase derivative φ̇(τ).
///
/// Evaluation is pure; negative τ throws std::domain_error.
class DriveSchedule {
 public:
  using Profile = std::function<double(double)>;

  DriveSchedule(std::string id, ScheduleParams parameters, Profile epsilon, Profile phi_dot);

  const std::string& id() const noexcept { return id_; }
  /// Fully resolved parameter set (defaults merged with overrides).
  const ScheduleParams& parameters() const noexcept { return parameters_; }

  double epsilon(double tau) const;
  double phi_dot(double tau) const;

  /// Rotating-frame effective field (ε, 0, -φ̇). The 2ηz contribution is left out.
  Vec3 effective_field(double tau) const;

  /// max |φ̇| over [0, t_end], sampled densely; used for the step-size bound.
  double max_abs_phi_dot(double t_end) const;

 private:
  std::string id_;
  ScheduleParams parameters_;
  Profile epsilon_;
  Profile phi_dot_;
};

/// Schedules by identifier. Built-ins: "paper-eq6", "constant", "sinusoidal".
class ScheduleRegistry {
 public:
  using Factory = std::function<DriveSchedule(const ScheduleParams& resolved)>;

  static ScheduleRegistry& instance();

  /// Throws std::invalid_argument if the id is taken.
  void add(const std::string& id, ScheduleParams defaults, Factory factory);

  /// Merges overrides into the defaults; unknown ids or parameter names throw
  /// std::invalid_argument.
  DriveSchedule make(const std::string& id, const ScheduleParams& overrides = {}) const;

  bool contains(const std::string& id) const;
  ScheduleParams defaults(const std::string& id) const;
  std::vector<std::string> ids() const;

 private:
  ScheduleRegistry();

  struct Entry {
    ScheduleParams defaults;
    Factory factory;
  };
  mutable std::mutex mutex_;
  std::map<std::string, Entry> entries_;
};

/// The cyclic adiabatic inversion protocol: linear ramps up to τ = 20, then
/// ε = 400 and φ̇ = 1000 sin(τ - 20).
DriveSchedule paper_schedule();

inline constexpr const char* kPaperScheduleId = "paper-eq6";

}  // namespace mrfm

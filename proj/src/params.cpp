#include "mrfm/params.hpp"

#include <cmath>
#include <stdexcept>

#include "mrfm/errors.hpp"
#include "mrfm/schedule.hpp"

namespace mrfm {

void PhysicalParams::validate() const {
  if (!std::isfinite(eta) || eta < 0.0) throw ConfigError("eta must be finite and >= 0");
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw ConfigError("alpha must be finite");
  }
  if (larmor_detuning != 0.0) throw ConfigError("larmor_detuning is fixed at zero");
}

void SimConfig::validate() const {
  physical.validate();
  try {
    (void)grid.build();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  if (!std::isfinite(dt) || dt <= 0.0) throw ConfigError("dt must be > 0");
  if (!std::isfinite(t_final) || t_final <= 0.0) throw ConfigError("t_final must be > 0");
  if (observable_stride == 0) throw ConfigError("observable_stride must be >= 1");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  if (!(peak_threshold > 0.0 && peak_threshold < 1.0)) {
    throw ConfigError("peak_threshold must lie in (0, 1)");
  }
  if (!(merge_width >= 0.0)) throw ConfigError("merge_width must be >= 0");
  for (double t : snapshot_times) {
    if (!(t >= 0.0 && t <= t_final)) {
      throw ConfigError("snapshot time " + std::to_string(t) + " outside [0, t_final]");
    }
  }

  DriveSchedule s = [&] {
    try {
      return ScheduleRegistry::instance().make(schedule.id, schedule.parameters);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("schedule: ") + e.what());
    }
  }();
  const double advance = dt * s.max_abs_phi_dot(t_final) / 2.0;
  if (advance > kMaxPhaseAdvance) {
    throw ConfigError("dt too large: phase advance per step dt*max|phi_dot|/2 = " +
                      std::to_string(advance) + " exceeds " +
                      std::to_string(kMaxPhaseAdvance));
  }
}

}  // namespace mrfm

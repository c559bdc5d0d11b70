#include "mrfm/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mrfm {

namespace {

void check_tau(double tau) {
  if (!(tau >= 0.0)) throw std::domain_error("schedule evaluated at negative or NaN tau");
}

DriveSchedule make_paper(const ScheduleParams& p) {
  const double eps_slope = p.at("eps_slope");
  const double eps_plateau = p.at("eps_plateau");
  const double t_switch = p.at("switch_time");
  const double pd0 = p.at("phi_dot_initial");
  const double pd_slope = p.at("phi_dot_slope");
  const double amp = p.at("phi_dot_amplitude");
  const double omega = p.at("modulation_frequency");
  if (eps_slope < 0.0 || eps_plateau < 0.0 || t_switch < 0.0) {
    throw std::invalid_argument("paper-eq6: eps_slope, eps_plateau and switch_time must be >= 0");
  }
  auto eps = [=](double tau) { return tau <= t_switch ? eps_slope * tau : eps_plateau; };
  auto phi_dot = [=](double tau) {
    return tau <= t_switch ? pd0 + pd_slope * tau : amp * std::sin(omega * (tau - t_switch));
  };
  return DriveSchedule(kPaperScheduleId, p, eps, phi_dot);
}

DriveSchedule make_constant(const ScheduleParams& p) {
  const double eps = p.at("epsilon");
  const double pd = p.at("phi_dot");
  if (eps < 0.0) throw std::invalid_argument("constant: epsilon must be >= 0");
  return DriveSchedule("constant", p, [=](double) { return eps; }, [=](double) { return pd; });
}

DriveSchedule make_sinusoidal(const ScheduleParams& p) {
  const double eps = p.at("epsilon");
  const double amp = p.at("phi_dot_amplitude");
  const double omega = p.at("frequency");
  const double phase = p.at("phase");
  if (eps < 0.0) throw std::invalid_argument("sinusoidal: epsilon must be >= 0");
  return DriveSchedule(
      "sinusoidal", p, [=](double) { return eps; },
      [=](double tau) { return amp * std::sin(omega * tau + phase); });
}

}  // namespace

DriveSchedule::DriveSchedule(std::string id, ScheduleParams parameters, Profile epsilon,
                             Profile phi_dot)
    : id_(std::move(id)),
      parameters_(std::move(parameters)),
      epsilon_(std::move(epsilon)),
      phi_dot_(std::move(phi_dot)) {}

double DriveSchedule::epsilon(double tau) const {
  check_tau(tau);
  return epsilon_(tau);
}

double DriveSchedule::phi_dot(double tau) const {
  check_tau(tau);
  return phi_dot_(tau);
}

Vec3 DriveSchedule::effective_field(double tau) const {
  return {epsilon(tau), 0.0, -phi_dot(tau)};
}

double DriveSchedule::max_abs_phi_dot(double t_end) const {
  check_tau(t_end);
  constexpr int kSamples = 200000;
  double m = std::abs(phi_dot_(0.0));
  for (int i = 1; i <= kSamples; ++i) {
    m = std::max(m, std::abs(phi_dot_(t_end * i / kSamples)));
  }
  return m;
}

ScheduleRegistry::ScheduleRegistry() {
  entries_[kPaperScheduleId] = {{{"eps_slope", 20.0},
                                 {"eps_plateau", 400.0},
                                 {"switch_time", 20.0},
                                 {"phi_dot_initial", -600.0},
                                 {"phi_dot_slope", 30.0},
                                 {"phi_dot_amplitude", 1000.0},
                                 {"modulation_frequency", 1.0}},
                                make_paper};
  entries_["constant"] = {{{"epsilon", 0.0}, {"phi_dot", 0.0}}, make_constant};
  entries_["sinusoidal"] = {
      {{"epsilon", 5.0}, {"phi_dot_amplitude", 2.0}, {"frequency", 1.0}, {"phase", 0.0}},
      make_sinusoidal};
}

ScheduleRegistry& ScheduleRegistry::instance() {
  static ScheduleRegistry registry;
  return registry;
}

void ScheduleRegistry::add(const std::string& id, ScheduleParams defaults, Factory factory) {
  std::lock_guard lock(mutex_);
  if (entries_.contains(id)) throw std::invalid_argument("schedule id already registered: " + id);
  entries_[id] = {std::move(defaults), std::move(factory)};
}

DriveSchedule ScheduleRegistry::make(const std::string& id, const ScheduleParams& overrides) const {
  Entry entry;
  {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(id);
    if (it == entries_.end()) throw std::invalid_argument("unknown schedule: " + id);
    entry = it->second;
  }
  ScheduleParams resolved = entry.defaults;
  for (const auto& [name, value] : overrides) {
    auto it = resolved.find(name);
    if (it == resolved.end()) {
      throw std::invalid_argument("schedule " + id + " has no parameter '" + name + "'");
    }
    if (!std::isfinite(value)) {
      throw std::invalid_argument("schedule parameter '" + name + "' must be finite");
    }
    it->second = value;
  }
  return entry.factory(resolved);
}

bool ScheduleRegistry::contains(const std::string& id) const {
  std::lock_guard lock(mutex_);
  return entries_.contains(id);
}

ScheduleParams ScheduleRegistry::defaults(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(id);
  if (it == entries_.end()) throw std::invalid_argument("unknown schedule: " + id);
  return it->second.defaults;
}

std::vector<std::string> ScheduleRegistry::ids() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, entry] : entries_) out.push_back(id);
  return out;
}

DriveSchedule paper_schedule() { return ScheduleRegistry::instance().make(kPaperScheduleId); }

}  // namespace mrfm

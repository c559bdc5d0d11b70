#include "mrfm/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>

#include "mrfm/errors.hpp"
#include "mrfm/propagator.hpp"

namespace mrfm {

std::string code_version() { return "mrfm-sim 1.0.0"; }

std::int64_t step_count(const SimConfig& cfg) { return std::llround(cfg.t_final / cfg.dt); }

ObservableSample measure(const SpinorField& f, double tau, const PeakOptions& options) {
  ObservableSample s;
  s.tau = tau;
  const auto p = position_distribution(f);
  s.norm2 = field_norm2(f);
  s.masses = pair_masses(f);
  s.mean_z = mean_position(p);
  s.spins = spin_expectations(f);
  s.peaks = find_peaks(p, options);
  s.branches = decompose_cat(f, s.peaks);
  return s;
}

double position_edge_probability(const SpinorField& f) {
  const auto p = position_distribution(f);
  const std::size_t n = p.values.size();
  const auto band = static_cast<std::size_t>(std::ceil(kEdgeBandFraction * static_cast<double>(n)));
  double acc = 0.0;
  for (std::size_t j = 0; j < band; ++j) acc += p.values[j] + p.values[n - 1 - j];
  return acc * f.grid().dz();
}

double momentum_edge_probability(const SpinorField& f) {
  const SpinorField m = to_momentum_space(f);
  const double cut = (1.0 - kEdgeBandFraction) * f.grid().max_momentum();
  const auto p = f.grid().momenta();
  double acc = 0.0;
  for (std::size_t c = 0; c < SpinorField::kComponents; ++c) {
    const auto u = m.component(c);
    for (std::size_t k = 0; k < u.size(); ++k) {
      if (std::abs(p[k]) >= cut) acc += std::norm(u[k]);
    }
  }
  return acc * f.grid().dp();
}

namespace {

void check_finite(const SpinorField& f, double tau) {
  double acc = 0.0;
  for (const auto& v : f.data()) acc += std::norm(v);
  if (!std::isfinite(acc)) {
    throw NonFiniteError("field became non-finite at tau=" + std::to_string(tau), tau);
  }
}

void check_edges(const SpinorField& f, double tau) {
  const double pos = position_edge_probability(f);
  if (pos > kEdgeLeakLimit) {
    throw EdgeLeakError("probability " + std::to_string(pos) +
                            " reached the outer 5% of the z grid at tau=" + std::to_string(tau) +
                            "; widen [z_min, z_max]",
                        tau, pos);
  }
  const double mom = momentum_edge_probability(f);
  if (mom > kEdgeLeakLimit) {
    throw EdgeLeakError("probability " + std::to_string(mom) +
                            " reached the outer 5% of the momentum grid at tau=" +
                            std::to_string(tau) + "; refine dz",
                        tau, mom);
  }
}

}  // namespace

RunRecord evolve(const SpinorField& f0, const SimConfig& cfg, const DriveSchedule& s,
                 const ObservableSinks& sinks) {
  if (!(cfg.dt > 0.0) || !(cfg.t_final >= 0.0) || cfg.observable_stride == 0) {
    throw std::invalid_argument("evolve: need dt > 0, t_final >= 0, observable_stride >= 1");
  }
  if (f0.representation() != Representation::Position) {
    throw std::invalid_argument("evolve expects a position-space initial field");
  }
  const GridPtr grid = f0.grid_ptr();
  if (!(*grid == *cfg.grid.build())) throw std::invalid_argument("evolve: grid mismatch");

  const auto start = std::chrono::steady_clock::now();
  const std::int64_t n_steps = step_count(cfg);
  const auto stride = static_cast<std::int64_t>(cfg.observable_stride);
  const PeakOptions peak_options{cfg.peak_threshold, cfg.merge_width};

  // step -> requested times snapped onto it
  std::vector<std::pair<std::int64_t, double>> snap_requests;
  for (double t : cfg.snapshot_times) {
    snap_requests.emplace_back(std::clamp<std::int64_t>(std::llround(t / cfg.dt), 0, n_steps), t);
  }
  std::sort(snap_requests.begin(), snap_requests.end());
  snap_requests.erase(std::unique(snap_requests.begin(), snap_requests.end(),
                                  [](const auto& x, const auto& y) { return x.first == y.first; }),
                      snap_requests.end());
  if (snap_requests.empty() || snap_requests.back().first != n_steps) {
    snap_requests.emplace_back(n_steps, cfg.t_final);
  }

  std::set<std::int64_t> events;
  for (std::int64_t k = 0; k <= n_steps; k += stride) events.insert(k);
  for (std::int64_t k = 0; k <= n_steps; k += kNanGuardInterval) events.insert(k);
  for (const auto& [k, t] : snap_requests) events.insert(k);
  events.insert(n_steps);

  RunRecord record;
  record.config = cfg;
  StepPlan plan(grid, cfg.dt, cfg.physical);
  SpinorField f = f0;
  std::size_t next_snap = 0;
  std::int64_t current = 0;

  for (std::int64_t k : events) {
    if (k > current) {
      plan.advance(f, s, static_cast<double>(current) * cfg.dt, k - current);
      current = k;
    }
    const double tau = static_cast<double>(k) * cfg.dt;
    if (k % kNanGuardInterval == 0 || k == n_steps) check_finite(f, tau);

    const bool sample = k % stride == 0 || k == n_steps;
    const bool snap = next_snap < snap_requests.size() && snap_requests[next_snap].first == k;
    if (sample || snap) check_edges(f, tau);
    if (sample) {
      record.samples.push_back(measure(f, tau, peak_options));
      if (sinks.on_sample) sinks.on_sample(record.samples.back());
    }
    while (next_snap < snap_requests.size() && snap_requests[next_snap].first == k) {
      record.snapshots.push_back(Snapshot{snap_requests[next_snap].second, tau, k, f});
      if (sinks.on_snapshot) sinks.on_snapshot(record.snapshots.back());
      ++next_snap;
    }
  }

  record.provenance.code_version = code_version();
  record.provenance.kernels = std::string(plan.kernels().name);
  record.provenance.dt = cfg.dt;
  record.provenance.grid = cfg.grid;
  record.provenance.steps = n_steps;
  record.provenance.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

}  // namespace mrfm

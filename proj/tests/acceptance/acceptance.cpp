// Acceptance gate: runs the published configuration end to end and prints one
// PASS/FAIL line per criterion. Exit status is nonzero if any criterion fails.
//
//   acceptance [--work-dir DIR] [--only NAME]...

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mrfm/config_io.hpp"
#include "mrfm/export.hpp"
#include "mrfm/kernels.hpp"
#include "mrfm/oracle.hpp"
#include "mrfm/runner.hpp"
#include "mrfm/schedule.hpp"
#include "mrfm/simulation.hpp"

namespace fs = std::filesystem;
using namespace mrfm;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, const Outcome& o) {
  std::printf("%s  %-34s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// A finished run directory, loaded back from its files.
struct PaperRun {
  fs::path dir;
  SimConfig cfg;
  std::vector<io::TimeseriesRow> rows;
  std::optional<SpinorField> final_field;
  double final_tau = 0.0;
  int exit_code = 0;
  double seconds = 0.0;

  SpinorField snapshot_at(double tau) const {
    return io::read_snapshot(dir / io::snapshot_filename(tau), cfg.grid.build());
  }
};

PaperRun run_paper(const fs::path& dir, double dt) {
  PaperRun r;
  r.dir = dir;
  r.cfg = paper_preset();
  r.cfg.dt = dt;
  r.cfg.output_dir = dir.string();
  fs::remove_all(dir);
  std::ostringstream out, err;
  const auto t0 = std::chrono::steady_clock::now();
  r.exit_code = run_config(r.cfg, {}, out, err);
  r.seconds = seconds_since(t0);
  std::printf("      run %s (dt=%s): exit %d in %.0f s\n", dir.filename().c_str(),
              num(dt).c_str(), r.exit_code, r.seconds);
  std::fflush(stdout);
  if (r.exit_code != 0) {
    std::printf("      %s", err.str().c_str());
    return r;
  }
  r.rows = io::read_timeseries(dir / "timeseries.csv");
  r.final_tau = r.rows.back().tau;
  r.final_field = r.snapshot_at(r.final_tau);
  return r;
}

Outcome unavailable(const PaperRun& r) {
  return {false, "paper run failed with exit code " + std::to_string(r.exit_code)};
}

// --- criteria -------------------------------------------------------------

Outcome unitarity(const PaperRun& r) {
  if (r.exit_code) return unavailable(r);
  double drift = 0.0;
  for (const auto& row : r.rows) drift = std::max(drift, std::abs(row.norm2 - r.rows[0].norm2));
  return {drift <= 1e-8, "max |norm2 - norm2(0)| = " + num(drift) + " (limit 1e-8)"};
}

Outcome pair_mass(const PaperRun& r) {
  if (r.exit_code) return unavailable(r);
  double worst = 0.0;
  for (const auto& row : r.rows) {
    worst = std::max({worst, std::abs(row.mass_up2 - 0.5), std::abs(row.mass_down2 - 0.5)});
  }
  return {worst <= 1e-8, "max |M - 0.5| = " + num(worst) + " (limit 1e-8)"};
}

Outcome oracle_equivalence() {
  const SimConfig cfg = toy_preset();
  const auto s = ScheduleRegistry::instance().make(cfg.schedule.id, cfg.schedule.parameters);
  const auto f0 = coherent_bell_state(cfg.grid.build(), cfg.physical);
  const auto t0 = std::chrono::steady_clock::now();
  const auto fast = evolve(f0, cfg, s).final_snapshot().field;
  const double t_fast = seconds_since(t0);
  const auto t1 = std::chrono::steady_clock::now();
  const auto reference = oracle::oracle_evolve(f0, cfg, s);
  const double t_oracle = seconds_since(t1);
  const double gap = l2_distance(fast, reference);
  return {gap <= 1e-6, "L2 gap = " + num(gap) + " (limit 1e-6); evolve " + num(t_fast, 2) +
                           " s, oracle " + num(t_oracle, 3) + " s"};
}

Outcome coherent_state() {
  const SimConfig cfg = coherent_preset();
  const auto s = ScheduleRegistry::instance().make(cfg.schedule.id, cfg.schedule.parameters);
  const auto rec = evolve(coherent_bell_state(cfg.grid.build(), cfg.physical), cfg, s);
  double worst = 0.0;
  for (const auto& smp : rec.samples) {
    worst = std::max(worst, std::abs(smp.mean_z - cfg.physical.z0() * std::cos(smp.tau)));
  }
  return {worst <= 1e-6, "max |<z> - sqrt2 alpha cos tau| = " + num(worst) + " over " +
                             std::to_string(rec.samples.size()) + " samples (limit 1e-6)"};
}

Outcome fig2(const io::Summary& s) {
  if (s.peaks.size() != 2) {
    return {false, std::to_string(s.peaks.size()) + " peaks detected (need exactly 2)"};
  }
  const double ratio = s.peaks[0].mass / s.peaks[1].mass;
  return {ratio >= 0.8 && ratio <= 1.25,
          "2 peaks at z = " + num(s.peaks[0].position) + ", " + num(s.peaks[1].position) +
              "; mass ratio " + num(ratio) + " (need [0.8, 1.25])"};
}

Outcome ratio_residuals(const io::Summary& s) {
  if (!s.ratio_up2 || !s.ratio_down2) return {false, "ratio undefined"};
  const double a = s.ratio_up2->residual, b = s.ratio_down2->residual;
  return {a <= 0.05 && b <= 0.05,
          "residual up2 pair " + num(a) + ", down2 pair " + num(b) + " (limit 0.05)"};
}

Outcome ratio_magnitude(const io::Summary& s) {
  if (!s.ratio_up2) return {false, "ratio undefined"};
  const double c = std::abs(s.ratio_up2->c);
  const double c_down = s.ratio_down2 ? std::abs(s.ratio_down2->c) : std::nan("");
  return {std::abs(c - 5.0) <= 0.3 * 5.0,
          "|u_uu/u_du| = " + num(c) + " (1/|c| = " + num(1.0 / c) + "), |u_ud/u_dd| = " +
              num(c_down) + "; need |c| in [3.5, 6.5]"};
}

Outcome branch_products(const io::Summary& s) {
  if (!s.branches) return {false, "decomposition unavailable"};
  const auto& d = *s.branches;
  return {d.a.residual <= 0.05 && d.b.residual <= 0.05,
          "branch residuals a " + num(d.a.residual) + ", b " + num(d.b.residual) +
              " (limit 0.05)"};
}

Outcome remote_spin_collapse(const io::Summary& s) {
  if (!s.branches) return {false, "decomposition unavailable"};
  const auto& d = *s.branches;
  const double hi = std::max(d.a.p_up2, d.b.p_up2), lo = std::min(d.a.p_up2, d.b.p_up2);
  return {hi >= 0.95 && lo <= 0.05,
          "P(up2 | a) = " + num(d.a.p_up2, 6) + ", P(up2 | b) = " + num(d.b.p_up2, 6) +
              " (need >= 0.95 and <= 0.05)"};
}

Outcome fig4_phase(const io::Summary& s) {
  if (!s.first_window || !s.final_window) return {false, "phase difference unavailable"};
  const double first = s.first_window->delta_phi, last = s.final_window->delta_phi;
  return {last > first, "dphi first window [" + num(s.first_window->tau_begin) + ", " +
                            num(s.first_window->tau_end) + "] = " + num(first) +
                            ", final window [" + num(s.final_window->tau_begin) + ", " +
                            num(s.final_window->tau_end) + "] = " + num(last) + " (pi = " +
                            num(std::numbers::pi) + ")"};
}

Outcome convergence(const PaperRun& coarse, const PaperRun& fine) {
  if (coarse.exit_code) return unavailable(coarse);
  if (fine.exit_code) return unavailable(fine);
  const auto pa = position_distribution(*coarse.final_field);
  const auto pb = position_distribution(*fine.final_field);
  double l1 = 0.0;
  for (std::size_t j = 0; j < pa.values.size(); ++j) l1 += std::abs(pa.values[j] - pb.values[j]);
  l1 *= coarse.final_field->grid().dz();
  return {l1 <= 1e-4, "L1(P_dt - P_dt/2) at tau=216 = " + num(l1) + " (limit 1e-4)"};
}

Outcome determinism(const PaperRun& a, const PaperRun& b) {
  if (a.exit_code) return unavailable(a);
  if (b.exit_code) return unavailable(b);
  const std::string x = slurp(a.dir / "timeseries.csv"), y = slurp(b.dir / "timeseries.csv");
  return {x == y, std::to_string(x.size()) + " bytes, " + (x == y ? "identical" : "DIFFERENT")};
}

Outcome analyze_matches(const PaperRun& r) {
  if (r.exit_code) return unavailable(r);
  const bool same = analyze_run_dir(r.dir) == slurp(r.dir / "summary.txt");
  return {same, same ? "offline summary equals online summary" : "summaries differ"};
}

Outcome alignment(const PaperRun& r) {
  if (r.exit_code) return unavailable(r);
  const auto s = paper_schedule();
  std::string detail;
  bool ok = true;
  for (const double tau : {50.0, 100.0, 216.0}) {
    const auto f = r.snapshot_at(std::llround(tau / r.cfg.dt) * r.cfg.dt);
    const auto peaks = find_peaks(position_distribution(f), {r.cfg.peak_threshold, r.cfg.merge_width});
    const auto d = decompose_cat(f, peaks);
    // branch a carries the remote spin up
    const Vec3 bloch = d ? d->a.bloch : pair_conditioned_bloch(f, Spin::Up);
    const double par = alignment_angle(bloch, s, tau, Alignment::Parallel);
    const double anti = alignment_angle(bloch, s, tau, Alignment::Antiparallel);
    const double angle = std::min(par, anti);
    ok = ok && angle <= 0.2;
    detail += "tau " + num(tau) + ": " + num(angle, 3) + (par <= anti ? " (+B) " : " (-B) ");
  }
  return {ok, detail + "(limit 0.2 rad)"};
}

}  // namespace

int main(int argc, char** argv) {
  fs::path work = fs::temp_directory_path() / "mrfm_acceptance";
  std::set<std::string> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--work-dir" && i + 1 < argc) {
      work = argv[++i];
    } else if (a == "--only" && i + 1 < argc) {
      only.insert(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--work-dir DIR] [--only NAME]...\n");
      return 2;
    }
  }
  fs::create_directories(work);
  auto wanted = [&](const std::string& group) { return only.empty() || only.count(group) > 0; };
  std::printf("acceptance: kernels %s, work dir %s\n",
              std::string(kernels::active_table().name).c_str(), work.c_str());

  if (wanted("oracle")) report("oracle-equivalence", oracle_equivalence());
  if (wanted("coherent")) report("coherent-state", coherent_state());

  const bool paper = wanted("paper") || wanted("convergence") || wanted("determinism");
  if (paper) {
    const PaperRun run = run_paper(work / "paper", paper_preset().dt);
    if (wanted("paper")) {
      report("unitarity", unitarity(run));
      report("pair-mass-conservation", pair_mass(run));
      if (run.exit_code == 0) {
        const auto s = io::summarize(*run.final_field, run.final_tau, io::branch_samples(run.rows),
                                     {run.cfg.peak_threshold, run.cfg.merge_width});
        report("fig2-two-equal-peaks", fig2(s));
        report("fig3-ratio-residuals", ratio_residuals(s));
        report("fig3-ratio-magnitude", ratio_magnitude(s));
        report("eq9-branch-product-residuals", branch_products(s));
        report("fig5-remote-spin-collapse", remote_spin_collapse(s));
        report("fig4-phase-difference-grows", fig4_phase(s));
      } else {
        for (const char* n : {"fig2-two-equal-peaks", "fig3-ratio-residuals", "fig3-ratio-magnitude",
                              "eq9-branch-product-residuals", "fig5-remote-spin-collapse",
                              "fig4-phase-difference-grows"}) {
          report(n, unavailable(run));
        }
      }
      report("alignment (supplementary)", alignment(run));
      report("analyze-equals-summary (suppl.)", analyze_matches(run));
    }
    if (wanted("convergence")) {
      const PaperRun fine = run_paper(work / "paper_half_dt", paper_preset().dt / 2);
      report("convergence-dt-halving", convergence(run, fine));
    }
    if (wanted("determinism")) {
      const PaperRun again = run_paper(work / "paper_repeat", paper_preset().dt);
      report("determinism", determinism(run, again));
    }
  }

  std::printf("acceptance: %d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}

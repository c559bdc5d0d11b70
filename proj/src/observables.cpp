#include "mrfm/observables.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mrfm {

namespace {

/// Spin moment matrix R_kl = Σ_{j in [begin,end)} u_k(z_j) conj(u_l(z_j)) dz
/// over the four components.
Eigen::Matrix4cd spin_moments(const SpinorField& f, std::size_t begin, std::size_t end) {
  Eigen::Matrix4cd r = Eigen::Matrix4cd::Zero();
  std::array<std::span<const cplx>, 4> u;
  for (std::size_t c = 0; c < 4; ++c) u[c] = f.component(c);
  for (std::size_t j = begin; j < end; ++j) {
    for (int k = 0; k < 4; ++k) {
      for (int l = k; l < 4; ++l) r(k, l) += u[k][j] * std::conj(u[l][j]);
    }
  }
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < k; ++l) r(k, l) = std::conj(r(l, k));
  }
  return r * f.grid().dz();
}

/// ⟨S₁⟩ from a 2×2 block ρ over s1 (unnormalized).
Vec3 bloch_from(const Eigen::Matrix2cd& rho) {
  return {rho(0, 1).real(), -rho(0, 1).imag(), (rho(0, 0).real() - rho(1, 1).real()) / 2.0};
}

Eigen::Matrix2cd reduce_over_remote(const Eigen::Matrix4cd& r) {
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int t1 = 0; t1 < 2; ++t1) {
      for (int s2 = 0; s2 < 2; ++s2) rho(s1, t1) += r(2 * s1 + s2, 2 * t1 + s2);
    }
  }
  return rho;
}

Branch analyze_branch(const SpinorField& f, const PositionDistribution& p, std::size_t begin,
                      std::size_t end, bool left) {
  Branch b;
  b.begin = begin;
  b.end = end;
  b.left = left;
  const auto z = f.grid().positions();
  const double dz = f.grid().dz();
  double first = 0.0;
  for (std::size_t j = begin; j < end; ++j) {
    b.mass += p.values[j];
    first += z[j] * p.values[j];
  }
  b.mass *= dz;
  first *= dz;
  if (!(b.mass > 0.0)) return b;
  b.centroid = first / b.mass;

  const Eigen::Matrix4cd r = spin_moments(f, begin, end);
  b.p_up2 = std::clamp((r(0, 0).real() + r(2, 2).real()) / b.mass, 0.0, 1.0);
  const Vec3 s = bloch_from(reduce_over_remote(r));
  b.bloch = {s.x / b.mass, s.y / b.mass, s.z / b.mass};
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(r, Eigen::EigenvaluesOnly);
  b.residual = std::clamp(1.0 - es.eigenvalues().maxCoeff() / b.mass, 0.0, 1.0);
  return b;
}

}  // namespace

PositionDistribution position_distribution(const SpinorField& f) {
  if (f.representation() != Representation::Position) {
    throw std::invalid_argument("position_distribution expects a position-space field");
  }
  PositionDistribution p;
  p.grid = f.grid_ptr();
  p.values.assign(f.size(), 0.0);
  for (std::size_t c = 0; c < SpinorField::kComponents; ++c) {
    const auto u = f.component(c);
    for (std::size_t j = 0; j < u.size(); ++j) p.values[j] += std::norm(u[j]);
  }
  double acc = 0.0;
  for (double v : p.values) acc += v;
  p.total_mass = acc * f.grid().dz();
  return p;
}

double mean_position(const PositionDistribution& p) {
  const auto z = p.grid->positions();
  double acc = 0.0;
  for (std::size_t j = 0; j < p.values.size(); ++j) acc += z[j] * p.values[j];
  return acc * p.grid->dz();
}

std::vector<Peak> find_peaks(const PositionDistribution& p, const PeakOptions& options) {
  const auto& v = p.values;
  const std::size_t n = v.size();
  std::vector<Peak> peaks;
  if (n == 0) return peaks;
  const double max_value = *std::max_element(v.begin(), v.end());
  if (!(max_value > 0.0)) return peaks;
  const double floor = options.threshold * max_value;
  const auto z = p.grid->positions();

  for (std::size_t j = 0; j < n; ++j) {
    if (v[j] < floor) continue;
    const bool rises = j == 0 || v[j] > v[j - 1];
    const bool falls = j + 1 == n || v[j] >= v[j + 1];
    if (!rises || !falls) continue;
    Peak candidate{z[j], v[j], 0.0, j};
    if (!peaks.empty() && candidate.position - peaks.back().position < options.merge_width) {
      if (candidate.height > peaks.back().height) peaks.back() = candidate;
      continue;
    }
    peaks.push_back(candidate);
  }

  // Watershed basins: boundaries at the minimum of P between neighbours.
  std::vector<std::size_t> bounds{0};
  for (std::size_t i = 0; i + 1 < peaks.size(); ++i) {
    const auto first = v.begin() + static_cast<std::ptrdiff_t>(peaks[i].index);
    const auto last = v.begin() + static_cast<std::ptrdiff_t>(peaks[i + 1].index) + 1;
    bounds.push_back(static_cast<std::size_t>(std::min_element(first, last) - v.begin()));
  }
  bounds.push_back(n);
  const double dz = p.grid->dz();
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    double m = 0.0;
    for (std::size_t j = bounds[i]; j < bounds[i + 1]; ++j) m += v[j];
    peaks[i].mass = m * dz;
  }

  // Sub-grid position from a parabola through log P, exact for Gaussian peaks.
  for (auto& pk : peaks) {
    const std::size_t j = pk.index;
    if (j == 0 || j + 1 == n || !(v[j - 1] > 0.0) || !(v[j + 1] > 0.0)) continue;
    const double l0 = std::log(v[j - 1]), l1 = std::log(v[j]), l2 = std::log(v[j + 1]);
    const double curvature = l0 - 2.0 * l1 + l2;
    if (!(curvature < 0.0)) continue;
    const double offset = 0.5 * (l0 - l2) / curvature;
    if (std::abs(offset) <= 1.0) pk.position = z[j] + offset * dz;
  }
  return peaks;
}

std::optional<CatDecomposition> decompose_cat(const SpinorField& f, std::span<const Peak> peaks) {
  if (peaks.size() != 2) return std::nullopt;
  const auto p = position_distribution(f);
  std::size_t lo = peaks[0].index, hi = peaks[1].index;
  if (lo > hi) std::swap(lo, hi);
  if (hi >= p.values.size()) throw std::invalid_argument("peak index outside grid");
  const auto first = p.values.begin() + static_cast<std::ptrdiff_t>(lo);
  const auto last = p.values.begin() + static_cast<std::ptrdiff_t>(hi) + 1;
  const auto split = static_cast<std::size_t>(std::min_element(first, last) - p.values.begin());

  CatDecomposition d;
  d.split_index = split;
  d.split_point = f.grid().positions()[split];
  Branch left = analyze_branch(f, p, 0, split, true);
  Branch right = analyze_branch(f, p, split, f.size(), false);
  if (right.p_up2 > left.p_up2) {
    d.a = right;
    d.b = left;
  } else {
    d.a = left;
    d.b = right;
  }
  return d;
}

std::optional<ComponentRatio> component_ratio(const SpinorField& f, RemotePair pair) {
  const Spin s2 = pair == RemotePair::Up2 ? Spin::Up : Spin::Down;
  const auto num = f.component(Spin::Up, s2);
  const auto den = f.component(Spin::Down, s2);
  const auto p = position_distribution(f);
  const double max_value = *std::max_element(p.values.begin(), p.values.end());
  const double cut = 1e-3 * max_value;

  double den2 = 0.0, num2 = 0.0;
  cplx cross{};
  for (std::size_t j = 0; j < p.values.size(); ++j) {
    if (!(p.values[j] > cut)) continue;
    den2 += std::norm(den[j]);
    num2 += std::norm(num[j]);
    cross += std::conj(den[j]) * num[j];
  }
  if (!(den2 * f.grid().dz() > 1e-6)) return std::nullopt;

  ComponentRatio out;
  out.c = cross / den2;
  double misfit = 0.0;
  for (std::size_t j = 0; j < p.values.size(); ++j) {
    if (!(p.values[j] > cut)) continue;
    misfit += std::norm(num[j] - out.c * den[j]);
  }
  out.residual = num2 > 0.0 ? std::sqrt(misfit / num2) : 0.0;
  return out;
}

SpinExpectations spin_expectations(const SpinorField& f) {
  if (f.representation() != Representation::Position) {
    throw std::invalid_argument("spin_expectations expects a position-space field");
  }
  const Eigen::Matrix4cd r = spin_moments(f, 0, f.size());
  SpinExpectations e;
  e.s1 = bloch_from(reduce_over_remote(r));
  const PairMasses m = pair_masses(f);
  e.s2z = (m.up2 - m.down2) / 2.0;
  return e;
}

Vec3 pair_conditioned_bloch(const SpinorField& f, Spin remote) {
  const Eigen::Matrix4cd r = spin_moments(f, 0, f.size());
  const int s2 = static_cast<int>(remote);
  Eigen::Matrix2cd rho;
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int t1 = 0; t1 < 2; ++t1) rho(s1, t1) = r(2 * s1 + s2, 2 * t1 + s2);
  }
  const double mass = rho.trace().real();
  if (!(mass > 0.0)) return {};
  const Vec3 s = bloch_from(rho);
  return {s.x / mass, s.y / mass, s.z / mass};
}

double alignment_angle(const Vec3& bloch, const DriveSchedule& s, double tau, Alignment alignment) {
  const double nb = bloch.norm();
  if (!(nb > 1e-6)) throw std::domain_error("alignment_angle: degenerate Bloch vector");
  Vec3 field = s.effective_field(tau);
  if (alignment == Alignment::Antiparallel) field = -field;
  const double nf = field.norm();
  if (!(nf > 0.0)) throw std::domain_error("alignment_angle: effective field vanishes");
  return std::acos(std::clamp(bloch.dot(field) / (nb * nf), -1.0, 1.0));
}

double wrap_phase(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(angle, two_pi);
  if (w < 0.0) w += two_pi;
  if (w >= two_pi) w -= two_pi;
  return w;
}

namespace {

struct CosineFit {
  double amplitude;
  double phase;
};

/// Z ≈ a cos τ + b sin τ + c  ->  A cos(τ + φ) with A = hypot(a, b), φ = atan2(-b, a).
CosineFit fit_cosine(std::span<const BranchSample> window, bool branch_b, double omega) {
  Eigen::MatrixXd design(static_cast<Eigen::Index>(window.size()), 3);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(window.size()));
  for (std::size_t i = 0; i < window.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    design(r, 0) = std::cos(omega * window[i].tau);
    design(r, 1) = std::sin(omega * window[i].tau);
    design(r, 2) = 1.0;
    rhs(r) = branch_b ? window[i].z_b : window[i].z_a;
  }
  const Eigen::Vector3d x = design.colPivHouseholderQr().solve(rhs);
  return {std::hypot(x(0), x(1)), std::atan2(-x(1), x(0))};
}

}  // namespace

BranchPhaseSeries track_branch_phases(std::span<const BranchSample> samples,
                                      const PhaseTrackOptions& options) {
  if (samples.size() < 2 || samples.back().tau - samples.front().tau < 2.0 * options.period) {
    throw std::invalid_argument("track_branch_phases: need two periods of two-peak data");
  }
  BranchPhaseSeries out;
  out.samples.assign(samples.begin(), samples.end());
  const double omega = 2.0 * std::numbers::pi / options.period;
  const double t_last = samples.back().tau;
  const double slack = 1e-9 * options.period;

  std::size_t first = 0;
  for (std::size_t k = 0;; ++k) {
    const double t0 = samples.front().tau + static_cast<double>(k) * options.window_step;
    if (t0 + options.period > t_last + slack) break;
    const double t1 = t0 + options.period;
    while (first < samples.size() && samples[first].tau < t0 - slack) ++first;
    std::size_t last = first;
    while (last < samples.size() && samples[last].tau <= t1 + slack) ++last;
    const auto window = samples.subspan(first, last - first);
    if (window.size() < options.min_samples) continue;
    if (window.back().tau - window.front().tau < options.period / 2.0) continue;

    const CosineFit fa = fit_cosine(window, false, omega);
    const CosineFit fb = fit_cosine(window, true, omega);
    PhaseWindow w;
    w.tau_begin = t0;
    w.tau_end = t1;
    w.amplitude_a = fa.amplitude;
    w.amplitude_b = fb.amplitude;
    w.phase_a = fa.phase;
    w.phase_b = fb.phase;
    const double diff = fa.phase - fb.phase;
    w.delta_phi = std::abs(diff) < 1e-12 ? 0.0 : wrap_phase(diff);
    w.samples = window.size();
    out.windows.push_back(w);
  }
  if (out.windows.empty()) {
    throw std::invalid_argument("track_branch_phases: no window has enough two-peak samples");
  }
  return out;
}

}  // namespace mrfm

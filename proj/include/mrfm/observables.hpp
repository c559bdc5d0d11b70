#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "mrfm/schedule.hpp"
#include "mrfm/spinor_field.hpp"
#include "mrfm/vec3.hpp"

namespace mrfm {

/// P(z) = Σ_{s1,s2} |u_{s1 s2}(z)|².
struct PositionDistribution {
  GridPtr grid;
  std::vector<double> values;
  double total_mass = 0.0;  ///< Σ P dz
};

PositionDistribution position_distribution(const SpinorField& f);

/// ⟨z⟩ = Σ z P(z) dz.
double mean_position(const PositionDistribution& p);

struct Peak {
  double position = 0.0;   ///< refined between grid points by a log-parabola fit
  double height = 0.0;     ///< P at the grid maximum
  double mass = 0.0;       ///< probability in the peak's watershed basin
  std::size_t index = 0;   ///< grid index of the maximum
};

struct PeakOptions {
  double threshold = 0.1;    ///< relative to max P
  double merge_width = 2.0;  ///< maxima closer than this collapse into the higher one
};

/// Local maxima above threshold·max(P), merged, sorted by position. Basin
/// boundaries sit at the minimum of P between neighbouring peaks.
std::vector<Peak> find_peaks(const PositionDistribution& p, const PeakOptions& options = {});

/// One spatial branch of a two-peak state.
struct Branch {
  std::size_t begin = 0;  ///< grid index range [begin, end)
  std::size_t end = 0;
  bool left = false;
  double mass = 0.0;
  double centroid = 0.0;
  double p_up2 = 0.0;     ///< P(remote spin ↑ | branch)
  Vec3 bloch;             ///< ⟨S₁⟩ conditioned on the branch
  double residual = 0.0;  ///< 1 - largest Schmidt weight (cantilever | spins)
};

/// Ψ = Ψ_a + Ψ_b split at the minimum of P between the two peaks. Branch a is
/// the one whose remote spin is predominantly up (ties go to the left branch).
struct CatDecomposition {
  std::size_t split_index = 0;
  double split_point = 0.0;
  Branch a;
  Branch b;
};

/// nullopt unless exactly two peaks are given.
std::optional<CatDecomposition> decompose_cat(const SpinorField& f, std::span<const Peak> peaks);

/// Which pair of components shares the remote spin value.
enum class RemotePair { Up2, Down2 };

struct ComponentRatio {
  cplx c;                 ///< least-squares u_{↑ s2} ≈ c · u_{↓ s2}
  double residual = 0.0;  ///< ‖u_num - c u_den‖ / ‖u_num‖ over the window
};

/// Fit restricted to grid points with P > 1e-3·max(P). nullopt when the
/// denominator carries less than 1e-6 probability inside that window.
std::optional<ComponentRatio> component_ratio(const SpinorField& f, RemotePair pair);

struct SpinExpectations {
  Vec3 s1;          ///< (⟨S_x1⟩, ⟨S_y1⟩, ⟨S_z1⟩)
  double s2z = 0.0; ///< ⟨S_z2⟩ = (M_↑ - M_↓)/2
};

SpinExpectations spin_expectations(const SpinorField& f);

/// ⟨S₁⟩ conditioned on the remote spin being `remote`, i.e. computed from one
/// component pair and divided by its mass. Zero vector for an empty pair.
Vec3 pair_conditioned_bloch(const SpinorField& f, Spin remote);

enum class Alignment { Parallel, Antiparallel };

/// Angle between a Bloch vector and ±B_eff(τ) = ±(ε, 0, -φ̇). Throws
/// std::domain_error for a Bloch vector shorter than 1e-6 or a vanishing field.
double alignment_angle(const Vec3& bloch, const DriveSchedule& s, double tau,
                       Alignment alignment = Alignment::Parallel);

/// Centroids of branches a and b at one instant.
struct BranchSample {
  double tau = 0.0;
  double z_a = 0.0;
  double z_b = 0.0;
};

struct PhaseWindow {
  double tau_begin = 0.0;
  double tau_end = 0.0;
  double amplitude_a = 0.0;
  double amplitude_b = 0.0;
  double phase_a = 0.0;      ///< Z ≈ A cos(τ + φ) + B
  double phase_b = 0.0;
  double delta_phi = 0.0;    ///< (φ_a - φ_b) wrapped to [0, 2π): how far branch a leads
  std::size_t samples = 0;
};

struct BranchPhaseSeries {
  std::vector<BranchSample> samples;
  std::vector<PhaseWindow> windows;
};

struct PhaseTrackOptions {
  double period = 2.0 * std::numbers::pi;
  double window_step = std::numbers::pi / 2.0;
  std::size_t min_samples = 8;
};

/// Least-squares A cos(τ + φ) + B fits over sliding one-period windows.
/// Windows with fewer than min_samples points or covering less than half a
/// period are skipped. Throws std::invalid_argument when the samples span less
/// than two periods or no window qualifies.
BranchPhaseSeries track_branch_phases(std::span<const BranchSample> samples,
                                      const PhaseTrackOptions& options = {});

/// Wraps an angle to [0, 2π).
double wrap_phase(double angle);

}  // namespace mrfm

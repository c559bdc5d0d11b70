#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "mrfm/params.hpp"
#include "mrfm/schedule.hpp"
#include "mrfm/spinor_field.hpp"

/// Brute-force reference propagator for small grids. Independent of the
/// split-operator path: it exponentiates the full dense Hamiltonian of one
/// spin pair through its eigendecomposition.
namespace mrfm::oracle {

inline constexpr std::size_t kMaxGridPoints = 256;

/// Hamiltonian of one (s1 ↑/↓) × grid pair with the remote spin fixed, in the
/// basis (s1 = ↑, z_0..z_{N-1}, s1 = ↓, z_0..z_{N-1}). All entries are real in
/// this basis: the spectral kinetic matrix is real symmetric, the harmonic and
/// spin terms are real diagonals, and the rf coupling is -ε/2 on the
/// off-diagonal blocks.
struct DenseHamiltonian {
  Eigen::MatrixXd matrix;
  std::size_t n_points = 0;
  double tau = 0.0;

  std::size_t dimension() const noexcept { return 2 * n_points; }
  /// max |H - H†| entrywise.
  double hermiticity_residual() const;
};

/// Kinetic operator F⁻¹ diag(p²/2) F on the grid as a dense matrix.
Eigen::MatrixXd kinetic_matrix(const SpatialGrid& grid);

/// Throws std::invalid_argument when the grid exceeds kMaxGridPoints.
DenseHamiltonian assemble(const SpatialGrid& grid, const PhysicalParams& params,
                          const DriveSchedule& s, double tau);

/// Evolves f0 from τ = 0 to cfg.t_final with midpoint-frozen Hamiltonians on
/// intervals of length cfg.dt / substeps (substeps >= 4), each exponentiated
/// exactly via a symmetric eigendecomposition. Both spin pairs share the same
/// Hamiltonian, so one decomposition serves both.
SpinorField oracle_evolve(const SpinorField& f0, const SimConfig& cfg, const DriveSchedule& s,
                          int substeps = 4);

}  // namespace mrfm::oracle

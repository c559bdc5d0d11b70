#include "mrfm/oracle.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace mrfm::oracle {

double DenseHamiltonian::hermiticity_residual() const {
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd kinetic_matrix(const SpatialGrid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const auto p = grid.momenta();
  // T_jk = (1/N) Σ_m cos(2π m (j-k)/N) p_m²/2; depends on |j-k| only.
  Eigen::VectorXd row(n);
  for (Eigen::Index d = 0; d < n; ++d) {
    double acc = 0.0;
    for (Eigen::Index m = 0; m < n; ++m) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((m * d) % n) /
                           static_cast<double>(n);
      acc += std::cos(angle) * p[m] * p[m] / 2.0;
    }
    row(d) = acc / static_cast<double>(n);
  }
  Eigen::MatrixXd t(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) t(j, k) = row(std::abs(j - k));
  }
  return t;
}

namespace {

DenseHamiltonian assemble_from_kinetic(const Eigen::MatrixXd& t, const SpatialGrid& grid,
                                       const PhysicalParams& params, const DriveSchedule& s,
                                       double tau) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const auto z = grid.positions();
  const double eps = s.epsilon(tau);
  const double phi_dot = s.phi_dot(tau);

  DenseHamiltonian h;
  h.n_points = grid.size();
  h.tau = tau;
  h.matrix = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  h.matrix.topLeftCorner(n, n) = t;
  h.matrix.bottomRightCorner(n, n) = t;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double harmonic = z[j] * z[j] / 2.0;
    const double d = phi_dot / 2.0 - params.eta * z[j];
    h.matrix(j, j) += harmonic + d;
    h.matrix(n + j, n + j) += harmonic - d;
    h.matrix(j, n + j) = -eps / 2.0;
    h.matrix(n + j, j) = -eps / 2.0;
  }
  return h;
}

void check_size(const SpatialGrid& grid) {
  if (grid.size() > kMaxGridPoints) {
    throw std::invalid_argument("oracle grid too large: " + std::to_string(grid.size()) +
                                " > " + std::to_string(kMaxGridPoints));
  }
}

}  // namespace

DenseHamiltonian assemble(const SpatialGrid& grid, const PhysicalParams& params,
                          const DriveSchedule& s, double tau) {
  check_size(grid);
  return assemble_from_kinetic(kinetic_matrix(grid), grid, params, s, tau);
}

SpinorField oracle_evolve(const SpinorField& f0, const SimConfig& cfg, const DriveSchedule& s,
                          int substeps) {
  if (substeps < 4) throw std::invalid_argument("oracle needs dt_oracle <= dt/4");
  if (f0.representation() != Representation::Position) {
    throw std::invalid_argument("oracle expects a position-space field");
  }
  const auto& grid = f0.grid();
  check_size(grid);
  const auto n = static_cast<Eigen::Index>(grid.size());
  const std::int64_t n_steps = std::llround(cfg.t_final / cfg.dt);
  const std::int64_t n_intervals = n_steps * substeps;
  const double h = cfg.dt / substeps;
  const Eigen::MatrixXd t = kinetic_matrix(grid);

  // Columns: Re/Im of the remote-↑ pair, then Re/Im of the remote-↓ pair.
  Eigen::MatrixXd x(2 * n, 4);
  for (int col = 0; col < 2; ++col) {
    const Spin s2 = col == 0 ? Spin::Up : Spin::Down;
    const auto up = f0.component(Spin::Up, s2);
    const auto down = f0.component(Spin::Down, s2);
    for (Eigen::Index j = 0; j < n; ++j) {
      x(j, 2 * col) = up[j].real();
      x(j, 2 * col + 1) = up[j].imag();
      x(n + j, 2 * col) = down[j].real();
      x(n + j, 2 * col + 1) = down[j].imag();
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  Eigen::MatrixXd coeffs(2 * n, 4);
  for (std::int64_t k = 0; k < n_intervals; ++k) {
    const double tau_mid = (static_cast<double>(k) + 0.5) * h;
    solver.compute(assemble_from_kinetic(t, grid, cfg.physical, s, tau_mid).matrix);
    if (solver.info() != Eigen::Success) throw std::runtime_error("oracle eigensolver failed");
    const auto& v = solver.eigenvectors();
    const auto& lambda = solver.eigenvalues();
    coeffs.noalias() = v.transpose() * x;
    for (Eigen::Index i = 0; i < 2 * n; ++i) {
      const cplx ph = std::polar(1.0, -lambda(i) * h);
      for (int col = 0; col < 4; col += 2) {
        const cplx c = cplx(coeffs(i, col), coeffs(i, col + 1)) * ph;
        coeffs(i, col) = c.real();
        coeffs(i, col + 1) = c.imag();
      }
    }
    x.noalias() = v * coeffs;
  }

  SpinorField out(f0.grid_ptr());
  for (int col = 0; col < 2; ++col) {
    const Spin s2 = col == 0 ? Spin::Up : Spin::Down;
    auto up = out.component(Spin::Up, s2);
    auto down = out.component(Spin::Down, s2);
    for (Eigen::Index j = 0; j < n; ++j) {
      up[j] = {x(j, 2 * col), x(j, 2 * col + 1)};
      down[j] = {x(n + j, 2 * col), x(n + j, 2 * col + 1)};
    }
  }
  return out;
}

}  // namespace mrfm::oracle

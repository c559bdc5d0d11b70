#pragma once

#include <cmath>

#include "mrfm/kernels.hpp"

namespace mrfm::kernels::detail {

/// cos(Ω dt) and sin(Ω dt)/Ω with the small-angle series branch.
inline void block_coefficients(double omega, double dt, double& c, double& s_over_omega) {
  const double theta = omega * dt;
  if (theta < kSeriesThreshold) {
    const double t2 = theta * theta;
    c = 1.0 - t2 / 2.0 + t2 * t2 / 24.0;
    s_over_omega = dt * (1.0 - t2 / 6.0 + t2 * t2 / 120.0);
  } else {
    c = std::cos(theta);
    s_over_omega = std::sin(theta) / omega;
  }
}

/// Applies the harmonic-phase-weighted block at point j to one pair.
inline void apply_block(double hr, double hi, double c, double sd, double she, cplx& a, cplx& b) {
  // M11 = h (c - i sd), M22 = h (c + i sd), M12 = h (i she)
  const double m11r = hr * c + hi * sd, m11i = hi * c - hr * sd;
  const double m22r = hr * c - hi * sd, m22i = hi * c + hr * sd;
  const double m12r = -hi * she, m12i = hr * she;
  const double ar = a.real(), ai = a.imag(), br = b.real(), bi = b.imag();
  a = {m11r * ar - m11i * ai + m12r * br - m12i * bi, m11r * ai + m11i * ar + m12r * bi + m12i * br};
  b = {m12r * ar - m12i * ai + m22r * br - m22i * bi, m12r * ai + m12i * ar + m22r * bi + m22i * br};
}

}  // namespace mrfm::kernels::detail

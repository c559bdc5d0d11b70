#include <cmath>

#include "block.hpp"
#include "mrfm/kernels.hpp"

namespace mrfm::kernels {

namespace {

void multiply_phase(cplx* data, const cplx* phase, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double ar = data[j].real(), ai = data[j].imag();
    const double pr = phase[j].real(), pi = phase[j].imag();
    data[j] = {ar * pr - ai * pi, ar * pi + ai * pr};
  }
}

void potential_step(const PotentialArgs& args, cplx* a_up, cplx* a_down, cplx* b_up,
                    cplx* b_down) {
  const double he2 = args.half_eps * args.half_eps;
  for (std::size_t j = 0; j < args.n; ++j) {
    const double d = args.half_phi_dot - args.eta * args.z[j];
    const double omega = std::sqrt(d * d + he2);
    double c, s;
    detail::block_coefficients(omega, args.dt, c, s);
    const double hr = args.harmonic_phase[j].real(), hi = args.harmonic_phase[j].imag();
    detail::apply_block(hr, hi, c, s * d, s * args.half_eps, a_up[j], a_down[j]);
    detail::apply_block(hr, hi, c, s * d, s * args.half_eps, b_up[j], b_down[j]);
  }
}

double sum_abs2(const cplx* data, std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    acc += data[j].real() * data[j].real() + data[j].imag() * data[j].imag();
  }
  return acc;
}

void sincos(const double* x, double* s, double* c, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    s[j] = std::sin(x[j]);
    c[j] = std::cos(x[j]);
  }
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static const KernelTable table{"scalar", multiply_phase, potential_step, sum_abs2, sincos};
  return table;
}

}  // namespace mrfm::kernels

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "block.hpp"
#include "mrfm/kernels.hpp"

namespace mrfm::kernels {

namespace {

// Cephes-style sin/cos: reduction by π/4 in three parts, then degree-6
// minimax polynomials on [-π/4, π/4].
constexpr double kFourOverPi = 1.27323954473516268615;
constexpr double kDP1 = 7.85398125648498535156e-1;
constexpr double kDP2 = 3.77489470793079817668e-8;
constexpr double kDP3 = 2.69515142907905952645e-15;
// Beyond this the three-part reduction loses accuracy; those lanes use libm.
constexpr double kReductionLimit = 1e6;

inline __m256d poly_sin(__m256d z, __m256d zz) {
  __m256d p = _mm256_set1_pd(1.58962301576546568060e-10);
  p = _mm256_fmadd_pd(p, zz, _mm256_set1_pd(-2.50507477628578072866e-8));
  p = _mm256_fmadd_pd(p, zz, _mm256_set1_pd(2.75573136213857245213e-6));
  p = _mm256_fmadd_pd(p, zz, _mm256_set1_pd(-1.98412698295895385996e-4));
  p = _mm256_fmadd_pd(p, zz, _mm256_set1_pd(8.33333333332211858878e-3));
  p = _mm256_fmadd_pd(p, zz, _mm256_set1_pd(-1.66666666666666307295e-1));
  return _mm256_fmadd_pd(_mm256_mul_pd(z, zz), p, z);
}

inline __m256d poly_cos(__m256d zz) {
  __m256d p = _mm256_set1_pd(-1.13585365213876817300e-11);
  p = _mm256_fmadd_pd(p, zz, _mm256_set1_pd(2.08757008419747316778e-9));
  p = _mm256_fmadd_pd(p, zz, _mm256_set1_pd(-2.75573141792967388112e-7));
  p = _mm256_fmadd_pd(p, zz, _mm256_set1_pd(2.48015872888517045348e-5));
  p = _mm256_fmadd_pd(p, zz, _mm256_set1_pd(-1.38888888888730564116e-3));
  p = _mm256_fmadd_pd(p, zz, _mm256_set1_pd(4.16666666666665929218e-2));
  const __m256d zz2 = _mm256_mul_pd(zz, zz);
  return _mm256_fmadd_pd(zz2, p, _mm256_fnmadd_pd(_mm256_set1_pd(0.5), zz, _mm256_set1_pd(1.0)));
}

inline __m256d mod_pow2(__m256d v, double m) {
  const __m256d q = _mm256_floor_pd(_mm256_mul_pd(v, _mm256_set1_pd(1.0 / m)));
  return _mm256_fnmadd_pd(q, _mm256_set1_pd(m), v);
}

/// Four lanes of sin and cos. Lanes with |x| >= kReductionLimit are redone with libm.
inline void sincos4(__m256d x, __m256d& s_out, __m256d& c_out) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d ax = _mm256_andnot_pd(sign_mask, x);
  const __m256d x_sign = _mm256_and_pd(sign_mask, x);

  __m256d y = _mm256_floor_pd(_mm256_mul_pd(ax, _mm256_set1_pd(kFourOverPi)));
  __m256d j = mod_pow2(y, 8.0);
  const __m256d odd = mod_pow2(j, 2.0);
  y = _mm256_add_pd(y, odd);
  j = mod_pow2(_mm256_add_pd(j, odd), 8.0);

  const __m256d upper = _mm256_cmp_pd(j, _mm256_set1_pd(3.5), _CMP_GT_OQ);
  const __m256d j4 = _mm256_sub_pd(j, _mm256_and_pd(upper, _mm256_set1_pd(4.0)));
  const __m256d swap = _mm256_cmp_pd(j4, _mm256_set1_pd(1.5), _CMP_GT_OQ);

  __m256d z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDP1), ax);
  z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDP2), z);
  z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDP3), z);
  const __m256d zz = _mm256_mul_pd(z, z);

  const __m256d ps = poly_sin(z, zz);
  const __m256d pc = poly_cos(zz);

  __m256d s = _mm256_blendv_pd(ps, pc, swap);
  __m256d c = _mm256_blendv_pd(pc, ps, swap);
  s = _mm256_xor_pd(s, _mm256_and_pd(upper, sign_mask));
  s = _mm256_xor_pd(s, x_sign);
  c = _mm256_xor_pd(c, _mm256_and_pd(_mm256_xor_pd(upper, swap), sign_mask));

  const __m256d big = _mm256_cmp_pd(ax, _mm256_set1_pd(kReductionLimit), _CMP_GE_OQ);
  if (_mm256_movemask_pd(big) != 0) {
    alignas(32) double xs[4], ss[4], cs[4];
    _mm256_store_pd(xs, x);
    _mm256_store_pd(ss, s);
    _mm256_store_pd(cs, c);
    for (int k = 0; k < 4; ++k) {
      if (std::abs(xs[k]) >= kReductionLimit) {
        ss[k] = std::sin(xs[k]);
        cs[k] = std::cos(xs[k]);
      }
    }
    s = _mm256_load_pd(ss);
    c = _mm256_load_pd(cs);
  }
  s_out = s;
  c_out = c;
}

/// Interleaved complex product of two complex pairs [r0 i0 r1 i1].
inline __m256d cmul(__m256d m, __m256d a) {
  const __m256d mr = _mm256_movedup_pd(m);
  const __m256d mi = _mm256_permute_pd(m, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(mr, a, _mm256_mul_pd(mi, a_sw));
}

/// SoA (re, im) of four points -> interleaved complex for points 0,1 and 2,3.
inline void interleave(__m256d re, __m256d im, __m256d& lo, __m256d& hi) {
  const __m256d u0 = _mm256_unpacklo_pd(re, im);
  const __m256d u1 = _mm256_unpackhi_pd(re, im);
  lo = _mm256_permute2f128_pd(u0, u1, 0x20);
  hi = _mm256_permute2f128_pd(u0, u1, 0x31);
}

/// Interleaved complex for points 0,1 and 2,3 -> SoA (re, im).
inline void deinterleave(__m256d lo, __m256d hi, __m256d& re, __m256d& im) {
  const __m256d u0 = _mm256_permute2f128_pd(lo, hi, 0x20);
  const __m256d u1 = _mm256_permute2f128_pd(lo, hi, 0x31);
  re = _mm256_unpacklo_pd(u0, u1);
  im = _mm256_unpackhi_pd(u0, u1);
}

void multiply_phase(cplx* data, const cplx* phase, std::size_t n) {
  auto* d = reinterpret_cast<double*>(data);
  const auto* p = reinterpret_cast<const double*>(phase);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d a = _mm256_loadu_pd(d + 2 * j);
    const __m256d m = _mm256_loadu_pd(p + 2 * j);
    _mm256_storeu_pd(d + 2 * j, cmul(m, a));
  }
  for (; j < n; ++j) data[j] *= phase[j];
}

inline void apply_pair(__m256d m11_lo, __m256d m11_hi, __m256d m12_lo, __m256d m12_hi,
                       __m256d m22_lo, __m256d m22_hi, cplx* up, cplx* down) {
  auto* u = reinterpret_cast<double*>(up);
  auto* w = reinterpret_cast<double*>(down);
  const __m256d a_lo = _mm256_loadu_pd(u), a_hi = _mm256_loadu_pd(u + 4);
  const __m256d b_lo = _mm256_loadu_pd(w), b_hi = _mm256_loadu_pd(w + 4);
  _mm256_storeu_pd(u, _mm256_add_pd(cmul(m11_lo, a_lo), cmul(m12_lo, b_lo)));
  _mm256_storeu_pd(u + 4, _mm256_add_pd(cmul(m11_hi, a_hi), cmul(m12_hi, b_hi)));
  _mm256_storeu_pd(w, _mm256_add_pd(cmul(m12_lo, a_lo), cmul(m22_lo, b_lo)));
  _mm256_storeu_pd(w + 4, _mm256_add_pd(cmul(m12_hi, a_hi), cmul(m22_hi, b_hi)));
}

void potential_step(const PotentialArgs& args, cplx* a_up, cplx* a_down, cplx* b_up,
                    cplx* b_down) {
  const __m256d half_phi_dot = _mm256_set1_pd(args.half_phi_dot);
  const __m256d eta = _mm256_set1_pd(args.eta);
  const __m256d he = _mm256_set1_pd(args.half_eps);
  const __m256d he2 = _mm256_set1_pd(args.half_eps * args.half_eps);
  const __m256d dt = _mm256_set1_pd(args.dt);
  const __m256d series = _mm256_set1_pd(kSeriesThreshold);
  const __m256d one = _mm256_set1_pd(1.0);
  const auto* h = reinterpret_cast<const double*>(args.harmonic_phase);

  std::size_t j = 0;
  for (; j + 4 <= args.n; j += 4) {
    const __m256d d = _mm256_fnmadd_pd(eta, _mm256_loadu_pd(args.z + j), half_phi_dot);
    const __m256d omega = _mm256_sqrt_pd(_mm256_fmadd_pd(d, d, he2));
    const __m256d theta = _mm256_mul_pd(omega, dt);

    __m256d sn, c;
    sincos4(theta, sn, c);
    __m256d s = _mm256_div_pd(sn, omega);

    const __m256d small = _mm256_cmp_pd(theta, series, _CMP_LT_OQ);
    if (_mm256_movemask_pd(small) != 0) {
      const __m256d t2 = _mm256_mul_pd(theta, theta);
      const __m256d t4 = _mm256_mul_pd(t2, t2);
      const __m256d c_series = _mm256_add_pd(
          _mm256_fnmadd_pd(t2, _mm256_set1_pd(0.5), one), _mm256_mul_pd(t4, _mm256_set1_pd(1.0 / 24.0)));
      const __m256d s_series = _mm256_mul_pd(
          dt, _mm256_add_pd(_mm256_fnmadd_pd(t2, _mm256_set1_pd(1.0 / 6.0), one),
                            _mm256_mul_pd(t4, _mm256_set1_pd(1.0 / 120.0))));
      c = _mm256_blendv_pd(c, c_series, small);
      s = _mm256_blendv_pd(s, s_series, small);
    }

    const __m256d sd = _mm256_mul_pd(s, d);
    const __m256d she = _mm256_mul_pd(s, he);

    __m256d hr, hi;
    deinterleave(_mm256_loadu_pd(h + 2 * j), _mm256_loadu_pd(h + 2 * j + 4), hr, hi);

    // M11 = h (c - i sd), M22 = h (c + i sd), M12 = h (i she)
    const __m256d m11r = _mm256_fmadd_pd(hi, sd, _mm256_mul_pd(hr, c));
    const __m256d m11i = _mm256_fnmadd_pd(hr, sd, _mm256_mul_pd(hi, c));
    const __m256d m22r = _mm256_fnmadd_pd(hi, sd, _mm256_mul_pd(hr, c));
    const __m256d m22i = _mm256_fmadd_pd(hr, sd, _mm256_mul_pd(hi, c));
    const __m256d m12r = _mm256_xor_pd(_mm256_mul_pd(hi, she), _mm256_set1_pd(-0.0));
    const __m256d m12i = _mm256_mul_pd(hr, she);

    __m256d m11_lo, m11_hi, m12_lo, m12_hi, m22_lo, m22_hi;
    interleave(m11r, m11i, m11_lo, m11_hi);
    interleave(m12r, m12i, m12_lo, m12_hi);
    interleave(m22r, m22i, m22_lo, m22_hi);

    apply_pair(m11_lo, m11_hi, m12_lo, m12_hi, m22_lo, m22_hi, a_up + j, a_down + j);
    apply_pair(m11_lo, m11_hi, m12_lo, m12_hi, m22_lo, m22_hi, b_up + j, b_down + j);
  }

  const double he2s = args.half_eps * args.half_eps;
  for (; j < args.n; ++j) {
    const double d = args.half_phi_dot - args.eta * args.z[j];
    const double omega = std::sqrt(d * d + he2s);
    double c, s;
    detail::block_coefficients(omega, args.dt, c, s);
    const double hr = args.harmonic_phase[j].real(), hi = args.harmonic_phase[j].imag();
    detail::apply_block(hr, hi, c, s * d, s * args.half_eps, a_up[j], a_down[j]);
    detail::apply_block(hr, hi, c, s * d, s * args.half_eps, b_up[j], b_down[j]);
  }
}

double sum_abs2(const cplx* data, std::size_t n) {
  const auto* d = reinterpret_cast<const double*>(data);
  const std::size_t m = 2 * n;
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= m; i += 8) {
    const __m256d x0 = _mm256_loadu_pd(d + i);
    const __m256d x1 = _mm256_loadu_pd(d + i + 4);
    acc0 = _mm256_fmadd_pd(x0, x0, acc0);
    acc1 = _mm256_fmadd_pd(x1, x1, acc1);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < m; ++i) acc += d[i] * d[i];
  return acc;
}

void sincos(const double* x, double* s, double* c, std::size_t n) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d vs, vc;
    sincos4(_mm256_loadu_pd(x + j), vs, vc);
    _mm256_storeu_pd(s + j, vs);
    _mm256_storeu_pd(c + j, vc);
  }
  for (; j < n; ++j) {
    s[j] = std::sin(x[j]);
    c[j] = std::cos(x[j]);
  }
}

}  // namespace

const KernelTable& avx2_kernels_unchecked() noexcept {
  static const KernelTable table{"avx2", multiply_phase, potential_step, sum_abs2, sincos};
  return table;
}

}  // namespace mrfm::kernels

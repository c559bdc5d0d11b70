#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "mrfm/aligned.hpp"

/// Inner-loop kernels of the propagator. Each instruction set provides a table
/// of the same entry points; the scalar table is the reference every other
/// variant is tested against.
namespace mrfm::kernels {

/// Inputs for one potential sub-step: per grid point j the 2×2 block
/// exp(-i dt [[d_j, -ε/2], [-ε/2, -d_j]]) with d_j = φ̇/2 - η z_j, times the
/// harmonic phase exp(-i z_j² dt/2).
struct PotentialArgs {
  const double* z = nullptr;
  const cplx* harmonic_phase = nullptr;
  std::size_t n = 0;
  double half_phi_dot = 0.0;
  double eta = 0.0;
  double half_eps = 0.0;
  double dt = 0.0;
};

/// Below this rotation angle Ω·dt the block falls back to a Taylor series.
inline constexpr double kSeriesThreshold = 1e-6;

struct KernelTable {
  std::string_view name;
  /// data[j] *= phase[j]
  void (*multiply_phase)(cplx* data, const cplx* phase, std::size_t n);
  /// Applies the potential block to two spin pairs in place. Each pair is
  /// (s1 = ↑ amplitude, s1 = ↓ amplitude) for a fixed remote spin.
  void (*potential_step)(const PotentialArgs& args, cplx* pair_a_up, cplx* pair_a_down,
                         cplx* pair_b_up, cplx* pair_b_down);
  /// Σ |data[j]|²
  double (*sum_abs2)(const cplx* data, std::size_t n);
  /// Elementwise sine and cosine.
  void (*sincos)(const double* x, double* s, double* c, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

/// nullptr when the build has no AVX2 variant or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table() noexcept;

/// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available_tables();

/// Resolved once per process: SPINOR_KERNELS=scalar|avx2 forces a variant,
/// anything else picks the widest available one.
const KernelTable& active_table();

/// Looks a table up by name ("scalar", "avx2", or "auto"); throws
/// std::invalid_argument when unknown or unavailable.
const KernelTable& table_by_name(std::string_view name);

}  // namespace mrfm::kernels

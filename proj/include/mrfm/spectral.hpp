#pragma once

#include <cstddef>

#include "mrfm/aligned.hpp"

namespace mrfm {

/// Batched in-place 1-D complex FFT over `batch` contiguous signals of length n.
/// Unnormalized in both directions. Buffers passed to forward/inverse must be
/// 64-byte aligned (AlignedVector storage).
///
/// Plans are built with FFTW_ESTIMATE so that the same problem always gets the
/// same plan and results are reproducible run to run. Planning is serialized
/// internally; execution is safe from multiple threads on distinct buffers.
class SpectralTransform {
 public:
  SpectralTransform(std::size_t n, std::size_t batch);
  ~SpectralTransform();

  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;
  SpectralTransform(SpectralTransform&& other) noexcept;
  SpectralTransform& operator=(SpectralTransform&& other) noexcept;

  std::size_t size() const noexcept { return n_; }
  std::size_t batch() const noexcept { return batch_; }

  /// u_k = Σ_j u_j e^{-2πi jk/n}
  void forward(cplx* data) const;
  /// u_j = Σ_k u_k e^{+2πi jk/n}
  void inverse(cplx* data) const;

 private:
  void release() noexcept;

  std::size_t n_ = 0;
  std::size_t batch_ = 0;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

/// Thread cap from SPINOR_THREADS (unset, empty or invalid means 1).
int configured_threads();

}  // namespace mrfm

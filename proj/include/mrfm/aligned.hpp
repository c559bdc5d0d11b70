#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <vector>

namespace mrfm {

/// 64-byte aligned allocator so SIMD kernels and FFTW plans see the same alignment
/// for every buffer.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t kAlignment{64};

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), kAlignment));
  }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, kAlignment); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept {
    return true;
  }
};

using cplx = std::complex<double>;
template <class T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

}  // namespace mrfm

#include "mrfm/spectral.hpp"

#include <fftw3.h>

#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>

namespace mrfm {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void ensure_threads_initialized() {
  static const bool ok = fftw_init_threads() != 0;
  if (!ok) throw std::runtime_error("fftw_init_threads failed");
}

}  // namespace

int configured_threads() {
  const char* env = std::getenv("SPINOR_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    const int n = std::stoi(env);
    return n >= 1 ? n : 1;
  } catch (const std::exception&) {
    return 1;
  }
}

SpectralTransform::SpectralTransform(std::size_t n, std::size_t batch) : n_(n), batch_(batch) {
  if (n == 0 || batch == 0) throw std::invalid_argument("empty spectral transform");
  AlignedVector<cplx> scratch(n * batch);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const int len[1] = {static_cast<int>(n)};
  const int howmany = static_cast<int>(batch);
  const int dist = static_cast<int>(n);

  std::lock_guard lock(planner_mutex());
  ensure_threads_initialized();
  fftw_plan_with_nthreads(configured_threads());
  forward_plan_ = fftw_plan_many_dft(1, len, howmany, buf, nullptr, 1, dist, buf, nullptr, 1,
                                     dist, FFTW_FORWARD, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_many_dft(1, len, howmany, buf, nullptr, 1, dist, buf, nullptr, 1,
                                     dist, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (forward_plan_ == nullptr || inverse_plan_ == nullptr) {
    release();
    throw std::runtime_error("FFTW planning failed for n=" + std::to_string(n));
  }
}

SpectralTransform::~SpectralTransform() { release(); }

SpectralTransform::SpectralTransform(SpectralTransform&& other) noexcept
    : n_(other.n_),
      batch_(other.batch_),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      inverse_plan_(std::exchange(other.inverse_plan_, nullptr)) {}

SpectralTransform& SpectralTransform::operator=(SpectralTransform&& other) noexcept {
  if (this != &other) {
    release();
    n_ = other.n_;
    batch_ = other.batch_;
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    inverse_plan_ = std::exchange(other.inverse_plan_, nullptr);
  }
  return *this;
}

void SpectralTransform::release() noexcept {
  if (forward_plan_ == nullptr && inverse_plan_ == nullptr) return;
  std::lock_guard lock(planner_mutex());
  if (forward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (inverse_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  forward_plan_ = nullptr;
  inverse_plan_ = nullptr;
}

void SpectralTransform::forward(cplx* data) const {
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), buf, buf);
}

void SpectralTransform::inverse(cplx* data) const {
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), buf, buf);
}

}  // namespace mrfm

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "mrfm/kernels.hpp"

namespace mrfm::kernels {

#if defined(MRFM_HAVE_AVX2)
const KernelTable& avx2_kernels_unchecked() noexcept;
#endif

const KernelTable* avx2_table() noexcept {
#if defined(MRFM_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &avx2_kernels_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

std::vector<const KernelTable*> available_tables() {
  std::vector<const KernelTable*> out{&scalar_table()};
  if (const auto* t = avx2_table()) out.push_back(t);
  return out;
}

const KernelTable& table_by_name(std::string_view name) {
  if (name == "scalar") return scalar_table();
  if (name == "avx2") {
    if (const auto* t = avx2_table()) return *t;
    throw std::invalid_argument("avx2 kernels are not available on this machine");
  }
  if (name == "auto") {
    const auto* t = avx2_table();
    return t != nullptr ? *t : scalar_table();
  }
  throw std::invalid_argument("unknown kernel set: " + std::string(name));
}

const KernelTable& active_table() {
  static const KernelTable& table = [] () -> const KernelTable& {
    const char* env = std::getenv("SPINOR_KERNELS");
    return table_by_name(env != nullptr && *env != '\0' ? env : "auto");
  }();
  return table;
}

}  // namespace mrfm::kernels

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace fullersim::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(FULLERSIM_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() noexcept {
  if (const char* env = std::getenv("FULLERSIM_ISA")) {
    if (std::string_view(env) == "scalar") return Isa::kScalar;
  }
  return cpu_has_avx2() ? Isa::kAvx2 : Isa::kScalar;
}

std::atomic<Isa>& current() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

const KernelTable* avx2_kernels() noexcept {
#if defined(FULLERSIM_HAVE_AVX2)
  if (cpu_has_avx2()) return detail::avx2_table();
#endif
  return nullptr;
}

const KernelTable& active() noexcept {
  if (current().load(std::memory_order_relaxed) == Isa::kAvx2) {
    if (const auto* t = avx2_kernels()) return *t;
  }
  return scalar_kernels();
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

bool select(Isa isa) noexcept {
  if (isa == Isa::kAvx2 && avx2_kernels() == nullptr) return false;
  current().store(isa, std::memory_order_relaxed);
  return true;
}

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

}  // namespace fullersim::kernels

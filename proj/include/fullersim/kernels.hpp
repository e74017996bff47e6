#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>

// Data-parallel inner loops. Each kernel has a scalar reference
// implementation and, on x86-64, an AVX2+FMA variant chosen at runtime.
// The variants agree with the reference up to floating-point reassociation
// (integer kernels agree exactly).
namespace fullersim::kernels {

using Amplitude = std::complex<double>;

struct EnergyTerm {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  std::int32_t coupling = 1;
};

struct KernelTable {
  const char* name;

  // out[k] = sum_t J_t s_u s_v for basis state base + k. All indices must
  // fit in 32 bits.
  void (*energies)(std::span<const EnergyTerm> terms, std::uint64_t base,
                   std::span<std::int32_t> out);

  // amps[i] *= phase[level[i]]
  void (*apply_phase)(std::span<Amplitude> amps, std::span<const std::uint8_t> level,
                      std::span<const Amplitude> phase);

  // Applies cos(theta) + i sin(theta) X on one qubit, given c = cos(theta),
  // s = sin(theta). amps.size() must be a multiple of 2^(qubit+1).
  void (*rotate_x)(std::span<Amplitude> amps, int qubit, double c, double s);

  // Same rotation on explicit pairs: (a[k], b[k]) for every k. Used when the
  // two halves of a pair are not adjacent in memory.
  void (*rotate_pairs)(std::span<Amplitude> a, std::span<Amplitude> b, double c, double s);

  double (*norm2)(std::span<const Amplitude> amps);

  // out[i] = |amps[i]|^2
  void (*probabilities)(std::span<const Amplitude> amps, std::span<double> out);
};

enum class Isa { kScalar, kAvx2 };

const KernelTable& scalar_kernels() noexcept;
// nullptr when the build or the CPU lacks AVX2+FMA.
const KernelTable* avx2_kernels() noexcept;

// Process-wide selection; defaults to the widest supported ISA, or to the
// value of FULLERSIM_ISA (scalar|avx2) when set.
const KernelTable& active() noexcept;
Isa active_isa() noexcept;
// Returns false (and leaves the selection unchanged) if unsupported.
bool select(Isa isa) noexcept;
std::string_view isa_name(Isa isa) noexcept;

}  // namespace fullersim::kernels

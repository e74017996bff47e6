#include "kernels_impl.hpp"

namespace fullersim::kernels {

namespace {

void energies_scalar(std::span<const EnergyTerm> terms, std::uint64_t base,
                     std::span<std::int32_t> out) {
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto x = static_cast<std::uint32_t>(base + k);
    std::int32_t e = 0;
    for (const auto& t : terms) {
      const std::int32_t differ = static_cast<std::int32_t>(((x >> t.u) ^ (x >> t.v)) & 1U);
      e += t.coupling * (1 - 2 * differ);
    }
    out[k] = e;
  }
}

void apply_phase_scalar(std::span<Amplitude> amps, std::span<const std::uint8_t> level,
                        std::span<const Amplitude> phase) {
  for (std::size_t i = 0; i < amps.size(); ++i) amps[i] *= phase[level[i]];
}

void rotate_x_scalar(std::span<Amplitude> amps, int qubit, double c, double s) {
  const std::size_t stride = std::size_t{1} << qubit;
  double* d = reinterpret_cast<double*>(amps.data());
  for (std::size_t block = 0; block < amps.size(); block += 2 * stride) {
    for (std::size_t i = block; i < block + stride; ++i) {
      double* a = d + 2 * i;
      double* b = d + 2 * (i + stride);
      const double ar = a[0], ai = a[1], br = b[0], bi = b[1];
      a[0] = c * ar - s * bi;
      a[1] = c * ai + s * br;
      b[0] = c * br - s * ai;
      b[1] = c * bi + s * ar;
    }
  }
}

void rotate_pairs_scalar(std::span<Amplitude> a, std::span<Amplitude> b, double c, double s) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    const Amplitude x = a[k], y = b[k];
    a[k] = {c * x.real() - s * y.imag(), c * x.imag() + s * y.real()};
    b[k] = {c * y.real() - s * x.imag(), c * y.imag() + s * x.real()};
  }
}

double norm2_scalar(std::span<const Amplitude> amps) {
  double sum = 0.0;
  for (const auto& a : amps) sum += std::norm(a);
  return sum;
}

void probabilities_scalar(std::span<const Amplitude> amps, std::span<double> out) {
  for (std::size_t i = 0; i < amps.size(); ++i) out[i] = std::norm(amps[i]);
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{"scalar",        energies_scalar,     apply_phase_scalar,
                                 rotate_x_scalar, rotate_pairs_scalar, norm2_scalar,
                                 probabilities_scalar};
  return table;
}

}  // namespace fullersim::kernels

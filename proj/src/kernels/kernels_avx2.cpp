// Compiled with -mavx2 -mfma. Nothing in here may run before dispatch has
// confirmed CPU support.
#include <immintrin.h>

#include "kernels_impl.hpp"

namespace fullersim::kernels {

namespace {

void energies_avx2(std::span<const EnergyTerm> terms, std::uint64_t base,
                   std::span<std::int32_t> out) {
  std::int32_t total = 0;
  for (const auto& t : terms) total += t.coupling;
  const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  const __m256i one = _mm256_set1_epi32(1);
  const __m256i start = _mm256_set1_epi32(total);

  std::size_t k = 0;
  for (; k + 8 <= out.size(); k += 8) {
    const __m256i x = _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(base + k)), lane);
    __m256i acc = start;
    for (const auto& t : terms) {
      const __m256i xu = _mm256_srlv_epi32(x, _mm256_set1_epi32(static_cast<int>(t.u)));
      const __m256i xv = _mm256_srlv_epi32(x, _mm256_set1_epi32(static_cast<int>(t.v)));
      const __m256i differ = _mm256_and_si256(_mm256_xor_si256(xu, xv), one);
      // e += J (1 - 2 differ)  ==  total - 2 J differ
      acc = _mm256_sub_epi32(acc, _mm256_mullo_epi32(differ, _mm256_set1_epi32(2 * t.coupling)));
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + k), acc);
  }
  if (k < out.size()) {
    scalar_kernels().energies(terms, base + k, out.subspan(k));
  }
}

void apply_phase_avx2(std::span<Amplitude> amps, std::span<const std::uint8_t> level,
                      std::span<const Amplitude> phase) {
  double* d = reinterpret_cast<double*>(amps.data());
  const double* p = reinterpret_cast<const double*>(phase.data());
  const std::size_t n = amps.size();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d a = _mm256_loadu_pd(d + 2 * i);
    const __m256d ph = _mm256_set_m128d(_mm_loadu_pd(p + 2 * level[i + 1]),
                                        _mm_loadu_pd(p + 2 * level[i]));
    const __m256d re = _mm256_movedup_pd(ph);
    const __m256d im = _mm256_permute_pd(ph, 0xF);
    const __m256d swapped = _mm256_permute_pd(a, 0x5);
    _mm256_storeu_pd(d + 2 * i, _mm256_fmaddsub_pd(a, re, _mm256_mul_pd(swapped, im)));
  }
  for (; i < n; ++i) amps[i] *= phase[level[i]];
}

void rotate_x_avx2(std::span<Amplitude> amps, int qubit, double c, double s) {
  double* d = reinterpret_cast<double*>(amps.data());
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vs = _mm256_setr_pd(-s, s, -s, s);
  const std::size_t n = amps.size();

  if (qubit == 0) {
    // One register holds a pair (a, b); reversing it gives (b.im, b.re, a.im, a.re).
    for (std::size_t i = 0; i < n; i += 2) {
      const __m256d v = _mm256_loadu_pd(d + 2 * i);
      const __m256d rev = _mm256_permute4x64_pd(v, 0x1B);
      _mm256_storeu_pd(d + 2 * i, _mm256_fmadd_pd(vc, v, _mm256_mul_pd(vs, rev)));
    }
    return;
  }

  const std::size_t stride = std::size_t{1} << qubit;
  for (std::size_t block = 0; block < n; block += 2 * stride) {
    for (std::size_t i = block; i < block + stride; i += 2) {
      double* pa = d + 2 * i;
      double* pb = d + 2 * (i + stride);
      const __m256d a = _mm256_loadu_pd(pa);
      const __m256d b = _mm256_loadu_pd(pb);
      const __m256d ib = _mm256_mul_pd(vs, _mm256_permute_pd(b, 0x5));
      const __m256d ia = _mm256_mul_pd(vs, _mm256_permute_pd(a, 0x5));
      _mm256_storeu_pd(pa, _mm256_fmadd_pd(vc, a, ib));
      _mm256_storeu_pd(pb, _mm256_fmadd_pd(vc, b, ia));
    }
  }
}

void rotate_pairs_avx2(std::span<Amplitude> a, std::span<Amplitude> b, double c, double s) {
  double* pa = reinterpret_cast<double*>(a.data());
  double* pb = reinterpret_cast<double*>(b.data());
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vs = _mm256_setr_pd(-s, s, -s, s);
  const std::size_t n = a.size();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d x = _mm256_loadu_pd(pa + 2 * k);
    const __m256d y = _mm256_loadu_pd(pb + 2 * k);
    const __m256d iy = _mm256_mul_pd(vs, _mm256_permute_pd(y, 0x5));
    const __m256d ix = _mm256_mul_pd(vs, _mm256_permute_pd(x, 0x5));
    _mm256_storeu_pd(pa + 2 * k, _mm256_fmadd_pd(vc, x, iy));
    _mm256_storeu_pd(pb + 2 * k, _mm256_fmadd_pd(vc, y, ix));
  }
  if (k < n) scalar_kernels().rotate_pairs(a.subspan(k), b.subspan(k), c, s);
}

double norm2_avx2(std::span<const Amplitude> amps) {
  const double* d = reinterpret_cast<const double*>(amps.data());
  const std::size_t len = 2 * amps.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    const __m256d x0 = _mm256_loadu_pd(d + i);
    const __m256d x1 = _mm256_loadu_pd(d + i + 4);
    acc0 = _mm256_fmadd_pd(x0, x0, acc0);
    acc1 = _mm256_fmadd_pd(x1, x1, acc1);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < len; ++i) sum += d[i] * d[i];
  return sum;
}

void probabilities_avx2(std::span<const Amplitude> amps, std::span<double> out) {
  const double* d = reinterpret_cast<const double*>(amps.data());
  const std::size_t n = amps.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(d + 2 * i);
    const __m256d x1 = _mm256_loadu_pd(d + 2 * i + 4);
    // hadd gives (p0, p2, p1, p3); restore order.
    const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(x0, x0), _mm256_mul_pd(x1, x1));
    _mm256_storeu_pd(out.data() + i, _mm256_permute4x64_pd(h, 0xD8));
  }
  for (; i < n; ++i) out[i] = std::norm(amps[i]);
}

}  // namespace

namespace detail {

const KernelTable* avx2_table() noexcept {
  static const KernelTable table{"avx2",        energies_avx2,     apply_phase_avx2,
                                 rotate_x_avx2, rotate_pairs_avx2, norm2_avx2,
                                 probabilities_avx2};
  return &table;
}

}  // namespace detail

}  // namespace fullersim::kernels

#include <random>
#include <vector>

#include "doctest.h"
#include "fullersim/kernels.hpp"
#include "fullersim/manifold.hpp"
#include "fullersim/topology.hpp"

using namespace fullersim::kernels;

namespace {

std::vector<Amplitude> random_amps(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<Amplitude> a(n);
  for (auto& x : a) x = {gauss(rng), gauss(rng)};
  return a;
}

double max_diff(const std::vector<Amplitude>& a, const std::vector<Amplitude>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("scalar reference kernels") {
  const auto& k = scalar_kernels();
  // Single qubit: (a, b) -> (c a + i s b, c b + i s a).
  std::vector<Amplitude> v{{1, 0}, {0, 0}};
  k.rotate_x(v, 0, 0.6, 0.8);
  CHECK(v[0] == Amplitude(0.6, 0.0));
  CHECK(v[1] == Amplitude(0.0, 0.8));

  const std::vector<EnergyTerm> terms{{0, 1, 1}, {1, 2, -1}};
  std::vector<std::int32_t> e(8);
  k.energies(terms, 0, e);
  // x=0: all down, s0 s1 = 1, s1 s2 = 1 -> 1 - 1 = 0.
  CHECK(e[0] == 0);
  // x=1 (spin 0 up): -1 - 1 = -2.
  CHECK(e[1] == -2);
  // x=2 (spin 1 up): -1 + 1 = 0.
  CHECK(e[2] == 0);
}

TEST_CASE("AVX2 kernels match the scalar reference") {
  const KernelTable* simd = avx2_kernels();
  if (simd == nullptr) {
    MESSAGE("AVX2 not available; equivalence test skipped");
    return;
  }
  const auto& ref = scalar_kernels();

  SUBCASE("energies are bit-identical") {
    const auto g = fullersim::topology::build_graph("dodecahedron_afm");
    const auto terms = fullersim::manifold::energy_terms(g);
    for (std::size_t len : {1u, 7u, 8u, 9u, 4096u, 4103u}) {
      for (std::uint64_t base : {0ULL, 12345ULL, (1ULL << 20) - len}) {
        std::vector<std::int32_t> a(len), b(len);
        ref.energies(terms, base, a);
        simd->energies(terms, base, b);
        CHECK(a == b);
      }
    }
  }

  SUBCASE("phase") {
    std::mt19937 rng(3);
    for (std::size_t len : {1u, 2u, 3u, 64u, 1025u}) {
      auto a = random_amps(len, len);
      auto b = a;
      std::vector<std::uint8_t> level(len);
      for (auto& l : level) l = static_cast<std::uint8_t>(rng() % 31);
      std::vector<Amplitude> phase(31);
      for (int i = 0; i < 31; ++i) phase[i] = std::polar(1.0, 0.37 * i);
      ref.apply_phase(a, level, phase);
      simd->apply_phase(b, level, phase);
      CHECK(max_diff(a, b) < 1e-14);
    }
  }

  SUBCASE("rotate_x on every qubit") {
    for (int n : {1, 2, 5, 10}) {
      for (int q = 0; q < n; ++q) {
        auto a = random_amps(std::size_t{1} << n, 100 * n + q);
        auto b = a;
        ref.rotate_x(a, q, std::cos(0.3), std::sin(0.3));
        simd->rotate_x(b, q, std::cos(0.3), std::sin(0.3));
        CHECK(max_diff(a, b) < 1e-14);
      }
    }
  }

  SUBCASE("rotate_pairs") {
    for (std::size_t len : {1u, 2u, 5u, 64u}) {
      auto a = random_amps(len, 7);
      auto b = random_amps(len, 8);
      auto a2 = a, b2 = b;
      ref.rotate_pairs(a, b, 0.8, -0.6);
      simd->rotate_pairs(a2, b2, 0.8, -0.6);
      CHECK(max_diff(a, a2) < 1e-14);
      CHECK(max_diff(b, b2) < 1e-14);
    }
  }

  SUBCASE("norm and probabilities") {
    for (std::size_t len : {1u, 3u, 4u, 5u, 1000u, 1024u}) {
      const auto a = random_amps(len, 11 * len);
      CHECK(simd->norm2(a) == doctest::Approx(ref.norm2(a)).epsilon(1e-13));
      std::vector<double> p(len), q(len);
      ref.probabilities(a, p);
      simd->probabilities(a, q);
      for (std::size_t i = 0; i < len; ++i) CHECK(q[i] == doctest::Approx(p[i]).epsilon(1e-15));
    }
  }
}

TEST_CASE("runtime selection") {
  const Isa before = active_isa();
  CHECK(select(Isa::kScalar));
  CHECK(active().name == std::string_view("scalar"));
  if (avx2_kernels() != nullptr) {
    CHECK(select(Isa::kAvx2));
    CHECK(active().name == std::string_view("avx2"));
  } else {
    CHECK_FALSE(select(Isa::kAvx2));
  }
  select(before);
  CHECK(isa_name(Isa::kScalar) == "scalar");
}

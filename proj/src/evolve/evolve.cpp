#include "fullersim/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "fullersim/error.hpp"
#include "fullersim/kernels.hpp"
#include "fullersim/manifold.hpp"

namespace fullersim::evolve {

namespace {

// Amplitudes per cache block for the fused phase + low-qubit pass
// (2^12 complex doubles = 64 KiB).
constexpr int kBlockQubits = 12;
// Column width for the high-qubit pass; 2^(n-12) rows of this many amplitudes
// stay resident while every high qubit is applied.
constexpr std::size_t kColumnWidth = 64;

// Rotates qubits [low, n) by viewing the state as rows of 2^low amplitudes.
void rotate_high(const kernels::KernelTable& k, std::span<Amplitude> amps, int low, int n,
                 double c, double s) {
  if (low >= n) return;
  const std::size_t row_len = std::size_t{1} << low;
  const std::size_t rows = amps.size() / row_len;
  const std::size_t width = std::min(row_len, kColumnWidth);
  for (std::size_t col = 0; col < row_len; col += width) {
    for (int h = 0; h < n - low; ++h) {
      const std::size_t stride = std::size_t{1} << h;
      for (std::size_t r0 = 0; r0 < rows; r0 += 2 * stride) {
        for (std::size_t r = r0; r < r0 + stride; ++r) {
          k.rotate_pairs(amps.subspan(r * row_len + col, width),
                         amps.subspan((r + stride) * row_len + col, width), c, s);
        }
      }
    }
  }
}

void require_qubits(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw Error(ErrorKind::kUnsupportedSize, "state-vector evolution supports 1.." +
                                                 std::to_string(kMaxQubits) + " qubits (got " +
                                                 std::to_string(n) + ")");
  }
}

long step_count(double ds) {
  if (!(ds > 0.0 && ds <= 0.1)) {
    throw Error(ErrorKind::kRange, "ds must lie in (0, 0.1]");
  }
  const long steps = std::lround(1.0 / ds);
  if (std::abs(static_cast<double>(steps) * ds - 1.0) > 1e-9) {
    throw Error(ErrorKind::kRange, "1/ds must be an integer");
  }
  return steps;
}

}  // namespace

Wavefunction initial_state(int n) {
  require_qubits(n);
  const std::size_t dim = std::size_t{1} << n;
  return {n, std::vector<Amplitude>(dim, Amplitude(std::pow(2.0, -0.5 * n), 0.0))};
}

Evolver::Evolver(const FullereneGraph& g)
    : n_(g.n_vertices()), edges_(static_cast<int>(g.edges().size())) {
  require_qubits(n_);
  const auto energies = manifold::energy_table(g);
  levels_.resize(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) {
    levels_[i] = static_cast<std::uint8_t>((energies[i] + edges_) / 2);
  }
}

Wavefunction Evolver::run(const EvolutionParams& p, EvolutionReport* report) const {
  if (!(p.t_a_ns > 0.0)) throw Error(ErrorKind::kRange, "t_a must be positive");
  const long steps = step_count(p.ds);
  const double ds = 1.0 / static_cast<double>(steps);
  const double dt = ds * p.t_a_ns;
  const double two_pi = 2.0 * std::numbers::pi;

  const auto& k = kernels::active();
  Wavefunction w = initial_state(n_);
  const std::span<Amplitude> amps(w.amps);
  const int block_qubits = std::min(n_, kBlockQubits);
  const std::size_t block = std::size_t{1} << block_qubits;

  auto driver = [&](double theta, int first, int last, std::span<Amplitude> span) {
    const double c = std::cos(theta), s = std::sin(theta);
    for (int q = first; q < last; ++q) k.rotate_x(span, q, c, s);
  };
  auto driver_all = [&](double theta) {
    for (std::size_t b = 0; b < amps.size(); b += block) driver(theta, 0, block_qubits, amps.subspan(b, block));
    rotate_high(k, amps, block_qubits, n_, std::cos(theta), std::sin(theta));
  };
  // Driver angle for a full step at normalised time s: exp(-i 2pi Gamma dt H_D)
  // = prod_q exp(+i theta X_q) with theta = 2pi Gamma dt.
  auto driver_angle = [&](long step) {
    if (step >= steps) return 0.0;
    return two_pi * p.schedule.eval((static_cast<double>(step) + 0.5) * ds).gamma * dt;
  };

  std::vector<Amplitude> phase(edges_ + 1);
  double theta = driver_angle(0);
  driver_all(0.5 * theta);
  for (long step = 0; step < steps; ++step) {
    const double j = p.schedule.eval((static_cast<double>(step) + 0.5) * ds).j;
    for (int level = 0; level <= edges_; ++level) {
      const double energy = 2.0 * level - edges_;
      phase[level] = std::polar(1.0, -two_pi * j * dt * energy);
    }
    const double next = driver_angle(step + 1);
    const double merged = 0.5 * (theta + next);
    theta = next;

    for (std::size_t b = 0; b < amps.size(); b += block) {
      auto sub = amps.subspan(b, block);
      k.apply_phase(sub, std::span(levels_).subspan(b, block), phase);
      driver(merged, 0, block_qubits, sub);
    }
    rotate_high(k, amps, block_qubits, n_, std::cos(merged), std::sin(merged));
  }

  const double drift = std::abs(k.norm2(amps) - 1.0);
  if (report) *report = {steps, drift};
  if (drift > 1e-9) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "norm drift %.3e exceeds 1e-9 after %ld steps", drift, steps);
    throw Error(ErrorKind::kNonConvergence, buf);
  }
  return w;
}

Wavefunction evolve(const FullereneGraph& g, const EvolutionParams& p, EvolutionReport* report) {
  return Evolver(g).run(p, report);
}

std::vector<double> probabilities(const Wavefunction& w) {
  std::vector<double> out(w.amps.size());
  kernels::active().probabilities(w.amps, out);
  return out;
}

}  // namespace fullersim::evolve

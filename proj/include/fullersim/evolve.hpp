#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "fullersim/schedule.hpp"
#include "fullersim/topology.hpp"

namespace fullersim::evolve {

using topology::FullereneGraph;
using Amplitude = std::complex<double>;

inline constexpr int kMaxQubits = 24;

struct Wavefunction {
  int n = 0;
  std::vector<Amplitude> amps;  // basis index bit i <-> spin i (1 = up)
};

// Uniform superposition, the ground state of the driver.
Wavefunction initial_state(int n);

struct EvolutionParams {
  double t_a_ns = 1.0;
  double ds = 1e-3;  // normalised step; 1/ds must be an integer
  schedule::AnnealingSchedule schedule = schedule::default_schedule();
};

struct EvolutionReport {
  long steps = 0;
  double norm_drift = 0.0;
};

// Symmetric split-step integrator for H(s) = Gamma(s) H_D + J(s) H_I with
// H_D = -sum_i X_i. Each step of length dt = ds t_a applies
// exp(-i 2pi Gamma dt H_D / 2) exp(-i 2pi J dt H_I) exp(-i 2pi Gamma dt H_D / 2)
// with the schedule sampled at the step midpoint (energies in GHz, time in
// ns). Adjacent driver half-steps are merged, which is exact because they
// commute.
class Evolver {
 public:
  explicit Evolver(const FullereneGraph& g);

  int n_qubits() const noexcept { return n_; }
  // Classical energy per basis state, as (E + edges) / 2.
  const std::vector<std::uint8_t>& levels() const noexcept { return levels_; }
  int edge_count() const noexcept { return edges_; }

  // Throws kNonConvergence if the norm drifts by more than 1e-9.
  Wavefunction run(const EvolutionParams& p, EvolutionReport* report = nullptr) const;

 private:
  int n_;
  int edges_;
  std::vector<std::uint8_t> levels_;
};

Wavefunction evolve(const FullereneGraph& g, const EvolutionParams& p,
                    EvolutionReport* report = nullptr);

// |amp|^2 per basis state.
std::vector<double> probabilities(const Wavefunction& w);

}  // namespace fullersim::evolve

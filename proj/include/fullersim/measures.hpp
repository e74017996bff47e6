#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fullersim/manifold.hpp"
#include "fullersim/perturbation.hpp"
#include "fullersim/topology.hpp"

namespace fullersim::measures {

using manifold::GroundStateManifold;
using topology::FullereneGraph;
using topology::OrbitPartition;

// Distribution with explicit support, e.g. a manifold state or a sample set.
struct SparseDistribution {
  std::vector<std::uint64_t> states;
  std::vector<double> p;
};

SparseDistribution on_manifold(const GroundStateManifold& m, std::span<const double> q);

// 1 - <H_I> / e0. Dense distributions are indexed by basis state (2^N).
double residual_energy_density(const FullereneGraph& g, std::span<const double> p, int e0);
double residual_energy_density(const FullereneGraph& g, const SparseDistribution& p, int e0);

// Expected number of floppy dimers.
double dimer_expectation(const FullereneGraph& g, std::span<const double> p);
double dimer_expectation(const FullereneGraph& g, const SparseDistribution& p);

// sum_i sqrt(p_i q_i) over the support of q; both of equal length.
double bhattacharyya(std::span<const double> p, std::span<const double> q);

// Mass of a dense distribution on each manifold state.
std::vector<double> restrict_to_manifold(std::span<const double> p, const GroundStateManifold& m);

// Sum of per-manifold-state values within each orbit.
std::vector<double> bin_masses(std::span<const double> per_state, const OrbitPartition& orbits);

// Bhattacharyya coefficient of orbit masses. p and q are per manifold index;
// mass outside the manifold is simply absent from p.
double binned_fidelity(std::span<const double> p, std::span<const double> q,
                       const OrbitPartition& orbits);

// Inverse-CDF sampling of indices into dist; deterministic for a seed.
std::vector<std::uint64_t> sample(std::span<const double> dist, std::size_t count,
                                  std::uint64_t seed);

// Fraction of samples landing on each manifold state (non-manifold samples
// count towards the total only).
std::vector<double> empirical_on_manifold(std::span<const std::uint64_t> samples,
                                          const GroundStateManifold& m);

struct Interval {
  double mean = 0.0;
  double lower = 0.0;  // 2.5th percentile
  double upper = 0.0;  // 97.5th percentile
  std::vector<double> values;
};

// Distribution of 1 - F' for `count` fair samples drawn from q, over
// `repetitions` independent draws.
Interval fidelity_floor(std::span<const double> q, const OrbitPartition& orbits,
                        std::size_t count, int repetitions, std::uint64_t seed);

struct ObservableRecord {
  double t_a_ns = 0.0;
  double delta_e = 0.0;
  double d_mean = 0.0;
  double f_binned = 0.0;
  std::optional<std::size_t> sample_count;  // empty means exact

  static std::string csv_header();  // ta_ns,delta_e,d_mean,f_binned,samples
  std::string csv_row() const;
};

// Reference data that scoring an evolved distribution needs.
struct Reference {
  GroundStateManifold manifold;
  OrbitPartition orbits;  // over manifold states, in manifold order
  std::vector<double> q;  // target distribution per manifold index
};

ObservableRecord measure_exact(const FullereneGraph& g, std::span<const double> p,
                               const Reference& ref, double t_a_ns);
ObservableRecord measure_samples(const FullereneGraph& g, std::span<const std::uint64_t> samples,
                                 const Reference& ref, double t_a_ns);

}  // namespace fullersim::measures

#include "fullersim/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "fullersim/error.hpp"

namespace fullersim::measures {

namespace {

void require_e0(int e0) {
  if (e0 >= 0) throw Error(ErrorKind::kRange, "residual energy density needs e0 < 0");
}

void require_dense(const FullereneGraph& g, std::span<const double> p) {
  if (g.n_vertices() > 32 || p.size() != (std::size_t{1} << g.n_vertices())) {
    throw Error(ErrorKind::kRange, "dense distribution must have 2^N entries");
  }
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double percentile(const std::vector<double>& sorted, double fraction) {
  const double pos = fraction * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

SparseDistribution on_manifold(const GroundStateManifold& m, std::span<const double> q) {
  if (q.size() != m.size()) throw Error(ErrorKind::kRange, "q length does not match manifold");
  return {m.states, std::vector<double>(q.begin(), q.end())};
}

double residual_energy_density(const FullereneGraph& g, std::span<const double> p, int e0) {
  require_e0(e0);
  require_dense(g, p);
  double mean = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] != 0.0) mean += p[i] * manifold::classical_energy(g, static_cast<std::uint64_t>(i));
  }
  return 1.0 - mean / e0;
}

double residual_energy_density(const FullereneGraph& g, const SparseDistribution& p, int e0) {
  require_e0(e0);
  double mean = 0.0;
  for (std::size_t k = 0; k < p.states.size(); ++k) {
    mean += p.p[k] * manifold::classical_energy(g, p.states[k]);
  }
  return 1.0 - mean / e0;
}

double dimer_expectation(const FullereneGraph& g, std::span<const double> p) {
  require_dense(g, p);
  const perturbation::DimerDetector detector(g);
  double mean = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] != 0.0) mean += p[i] * detector.count(i);
  }
  return mean;
}

double dimer_expectation(const FullereneGraph& g, const SparseDistribution& p) {
  const perturbation::DimerDetector detector(g);
  double mean = 0.0;
  for (std::size_t k = 0; k < p.states.size(); ++k) mean += p.p[k] * detector.count(p.states[k]);
  return mean;
}

double bhattacharyya(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error(ErrorKind::kRange, "distributions differ in length");
  double f = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] > 0.0 && p[i] > 0.0) f += std::sqrt(p[i] * q[i]);
  }
  return f;
}

std::vector<double> restrict_to_manifold(std::span<const double> p, const GroundStateManifold& m) {
  std::vector<double> out(m.size());
  for (std::size_t a = 0; a < m.size(); ++a) {
    if (m.states[a] >= p.size()) throw Error(ErrorKind::kRange, "distribution too short");
    out[a] = p[m.states[a]];
  }
  return out;
}

std::vector<double> bin_masses(std::span<const double> per_state, const OrbitPartition& orbits) {
  if (per_state.size() != orbits.orbit_id.size()) {
    throw Error(ErrorKind::kRange, "orbit partition does not cover the distribution");
  }
  std::vector<double> mass(orbits.orbit_count(), 0.0);
  for (std::size_t a = 0; a < per_state.size(); ++a) mass[orbits.orbit_id[a]] += per_state[a];
  return mass;
}

double binned_fidelity(std::span<const double> p, std::span<const double> q,
                       const OrbitPartition& orbits) {
  const auto pb = bin_masses(p, orbits);
  const auto qb = bin_masses(q, orbits);
  return bhattacharyya(pb, qb);
}

std::vector<std::uint64_t> sample(std::span<const double> dist, std::size_t count,
                                  std::uint64_t seed) {
  std::vector<std::uint64_t> out;
  if (count == 0) return out;
  std::vector<double> cdf(dist.size());
  double total = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] < 0.0) throw Error(ErrorKind::kRange, "negative probability");
    total += dist[i];
    cdf[i] = total;
  }
  if (!(total > 0.0)) throw Error(ErrorKind::kRange, "distribution has no mass");
  std::mt19937_64 rng(seed);
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double u = uniform01(rng) * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    out.push_back(static_cast<std::uint64_t>(it - cdf.begin()));
  }
  return out;
}

std::vector<double> empirical_on_manifold(std::span<const std::uint64_t> samples,
                                          const GroundStateManifold& m) {
  std::vector<double> out(m.size(), 0.0);
  if (samples.empty()) return out;
  const double w = 1.0 / static_cast<double>(samples.size());
  for (auto s : samples) {
    if (auto idx = m.index_of(s); idx >= 0) out[idx] += w;
  }
  return out;
}

Interval fidelity_floor(std::span<const double> q, const OrbitPartition& orbits,
                        std::size_t count, int repetitions, std::uint64_t seed) {
  if (repetitions < 2) throw Error(ErrorKind::kRange, "fidelity floor needs >= 2 repetitions");
  if (count == 0) throw Error(ErrorKind::kRange, "fidelity floor needs a positive sample count");
  const auto qb = bin_masses(q, orbits);
  std::mt19937_64 seeder(seed);
  Interval out;
  out.values.reserve(repetitions);
  std::vector<double> pb(orbits.orbit_count());
  for (int r = 0; r < repetitions; ++r) {
    const auto draws = sample(q, count, seeder());
    std::fill(pb.begin(), pb.end(), 0.0);
    for (auto a : draws) pb[orbits.orbit_id[a]] += 1.0;
    for (auto& x : pb) x /= static_cast<double>(count);
    out.values.push_back(1.0 - bhattacharyya(pb, qb));
  }
  auto sorted = out.values;
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double v : sorted) sum += v;
  out.mean = sum / static_cast<double>(sorted.size());
  out.lower = percentile(sorted, 0.025);
  out.upper = percentile(sorted, 0.975);
  return out;
}

std::string ObservableRecord::csv_header() { return "ta_ns,delta_e,d_mean,f_binned,samples"; }

std::string ObservableRecord::csv_row() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.10g,%.12g,%.12g,%.12g,", t_a_ns, delta_e, d_mean, f_binned);
  return std::string(buf) + (sample_count ? std::to_string(*sample_count) : "exact");
}

ObservableRecord measure_exact(const FullereneGraph& g, std::span<const double> p,
                               const Reference& ref, double t_a_ns) {
  ObservableRecord r;
  r.t_a_ns = t_a_ns;
  r.delta_e = residual_energy_density(g, p, ref.manifold.e0);
  r.d_mean = dimer_expectation(g, p);
  r.f_binned = binned_fidelity(restrict_to_manifold(p, ref.manifold), ref.q, ref.orbits);
  return r;
}

ObservableRecord measure_samples(const FullereneGraph& g, std::span<const std::uint64_t> samples,
                                 const Reference& ref, double t_a_ns) {
  if (samples.empty()) throw Error(ErrorKind::kRange, "no samples");
  std::map<std::uint64_t, double> counts;
  const double w = 1.0 / static_cast<double>(samples.size());
  for (auto s : samples) counts[s] += w;
  SparseDistribution dist;
  for (const auto& [s, p] : counts) {
    dist.states.push_back(s);
    dist.p.push_back(p);
  }
  ObservableRecord r;
  r.t_a_ns = t_a_ns;
  r.delta_e = residual_energy_density(g, dist, ref.manifold.e0);
  r.d_mean = dimer_expectation(g, dist);
  r.f_binned =
      binned_fidelity(empirical_on_manifold(samples, ref.manifold), ref.q, ref.orbits);
  r.sample_count = samples.size();
  return r;
}

}  // namespace fullersim::measures

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fullersim/kernels.hpp"
#include "fullersim/topology.hpp"

namespace fullersim::manifold {

using topology::FullereneGraph;

// Sum over edges of J_ij s_i s_j. Exact integer.
int classical_energy(const FullereneGraph& g, const SpinConfig& c);
int classical_energy(const FullereneGraph& g, std::uint64_t bits) noexcept;

std::vector<kernels::EnergyTerm> energy_terms(const FullereneGraph& g);

// Energy of every basis state 0..2^N-1 (N <= 26) via the active kernel.
std::vector<std::int32_t> energy_table(const FullereneGraph& g, int threads = 1);

struct GroundStateManifold {
  std::string graph_digest;
  int n_vertices = 0;
  int e0 = 0;
  std::vector<std::uint64_t> states;  // ascending, unique

  std::size_t size() const noexcept { return states.size(); }
  // Index of a state, or -1.
  std::ptrdiff_t index_of(std::uint64_t bits) const noexcept;
};

struct EnumerationOptions {
  int threads = 1;
};

// Exact manifold. Exhaustive scan for N <= 26, branch-and-bound above.
GroundStateManifold enumerate_ground_states(const FullereneGraph& g,
                                            const EnumerationOptions& opts = {});

// Scan of all 2^N states in fixed 2^16-state blocks, merged in block order.
GroundStateManifold enumerate_exhaustive(const FullereneGraph& g,
                                         const EnumerationOptions& opts = {});

struct SearchStats {
  std::uint64_t nodes = 0;
};

// Depth-first branch-and-bound over a breadth-first vertex order, with
// spin 0 fixed to +1 and partners restored by global inversion.
GroundStateManifold enumerate_branch_and_bound(const FullereneGraph& g,
                                               SearchStats* stats = nullptr);

// Cache file:
//   fullersim-manifold v1
//   <graph digest>
//   <e0>
//   <count>
//   <lowercase hex bit pattern>   (count lines)
// Lines starting with '#' after the count are ignored.
void save_manifold(const GroundStateManifold& m, const std::filesystem::path& path);
std::string format_manifold(const GroundStateManifold& m);
// Verifies the digest against g (kStaleCache) and every state's energy,
// ordering and count (kCorruption).
GroundStateManifold load_manifold(const std::filesystem::path& path, const FullereneGraph& g);
GroundStateManifold parse_manifold(const std::string& text, const FullereneGraph& g);

}  // namespace fullersim::manifold

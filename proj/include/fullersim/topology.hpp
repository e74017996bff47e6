#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fullersim {

// Spin configuration on at most 64 sites. Bit i set means s_i = +1, clear
// means s_i = -1.
struct SpinConfig {
  std::uint64_t bits = 0;
  int n = 0;

  int spin(int i) const noexcept { return ((bits >> i) & 1U) ? 1 : -1; }
  friend bool operator==(const SpinConfig&, const SpinConfig&) = default;
};

inline std::uint64_t low_mask(int n) noexcept {
  return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

}  // namespace fullersim

namespace fullersim::topology {

struct Edge {
  int u = 0;  // u < v
  int v = 0;
  int coupling = 1;  // J_uv in {-1, +1}
  int edge_class = 0;  // index into FullereneGraph::class_names()

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  int vertex = 0;
  int edge = 0;
};

enum class BuiltinGraph { kDodecahedronAfm, kC24Afm, kC60Afm, kC60Mixed };

// Signed coupling graph. Construction checks indices, duplicates and signs;
// require_cubic() additionally enforces the fullerene degree/connectivity
// invariants. Immutable after construction.
class FullereneGraph {
 public:
  FullereneGraph(int n_vertices, std::vector<Edge> edges,
                 std::vector<std::string> class_names);

  int n_vertices() const noexcept { return n_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }
  std::span<const Neighbor> neighbors(int v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  int degree(int v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  // Index of edge {a,b}, or -1.
  int find_edge(int a, int b) const noexcept;

  bool is_connected() const;
  // Throws Error(kConfig) naming the first violation.
  void require_cubic() const;

  // Canonical edge-list text (see load_graph for the grammar).
  std::string to_text() const;
  // 64-bit FNV-1a over the canonical text, rendered as 16 hex digits.
  std::string digest() const;

  friend bool operator==(const FullereneGraph& a, const FullereneGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_ && a.class_names_ == b.class_names_;
  }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::string> class_names_;
  std::vector<int> offsets_;
  std::vector<Neighbor> adjacency_;
};

FullereneGraph build_graph(BuiltinGraph which);
// Accepts dodecahedron_afm, c24_afm, c60_afm, c60_mixed.
FullereneGraph build_graph(std::string_view name);
BuiltinGraph parse_builtin_name(std::string_view name);
std::string_view builtin_name(BuiltinGraph which) noexcept;

// Grammar:
//   n <N>
//   <i> <j> <+1|-1> <class-name>     (one per edge, 0-based)
// '#' starts a comment. The result satisfies require_cubic().
FullereneGraph load_graph(std::string_view text);

// ---------------------------------------------------------------------------
// Automorphisms

using Permutation = std::vector<int>;

// Vertex permutations preserving adjacency, coupling sign and edge class.
// Elements are sorted lexicographically, so the identity comes first.
class AutomorphismGroup {
 public:
  AutomorphismGroup(int n_vertices, std::vector<Permutation> elements);

  int n_vertices() const noexcept { return n_; }
  std::size_t order() const noexcept { return elements_.size(); }
  const std::vector<Permutation>& elements() const noexcept { return elements_; }

  // Image of a configuration: spin i moves to site perm[i].
  std::uint64_t apply(std::size_t element, std::uint64_t bits) const noexcept;

  // Explicit closure check (identity, composition, inverse).
  bool is_group() const;

  // Number of orbits of the group on vertices.
  int vertex_orbit_count() const;
  // Orbit label per edge (labels ordered by smallest edge index).
  std::vector<int> edge_orbits(const FullereneGraph& g) const;

 private:
  int n_;
  std::vector<Permutation> elements_;
  // Per element, 8 byte-indexed lookup tables of 256 words each.
  std::vector<std::uint64_t> byte_tables_;
};

AutomorphismGroup automorphisms(const FullereneGraph& g);

// ---------------------------------------------------------------------------
// Orbits of spin configurations

struct OrbitPartition {
  // Orbit label of each input configuration, in input order. Labels are
  // 0..orbit_count-1 ordered by ascending canonical representative.
  std::vector<int> orbit_id;
  // Number of input configurations carrying each label.
  std::vector<std::size_t> orbit_size;
  // Smallest bit pattern in each full orbit.
  std::vector<std::uint64_t> representative;

  std::size_t orbit_count() const noexcept { return orbit_size.size(); }
};

// Canonical representative: numerically smallest image under the group,
// optionally composed with global spin inversion.
std::uint64_t canonical_representative(const AutomorphismGroup& group, std::uint64_t bits,
                                       bool include_global_flip);

OrbitPartition orbit_partition(const AutomorphismGroup& group,
                               std::span<const SpinConfig> configs,
                               bool include_global_flip = true);
OrbitPartition orbit_partition(const AutomorphismGroup& group,
                               std::span<const std::uint64_t> configs,
                               bool include_global_flip = true);

}  // namespace fullersim::topology

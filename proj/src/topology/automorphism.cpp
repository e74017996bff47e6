#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

#include "fullersim/error.hpp"
#include "fullersim/topology.hpp"

namespace fullersim::topology {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// Backtracking search over vertex maps in breadth-first order. A non-root
// vertex can only go to an unused neighbour of its parent's image; every
// edge back to an already-placed vertex must land on an edge with the same
// coupling and class.
class AutomorphismSearch {
 public:
  explicit AutomorphismSearch(const FullereneGraph& g) : g_(g), n_(g.n_vertices()) {
    std::vector<char> seen(n_, 0);
    parent_.assign(n_, -1);
    for (int root = 0; root < n_; ++root) {
      if (seen[root]) continue;
      std::queue<int> frontier;
      frontier.push(root);
      seen[root] = 1;
      while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop();
        order_.push_back(v);
        for (const auto& nb : g_.neighbors(v)) {
          if (!seen[nb.vertex]) {
            seen[nb.vertex] = 1;
            parent_[nb.vertex] = v;
            frontier.push(nb.vertex);
          }
        }
      }
    }
    std::vector<int> position(n_);
    for (int k = 0; k < n_; ++k) position[order_[k]] = k;
    back_edges_.resize(n_);
    for (int k = 0; k < n_; ++k) {
      for (const auto& nb : g_.neighbors(order_[k])) {
        if (position[nb.vertex] < k) back_edges_[k].push_back(nb);
      }
    }
  }

  std::vector<Permutation> run() {
    image_.assign(n_, -1);
    used_.assign(n_, 0);
    extend(0);
    std::sort(found_.begin(), found_.end());
    return std::move(found_);
  }

 private:
  void extend(int k) {
    if (k == n_) {
      found_.push_back(image_);
      return;
    }
    const int v = order_[k];
    auto try_candidate = [&](int cand) {
      if (used_[cand] || g_.degree(cand) != g_.degree(v)) return;
      for (const auto& nb : back_edges_[k]) {
        int mapped = g_.find_edge(cand, image_[nb.vertex]);
        if (mapped < 0) return;
        const auto& src = g_.edges()[nb.edge];
        const auto& dst = g_.edges()[mapped];
        if (src.coupling != dst.coupling || src.edge_class != dst.edge_class) return;
      }
      image_[v] = cand;
      used_[cand] = 1;
      extend(k + 1);
      used_[cand] = 0;
      image_[v] = -1;
    };
    if (parent_[v] < 0) {
      for (int cand = 0; cand < n_; ++cand) try_candidate(cand);
    } else {
      for (const auto& nb : g_.neighbors(image_[parent_[v]])) try_candidate(nb.vertex);
    }
  }

  const FullereneGraph& g_;
  int n_;
  std::vector<int> order_;
  std::vector<int> parent_;
  std::vector<std::vector<Neighbor>> back_edges_;
  std::vector<int> image_;
  std::vector<char> used_;
  std::vector<Permutation> found_;
};

}  // namespace

AutomorphismGroup::AutomorphismGroup(int n_vertices, std::vector<Permutation> elements)
    : n_(n_vertices), elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  byte_tables_.assign(elements_.size() * 8 * 256, 0);
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    const auto& perm = elements_[e];
    if (static_cast<int>(perm.size()) != n_) {
      throw Error(ErrorKind::kConsistency, "permutation length does not match vertex count");
    }
    std::uint64_t* table = byte_tables_.data() + e * 8 * 256;
    for (int byte = 0; byte < 8; ++byte) {
      for (int x = 0; x < 256; ++x) {
        std::uint64_t out = 0;
        for (int bit = 0; bit < 8; ++bit) {
          int site = 8 * byte + bit;
          if (site < n_ && ((x >> bit) & 1)) out |= std::uint64_t{1} << perm[site];
        }
        table[byte * 256 + x] = out;
      }
    }
  }
}

std::uint64_t AutomorphismGroup::apply(std::size_t element, std::uint64_t bits) const noexcept {
  const std::uint64_t* table = byte_tables_.data() + element * 8 * 256;
  std::uint64_t out = 0;
  for (int byte = 0; byte < 8 && bits != 0; ++byte, bits >>= 8) {
    out |= table[byte * 256 + (bits & 0xFF)];
  }
  return out;
}

bool AutomorphismGroup::is_group() const {
  std::set<Permutation> members(elements_.begin(), elements_.end());
  Permutation identity(n_);
  std::iota(identity.begin(), identity.end(), 0);
  if (!members.count(identity)) return false;
  Permutation tmp(n_);
  for (const auto& a : elements_) {
    for (int i = 0; i < n_; ++i) tmp[a[i]] = i;
    if (!members.count(tmp)) return false;
    for (const auto& b : elements_) {
      for (int i = 0; i < n_; ++i) tmp[i] = a[b[i]];
      if (!members.count(tmp)) return false;
    }
  }
  return true;
}

int AutomorphismGroup::vertex_orbit_count() const {
  UnionFind uf(n_);
  for (const auto& perm : elements_) {
    for (int i = 0; i < n_; ++i) uf.unite(i, perm[i]);
  }
  int count = 0;
  for (int i = 0; i < n_; ++i) count += uf.find(i) == static_cast<std::size_t>(i);
  return count;
}

std::vector<int> AutomorphismGroup::edge_orbits(const FullereneGraph& g) const {
  const auto edges = g.edges();
  UnionFind uf(edges.size());
  for (const auto& perm : elements_) {
    for (std::size_t k = 0; k < edges.size(); ++k) {
      int image = g.find_edge(perm[edges[k].u], perm[edges[k].v]);
      if (image < 0) throw Error(ErrorKind::kConsistency, "permutation is not an automorphism");
      uf.unite(k, image);
    }
  }
  std::vector<int> label(edges.size(), -1);
  int next = 0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    auto root = uf.find(k);
    if (label[root] < 0) label[root] = next++;
    label[k] = label[root];
  }
  return label;
}

AutomorphismGroup automorphisms(const FullereneGraph& g) {
  return AutomorphismGroup(g.n_vertices(), AutomorphismSearch(g).run());
}

std::uint64_t canonical_representative(const AutomorphismGroup& group, std::uint64_t bits,
                                       bool include_global_flip) {
  const std::uint64_t mask = low_mask(group.n_vertices());
  std::uint64_t best = ~std::uint64_t{0};
  for (std::size_t e = 0; e < group.order(); ++e) {
    std::uint64_t image = group.apply(e, bits);
    best = std::min(best, image);
    if (include_global_flip) best = std::min(best, image ^ mask);
  }
  return best;
}

OrbitPartition orbit_partition(const AutomorphismGroup& group,
                               std::span<const std::uint64_t> configs, bool include_global_flip) {
  const std::uint64_t mask = low_mask(group.n_vertices());
  std::vector<std::uint64_t> reps(configs.size());
  for (std::size_t k = 0; k < configs.size(); ++k) {
    if (configs[k] & ~mask) {
      throw Error(ErrorKind::kRange, "configuration " + std::to_string(k) + " has bits beyond " +
                                         std::to_string(group.n_vertices()) + " sites");
    }
    reps[k] = canonical_representative(group, configs[k], include_global_flip);
  }
  OrbitPartition out;
  out.representative = reps;
  std::sort(out.representative.begin(), out.representative.end());
  out.representative.erase(std::unique(out.representative.begin(), out.representative.end()),
                           out.representative.end());
  out.orbit_size.assign(out.representative.size(), 0);
  out.orbit_id.resize(configs.size());
  for (std::size_t k = 0; k < configs.size(); ++k) {
    auto label = std::lower_bound(out.representative.begin(), out.representative.end(), reps[k]) -
                 out.representative.begin();
    out.orbit_id[k] = static_cast<int>(label);
    ++out.orbit_size[label];
  }
  return out;
}

OrbitPartition orbit_partition(const AutomorphismGroup& group, std::span<const SpinConfig> configs,
                               bool include_global_flip) {
  std::vector<std::uint64_t> bits(configs.size());
  for (std::size_t k = 0; k < configs.size(); ++k) {
    if (configs[k].n != group.n_vertices()) {
      throw Error(ErrorKind::kRange, "configuration " + std::to_string(k) + " has length " +
                                         std::to_string(configs[k].n) + ", expected " +
                                         std::to_string(group.n_vertices()));
    }
    bits[k] = configs[k].bits;
  }
  return orbit_partition(group, std::span<const std::uint64_t>(bits), include_global_flip);
}

}  // namespace fullersim::topology

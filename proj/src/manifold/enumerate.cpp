#include <algorithm>
#include <atomic>
#include <limits>
#include <queue>
#include <thread>

#include "fullersim/error.hpp"
#include "fullersim/manifold.hpp"

namespace fullersim::manifold {

namespace {

constexpr int kExhaustiveLimit = 26;
constexpr int kBlockBits = 16;

void require_size(const FullereneGraph& g, int limit, const char* method) {
  if (g.n_vertices() > limit) {
    throw Error(ErrorKind::kUnsupportedSize,
                std::string(method) + " supports at most " + std::to_string(limit) +
                    " vertices (got " + std::to_string(g.n_vertices()) + ")");
  }
}

template <typename Fn>
void parallel_blocks(std::size_t blocks, int threads, Fn&& fn) {
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(blocks)));
  if (workers == 1) {
    for (std::size_t b = 0; b < blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t b; (b = next.fetch_add(1)) < blocks;) fn(b);
    });
  }
}

// Depth-first search over vertices in breadth-first order from vertex 0.
// The bound at a node adds three terms: the exact energy of edges among
// placed vertices, -|h| for every unplaced vertex with placed neighbours
// (h = field from those neighbours), and the exact ground energy of the
// subgraph induced by the unplaced suffix. The suffix energies are solved
// first, from the last vertex backwards, with the same search.
class BranchAndBound {
 public:
  explicit BranchAndBound(const FullereneGraph& g) : n_(g.n_vertices()) {
    std::vector<int> pos(n_, -1);
    std::queue<int> frontier;
    frontier.push(0);
    pos[0] = 0;
    order_.push_back(0);
    while (!frontier.empty()) {
      int v = frontier.front();
      frontier.pop();
      for (const auto& nb : g.neighbors(v)) {
        if (pos[nb.vertex] < 0) {
          pos[nb.vertex] = static_cast<int>(order_.size());
          order_.push_back(nb.vertex);
          frontier.push(nb.vertex);
        }
      }
    }
    if (static_cast<int>(order_.size()) != n_) {
      throw Error(ErrorKind::kConfig, "branch-and-bound requires a connected graph");
    }
    forward_.resize(n_);
    for (const auto& e : g.edges()) {
      int a = pos[e.u], b = pos[e.v];
      if (a > b) std::swap(a, b);
      forward_[a].push_back({b, e.coupling});
    }
    field_.assign(n_ + 1, 0);
    suffix_bound_.assign(n_ + 1, 0);
  }

  int solve_suffix_bounds() {
    for (int start = n_ - 1; start >= 0; --start) {
      best_ = std::numeric_limits<int>::max();
      collect_ = false;
      search(start, start, 0, 0, 0);
      suffix_bound_[start] = best_;
    }
    return suffix_bound_[0];
  }

  std::vector<std::uint64_t> collect(int target) {
    best_ = target;
    collect_ = true;
    found_.clear();
    search(0, 0, 0, 0, 0);
    return std::move(found_);
  }

  std::uint64_t nodes() const noexcept { return nodes_; }

 private:
  struct Link {
    int to;  // position of the later endpoint
    int coupling;
  };

  // partial: energy of edges inside [start, depth); optimistic: sum of -|h|
  // over unplaced positions.
  void search(int start, int depth, int partial, int optimistic, std::uint64_t bits) {
    ++nodes_;
    if (depth == n_) {
      if (collect_) {
        if (partial == best_) found_.push_back(bits);
      } else if (partial < best_) {
        best_ = partial;
      }
      return;
    }
    const int h = field_[depth];
    // Try the spin that satisfies the local field first.
    const int first = (depth == start) ? 1 : (h > 0 ? -1 : 1);
    for (int s : {first, -first}) {
      if (depth == start && s < 0) break;  // global inversion symmetry
      int p = partial + s * h;
      int opt = optimistic + std::abs(h);  // depth leaves the unplaced set
      for (const auto& link : forward_[depth]) {
        int& hf = field_[link.to];
        opt += std::abs(hf);
        hf += link.coupling * s;
        opt -= std::abs(hf);
      }
      const int bound = p + opt + suffix_bound_[depth + 1];
      const bool prune = collect_ ? bound > best_ : bound >= best_;
      if (!prune) {
        std::uint64_t next = s > 0 ? bits | (std::uint64_t{1} << order_[depth]) : bits;
        search(start, depth + 1, p, opt, next);
      }
      for (const auto& link : forward_[depth]) field_[link.to] -= link.coupling * s;
    }
  }

  int n_;
  std::vector<int> order_;
  std::vector<std::vector<Link>> forward_;
  std::vector<int> field_;
  std::vector<int> suffix_bound_;
  int best_ = 0;
  bool collect_ = false;
  std::vector<std::uint64_t> found_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

int classical_energy(const FullereneGraph& g, std::uint64_t bits) noexcept {
  int e = 0;
  for (const auto& edge : g.edges()) {
    const int differ = static_cast<int>(((bits >> edge.u) ^ (bits >> edge.v)) & 1U);
    e += edge.coupling * (1 - 2 * differ);
  }
  return e;
}

int classical_energy(const FullereneGraph& g, const SpinConfig& c) {
  if (c.n != g.n_vertices()) {
    throw Error(ErrorKind::kRange, "configuration length " + std::to_string(c.n) +
                                       " does not match graph size " +
                                       std::to_string(g.n_vertices()));
  }
  return classical_energy(g, c.bits);
}

std::vector<kernels::EnergyTerm> energy_terms(const FullereneGraph& g) {
  std::vector<kernels::EnergyTerm> terms;
  for (const auto& e : g.edges()) {
    terms.push_back({static_cast<std::uint32_t>(e.u), static_cast<std::uint32_t>(e.v), e.coupling});
  }
  return terms;
}

std::vector<std::int32_t> energy_table(const FullereneGraph& g, int threads) {
  require_size(g, kExhaustiveLimit, "energy table");
  const auto terms = energy_terms(g);
  const std::size_t total = std::size_t{1} << g.n_vertices();
  const std::size_t block = std::min<std::size_t>(total, std::size_t{1} << kBlockBits);
  std::vector<std::int32_t> out(total);
  const auto& k = kernels::active();
  parallel_blocks(total / block, threads, [&](std::size_t b) {
    k.energies(terms, b * block, std::span<std::int32_t>(out.data() + b * block, block));
  });
  return out;
}

std::ptrdiff_t GroundStateManifold::index_of(std::uint64_t bits) const noexcept {
  auto it = std::lower_bound(states.begin(), states.end(), bits);
  if (it == states.end() || *it != bits) return -1;
  return it - states.begin();
}

GroundStateManifold enumerate_exhaustive(const FullereneGraph& g, const EnumerationOptions& opts) {
  require_size(g, kExhaustiveLimit, "exhaustive scan");
  const auto terms = energy_terms(g);
  const std::size_t total = std::size_t{1} << g.n_vertices();
  const std::size_t block = std::min<std::size_t>(total, std::size_t{1} << kBlockBits);
  const std::size_t blocks = total / block;

  struct BlockResult {
    int min = std::numeric_limits<int>::max();
    std::vector<std::uint64_t> states;
  };
  std::vector<BlockResult> results(blocks);
  const auto& k = kernels::active();
  parallel_blocks(blocks, opts.threads, [&](std::size_t b) {
    std::vector<std::int32_t> e(block);
    k.energies(terms, b * block, e);
    auto& r = results[b];
    r.min = *std::min_element(e.begin(), e.end());
    for (std::size_t i = 0; i < block; ++i) {
      if (e[i] == r.min) r.states.push_back(b * block + i);
    }
  });

  GroundStateManifold m;
  m.graph_digest = g.digest();
  m.n_vertices = g.n_vertices();
  m.e0 = std::min_element(results.begin(), results.end(), [](const auto& a, const auto& b) {
           return a.min < b.min;
         })->min;
  for (const auto& r : results) {
    if (r.min == m.e0) m.states.insert(m.states.end(), r.states.begin(), r.states.end());
  }
  return m;
}

GroundStateManifold enumerate_branch_and_bound(const FullereneGraph& g, SearchStats* stats) {
  BranchAndBound search(g);
  const int e0 = search.solve_suffix_bounds();
  auto half = search.collect(e0);

  GroundStateManifold m;
  m.graph_digest = g.digest();
  m.n_vertices = g.n_vertices();
  m.e0 = e0;
  const std::uint64_t mask = low_mask(g.n_vertices());
  m.states.reserve(2 * half.size());
  for (auto s : half) {
    m.states.push_back(s);
    m.states.push_back(s ^ mask);
  }
  std::sort(m.states.begin(), m.states.end());
  if (stats) stats->nodes = search.nodes();
  return m;
}

GroundStateManifold enumerate_ground_states(const FullereneGraph& g,
                                            const EnumerationOptions& opts) {
  if (g.n_vertices() > 64) {
    throw Error(ErrorKind::kUnsupportedSize, "enumeration supports at most 64 vertices");
  }
  if (g.n_vertices() <= kExhaustiveLimit) return enumerate_exhaustive(g, opts);
  return enumerate_branch_and_bound(g);
}

}  // namespace fullersim::manifold

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <thread>

#include "fullersim/error.hpp"
#include "fullersim/perturbation.hpp"

namespace fullersim::perturbation {

DimerDetector::DimerDetector(const FullereneGraph& g) : n_(g.n_vertices()) {
  g.require_cubic();
  const auto edges = g.edges();
  stencils_.reserve(edges.size());
  for (const auto& e : edges) {
    auto others = [&](int site, int partner, std::uint8_t& a, std::uint8_t& b) {
      int product = 1;
      int k = 0;
      for (const auto& nb : g.neighbors(site)) {
        if (nb.vertex == partner) continue;
        (k++ == 0 ? a : b) = static_cast<std::uint8_t>(nb.vertex);
        product *= g.edges()[nb.edge].coupling;
      }
      // J' J'' s' s'' = -1  <=>  s' s'' = -J' J''  <=>  bits differ iff J' J'' = +1
      return product > 0 ? std::uint64_t{1} : std::uint64_t{0};
    };
    Stencil s{};
    s.i_parity = others(e.u, e.v, s.i1, s.i2);
    s.j_parity = others(e.v, e.u, s.j1, s.j2);
    s.flip = (std::uint64_t{1} << e.u) | (std::uint64_t{1} << e.v);
    stencils_.push_back(s);
  }
}

int DimerDetector::count(std::uint64_t bits) const noexcept {
  int c = 0;
  for (std::size_t k = 0; k < stencils_.size(); ++k) c += is_floppy(k, bits);
  return c;
}

std::vector<int> DimerDetector::floppy_edges(std::uint64_t bits) const {
  std::vector<int> out;
  for (std::size_t k = 0; k < stencils_.size(); ++k) {
    if (is_floppy(k, bits)) out.push_back(static_cast<int>(k));
  }
  return out;
}

std::vector<int> floppy_dimers(const FullereneGraph& g, const SpinConfig& c) {
  if (c.n != g.n_vertices()) {
    throw Error(ErrorKind::kRange, "configuration length " + std::to_string(c.n) +
                                       " does not match graph size " +
                                       std::to_string(g.n_vertices()));
  }
  return DimerDetector(g).floppy_edges(c.bits);
}

TunnelingMatrix::TunnelingMatrix(std::vector<std::size_t> row_offsets,
                                 std::vector<std::uint32_t> columns)
    : row_offsets_(std::move(row_offsets)), columns_(std::move(columns)) {
  if (row_offsets_.empty() || row_offsets_.back() != columns_.size()) {
    throw Error(ErrorKind::kConsistency, "malformed tunneling matrix offsets");
  }
}

void TunnelingMatrix::multiply(std::span<const double> x, std::span<double> y) const noexcept {
  for (std::size_t a = 0; a < dim(); ++a) {
    double acc = 0.0;
    for (auto b : row(a)) acc += x[b];
    y[a] = -acc;
  }
}

bool TunnelingMatrix::is_symmetric() const {
  for (std::size_t a = 0; a < dim(); ++a) {
    for (auto b : row(a)) {
      if (b == a) return false;
      auto r = row(b);
      if (!std::binary_search(r.begin(), r.end(), static_cast<std::uint32_t>(a))) return false;
    }
  }
  return true;
}

TunnelingMatrix build_tunneling_matrix(const GroundStateManifold& m, const FullereneGraph& g,
                                       int threads) {
  if (m.graph_digest != g.digest()) {
    throw Error(ErrorKind::kStaleCache, "manifold was computed for a different graph");
  }
  if (m.size() > 0xFFFFFFFFULL) {
    throw Error(ErrorKind::kUnsupportedSize, "manifold too large for 32-bit indices");
  }
  const DimerDetector detector(g);
  const std::size_t dim = m.size();

  // Rows are filled in fixed blocks and concatenated in block order.
  constexpr std::size_t kBlock = 1 << 14;
  const std::size_t blocks = (dim + kBlock - 1) / kBlock;
  std::vector<std::vector<std::uint32_t>> block_cols(blocks);
  std::vector<std::size_t> degree(dim, 0);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::uint64_t missing_from = 0, missing_state = 0;

  auto work = [&] {
    for (std::size_t b; (b = next.fetch_add(1)) < blocks && !failed;) {
      auto& cols = block_cols[b];
      const std::size_t end = std::min(dim, (b + 1) * kBlock);
      for (std::size_t a = b * kBlock; a < end; ++a) {
        const std::size_t before = cols.size();
        const std::uint64_t bits = m.states[a];
        for (std::size_t e = 0; e < detector.edge_count(); ++e) {
          if (!detector.is_floppy(e, bits)) continue;
          const std::uint64_t partner = bits ^ detector.flip_mask(e);
          const auto idx = m.index_of(partner);
          if (idx < 0) {
            if (!failed.exchange(true)) {
              missing_from = bits;
              missing_state = partner;
            }
            return;
          }
          cols.push_back(static_cast<std::uint32_t>(idx));
        }
        std::sort(cols.begin() + static_cast<std::ptrdiff_t>(before), cols.end());
        degree[a] = cols.size() - before;
      }
    }
  };
  {
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(blocks)));
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  if (failed) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "dimer flip of %llx gives %llx, which is not in the manifold",
                  static_cast<unsigned long long>(missing_from),
                  static_cast<unsigned long long>(missing_state));
    throw Error(ErrorKind::kConsistency, std::string(buf) + " (manifold incomplete)");
  }

  std::vector<std::size_t> offsets(dim + 1, 0);
  for (std::size_t a = 0; a < dim; ++a) offsets[a + 1] = offsets[a] + degree[a];
  std::vector<std::uint32_t> columns;
  columns.reserve(offsets[dim]);
  for (auto& cols : block_cols) {
    columns.insert(columns.end(), cols.begin(), cols.end());
    std::vector<std::uint32_t>().swap(cols);
  }
  return TunnelingMatrix(std::move(offsets), std::move(columns));
}

ComponentReport connected_components(const TunnelingMatrix& t) {
  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  ComponentReport report;
  report.component_of.assign(t.dim(), kUnset);
  std::vector<std::uint32_t> stack;
  for (std::size_t root = 0; root < t.dim(); ++root) {
    if (report.component_of[root] != kUnset) continue;
    const auto label = static_cast<std::uint32_t>(report.sizes.size());
    std::size_t size = 0;
    stack.push_back(static_cast<std::uint32_t>(root));
    report.component_of[root] = label;
    while (!stack.empty()) {
      auto a = stack.back();
      stack.pop_back();
      ++size;
      for (auto b : t.row(a)) {
        if (report.component_of[b] == kUnset) {
          report.component_of[b] = label;
          stack.push_back(b);
        }
      }
    }
    report.sizes.push_back(size);
    report.isolated += size == 1;
  }
  return report;
}

}  // namespace fullersim::perturbation

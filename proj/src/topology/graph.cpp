#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <queue>
#include <sstream>

#include "fullersim/error.hpp"
#include "fullersim/topology.hpp"

namespace fullersim::topology {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::kConfig, msg); }

}  // namespace

FullereneGraph::FullereneGraph(int n_vertices, std::vector<Edge> edges,
                               std::vector<std::string> class_names)
    : n_(n_vertices), edges_(std::move(edges)), class_names_(std::move(class_names)) {
  if (n_ <= 0) config_error("graph must have at least one vertex");
  if (n_ > 64) {
    throw Error(ErrorKind::kUnsupportedSize,
                "graphs above 64 vertices are not supported (got " + std::to_string(n_) + ")");
  }
  for (auto& e : edges_) {
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u < 0 || e.v >= n_) {
      config_error("edge " + std::to_string(e.u) + "-" + std::to_string(e.v) +
                   " references a vertex outside [0, " + std::to_string(n_) + ")");
    }
    if (e.u == e.v) config_error("self-loop at vertex " + std::to_string(e.u));
    if (e.coupling != 1 && e.coupling != -1) config_error("coupling must be ±1");
    if (e.edge_class < 0 || e.edge_class >= static_cast<int>(class_names_.size())) {
      config_error("edge class index out of range");
    }
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k].u == edges_[k - 1].u && edges_[k].v == edges_[k - 1].v) {
      config_error("duplicate edge " + std::to_string(edges_[k].u) + "-" +
                   std::to_string(edges_[k].v));
    }
  }

  std::vector<int> deg(n_, 0);
  for (const auto& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  offsets_.assign(n_ + 1, 0);
  for (int v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
  adjacency_.resize(offsets_[n_]);
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (int k = 0; k < static_cast<int>(edges_.size()); ++k) {
    const auto& e = edges_[k];
    adjacency_[fill[e.u]++] = {e.v, k};
    adjacency_[fill[e.v]++] = {e.u, k};
  }
  for (int v = 0; v < n_; ++v) {
    std::sort(adjacency_.begin() + offsets_[v], adjacency_.begin() + offsets_[v + 1],
              [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
  }
}

int FullereneGraph::find_edge(int a, int b) const noexcept {
  for (const auto& nb : neighbors(a)) {
    if (nb.vertex == b) return nb.edge;
  }
  return -1;
}

bool FullereneGraph::is_connected() const {
  std::vector<char> seen(n_, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop();
    for (const auto& nb : neighbors(v)) {
      if (!seen[nb.vertex]) {
        seen[nb.vertex] = 1;
        ++reached;
        frontier.push(nb.vertex);
      }
    }
  }
  return reached == n_;
}

void FullereneGraph::require_cubic() const {
  for (int v = 0; v < n_; ++v) {
    if (degree(v) != 3) {
      config_error("vertex " + std::to_string(v) + " has degree " + std::to_string(degree(v)));
    }
  }
  if (!is_connected()) config_error("graph is not connected");
}

std::string FullereneGraph::to_text() const {
  std::string out = "n " + std::to_string(n_) + "\n";
  for (const auto& e : edges_) {
    out += std::to_string(e.u) + ' ' + std::to_string(e.v) + ' ' + (e.coupling > 0 ? "+1" : "-1") +
           ' ' + class_names_[e.edge_class] + '\n';
  }
  return out;
}

std::string FullereneGraph::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_text()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

FullereneGraph load_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  int n = -1;
  std::vector<Edge> edges;
  std::vector<std::string> classes;
  std::map<std::string, int> class_index;
  std::map<std::pair<int, int>, int> seen;

  auto fail = [&](const std::string& msg) -> void {
    config_error("line " + std::to_string(line_no) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    if (n < 0) {
      if (tok.size() != 2 || tok[0] != "n") fail("expected header 'n <N>'");
      auto [p, ec] = std::from_chars(tok[1].data(), tok[1].data() + tok[1].size(), n);
      if (ec != std::errc{} || p != tok[1].data() + tok[1].size() || n <= 0) {
        fail("bad vertex count '" + tok[1] + "'");
      }
      continue;
    }
    if (tok.size() != 4) fail("expected '<i> <j> <+1|-1> <class>'");
    int idx[2];
    for (int k = 0; k < 2; ++k) {
      auto [p, ec] = std::from_chars(tok[k].data(), tok[k].data() + tok[k].size(), idx[k]);
      if (ec != std::errc{} || p != tok[k].data() + tok[k].size()) {
        fail("bad vertex index '" + tok[k] + "'");
      }
      if (idx[k] < 0 || idx[k] >= n) {
        fail("vertex index " + tok[k] + " outside [0, " + std::to_string(n) + ")");
      }
    }
    if (idx[0] == idx[1]) fail("self-loop at vertex " + tok[0]);
    int coupling = 0;
    if (tok[2] == "+1" || tok[2] == "1") {
      coupling = 1;
    } else if (tok[2] == "-1") {
      coupling = -1;
    } else {
      fail("coupling must be ±1 (got '" + tok[2] + "')");
    }
    auto key = std::minmax(idx[0], idx[1]);
    if (auto it = seen.find(key); it != seen.end()) {
      fail("duplicate edge " + std::to_string(key.first) + "-" + std::to_string(key.second) +
           " (first on line " + std::to_string(it->second) + ")");
    }
    seen.emplace(key, line_no);
    auto [cit, inserted] = class_index.emplace(tok[3], static_cast<int>(classes.size()));
    if (inserted) classes.push_back(tok[3]);
    edges.push_back({key.first, key.second, coupling, cit->second});
  }
  if (n < 0) config_error("missing header 'n <N>'");

  // Class indices follow first appearance; renumber by name so that text
  // round trips compare equal regardless of edge order in the file.
  std::vector<std::string> sorted = classes;
  std::sort(sorted.begin(), sorted.end());
  for (auto& e : edges) {
    e.edge_class = static_cast<int>(
        std::lower_bound(sorted.begin(), sorted.end(), classes[e.edge_class]) - sorted.begin());
  }
  FullereneGraph g(n, std::move(edges), std::move(sorted));
  g.require_cubic();
  return g;
}

}  // namespace fullersim::topology

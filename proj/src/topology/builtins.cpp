#include <algorithm>
#include <array>

#include "fullersim/error.hpp"
#include "fullersim/topology.hpp"

namespace fullersim::topology {

namespace {

struct RawEdge {
  int u;
  int v;
};

// Dodecahedron, 20 vertices.
constexpr std::array<RawEdge, 30> kDodecahedron{{
    {0, 1},   {0, 10},  {0, 19},  {1, 2},   {1, 8},   {2, 3},   {2, 6},   {3, 4},
    {3, 19},  {4, 5},   {4, 17},  {5, 6},   {5, 15},  {6, 7},   {7, 8},   {7, 14},
    {8, 9},   {9, 10},  {9, 13},  {10, 11}, {11, 12}, {11, 18}, {12, 13}, {12, 16},
    {13, 14}, {14, 15}, {15, 16}, {16, 17}, {17, 18}, {18, 19},
}};

struct C60Edge {
  int u;
  int v;
  bool pentagon;  // lies on one of the twelve five-cycles
};

// Truncated icosahedron, vertices numbered breadth-first from vertex 0.
constexpr std::array<C60Edge, 90> kTruncatedIcosahedron{{
    {0, 1, false},   {0, 2, true},    {0, 3, true},    {1, 4, true},    {1, 5, true},
    {2, 6, false},   {2, 7, true},    {3, 8, false},   {3, 9, true},    {4, 10, false},
    {4, 11, true},   {5, 12, false},  {5, 13, true},   {6, 10, true},   {6, 14, true},
    {7, 9, true},    {7, 15, false},  {8, 12, true},   {8, 16, true},   {9, 17, false},
    {10, 18, true},  {11, 13, true},  {11, 19, false}, {12, 20, true},  {13, 21, false},
    {14, 22, true},  {14, 23, false}, {15, 23, true},  {15, 24, true},  {16, 25, false},
    {16, 26, true},  {17, 25, true},  {17, 27, true},  {18, 22, true},  {18, 28, false},
    {19, 28, true},  {19, 29, true},  {20, 26, true},  {20, 30, false}, {21, 30, true},
    {21, 31, true},  {22, 32, false}, {23, 33, true},  {24, 27, false}, {24, 34, true},
    {25, 35, true},  {26, 36, false}, {27, 37, true},  {28, 38, true},  {29, 31, false},
    {29, 39, true},  {30, 40, true},  {31, 41, true},  {32, 42, true},  {32, 43, true},
    {33, 34, true},  {33, 42, false}, {34, 44, false}, {35, 37, true},  {35, 45, false},
    {36, 45, true},  {36, 46, true},  {37, 47, false}, {38, 39, true},  {38, 43, false},
    {39, 48, false}, {40, 41, true},  {40, 46, false}, {41, 49, false}, {42, 50, true},
    {43, 51, true},  {44, 47, true},  {44, 52, true},  {45, 53, true},  {46, 54, true},
    {47, 55, true},  {48, 49, true},  {48, 56, true},  {49, 57, true},  {50, 51, true},
    {50, 52, false}, {51, 56, false}, {52, 58, true},  {53, 54, true},  {53, 55, false},
    {54, 57, false}, {55, 58, true},  {56, 59, true},  {57, 59, true},  {58, 59, false},
}};

FullereneGraph dodecahedron() {
  std::vector<Edge> edges;
  for (auto [u, v] : kDodecahedron) edges.push_back({u, v, +1, 0});
  return FullereneGraph(20, std::move(edges), {"pentagon"});
}

// The C24 fullerene (D6d): two hexagonal caps t0..t5 and b0..b5 joined by a
// twelve-vertex belt m0..m11. Even belt sites hang off the top cap, odd belt
// sites off the bottom cap; faces are 2 hexagons and 12 pentagons.
FullereneGraph c24() {
  auto top = [](int i) { return i % 6; };
  auto belt = [](int i) { return 6 + (i % 12); };
  auto bottom = [](int i) { return 18 + (i % 6); };
  // Classes sorted by name: belt=0, hexagon=1, spoke=2.
  std::vector<Edge> edges;
  for (int i = 0; i < 6; ++i) {
    edges.push_back({top(i), top(i + 1), +1, 1});
    edges.push_back({bottom(i), bottom(i + 1), +1, 1});
    edges.push_back({top(i), belt(2 * i), +1, 2});
    edges.push_back({belt(2 * i + 1), bottom(i), +1, 2});
  }
  for (int i = 0; i < 12; ++i) edges.push_back({belt(i), belt(i + 1), +1, 0});
  return FullereneGraph(24, std::move(edges), {"belt", "hexagon", "spoke"});
}

// Pentagon edges carry +1 in both variants; the mixed variant makes the 30
// inter-pentagon edges ferromagnetic. Classes: inter-pentagon=0, pentagon=1.
FullereneGraph c60(bool mixed) {
  std::vector<Edge> edges;
  for (const auto& e : kTruncatedIcosahedron) {
    int coupling = (mixed && !e.pentagon) ? -1 : +1;
    edges.push_back({e.u, e.v, coupling, e.pentagon ? 1 : 0});
  }
  return FullereneGraph(60, std::move(edges), {"inter-pentagon", "pentagon"});
}

}  // namespace

FullereneGraph build_graph(BuiltinGraph which) {
  switch (which) {
    case BuiltinGraph::kDodecahedronAfm: return dodecahedron();
    case BuiltinGraph::kC24Afm: return c24();
    case BuiltinGraph::kC60Afm: return c60(false);
    case BuiltinGraph::kC60Mixed: return c60(true);
  }
  throw Error(ErrorKind::kConfig, "unknown built-in graph");
}

FullereneGraph build_graph(std::string_view name) { return build_graph(parse_builtin_name(name)); }

BuiltinGraph parse_builtin_name(std::string_view name) {
  for (auto g : {BuiltinGraph::kDodecahedronAfm, BuiltinGraph::kC24Afm, BuiltinGraph::kC60Afm,
                 BuiltinGraph::kC60Mixed}) {
    if (builtin_name(g) == name) return g;
  }
  throw Error(ErrorKind::kConfig,
              "unknown graph '" + std::string(name) +
                  "' (expected dodecahedron_afm, c24_afm, c60_afm or c60_mixed)");
}

std::string_view builtin_name(BuiltinGraph which) noexcept {
  switch (which) {
    case BuiltinGraph::kDodecahedronAfm: return "dodecahedron_afm";
    case BuiltinGraph::kC24Afm: return "c24_afm";
    case BuiltinGraph::kC60Afm: return "c60_afm";
    case BuiltinGraph::kC60Mixed: return "c60_mixed";
  }
  return "";
}

}  // namespace fullersim::topology

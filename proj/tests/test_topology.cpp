#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "doctest.h"
#include "fullersim/error.hpp"
#include "fullersim/manifold.hpp"
#include "fullersim/topology.hpp"

using namespace fullersim;
using namespace fullersim::topology;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::kIo;
}

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  FAIL("expected an Error");
  return {};
}

bool contains(const std::string& s, const std::string& part) {
  return s.find(part) != std::string::npos;
}

// Brute-force orbit count: closure under generators, independent of the
// canonical-representative path.
std::size_t orbits_by_closure(const AutomorphismGroup& grp, std::vector<std::uint64_t> states,
                              int n, bool flip) {
  std::set<std::uint64_t> unseen(states.begin(), states.end());
  std::size_t count = 0;
  while (!unseen.empty()) {
    std::vector<std::uint64_t> stack{*unseen.begin()};
    unseen.erase(unseen.begin());
    ++count;
    while (!stack.empty()) {
      const auto x = stack.back();
      stack.pop_back();
      std::vector<std::uint64_t> images;
      for (std::size_t e = 0; e < grp.order(); ++e) images.push_back(grp.apply(e, x));
      if (flip) images.push_back(x ^ low_mask(n));
      for (auto y : images) {
        if (unseen.erase(y)) stack.push_back(y);
      }
    }
  }
  return count;
}

}  // namespace

TEST_CASE("built-in graphs have the documented shape") {
  const auto dodeca = build_graph("dodecahedron_afm");
  CHECK(dodeca.n_vertices() == 20);
  CHECK(dodeca.edges().size() == 30);
  CHECK(std::all_of(dodeca.edges().begin(), dodeca.edges().end(),
                    [](const Edge& e) { return e.coupling == 1; }));

  const auto mixed = build_graph(BuiltinGraph::kC60Mixed);
  CHECK(mixed.n_vertices() == 60);
  CHECK(mixed.edges().size() == 90);
  const auto plus = std::count_if(mixed.edges().begin(), mixed.edges().end(),
                                  [](const Edge& e) { return e.coupling == 1; });
  CHECK(plus == 60);
  for (int v = 0; v < 60; ++v) {
    int red = 0;
    for (auto nb : mixed.neighbors(v)) red += mixed.edges()[nb.edge].coupling == 1;
    CHECK(red == 2);
  }

  const auto c24 = build_graph("c24_afm");
  CHECK(c24.n_vertices() == 24);
  CHECK(c24.edges().size() == 36);
  for (int v = 0; v < 24; ++v) CHECK(c24.degree(v) == 3);

  for (auto name : {"dodecahedron_afm", "c24_afm", "c60_afm", "c60_mixed"}) {
    const auto g = build_graph(name);
    CHECK(g.is_connected());
    CHECK(static_cast<int>(g.edges().size()) * 2 == 3 * g.n_vertices());
    CHECK(builtin_name(parse_builtin_name(name)) == name);
  }
  CHECK(kind_of([] { build_graph("c70"); }) == ErrorKind::kConfig);
}

TEST_CASE("load_graph round-trips and reports bad lines") {
  for (auto name : {"dodecahedron_afm", "c24_afm", "c60_mixed"}) {
    const auto g = build_graph(name);
    const auto back = load_graph(g.to_text());
    CHECK(back == g);
    CHECK(back.digest() == g.digest());
  }

  // A 4-cycle: every vertex has degree 2.
  const std::string square = "n 4\n0 1 +1 a\n1 2 +1 a\n2 3 +1 a\n0 3 +1 a\n";
  CHECK(contains(message_of([&] { load_graph(square); }), "vertex 0 has degree 2"));

  // K4 is cubic, so it parses; then break it in several ways.
  const std::string k4 = "# K4\nn 4\n0 1 +1 a\n0 2 +1 a\n0 3 -1 a\n1 2 +1 a\n1 3 +1 a\n2 3 +1 a\n";
  CHECK(load_graph(k4).n_vertices() == 4);

  std::string zero = k4;
  zero.replace(zero.find("0 3 -1"), 6, "0 3 0");
  const auto zmsg = message_of([&] { load_graph(zero); });
  CHECK(contains(zmsg, "coupling must be ±1"));
  CHECK(contains(zmsg, "line 5"));

  std::string dup = k4 + "1 0 +1 a\n";
  CHECK(contains(message_of([&] { load_graph(dup); }), "line 9"));

  std::string dangling = k4;
  dangling.replace(dangling.find("2 3 +1"), 6, "2 7 +1");
  CHECK(contains(message_of([&] { load_graph(dangling); }), "line 8"));
  CHECK(kind_of([&] { load_graph(dangling); }) == ErrorKind::kConfig);
}

TEST_CASE("automorphism group orders") {
  CHECK(automorphisms(build_graph("dodecahedron_afm")).order() == 120);
  CHECK(automorphisms(build_graph("c60_afm")).order() == 120);
  const auto mixed = build_graph("c60_mixed");
  const auto gm = automorphisms(mixed);
  CHECK(gm.order() == 120);
  const auto orbits = gm.edge_orbits(mixed);
  CHECK(std::set<int>(orbits.begin(), orbits.end()).size() == 2);
  // Non-vertex-transitive D6d isomer.
  const auto g24 = automorphisms(build_graph("c24_afm"));
  CHECK(g24.order() == 24);
  CHECK(g24.vertex_orbit_count() == 2);

  // Triangle with three distinct classes (not a fullerene; built directly).
  const FullereneGraph tri(3, {{0, 1, 1, 0}, {1, 2, 1, 1}, {0, 2, 1, 2}}, {"a", "b", "c"});
  CHECK(automorphisms(tri).order() == 1);
  const FullereneGraph tri_same(3, {{0, 1, 1, 0}, {1, 2, 1, 0}, {0, 2, 1, 0}}, {"a"});
  CHECK(automorphisms(tri_same).order() == 6);
}

TEST_CASE("every automorphism preserves edges, signs and classes") {
  for (auto name : {"dodecahedron_afm", "c24_afm", "c60_afm", "c60_mixed"}) {
    const auto g = build_graph(name);
    const auto grp = automorphisms(g);
    CHECK(grp.is_group());
    const auto& identity = grp.elements().front();
    std::vector<int> id(g.n_vertices());
    std::iota(id.begin(), id.end(), 0);
    CHECK(identity == id);
    for (const auto& perm : grp.elements()) {
      for (const auto& e : g.edges()) {
        const int k = g.find_edge(perm[e.u], perm[e.v]);
        REQUIRE(k >= 0);
        CHECK(g.edges()[k].coupling == e.coupling);
        CHECK(g.edges()[k].edge_class == e.edge_class);
      }
    }
    if (std::string(name) != "c24_afm") CHECK(grp.vertex_orbit_count() == 1);
  }
}

TEST_CASE("apply matches the permutation applied bit by bit") {
  const auto g = build_graph("c60_mixed");
  const auto grp = automorphisms(g);
  std::uint64_t x = 0x0123456789abcdefULL & low_mask(60);
  for (std::size_t e = 0; e < grp.order(); e += 7) {
    std::uint64_t expected = 0;
    for (int i = 0; i < 60; ++i) {
      if ((x >> i) & 1U) expected |= std::uint64_t{1} << grp.elements()[e][i];
    }
    CHECK(grp.apply(e, x) == expected);
    x = x * 6364136223846793005ULL + 1442695040888963407ULL;
    x &= low_mask(60);
  }
}

TEST_CASE("orbit partition of the dodecahedron ground states") {
  const auto g = build_graph("dodecahedron_afm");
  const auto grp = automorphisms(g);
  const auto m = manifold::enumerate_ground_states(g);
  REQUIRE(m.size() == 250);

  const auto with_flip = orbit_partition(grp, std::span<const std::uint64_t>(m.states), true);
  const auto no_flip = orbit_partition(grp, std::span<const std::uint64_t>(m.states), false);
  CHECK(with_flip.orbit_count() == 5);
  CHECK(with_flip.orbit_count() == orbits_by_closure(grp, m.states, 20, true));
  CHECK(no_flip.orbit_count() == orbits_by_closure(grp, m.states, 20, false));
  MESSAGE("orbits without global flip: " << no_flip.orbit_count());

  for (const auto* part : {&with_flip, &no_flip}) {
    const std::size_t bound = part == &with_flip ? 2 * grp.order() : grp.order();
    CHECK(std::accumulate(part->orbit_size.begin(), part->orbit_size.end(), std::size_t{0}) ==
          250);
    for (auto s : part->orbit_size) CHECK(bound % s == 0);
    // Labels are ordered by representative; the representative is the
    // smallest member.
    CHECK(std::is_sorted(part->representative.begin(), part->representative.end()));
    std::map<int, std::uint64_t> smallest;
    for (std::size_t i = 0; i < m.size(); ++i) {
      auto [it, fresh] = smallest.emplace(part->orbit_id[i], m.states[i]);
      if (!fresh) it->second = std::min(it->second, m.states[i]);
    }
    for (auto [id, rep] : smallest) CHECK(part->representative[id] == rep);
  }

  // Same orbit implies same energy (trivially e0) and same dimer count is
  // covered by the perturbation tests; here check the flip pairing.
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto j = m.index_of(m.states[i] ^ low_mask(20));
    REQUIRE(j >= 0);
    CHECK(with_flip.orbit_id[i] == with_flip.orbit_id[j]);
  }
}

TEST_CASE("orbit partition edge cases") {
  const auto g = build_graph("dodecahedron_afm");
  const auto grp = automorphisms(g);
  const std::vector<SpinConfig> all_up{{low_mask(20), 20}};
  const auto part = orbit_partition(grp, std::span<const SpinConfig>(all_up), false);
  CHECK(part.orbit_count() == 1);
  CHECK(part.orbit_size[0] == 1);

  const std::vector<SpinConfig> wrong{{0, 19}};
  CHECK(kind_of([&] { orbit_partition(grp, std::span<const SpinConfig>(wrong)); }) ==
        ErrorKind::kRange);

  const std::uint64_t x = 0x5a5a5 & low_mask(20);
  CHECK(canonical_representative(grp, x, true) ==
        canonical_representative(grp, x ^ low_mask(20), true));
  CHECK(canonical_representative(grp, x, true) <= canonical_representative(grp, x, false));
}

TEST_CASE("graph validation") {
  CHECK(kind_of([] { FullereneGraph(65, {}, {"a"}); }) == ErrorKind::kUnsupportedSize);
  const auto g = build_graph("dodecahedron_afm");
  CHECK(g.digest().size() == 16);
  CHECK(g.digest() != build_graph("c24_afm").digest());
}

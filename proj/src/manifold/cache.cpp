#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fullersim/error.hpp"
#include "fullersim/manifold.hpp"

namespace fullersim::manifold {

namespace {

constexpr const char* kMagic = "fullersim-manifold v1";

[[noreturn]] void corrupt(const std::string& msg) {
  throw Error(ErrorKind::kCorruption, "manifold cache: " + msg);
}

}  // namespace

std::string format_manifold(const GroundStateManifold& m) {
  std::ostringstream out;
  out << kMagic << '\n' << m.graph_digest << '\n' << m.e0 << '\n' << m.states.size() << '\n';
  const int width = (m.n_vertices + 3) / 4;
  char buf[32];
  for (auto s : m.states) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, s, 16);
    const int len = static_cast<int>(end - buf);
    for (int pad = len; pad < width; ++pad) out << '0';
    out.write(buf, len);
    out << '\n';
  }
  return out.str();
}

void save_manifold(const GroundStateManifold& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << format_manifold(m);
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

GroundStateManifold parse_manifold(const std::string& text, const FullereneGraph& g) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kMagic) corrupt("missing header '" + std::string(kMagic) + "'");

  GroundStateManifold m;
  m.n_vertices = g.n_vertices();
  if (!std::getline(in, m.graph_digest)) corrupt("missing digest");
  if (m.graph_digest != g.digest()) {
    throw Error(ErrorKind::kStaleCache, "manifold cache digest " + m.graph_digest +
                                            " does not match graph digest " + g.digest());
  }
  std::size_t count = 0;
  if (!std::getline(in, line) || std::sscanf(line.c_str(), "%d", &m.e0) != 1) corrupt("missing e0");
  if (!std::getline(in, line) || std::sscanf(line.c_str(), "%zu", &count) != 1) {
    corrupt("missing state count");
  }
  m.states.reserve(count);
  const std::uint64_t mask = low_mask(g.n_vertices());
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::uint64_t s = 0;
    auto [p, ec] = std::from_chars(line.data(), line.data() + line.size(), s, 16);
    if (ec != std::errc{} || p != line.data() + line.size() || (s & ~mask)) {
      corrupt("bad state '" + line + "' at entry " + std::to_string(m.states.size()));
    }
    if (!m.states.empty() && s <= m.states.back()) corrupt("states not strictly ascending");
    if (classical_energy(g, s) != m.e0) {
      corrupt("state " + line + " has energy " + std::to_string(classical_energy(g, s)) +
              ", expected " + std::to_string(m.e0));
    }
    m.states.push_back(s);
  }
  if (m.states.size() != count) {
    corrupt("expected " + std::to_string(count) + " states, found " +
            std::to_string(m.states.size()));
  }
  return m;
}

GroundStateManifold load_manifold(const std::filesystem::path& path, const FullereneGraph& g) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifold(buf.str(), g);
}

}  // namespace fullersim::manifold

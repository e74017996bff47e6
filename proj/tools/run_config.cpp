#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fullersim/error.hpp"

namespace fullersim::cli {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::kConfig, msg); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

double parse_duration_ns(const std::string& text) {
  const std::string t = trim(text);
  double value = 0.0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || p == t.data()) config_error("bad duration '" + text + "'");
  const std::string unit(p, t.data() + t.size());
  double scale = 0.0;
  if (unit.empty() || unit == "ns") {
    scale = 1.0;
  } else if (unit == "ps") {
    scale = 1e-3;
  } else if (unit == "us") {
    scale = 1e3;
  } else {
    config_error("bad duration unit in '" + text + "' (use ps, ns or us)");
  }
  const double ns = value * scale;
  if (!(ns > 0.0) || !std::isfinite(ns)) config_error("duration must be positive: '" + text + "'");
  return ns;
}

std::vector<double> resolve_sweep(const RunConfig& cfg) {
  if (!cfg.ta.empty() && !cfg.ta_log.empty()) config_error("give either --ta or --ta-log, not both");
  std::vector<double> out;
  if (!cfg.ta.empty()) {
    for (const auto& t : cfg.ta) out.push_back(parse_duration_ns(t));
    return out;
  }
  if (cfg.ta_log.empty()) config_error("empty t_a sweep: give --ta or --ta-log");
  const auto first = cfg.ta_log.find(':');
  const auto second = cfg.ta_log.find(':', first == std::string::npos ? first : first + 1);
  if (first == std::string::npos || second == std::string::npos) {
    config_error("--ta-log expects MIN:MAX:COUNT, got '" + cfg.ta_log + "'");
  }
  const double lo = parse_duration_ns(cfg.ta_log.substr(0, first));
  const double hi = parse_duration_ns(cfg.ta_log.substr(first + 1, second - first - 1));
  const std::string count_text = trim(cfg.ta_log.substr(second + 1));
  int count = 0;
  auto [p, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
  if (ec != std::errc{} || p != count_text.data() + count_text.size() || count < 1) {
    config_error("--ta-log count must be a positive integer, got '" + count_text + "'");
  }
  if (count > 1 && !(hi > lo)) config_error("--ta-log needs MIN < MAX");
  for (int i = 0; i < count; ++i) {
    out.push_back(count == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  }
  if (count > 1) out.back() = hi;
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

topology::FullereneGraph resolve_graph(const std::string& source) {
  for (auto b : {topology::BuiltinGraph::kDodecahedronAfm, topology::BuiltinGraph::kC24Afm,
                 topology::BuiltinGraph::kC60Afm, topology::BuiltinGraph::kC60Mixed}) {
    if (source == topology::builtin_name(b)) return topology::build_graph(b);
  }
  if (!std::filesystem::is_regular_file(source)) {
    config_error("graph '" + source + "' is neither a built-in name nor an existing file");
  }
  return topology::load_graph(read_file(source));
}

schedule::AnnealingSchedule resolve_schedule(const RunConfig& cfg) {
  auto sched = [&] {
    if (cfg.schedule == "default") {
      return schedule::default_schedule({cfg.gamma0_ghz, cfg.j0_ghz, 101});
    }
    if (!std::filesystem::is_regular_file(cfg.schedule)) {
      config_error("schedule file '" + cfg.schedule + "' not found");
    }
    return schedule::load_schedule(read_file(cfg.schedule),
                                   std::filesystem::path(cfg.schedule).stem().string());
  }();
  if (cfg.j_scale != 1.0) return schedule::rescale_couplings(sched, cfg.j_scale);
  return sched;
}

void apply_config_file(CLI::App& app, const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) config_error("config file '" + path.string() + "' not found");
  std::istringstream in(read_file(path));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) config_error(where + "expected key = value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    for (auto& c : key) {
      if (c == '_') c = '-';
    }
    if (key == "config") config_error(where + "config files cannot include other config files");
    CLI::Option* opt = app.get_option_no_throw("--" + key);
    if (opt == nullptr) config_error(where + "unknown key '" + key + "' for '" + app.get_name() + "'");
    if (opt->count() > 0) continue;  // the command line wins
    try {
      opt->add_result(value);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      config_error(where + e.what());
    }
  }
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_digest(const RunConfig& cfg, const topology::FullereneGraph& g,
                          const schedule::AnnealingSchedule* sched) {
  std::string canon = "fullersim " FULLERSIM_VERSION "\n";
  canon += "graph=" + g.digest() + "\n";
  canon += "schedule=" + (sched ? sched->name() + ":" + fnv1a_hex(sched->to_csv()) : "-") + "\n";
  canon += "ta=";
  for (const auto& t : cfg.ta) canon += fmt(parse_duration_ns(t)) + ",";
  canon += "\nta_log=" + cfg.ta_log + "\nds=" + fmt(cfg.ds) + "\nsamples=";
  for (auto s : cfg.samples) canon += std::to_string(s) + ",";
  canon += "\nseed=" + std::to_string(cfg.seed) + "\nrepetitions=" + std::to_string(cfg.repetitions) +
           "\ncount=" + std::to_string(cfg.count) + "\nflip=" + (cfg.no_flip ? "0" : "1") + "\n";
  return fnv1a_hex(canon);
}

}  // namespace fullersim::cli

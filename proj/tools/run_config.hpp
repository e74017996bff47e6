#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fullersim/schedule.hpp"
#include "fullersim/topology.hpp"

namespace fullersim::cli {

// Every knob any subcommand understands. Each subcommand binds the subset it
// uses; a config file may set any bound option by its long flag name.
struct RunConfig {
  std::string graph = "dodecahedron_afm";  // built-in name or edge-list path
  std::string schedule = "default";        // "default" or CSV path
  double gamma0_ghz = 6.0;
  double j0_ghz = 4.0;
  double j_scale = 1.0;
  std::vector<std::string> ta;  // explicit t_a list, e.g. 5ns,500ps
  std::string ta_log;           // MIN:MAX:COUNT, log-spaced
  double ds = 1e-3;
  std::vector<std::size_t> samples;
  std::uint64_t seed = 1;
  int repetitions = 100;
  std::size_t count = 100000;
  bool no_flip = false;
  bool per_orbit = false;
  std::string cache;
  std::string out;
  std::string samples_file;
  std::string samples_out;
  std::string curve_a;
  std::string curve_b;
  std::string name;
  int threads = 1;
};

// "5ns", "500ps", "0.2us" or a bare number of nanoseconds.
double parse_duration_ns(const std::string& text);

// Explicit list or log-spaced range; throws kConfig if both or neither are
// set, or if any value is not positive.
std::vector<double> resolve_sweep(const RunConfig& cfg);

topology::FullereneGraph resolve_graph(const std::string& source);
schedule::AnnealingSchedule resolve_schedule(const RunConfig& cfg);

// Reads `key = value` lines ('#' comments, blank lines allowed) and applies
// each to the option --key of `app` unless it was given on the command line.
void apply_config_file(CLI::App& app, const std::filesystem::path& path);

// FNV-1a over a canonical rendering of everything that can change results.
std::string config_digest(const RunConfig& cfg, const topology::FullereneGraph& g,
                          const schedule::AnnealingSchedule* sched);

std::string fnv1a_hex(std::string_view text);
std::string read_file(const std::filesystem::path& path);

}  // namespace fullersim::cli

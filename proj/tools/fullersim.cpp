#include <deque>
#include <functional>
#include <iostream>
#include <new>

#include "CLI11.hpp"
#include "commands.hpp"
#include "fullersim/error.hpp"
#include "fullersim/kernels.hpp"

using fullersim::cli::RunConfig;

namespace {

struct Sub {
  CLI::App* app;
  std::string config;
  std::function<int(const RunConfig&)> run;
};

void add_graph(CLI::App* app, RunConfig& cfg) {
  app->add_option("--graph", cfg.graph, "built-in name or edge-list file")->capture_default_str();
}

void add_threads(CLI::App* app, RunConfig& cfg) {
  app->add_option("--threads", cfg.threads, "worker threads")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();
}

void add_reference(CLI::App* app, RunConfig& cfg) {
  app->add_option("--cache", cfg.cache, "ground-state manifold cache (read if present)");
  app->add_flag("--no-flip", cfg.no_flip, "do not merge orbits under global spin inversion");
}

void add_schedule(CLI::App* app, RunConfig& cfg) {
  app->add_option("--schedule", cfg.schedule, "'default' or a CSV file s,gamma_ghz,j_ghz")
      ->capture_default_str();
  app->add_option("--gamma0-ghz", cfg.gamma0_ghz, "default ramp: driver at s=0")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--j0-ghz", cfg.j0_ghz, "default ramp: coupling at s=1")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--j-scale", cfg.j_scale, "multiply J(s) by this factor, in (0, 1]")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_sweep(CLI::App* app, RunConfig& cfg) {
  app->add_option("--ta", cfg.ta, "anneal time(s): 5ns, 500ps, 0.2us or bare ns")->delimiter(',');
  app->add_option("--ta-log", cfg.ta_log, "log-spaced sweep MIN:MAX:COUNT");
  app->add_option("--ds", cfg.ds, "normalised integrator step")
      ->check(CLI::Range(1e-6, 0.5))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fullersim: transverse-field Ising annealing of frustrated fullerenes"};
  app.set_version_flag("--version", std::string(FULLERSIM_VERSION) + " (kernels: " +
                                        std::string(fullersim::kernels::active().name) + ")");
  app.require_subcommand(1);

  RunConfig cfg;
  std::deque<Sub> subs;  // stable addresses for bound options
  auto sub = [&](const char* name, const char* help, auto run) -> CLI::App* {
    auto* s = app.add_subcommand(name, help);
    subs.push_back({s, {}, run});
    s->add_option("--config", subs.back().config, "key = value file; flags on the command line win");
    return s;
  };

  {
    auto* s = sub("graph", "write a graph as an edge list and report its symmetry",
                  fullersim::cli::cmd_graph);
    s->add_option("--name", cfg.name, "built-in name or edge-list file (alias of --graph)");
    add_graph(s, cfg);
    s->add_option("--out", cfg.out, "output file (default stdout)");
  }
  {
    auto* s = sub("gs", "enumerate the ground-state manifold into a cache", fullersim::cli::cmd_gs);
    add_graph(s, cfg);
    s->add_option("--cache", cfg.cache, "cache file to write");
    add_threads(s, cfg);
  }
  {
    auto* s = sub("perturb", "perturbative ground state and its orbit weights",
                  fullersim::cli::cmd_perturb);
    add_graph(s, cfg);
    add_reference(s, cfg);
    s->add_option("--out", cfg.out, "JSON output (default stdout)");
    add_threads(s, cfg);
  }
  {
    auto* s = sub("evolve", "anneal once and score the final state", fullersim::cli::cmd_evolve);
    add_graph(s, cfg);
    add_schedule(s, cfg);
    add_sweep(s, cfg);
    add_reference(s, cfg);
    s->add_flag("--per-orbit", cfg.per_orbit, "include per-orbit masses");
    s->add_option("--samples", cfg.samples, "also score this many samples");
    s->add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
    s->add_option("--samples-out", cfg.samples_out, "write drawn samples (hex, one per line)");
    s->add_option("--out", cfg.out, "JSON output (default stdout)");
    add_threads(s, cfg);
  }
  {
    auto* s = sub("measure", "score a file of sampled states", fullersim::cli::cmd_measure);
    add_graph(s, cfg);
    add_reference(s, cfg);
    s->add_option("--samples-file", cfg.samples_file, "hex states, one per line");
    s->add_option("--ta", cfg.ta, "anneal time recorded in the output row");
    s->add_option("--out", cfg.out, "CSV output (default stdout)");
    add_threads(s, cfg);
  }
  {
    auto* s = sub("floor", "infidelity of fair finite samples of the perturbative state",
                  fullersim::cli::cmd_floor);
    add_graph(s, cfg);
    add_reference(s, cfg);
    s->add_option("--count", cfg.count, "samples per repetition")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    s->add_option("--repetitions", cfg.repetitions, "independent repetitions")
        ->check(CLI::Range(2, 1000000))
        ->capture_default_str();
    s->add_option("--seed", cfg.seed, "base seed")->capture_default_str();
    s->add_option("--out", cfg.out, "JSON output (default stdout)");
    add_threads(s, cfg);
  }
  {
    auto* s = sub("calibrate", "equivalent anneal times between two fidelity curves",
                  fullersim::cli::cmd_calibrate);
    s->add_option("--curve-a", cfg.curve_a, "curve CSV (ta_ns,f_binned) being matched");
    s->add_option("--curve-b", cfg.curve_b, "curve CSV searched for the same value");
    s->add_option("--ta", cfg.ta, "anneal times on curve A")->delimiter(',');
    s->add_option("--ta-log", cfg.ta_log, "log-spaced times MIN:MAX:COUNT");
    s->add_option("--out", cfg.out, "JSON output (default stdout)");
  }
  {
    auto* s = sub("pipeline", "graph, manifold, perturbative state, sweep and curve in one run",
                  fullersim::cli::cmd_pipeline);
    add_graph(s, cfg);
    add_schedule(s, cfg);
    add_sweep(s, cfg);
    add_reference(s, cfg);
    s->add_option("--samples", cfg.samples, "sample counts scored at every t_a")->delimiter(',');
    s->add_option("--seed", cfg.seed, "base sampling seed")->capture_default_str();
    s->add_option("--out", cfg.out, "output directory");
    add_threads(s, cfg);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    for (auto& s : subs) {
      if (!s.app->parsed()) continue;
      if (!s.config.empty()) fullersim::cli::apply_config_file(*s.app, s.config);
      return s.run(cfg);
    }
    return 2;
  } catch (const fullersim::Error& e) {
    std::cerr << "fullersim: error: " << e.what() << '\n';
    return fullersim::exit_code(e.kind());
  } catch (const std::bad_alloc&) {
    std::cerr << "fullersim: error: out of memory\n";
    return fullersim::exit_code(fullersim::ErrorKind::kUnsupportedSize);
  } catch (const std::exception& e) {
    std::cerr << "fullersim: internal error: " << e.what() << '\n';
    return fullersim::exit_code(fullersim::ErrorKind::kConsistency);
  }
}

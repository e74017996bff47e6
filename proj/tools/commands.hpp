#pragma once

#include "run_config.hpp"

namespace fullersim::cli {

int cmd_graph(const RunConfig& cfg);
int cmd_gs(const RunConfig& cfg);
int cmd_perturb(const RunConfig& cfg);
int cmd_evolve(const RunConfig& cfg);
int cmd_measure(const RunConfig& cfg);
int cmd_floor(const RunConfig& cfg);
int cmd_calibrate(const RunConfig& cfg);
int cmd_pipeline(const RunConfig& cfg);

}  // namespace fullersim::cli

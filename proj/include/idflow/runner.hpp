#pragma once

#include <string>
#include <vector>

#include "idflow/emit.hpp"

namespace idflow {

struct RunOptions {
    std::string out_dir = "out";
    std::vector<std::string> formats; // empty: take from config
    int threads = 1;
};

/// Flow series for one initial state: closed forms for the dissipative
/// model (they cross rate poles cleanly), the co-integration pipeline for
/// custom master equations.
SeriesOutput evolve_point(const ExperimentConfig& config,
                          const BlochVector& point);

/// Subcommand bodies shared by the CLI and the Python bindings. Each
/// writes its outputs under opts.out_dir and returns what it wrote.
RunOutput run_qfm(const ExperimentConfig& config, const RunOptions& opts);
RunOutput run_evolve(const ExperimentConfig& config, const RunOptions& opts);
RunOutput run_field(const ExperimentConfig& config, const RunOptions& opts);
RunOutput run_witness(const ExperimentConfig& config, const RunOptions& opts);

RunOutput run_subcommand(const std::string& name,
                         const ExperimentConfig& config,
                         const RunOptions& opts);

} // namespace idflow

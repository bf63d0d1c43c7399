// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nbspec/graph.hpp"
#include "nbspec/reports.hpp"
#include "nbspec/sbm_model.hpp"

namespace nbspec {

/// Resolved settings of one experiment run.
struct RunConfig {
  /// Preset name or params file.
  std::string model = "sbm-2x-7-1";
  /// Edge-list file used instead of generating graphs (types from the file).
  std::string graph;
  std::int64_t n = 1000;
  std::vector<std::uint64_t> seeds{1};
  /// Candidate / tangle depth; -1 derives it from kappa.
  int ell = -1;
  double kappa = 0.125;
  /// Eigenvalue index used for detection (1-based).
  int k = 2;
  /// "auto", "dense" or "companion".
  std::string method = "auto";
  double tol = 1e-8;
  /// Monte-Carlo draws (per root type where applicable).
  std::int64_t samples = 2000;
  /// Depth of the branching functionals.
  int mc_ell = 5;
  /// Largest generation of the martingale checks.
  int max_t = 6;
  bool tau_given = false;
  double tau = 0.0;
  std::string out = ".";
  /// Worker threads over seeds; 0 uses the hardware concurrency.
  int threads = 0;
};

/// Checks n >= 1, at least one seed, ell >= 0 or kappa in (0, 1/2), and
/// the remaining ranges. Throws invalid_argument.
void validate(const RunConfig& config);

Json config_to_json(const RunConfig& config);
/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig config_from_json(const Json& json);

/// Explicit ell, or max(1, round(kappa log_alpha n)).
int resolve_ell(const RunConfig& config, double alpha, std::int64_t n);

/// The graph of one seed: the configured file, or a block-model sample
/// with i.i.d. types.
LabeledGraph graph_for_seed(const RunConfig& config, const SbmParams& params,
                            std::uint64_t seed);

struct CommandResult {
  Json summary;
  std::vector<std::string> files;
  /// A Monte-Carlo band or a lemma check failed.
  bool statistical_failure = false;
};

/// spectrum_<seed>.csv and spectrum_summary.json.
CommandResult cmd_spectrum(const RunConfig& config);
/// assignment_<seed>.csv, overlap_<seed>.json and detect_summary.json.
CommandResult cmd_detect(const RunConfig& config);
/// bp_report.json.
CommandResult cmd_bp_verify(const RunConfig& config);
/// diagnostics.json.
CommandResult cmd_diagnostics(const RunConfig& config);
/// graph_<seed>.txt and generate_summary.json.
CommandResult cmd_generate(const RunConfig& config);

/// Dispatch by name: spectrum, detect, bp-verify, diagnostics, generate.
CommandResult run_command(const std::string& name, const RunConfig& config);

}  // namespace nbspec

// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end over the C API.

#include <CLI11.hpp>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "nbspec.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitStatistical = 4;

int exit_code(nbspec_status status) {
  switch (status) {
    case NBSPEC_OK: return kExitOk;
    case NBSPEC_INVALID_ARGUMENT:
    case NBSPEC_IO: return kExitConfig;
    case NBSPEC_CAP_EXCEEDED:
    case NBSPEC_NUMERICAL:
    case NBSPEC_INTERNAL: return kExitNumeric;
    case NBSPEC_STATISTICAL: return kExitStatistical;
  }
  return kExitNumeric;
}

// "1,2,10-12" -> {1, 2, 10, 11, 12}
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    if (item.empty()) throw CLI::ValidationError("--seeds", "empty item in '" + text + "'");
    std::size_t used = 0;
    const std::size_t dash = item.find('-');
    try {
      if (dash == std::string::npos) {
        seeds.push_back(std::stoull(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } else {
        const std::string a = item.substr(0, dash), b = item.substr(dash + 1);
        std::size_t ua = 0, ub = 0;
        const std::uint64_t lo = std::stoull(a, &ua), hi = std::stoull(b, &ub);
        if (ua != a.size() || ub != b.size() || hi < lo || hi - lo > 100000) {
          throw std::invalid_argument(item);
        }
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw CLI::ValidationError("--seeds", "bad seed list '" + text + "'");
    }
    start = comma + 1;
  }
  return seeds;
}

struct Flags {
  std::string preset;
  std::string params;
  std::string graph;
  std::optional<std::int64_t> n;
  std::string seeds;
  std::optional<int> ell;
  std::optional<double> kappa;
  std::optional<int> k;
  std::optional<double> tau;
  std::string out;
  std::optional<std::int64_t> samples;
  std::optional<int> mc_ell;
  std::optional<int> max_t;
  std::optional<double> tol;
  std::string method;
  std::optional<int> threads;
};

void add_common(CLI::App* cmd, Flags& f) {
  auto* preset = cmd->add_option("--preset", f.preset,
                                 "sbm-2x-7-1, sbm-2x-5-3, er4 or sbm-sym(r,a,b)");
  auto* params = cmd->add_option("--params", f.params, "JSON params file {r, pi, W}");
  preset->excludes(params);
  cmd->add_option("--n", f.n, "Number of vertices");
  cmd->add_option("--seeds", f.seeds, "Seed list, e.g. 1,2,5-8");
  cmd->add_option("--ell", f.ell, "Depth (default: kappa log_alpha n)");
  cmd->add_option("--kappa", f.kappa, "Depth factor in (0, 1/2)");
  cmd->add_option("--out", f.out, "Output directory (default $NBSPEC_OUT or .)");
  cmd->add_option("--threads", f.threads, "Worker threads over seeds (0: all cores)");
}

nlohmann::json build_config(const Flags& f) {
  nlohmann::json c = nlohmann::json::object();
  if (!f.params.empty()) c["model"] = f.params;
  if (!f.preset.empty()) c["model"] = f.preset;
  if (!f.graph.empty()) c["graph"] = f.graph;
  if (f.n) c["n"] = *f.n;
  if (!f.seeds.empty()) c["seeds"] = parse_seeds(f.seeds);
  if (f.ell) c["ell"] = *f.ell;
  if (f.kappa) c["kappa"] = *f.kappa;
  if (f.k) c["k"] = *f.k;
  if (f.tau) c["tau"] = *f.tau;
  if (f.samples) c["samples"] = *f.samples;
  if (f.mc_ell) c["mc_ell"] = *f.mc_ell;
  if (f.max_t) c["max_t"] = *f.max_t;
  if (f.tol) c["tol"] = *f.tol;
  if (!f.method.empty()) c["method"] = f.method;
  if (f.threads) c["threads"] = *f.threads;
  if (!f.out.empty()) {
    c["out"] = f.out;
  } else if (const char* env = std::getenv("NBSPEC_OUT"); env != nullptr && *env != '\0') {
    c["out"] = env;
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-backtracking spectra and community detection on sparse block models"};
  app.set_version_flag("--version", std::string(nbspec_version()));
  app.require_subcommand(1);
  Flags f;

  auto* spectrum = app.add_subcommand("spectrum", "Full non-backtracking spectrum per seed");
  add_common(spectrum, f);
  spectrum->add_option("--graph", f.graph, "Edge-list file instead of generated graphs");
  spectrum->add_option("--method", f.method, "auto, dense or companion");

  auto* detect = app.add_subcommand("detect", "Community detection per seed");
  add_common(detect, f);
  detect->add_option("--graph", f.graph, "Edge-list file instead of generated graphs");
  detect->add_option("--k", f.k, "Eigenvalue index (1-based)");
  detect->add_option("--tau", f.tau, "Fixed label threshold");
  detect->add_option("--samples", f.samples, "Monte-Carlo trees per type for calibration");
  detect->add_option("--mc-ell", f.mc_ell, "Depth of the calibration statistic");
  detect->add_option("--tol", f.tol, "Eigensolver tolerance");

  auto* bp = app.add_subcommand("bp-verify", "Branching-process Monte-Carlo checks");
  add_common(bp, f);
  bp->add_option("--samples", f.samples, "Trees per check");
  bp->add_option("--mc-ell", f.mc_ell, "Depth of the Q functional (when --ell is absent)");
  bp->add_option("--max-t", f.max_t, "Largest martingale generation");

  auto* diag = app.add_subcommand("diagnostics", "Tangle, weak Ramanujan and lemma checks");
  add_common(diag, f);
  diag->add_option("--graph", f.graph, "Edge-list file instead of generated graphs");

  auto* gen = app.add_subcommand("generate", "Write sampled graphs as edge lists");
  add_common(gen, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  std::string config;
  try {
    config = build_config(f).dump();
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  char* summary = nullptr;
  const nbspec_status status = nbspec_run_command(command.c_str(), config.c_str(), &summary);
  if (summary != nullptr) {
    std::cout << summary;
    nbspec_string_free(summary);
  }
  if (status != NBSPEC_OK) std::cerr << "error: " << nbspec_last_error() << '\n';
  return exit_code(status);
}

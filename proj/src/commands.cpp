// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "nbspec/commands.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <mutex>
#include <set>
#include <thread>

#include "nbspec/branching.hpp"
#include "nbspec/detection.hpp"
#include "nbspec/error.hpp"
#include "nbspec/local_stats.hpp"
#include "nbspec/rng.hpp"
#include "nbspec/spectral.hpp"

namespace nbspec {

namespace {

// Below this many oriented edges the dense backend is used by "auto".
constexpr EdgeId kAutoDenseEdges = 400;
constexpr Vertex kBpSubsampleVertices = 50;

std::string path_in(const RunConfig& config, const std::string& name) {
  return (std::filesystem::path(config.out) / name).string();
}

void ensure_out_dir(const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec || !std::filesystem::is_directory(config.out)) {
    throw io_error("cannot create output directory '" + config.out + "'");
  }
}

std::string provenance_line(const RunConfig& config, std::uint64_t seed) {
  return "seed=" + std::to_string(seed) + " config=" + config_to_json(config).dump();
}

// Runs fn(i) for every seed index on a small pool; the first exception is
// rethrown after all workers stop.
template <typename Fn>
void for_each_seed(const RunConfig& config, Fn fn) {
  const std::size_t count = config.seeds.size();
  unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                        : std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::mutex lock;
  std::size_t next = 0;
  std::exception_ptr failure;
  auto work = [&] {
    while (true) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> guard(lock);
        if (failure || next >= count) return;
        i = next++;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> guard(lock);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

SpectrumReport full_spectrum(const RunConfig& config, const LabeledGraph& graph,
                             const DirectedEdgeIndex& index) {
  const bool dense = config.method == "dense" ||
                     (config.method == "auto" && index.size() <= kAutoDenseEdges);
  return dense ? full_spectrum_dense(index) : full_spectrum_companion(graph);
}

Json complex_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

}  // namespace

void validate(const RunConfig& config) {
  if (config.model.empty() && config.graph.empty()) {
    throw invalid_argument("a model or a graph file is required");
  }
  if (config.n < 1) throw invalid_argument("n must be >= 1");
  if (config.n > std::numeric_limits<Vertex>::max()) throw invalid_argument("n too large");
  if (config.seeds.empty()) throw invalid_argument("at least one seed is required");
  if (config.ell < 0 && !(config.kappa > 0.0 && config.kappa < 0.5)) {
    throw invalid_argument("kappa must be in (0, 1/2) when ell is not given");
  }
  if (config.k < 1) throw invalid_argument("k must be >= 1");
  if (config.method != "auto" && config.method != "dense" && config.method != "companion") {
    throw invalid_argument("method must be auto, dense or companion");
  }
  if (!(config.tol > 0.0)) throw invalid_argument("tol must be positive");
  if (config.samples < 2) throw invalid_argument("samples must be >= 2");
  if (config.mc_ell < 1) throw invalid_argument("mc_ell must be >= 1");
  if (config.max_t < 1) throw invalid_argument("max_t must be >= 1");
  if (config.threads < 0) throw invalid_argument("threads must be >= 0");
  std::set<std::uint64_t> unique(config.seeds.begin(), config.seeds.end());
  if (unique.size() != config.seeds.size()) throw invalid_argument("seeds must be distinct");
}

Json config_to_json(const RunConfig& config) {
  return Json{{"model", config.model},
              {"graph", config.graph},
              {"n", config.n},
              {"seeds", config.seeds},
              {"ell", config.ell},
              {"kappa", config.kappa},
              {"k", config.k},
              {"method", config.method},
              {"tol", config.tol},
              {"samples", config.samples},
              {"mc_ell", config.mc_ell},
              {"max_t", config.max_t},
              {"tau", config.tau_given ? Json(config.tau) : Json(nullptr)},
              {"out", config.out},
              {"threads", config.threads}};
}

RunConfig config_from_json(const Json& json) {
  if (!json.is_object()) throw invalid_argument("config must be a JSON object");
  static const std::set<std::string> known{
      "model", "graph", "n",      "seeds",  "ell", "kappa", "k",      "method",
      "tol",   "samples", "mc_ell", "max_t", "tau", "out",  "threads"};
  for (const auto& item : json.items()) {
    if (!known.count(item.key())) throw invalid_argument("unknown config key '" + item.key() + "'");
  }
  RunConfig c;
  try {
    if (json.contains("model")) c.model = json.at("model").get<std::string>();
    if (json.contains("graph")) c.graph = json.at("graph").get<std::string>();
    if (json.contains("n")) c.n = json.at("n").get<std::int64_t>();
    if (json.contains("seeds")) c.seeds = json.at("seeds").get<std::vector<std::uint64_t>>();
    if (json.contains("ell")) c.ell = json.at("ell").get<int>();
    if (json.contains("kappa")) c.kappa = json.at("kappa").get<double>();
    if (json.contains("k")) c.k = json.at("k").get<int>();
    if (json.contains("method")) c.method = json.at("method").get<std::string>();
    if (json.contains("tol")) c.tol = json.at("tol").get<double>();
    if (json.contains("samples")) c.samples = json.at("samples").get<std::int64_t>();
    if (json.contains("mc_ell")) c.mc_ell = json.at("mc_ell").get<int>();
    if (json.contains("max_t")) c.max_t = json.at("max_t").get<int>();
    if (json.contains("tau") && !json.at("tau").is_null()) {
      c.tau_given = true;
      c.tau = json.at("tau").get<double>();
    }
    if (json.contains("out")) c.out = json.at("out").get<std::string>();
    if (json.contains("threads")) c.threads = json.at("threads").get<int>();
  } catch (const nlohmann::json::exception& err) {
    throw invalid_argument(std::string("config: ") + err.what());
  }
  validate(c);
  return c;
}

int resolve_ell(const RunConfig& config, double alpha, std::int64_t n) {
  if (config.ell >= 0) return config.ell;
  return default_depth(alpha, n, config.kappa);
}

LabeledGraph graph_for_seed(const RunConfig& config, const SbmParams& params,
                            std::uint64_t seed) {
  if (!config.graph.empty()) return read_edge_list_file(config.graph);
  return generate_sbm(params.pi, params.w_rows(), static_cast<Vertex>(config.n),
                      TypeAssignment::iid, seed);
}

CommandResult cmd_spectrum(const RunConfig& config) {
  validate(config);
  const SbmParams params = resolve_model(config.model);
  const SpectralData data = derive_spectral_data(params);
  ensure_out_dir(config);
  std::vector<Json> runs(config.seeds.size());
  std::mutex io;
  CommandResult result;
  for_each_seed(config, [&](std::size_t i) {
    const std::uint64_t seed = config.seeds[i];
    const LabeledGraph graph = graph_for_seed(config, params, seed);
    const DirectedEdgeIndex index(graph);
    const SpectrumReport spec = full_spectrum(config, graph, index);
    const std::string file = "spectrum_" + std::to_string(seed) + ".csv";
    Json run{{"seed", seed},
             {"n", graph.num_vertices()},
             {"m", index.size()},
             {"method", to_string(spec.method)},
             {"file", file}};
    const auto& ev = spec.eigenvalues;
    const double lambda1 = ev.empty() ? 0.0 : ev[0].real();
    run["lambda1"] = lambda1;
    run["abs_lambda2"] = ev.size() > 1 ? std::abs(ev[1]) : 0.0;
    run["lambda2"] = ev.size() > 1 ? complex_json(ev[1]) : complex_json(0.0);
    // Eigenvalues outside the circle of radius sqrt(lambda1).
    Json outliers = Json::array();
    for (const Complex& z : ev) {
      if (std::abs(z) > std::sqrt(std::max(lambda1, 0.0)) + 1e-9) outliers.push_back(complex_json(z));
    }
    run["outliers"] = outliers;
    const std::string csv = spectrum_csv(ev, provenance_line(config, seed));
    std::lock_guard<std::mutex> guard(io);
    write_text_file(path_in(config, file), csv);
    runs[i] = run;
    result.files.push_back(path_in(config, file));
  });
  result.summary = Json{{"config", config_to_json(config)},
                        {"model", to_json(data)},
                        {"sqrt_alpha", std::sqrt(data.alpha)},
                        {"runs", runs}};
  write_text_file(path_in(config, "spectrum_summary.json"), dump_json(result.summary));
  result.files.push_back(path_in(config, "spectrum_summary.json"));
  return result;
}

CommandResult cmd_detect(const RunConfig& config) {
  validate(config);
  const SbmParams params = resolve_model(config.model);
  const SpectralData data = derive_spectral_data(params);
  ensure_out_dir(config);

  DetectionOptions options;
  options.k = config.k;
  options.mc_ell = config.mc_ell;
  options.mc_samples = config.samples;
  options.tau_given = config.tau_given;
  options.tau = config.tau;
  options.tol = config.tol;
  options.seed = split_seed(config.seeds.front(), 77);
  const DetectionCalibration calibration = calibrate_detection(data, options);

  std::vector<Json> runs(config.seeds.size());
  std::vector<double> overlaps(config.seeds.size());
  std::mutex io;
  CommandResult result;
  for_each_seed(config, [&](std::size_t i) {
    const std::uint64_t seed = config.seeds[i];
    const LabeledGraph graph = graph_for_seed(config, params, seed);
    DetectionOptions run_options = options;
    run_options.seed = seed;
    const DetectionResult det = run_detection(graph, data, calibration, run_options);
    Json run = to_json(det);
    run["seed"] = seed;
    if (det.attempted) {
      const int ell = std::max(1, resolve_ell(config, data.alpha, graph.num_vertices()));
      const DetectionResult oracle =
          run_oracle_detection(graph, data, calibration, run_options, ell);
      run["oracle"] = Json{{"ell", ell}, {"overlap", oracle.overlap.overlap}};
    }
    const std::string csv_file = "assignment_" + std::to_string(seed) + ".csv";
    const std::string json_file = "overlap_" + std::to_string(seed) + ".json";
    run["assignment_file"] = csv_file;
    const Json report{{"config", config_to_json(config)}, {"seed", seed}, {"result", run}};
    const std::string csv =
        "# " + provenance_line(config, seed) + "\n" + assignment_csv(det.labels);
    std::lock_guard<std::mutex> guard(io);
    write_text_file(path_in(config, csv_file), csv);
    write_text_file(path_in(config, json_file), dump_json(report));
    result.files.push_back(path_in(config, csv_file));
    result.files.push_back(path_in(config, json_file));
    runs[i] = run;
    overlaps[i] = det.overlap.overlap;
  });
  // Order-independent aggregate.
  std::vector<double> sorted(overlaps);
  std::sort(sorted.begin(), sorted.end());
  const MeanEstimate agg = mean_and_se(sorted);
  Json cal{{"detectable", calibration.detectable}};
  if (calibration.detectable) {
    cal["t0"] = calibration.threshold.t0;
    cal["gap"] = calibration.threshold.gap;
    cal["rho"] = calibration.threshold.rho;
    cal["scale"] = calibration.scale;
  }
  result.summary = Json{{"config", config_to_json(config)},
                        {"model", to_json(data)},
                        {"calibration", cal},
                        {"mean_overlap", agg.mean},
                        {"se", agg.se},
                        {"runs", runs}};
  if (!calibration.detectable) {
    result.summary["note"] =
        "below threshold: detection not attempted, overlap of random labels reported";
  }
  write_text_file(path_in(config, "detect_summary.json"), dump_json(result.summary));
  result.files.push_back(path_in(config, "detect_summary.json"));
  return result;
}

CommandResult cmd_bp_verify(const RunConfig& config) {
  validate(config);
  const SpectralData data = derive_spectral_data(resolve_model(config.model));
  ensure_out_dir(config);
  BpSuiteOptions options;
  options.ell = config.ell >= 1 ? config.ell : config.mc_ell;
  options.max_t = config.max_t;
  options.samples = config.samples;
  options.seed = config.seeds.front();
  const std::vector<McCheck> checks = run_bp_suite(data, options);
  Json list = Json::array();
  bool all = true;
  for (const McCheck& c : checks) {
    list.push_back(to_json(c));
    all = all && c.pass;
  }
  CommandResult result;
  result.statistical_failure = !all;
  result.summary = Json{{"config", config_to_json(config)},
                        {"seed", options.seed},
                        {"ell", options.ell},
                        {"model", to_json(data)},
                        {"checks", list},
                        {"all_pass", all}};
  write_text_file(path_in(config, "bp_report.json"), dump_json(result.summary));
  result.files.push_back(path_in(config, "bp_report.json"));
  return result;
}

CommandResult cmd_diagnostics(const RunConfig& config) {
  validate(config);
  const SbmParams params = resolve_model(config.model);
  const SpectralData data = derive_spectral_data(params);
  ensure_out_dir(config);
  std::vector<Json> runs(config.seeds.size());
  bool bp_ok = true;
  std::mutex lock;
  for_each_seed(config, [&](std::size_t i) {
    const std::uint64_t seed = config.seeds[i];
    const LabeledGraph graph = graph_for_seed(config, params, seed);
    const DirectedEdgeIndex index(graph);
    const int ell = resolve_ell(config, data.alpha, graph.num_vertices());
    Json run{{"seed", seed}, {"n", graph.num_vertices()}, {"m", index.size()}, {"ell", ell}};
    run["tangle"] = to_json(tangle_free(graph, ell));
    if (index.size() > 0) {
      run["weak_ramanujan"] = to_json(weak_ramanujan_bound(index, std::max(1, ell)));
    }
    // B P identity on a small graph of the same model.
    const LabeledGraph small =
        config.graph.empty()
            ? generate_sbm(params.pi, params.w_rows(), kBpSubsampleVertices,
                           TypeAssignment::iid, split_seed(seed, 5))
            : graph;
    const DirectedEdgeIndex small_index(small);
    if (small_index.size() <= kDenseCap) {
      const BpCheck bp = bp_identity_check(small_index);
      const bool ok = bp.max_error <= 1e-8;
      run["bp_identity"] = Json{{"n", small.num_vertices()},
                                {"m", small_index.size()},
                                {"max_error", bp.max_error},
                                {"pass", ok}};
      std::lock_guard<std::mutex> guard(lock);
      bp_ok = bp_ok && ok;
    }
    std::lock_guard<std::mutex> guard(lock);
    runs[i] = run;
  });
  if (!bp_ok) throw numerical_error("B P eigenvalues differ from deg(v) - 1 and -1");

  Json tiny = Json::array();
  bool all = true;
  for (const InequalityCheck& c : inequality_suite()) {
    tiny.push_back(to_json(c));
    all = all && c.pass;
  }
  CommandResult result;
  result.statistical_failure = !all;
  result.summary = Json{{"config", config_to_json(config)},
                        {"model", to_json(data)},
                        {"runs", runs},
                        {"tiny_graph_suite", tiny},
                        {"tiny_graph_suite_pass", all}};
  write_text_file(path_in(config, "diagnostics.json"), dump_json(result.summary));
  result.files.push_back(path_in(config, "diagnostics.json"));
  return result;
}

CommandResult cmd_generate(const RunConfig& config) {
  validate(config);
  const SbmParams params = resolve_model(config.model);
  ensure_out_dir(config);
  std::vector<Json> runs(config.seeds.size());
  std::mutex io;
  CommandResult result;
  for_each_seed(config, [&](std::size_t i) {
    const std::uint64_t seed = config.seeds[i];
    const LabeledGraph graph = graph_for_seed(config, params, seed);
    const std::string file = "graph_" + std::to_string(seed) + ".txt";
    std::ostringstream text;
    text << "# " << provenance_line(config, seed) << '\n';
    write_edge_list(text, graph);
    std::lock_guard<std::mutex> guard(io);
    write_text_file(path_in(config, file), text.str());
    result.files.push_back(path_in(config, file));
    runs[i] = Json{{"seed", seed},
                   {"n", graph.num_vertices()},
                   {"edges", graph.num_edges()},
                   {"file", file}};
  });
  result.summary = Json{{"config", config_to_json(config)}, {"runs", runs}};
  write_text_file(path_in(config, "generate_summary.json"), dump_json(result.summary));
  result.files.push_back(path_in(config, "generate_summary.json"));
  return result;
}

CommandResult run_command(const std::string& name, const RunConfig& config) {
  if (name == "spectrum") return cmd_spectrum(config);
  if (name == "detect") return cmd_detect(config);
  if (name == "bp-verify") return cmd_bp_verify(config);
  if (name == "diagnostics") return cmd_diagnostics(config);
  if (name == "generate") return cmd_generate(config);
  throw invalid_argument("unknown command '" + name + "'");
}

}  // namespace nbspec

// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "nbspec.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "nbspec/commands.hpp"
#include "nbspec/detection.hpp"
#include "nbspec/error.hpp"
#include "nbspec/graph.hpp"
#include "nbspec/sbm_model.hpp"
#include "nbspec/spectral.hpp"

struct nbspec_model {
  nbspec::SbmParams params;
  nbspec::SpectralData data;
};

struct nbspec_graph {
  nbspec::LabeledGraph graph;
};

namespace {

thread_local std::string last_error;

nbspec_status fail(nbspec_status status, const std::string& message) {
  last_error = message;
  return status;
}

nbspec_status status_of(nbspec::ErrorKind kind) {
  switch (kind) {
    case nbspec::ErrorKind::invalid_argument: return NBSPEC_INVALID_ARGUMENT;
    case nbspec::ErrorKind::cap_exceeded: return NBSPEC_CAP_EXCEEDED;
    case nbspec::ErrorKind::numerical: return NBSPEC_NUMERICAL;
    case nbspec::ErrorKind::io: return NBSPEC_IO;
  }
  return NBSPEC_INTERNAL;
}

template <typename Fn>
nbspec_status guarded(Fn fn) {
  last_error.clear();
  try {
    return fn();
  } catch (const nbspec::Error& err) {
    return fail(status_of(err.kind()), err.what());
  } catch (const nlohmann::json::exception& err) {
    return fail(NBSPEC_INVALID_ARGUMENT, err.what());
  } catch (const std::bad_alloc&) {
    return fail(NBSPEC_INTERNAL, "out of memory");
  } catch (const std::exception& err) {
    return fail(NBSPEC_INTERNAL, err.what());
  } catch (...) {
    return fail(NBSPEC_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nbspec_model* make_model(nbspec::SbmParams params) {
  auto* model = new nbspec_model{std::move(params), {}};
  try {
    model->data = nbspec::derive_spectral_data(model->params);
  } catch (...) {
    delete model;
    throw;
  }
  return model;
}

}  // namespace

extern "C" {

const char* nbspec_last_error(void) { return last_error.c_str(); }

const char* nbspec_version(void) { return "0.1.0"; }

void nbspec_string_free(char* s) { std::free(s); }

nbspec_status nbspec_model_create(const char* preset_or_path, nbspec_model** out) {
  if (preset_or_path == nullptr || out == nullptr) {
    return fail(NBSPEC_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    *out = make_model(nbspec::resolve_model(preset_or_path));
    return NBSPEC_OK;
  });
}

nbspec_status nbspec_model_from_json(const char* json, nbspec_model** out) {
  if (json == nullptr || out == nullptr) return fail(NBSPEC_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = make_model(nbspec::params_from_json_text(json));
    return NBSPEC_OK;
  });
}

void nbspec_model_free(nbspec_model* model) { delete model; }

nbspec_status nbspec_model_info(const nbspec_model* model, int* r, int* r0, double* alpha) {
  if (model == nullptr) return fail(NBSPEC_INVALID_ARGUMENT, "null model");
  last_error.clear();
  if (r != nullptr) *r = model->data.r();
  if (r0 != nullptr) *r0 = model->data.r0;
  if (alpha != nullptr) *alpha = model->data.alpha;
  return NBSPEC_OK;
}

nbspec_status nbspec_model_eigenvalue(const nbspec_model* model, int k, double* out) {
  if (model == nullptr || out == nullptr) return fail(NBSPEC_INVALID_ARGUMENT, "null argument");
  if (k < 1 || k > model->data.r()) return fail(NBSPEC_INVALID_ARGUMENT, "k out of range");
  last_error.clear();
  *out = model->data.mu(k - 1);
  return NBSPEC_OK;
}

nbspec_status nbspec_graph_generate(const nbspec_model* model, int64_t n, uint64_t seed,
                                    nbspec_graph** out) {
  if (model == nullptr || out == nullptr) return fail(NBSPEC_INVALID_ARGUMENT, "null argument");
  if (n < 1) return fail(NBSPEC_INVALID_ARGUMENT, "n must be >= 1");
  return guarded([&] {
    *out = new nbspec_graph{nbspec::generate_sbm(model->params.pi, model->params.w_rows(),
                                                 static_cast<nbspec::Vertex>(n),
                                                 nbspec::TypeAssignment::iid, seed)};
    return NBSPEC_OK;
  });
}

nbspec_status nbspec_graph_read(const char* path, nbspec_graph** out) {
  if (path == nullptr || out == nullptr) return fail(NBSPEC_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new nbspec_graph{nbspec::read_edge_list_file(path)};
    return NBSPEC_OK;
  });
}

nbspec_status nbspec_graph_write(const nbspec_graph* graph, const char* path) {
  if (graph == nullptr || path == nullptr) return fail(NBSPEC_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    nbspec::write_edge_list_file(path, graph->graph);
    return NBSPEC_OK;
  });
}

void nbspec_graph_free(nbspec_graph* graph) { delete graph; }

int64_t nbspec_graph_num_vertices(const nbspec_graph* graph) {
  return graph == nullptr ? -1 : static_cast<int64_t>(graph->graph.num_vertices());
}

int64_t nbspec_graph_num_edges(const nbspec_graph* graph) {
  return graph == nullptr ? -1 : static_cast<int64_t>(graph->graph.num_edges());
}

nbspec_status nbspec_spectrum(const nbspec_graph* graph, const char* method, double* re,
                              double* im, size_t* count) {
  if (graph == nullptr || count == nullptr) return fail(NBSPEC_INVALID_ARGUMENT, "null argument");
  const std::string name = method == nullptr ? "auto" : method;
  if (name != "auto" && name != "dense" && name != "companion") {
    return fail(NBSPEC_INVALID_ARGUMENT, "method must be auto, dense or companion");
  }
  return guarded([&] {
    const nbspec::DirectedEdgeIndex index(graph->graph);
    if (re == nullptr || im == nullptr) {
      *count = static_cast<size_t>(index.size());
      return NBSPEC_OK;
    }
    if (*count < static_cast<size_t>(index.size())) {
      return fail(NBSPEC_INVALID_ARGUMENT, "buffer smaller than the number of eigenvalues");
    }
    const bool dense = name == "dense" || (name == "auto" && index.size() <= 400);
    const nbspec::SpectrumReport spec = dense
                                            ? nbspec::full_spectrum_dense(index)
                                            : nbspec::full_spectrum_companion(graph->graph);
    for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
      re[i] = spec.eigenvalues[i].real();
      im[i] = spec.eigenvalues[i].imag();
    }
    *count = spec.eigenvalues.size();
    return NBSPEC_OK;
  });
}

nbspec_status nbspec_leading_eigenvalues(const nbspec_graph* graph, int count, double tol,
                                         uint64_t seed, double* re, double* im) {
  if (graph == nullptr || re == nullptr || im == nullptr) {
    return fail(NBSPEC_INVALID_ARGUMENT, "null argument");
  }
  if (count < 1) return fail(NBSPEC_INVALID_ARGUMENT, "count must be >= 1");
  return guarded([&] {
    const nbspec::DirectedEdgeIndex index(graph->graph);
    if (count > index.size()) throw nbspec::invalid_argument("count exceeds the edge count");
    nbspec::ArnoldiOptions options;
    options.count = count;
    options.tol = tol;
    options.seed = seed;
    const nbspec::SpectrumReport spec = nbspec::leading_eigenpairs(index, options);
    if (!spec.converged) throw nbspec::numerical_error("Arnoldi did not converge");
    for (int i = 0; i < count; ++i) {
      re[i] = spec.eigenvalues[i].real();
      im[i] = spec.eigenvalues[i].imag();
    }
    return NBSPEC_OK;
  });
}

nbspec_status nbspec_detect(const nbspec_graph* graph, const nbspec_model* model, int k,
                            uint64_t seed, int* labels, double* overlap) {
  if (graph == nullptr || model == nullptr || labels == nullptr) {
    return fail(NBSPEC_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    nbspec::DetectionOptions options;
    options.k = k;
    options.seed = seed;
    const nbspec::DetectionCalibration calibration =
        nbspec::calibrate_detection(model->data, options);
    const nbspec::DetectionResult result =
        nbspec::run_detection(graph->graph, model->data, calibration, options);
    for (std::size_t v = 0; v < result.labels.size(); ++v) labels[v] = result.labels[v];
    if (overlap != nullptr) *overlap = result.overlap.overlap;
    return NBSPEC_OK;
  });
}

nbspec_status nbspec_run_command(const char* command, const char* config_json,
                                 char** summary_json) {
  if (command == nullptr || summary_json == nullptr) {
    return fail(NBSPEC_INVALID_ARGUMENT, "null argument");
  }
  *summary_json = nullptr;
  return guarded([&] {
    const nbspec::Json parsed = nbspec::Json::parse(
        config_json == nullptr || *config_json == '\0' ? "{}" : config_json);
    const nbspec::RunConfig config = nbspec::config_from_json(parsed);
    const nbspec::CommandResult result = nbspec::run_command(command, config);
    *summary_json = copy_string(nbspec::dump_json(result.summary));
    if (result.statistical_failure) {
      return fail(NBSPEC_STATISTICAL, "one or more statistical checks failed");
    }
    return NBSPEC_OK;
  });
}

}  // extern "C"

// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all
// pass. Sample sizes and seeds are fixed so failures reproduce.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nbspec/branching.hpp"
#include "nbspec/detection.hpp"
#include "nbspec/error.hpp"
#include "nbspec/graph.hpp"
#include "nbspec/local_stats.hpp"
#include "nbspec/nb_operator.hpp"
#include "nbspec/rng.hpp"
#include "nbspec/sbm_model.hpp"
#include "nbspec/spectral.hpp"

using namespace nbspec;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

using Edges = std::vector<std::pair<Vertex, Vertex>>;

// G(n, c/n) on vertices [offset, offset + n), independent of the library
// generators.
void add_gnp(Edges& edges, Vertex offset, Vertex n, double c, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(std::min(1.0, c / n));
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.emplace_back(offset + u, offset + v);
    }
  }
}

// Random recursive tree on [offset, offset + n).
void add_tree(Edges& edges, Vertex offset, Vertex n, std::mt19937_64& rng) {
  for (Vertex v = 1; v < n; ++v) {
    edges.emplace_back(offset + std::uniform_int_distribution<Vertex>(0, v - 1)(rng),
                       offset + v);
  }
}

LabeledGraph untyped(Vertex n, const Edges& edges) {
  return LabeledGraph(n, 1, std::vector<TypeLabel>(n, 0), edges);
}

// Smallest achievable largest distance between two multisets of complex
// numbers is bounded by the min-sum assignment; that assignment's largest
// distance is reported.
double multiset_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> weight(a.size(), std::vector<double>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) weight[i][j] = -std::abs(a[i] - b[j]);
  }
  const std::vector<int> match = max_weight_assignment(weight);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, -weight[i][match[i]]);
  return worst;
}

SpectralData model(const std::string& name) { return derive_spectral_data(preset(name)); }

LabeledGraph sbm_graph(const std::string& name, Vertex n, std::uint64_t seed) {
  const SbmParams p = preset(name);
  return generate_sbm(p.pi, p.w_rows(), n, TypeAssignment::iid, seed);
}

SpectrumReport leading(const DirectedEdgeIndex& index, int count, std::uint64_t seed) {
  ArnoldiOptions options;
  options.count = count;
  options.tol = 1e-8;
  options.seed = seed;
  SpectrumReport report = leading_eigenpairs(index, options);
  if (!report.converged) throw numerical_error("Arnoldi did not converge");
  return report;
}

Outcome c1_bp_identity() {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const DirectedEdgeIndex index(generate_er(50, 4.0, seed));
    worst = std::max(worst, bp_identity_check(index).max_error);
  }
  return {worst <= 1e-8, fmt("20 graphs, max error %.3g", worst)};
}

Outcome c2_walk_counts() {
  std::vector<LabeledGraph> graphs;
  for (auto& [name, g] : tiny_graph_corpus()) graphs.push_back(g);
  std::mt19937_64 rng(2);
  for (Vertex n = 6; n <= 12; ++n) {
    Edges edges;
    add_gnp(edges, 0, n, 3.0, rng);
    graphs.push_back(untyped(n, edges));
  }
  std::int64_t entries = 0, mismatches = 0;
  for (const LabeledGraph& g : graphs) {
    const DirectedEdgeIndex index(g);
    const Eigen::MatrixXd b = dense_B(index);
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(index.size(), index.size());
    for (int k = 1; k <= 5; ++k) {
      power = power * b;
      for (EdgeId e = 0; e < index.size(); ++e) {
        for (EdgeId f = 0; f < index.size(); ++f) {
          ++entries;
          if (power(e, f) != static_cast<double>(count_nb_walks(index, e, f, k))) ++mismatches;
        }
      }
    }
  }
  return {mismatches == 0, fmt("%zu graphs, %lld entries, %lld mismatches", graphs.size(),
                               static_cast<long long>(entries),
                               static_cast<long long>(mismatches))};
}

Outcome c3_bass_reduction() {
  std::mt19937_64 rng(3);
  double worst = 0.0;
  int graphs = 0, with_trees = 0;
  while (graphs < 50) {
    const Vertex core = std::uniform_int_distribution<Vertex>(20, 90)(rng);
    const double c = std::uniform_real_distribution<double>(1.5, 3.5)(rng);
    Edges edges;
    add_gnp(edges, 0, core, c, rng);
    Vertex n = core;
    if (graphs % 2 == 0) {
      // Separate tree components and a pendant tree on the core.
      for (int t = 0; t < 2; ++t) {
        const Vertex size = std::uniform_int_distribution<Vertex>(1, 12)(rng);
        add_tree(edges, n, size, rng);
        n += size;
      }
      const Vertex size = std::uniform_int_distribution<Vertex>(2, 8)(rng);
      add_tree(edges, n, size, rng);
      edges.emplace_back(0, n);
      n += size;
    }
    const LabeledGraph g = untyped(n, edges);
    const DirectedEdgeIndex index(g);
    if (index.size() > 500) continue;
    if (graphs % 2 == 0) ++with_trees;
    ++graphs;
    worst = std::max(worst, multiset_distance(full_spectrum_dense(index).eigenvalues,
                                              full_spectrum_companion(g).eigenvalues));
  }
  return {worst <= 1e-7,
          fmt("%d graphs (%d with tree parts), max distance %.3g", graphs, with_trees, worst)};
}

Outcome c4_er_spectrum() {
  double sum1 = 0.0, max2 = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const DirectedEdgeIndex index(generate_er(2000, 4.0, seed));
    const SpectrumReport r = leading(index, 6, seed);
    sum1 += r.eigenvalues[0].real();
    max2 = std::max(max2, std::abs(r.eigenvalues[1]));
  }
  const double mean1 = sum1 / 10.0;
  return {mean1 >= 3.7 && mean1 <= 4.3 && max2 <= 2.4,
          fmt("mean lambda1 %.4f in [3.7, 4.3], max |lambda2| %.4f <= 2.4", mean1, max2)};
}

Outcome c5_alignment() {
  const SpectralData er = model("er4");
  std::vector<double> values;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const LabeledGraph g = generate_er(2000, 4.0, seed);
    const DirectedEdgeIndex index(g);
    const SpectrumReport r = leading(index, 1, seed);
    const CandidateVector c = candidate_vector(index, build_chi(index, g, er, 1), 3);
    values.push_back(alignment(r.leading_vectors.at(0), c.vector));
  }
  std::sort(values.begin(), values.end());
  const double median = 0.5 * (values[4] + values[5]);
  return {median >= 0.95, fmt("median alignment %.4f (min %.4f)", median, values.front())};
}

Outcome c6_sbm_outlier() {
  double sum2 = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const DirectedEdgeIndex index(sbm_graph("sbm-2x-7-1", 4000, seed));
    const SpectrumReport r = leading(index, 2, seed);
    if (r.eigenvalues[1].imag() != 0.0) throw numerical_error("second eigenvalue not real");
    sum2 += r.eigenvalues[1].real();
  }
  const double mean2 = sum2 / 10.0;
  return {mean2 >= 2.7 && mean2 <= 3.3, fmt("mean lambda2 %.4f in [2.7, 3.3]", mean2)};
}

Outcome c7_detection() {
  auto mean_overlap = [](const std::string& name) {
    const SpectralData data = model(name);
    DetectionOptions options;
    options.seed = 1;
    const DetectionCalibration calibration = calibrate_detection(data, options);
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      options.seed = seed;
      sum += run_detection(sbm_graph(name, 4000, seed), data, calibration, options)
                 .overlap.overlap;
    }
    return sum / 10.0;
  };
  const double above = mean_overlap("sbm-2x-7-1");
  const double below = mean_overlap("sbm-2x-5-3");
  return {above >= 0.2 && std::fabs(below) <= 0.05,
          fmt("sbm-2x-7-1 mean overlap %.4f >= 0.2, sbm-2x-5-3 |mean| %.4f <= 0.05", above,
              std::fabs(below))};
}

Outcome c8_q_equivalence() {
  const std::vector<SpectralData> models{model("sbm-2x-7-1"), model("sbm-sym(3,6,1)"),
                                         model("sbm-sym(2,2,1)")};
  GwOptions cap;
  cap.max_nodes = 200;
  int trees = 0, rejected = 0;
  double worst = 0.0, worst_a = 0.0, worst_b = 0.0;
  std::uint64_t seed = 0;
  while (trees < 500) {
    const SpectralData& data = models[trees % models.size()];
    const int ell = 1 + (trees / 3) % 3;
    GwTree tree;
    try {
      tree = simulate_gw(data, kStationaryRoot, 2 * ell - 1, ++seed, cap);
    } catch (const Error&) {
      ++rejected;
      continue;
    }
    for (int k = 1; k <= data.r(); ++k) {
      const double a = q_recursive(tree, data, k, ell);
      const double b = q_enumeration(tree, data, k, ell);
      // Values that cancel to zero are compared on the unit scale.
      const double diff = std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
      if (diff >= worst) {
        worst = diff;
        worst_a = a;
        worst_b = b;
      }
    }
    ++trees;
  }
  return {worst <= 1e-10,
          fmt("%d trees (%d over 200 nodes redrawn), max relative diff %.3g (%.17g vs %.17g)",
              trees, rejected, worst, worst_a, worst_b)};
}

Outcome c9_q_mean() {
  const SpectralData data = model("sbm-2x-7-1");
  const int ell = 5;
  const double norm = std::pow(data.mu(1), 2 * ell);
  bool pass = true;
  std::string detail;
  for (int root = 0; root < data.r(); ++root) {
    std::vector<double> values;
    for (std::uint64_t i = 0; i < 10000; ++i) {
      values.push_back(sample_q(data, {2}, ell, root, split_seed(900 + root, i))[0].q / norm);
    }
    const MeanEstimate m = mean_and_se(values);
    const double target = 3.0 * data.phi(1, root) / 1.25;
    const bool ok = std::fabs(m.mean - target) <= 4.0 * m.se;
    pass = pass && ok;
    detail += fmt("root %d: %.4f +- %.4f vs %.4f; ", root + 1, m.mean, m.se, target);
  }
  return {pass, detail};
}

Outcome c10_decorrelation() {
  const MeanEstimate m = q_decorrelation(model("sbm-sym(3,6,1)"), 2, 3, 3, 10000, 10);
  return {std::fabs(m.mean) <= 4.0 * m.se,
          fmt("mean Q2 Q3 %.4g, 4 SE %.4g", m.mean, 4.0 * m.se)};
}

Outcome c11_martingales() {
  const SpectralData data = model("sbm-2x-7-1");
  const int max_t = 6;
  std::vector<std::vector<double>> x(2 * max_t);
  for (std::uint64_t i = 0; i < 5000; ++i) {
    const GwTree tree = simulate_gw(data, kStationaryRoot, max_t, split_seed(1100, i));
    const auto z = population_vectors(tree, data.r());
    for (int k = 1; k <= 2; ++k) {
      for (int t = 1; t <= max_t; ++t) {
        x[(k - 1) * max_t + t - 1].push_back(martingale_X(z, data, k, t));
      }
    }
  }
  bool pass = true;
  double worst = 0.0;
  for (const auto& v : x) {
    const MeanEstimate m = mean_and_se(v);
    pass = pass && std::fabs(m.mean) <= 4.0 * m.se;
    worst = std::max(worst, std::fabs(m.mean) / m.se);
  }
  return {pass, fmt("12 checks, max |mean| / SE %.3f", worst)};
}

Outcome c12_tree_identity() {
  const SpectralData data = model("sbm-2x-7-1");
  std::int64_t checked = 0, at_even_radius = 0, failures = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const LabeledGraph g = sbm_graph("sbm-2x-7-1", 300, seed);
    const DirectedEdgeIndex index(g);
    for (int ell = 1; ell <= 2; ++ell) {
      for (int k = 1; k <= 2; ++k) {
        EdgeVector target = check(index, build_chi(index, g, data, k));
        for (int s = 0; s < ell; ++s) target = apply_Bt(index, target);
        for (int s = 0; s < ell; ++s) target = apply_B(index, target);
        for (EdgeId e = 0; e < index.size(); ++e) {
          if (!tree_ball(index, e, 2 * ell - 1)) continue;
          ++checked;
          if (tree_ball(index, e, 2 * ell)) ++at_even_radius;
          const double value =
              p_functional(g, index, data, e, k, ell) + s_kl(g, index, data, e, k, ell);
          if (std::fabs(value - target[e]) > 1e-9 * std::max(1.0, std::fabs(target[e]))) {
            ++failures;
          }
        }
      }
    }
  }
  return {checked > 0 && failures == 0,
          fmt("%lld edges checked at radius 2l-1 (%lld also tree at 2l), %lld failures",
              static_cast<long long>(checked), static_cast<long long>(at_even_radius),
              static_cast<long long>(failures))};
}

Outcome c13_inequalities() {
  const std::vector<InequalityCheck> checks = inequality_suite(1e-6);
  std::int64_t failed = 0;
  std::string names;
  for (const InequalityCheck& c : checks) {
    if (!c.pass) {
      ++failed;
      names += " " + c.graph + "/" + c.name + "/k" + std::to_string(c.k);
    }
  }
  return {failed == 0 && !checks.empty(),
          fmt("%zu checks, %lld failed%s", checks.size(), static_cast<long long>(failed),
              names.c_str())};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "bp_identity", 10, c1_bp_identity},
      {2, "walk_count_oracle", 10, c2_walk_counts},
      {3, "bass_reduction", 60, c3_bass_reduction},
      {4, "er_spectral_law", 300, c4_er_spectrum},
      {5, "alignment", 300, c5_alignment},
      {6, "sbm_outlier", 600, c6_sbm_outlier},
      {7, "detection", 900, c7_detection},
      {8, "q_equivalence", 30, c8_q_equivalence},
      {9, "q_mean_law", 300, c9_q_mean},
      {10, "decorrelation", 300, c10_decorrelation},
      {11, "martingales", 120, c11_martingales},
      {12, "tree_identity", 60, c12_tree_identity},
      {13, "inequality_suites", 30, c13_inequalities},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& err) {
      outcome = {false, std::string("error: ") + err.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.budget_seconds;
    const bool pass = outcome.pass && in_time;
    if (!pass) ++failed;
    std::printf("%s %2d %-18s %s [%.1f s / %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name,
                outcome.detail.c_str(), seconds, c.budget_seconds, in_time ? "" : " over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}

// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "nbspec/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "nbspec/branching.hpp"
#include "nbspec/error.hpp"
#include "nbspec/rng.hpp"
#include "nbspec/spectral.hpp"

namespace nbspec {

namespace {

void check_detectable_k(const SpectralData& data, int k) {
  if (k < 2 || k > data.r()) throw invalid_argument("k must be in [2, r]");
  if (k > data.r0) {
    throw invalid_argument("k = " + std::to_string(k) +
                           " is not above the Kesten-Stigum threshold (r0 = " +
                           std::to_string(data.r0) + ")");
  }
}

std::vector<int> plus_types(const SpectralData& data, int k) {
  std::vector<int> out;
  for (int i = 0; i < data.r(); ++i) {
    if (data.phi(k - 1, i) > 0.0) out.push_back(i);
  }
  return out;
}

std::vector<int> minus_types(const SpectralData& data, int k) {
  std::vector<int> out;
  for (int i = 0; i < data.r(); ++i) {
    if (!(data.phi(k - 1, i) > 0.0)) out.push_back(i);
  }
  return out;
}

double clipped_cube(double x, double clip) {
  const double a = std::min(std::abs(x), clip);
  return std::copysign(a * a * a, x);
}

Assignment random_labels(Vertex n, int r, std::uint64_t seed) {
  Rng rng(seed);
  Assignment labels(n);
  for (auto& l : labels) l = static_cast<int>(rng.below(r));
  return labels;
}

DetectionResult below_threshold(const LabeledGraph& graph,
                                const SpectralData& data,
                                const DetectionOptions& options) {
  DetectionResult out;
  out.attempted = false;
  out.note =
      "below threshold: detection not attempted, overlap of random labels "
      "reported (r0 = " + std::to_string(data.r0) + ")";
  out.labels = random_labels(graph.num_vertices(), data.r(), split_seed(options.seed, 3));
  out.overlap = overlap(out.labels, graph.types(), data.pi);
  return out;
}

DetectionResult label_and_score(const LabeledGraph& graph,
                                const SpectralData& data,
                                const DetectionCalibration& calibration,
                                const DetectionOptions& options,
                                const DirectedEdgeIndex& index,
                                const EdgeVector& xi, bool sign_known) {
  DetectionResult out;
  out.attempted = true;
  out.scale = calibration.scale;
  out.t0 = calibration.threshold.t0;
  std::vector<double> stats = vertex_statistic(index, xi);
  if (!sign_known) {
    out.sign = estimate_sign_from_samples(stats, calibration.scale,
                                          calibration.threshold.samples, data.pi);
    if (out.sign.sign == Sign::minus) {
      for (double& s : stats) s = -s;
    }
  } else {
    out.sign.sign = Sign::plus;
  }
  // The threshold on I(v) = s sqrt(n) stat(v) is t0, so on stat it is
  // tau / sqrt(n) with tau = t0 / s.
  out.tau = options.tau_given ? options.tau
                              : (calibration.scale > 0.0 ? out.t0 / calibration.scale : 0.0);
  out.labels = assign_labels(graph, data, options.k, stats, out.tau,
                             split_seed(options.seed, 2));
  out.overlap = overlap(out.labels, graph.types(), data.pi);
  return out;
}

}  // namespace

std::vector<double> vertex_statistic(const DirectedEdgeIndex& index,
                                     const EdgeVector& xi) {
  if (xi.size() != index.size()) throw invalid_argument("edge vector size mismatch");
  std::vector<double> stat(index.num_vertices(), 0.0);
  for (EdgeId e = 0; e < index.size(); ++e) stat[index.head(e)] += xi[e];
  return stat;
}

ThresholdChoice choose_threshold_from_samples(
    const SpectralData& data, int k, std::vector<std::vector<double>> samples) {
  check_detectable_k(data, k);
  const int r = data.r();
  if (static_cast<int>(samples.size()) != r) {
    throw invalid_argument("one sample vector per type expected");
  }
  const std::vector<int> plus = plus_types(data, k);
  const std::vector<int> minus = minus_types(data, k);
  if (plus.empty() || minus.empty()) throw invalid_argument("empty J+ or J-");

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (auto& s : samples) {
    if (s.empty()) throw invalid_argument("no samples for a type");
    std::sort(s.begin(), s.end());
    lo = std::min(lo, s.front());
    hi = std::max(hi, s.back());
  }
  if (!(hi > lo)) throw numerical_error("threshold samples are all equal");

  auto tail = [&](const std::vector<int>& group, double t) {
    double w = 0.0, p = 0.0;
    for (int j : group) {
      const auto& s = samples[j];
      const auto above = s.end() - std::upper_bound(s.begin(), s.end(), t);
      p += data.pi[j] * static_cast<double>(above) / static_cast<double>(s.size());
      w += data.pi[j];
    }
    return p / w;
  };

  constexpr int kGrid = 201;
  const double cell = (hi - lo) / (kGrid - 1);
  std::vector<double> gap(kGrid);
  double best = -std::numeric_limits<double>::infinity();
  for (int g = 0; g < kGrid; ++g) {
    const double t = lo + g * cell;
    gap[g] = tail(plus, t) - tail(minus, t);
    best = std::max(best, gap[g]);
  }
  std::vector<int> argmax;
  for (int g = 0; g < kGrid; ++g) {
    if (gap[g] >= best - 1e-12) argmax.push_back(g);
  }
  const int pick = argmax[argmax.size() / 2];

  ThresholdChoice out;
  out.t0 = lo + pick * cell;
  out.gap = gap[pick];
  out.cell = cell;
  out.samples = std::move(samples);
  return out;
}

ThresholdChoice choose_threshold(const SpectralData& data, int k, int ell,
                                 std::int64_t samples, std::uint64_t seed) {
  check_detectable_k(data, k);
  if (samples < 2) throw invalid_argument("threshold needs >= 2 samples per type");
  const int r = data.r();
  const double scale = std::pow(data.mu(k - 1), 2 * ell);
  std::vector<std::vector<double>> draws(r);
  double rho = 0.0;
  for (int j = 0; j < r; ++j) {
    std::vector<double> q2;
    for (std::int64_t s = 0; s < samples; ++s) {
      QSample q;
      try {
        q = sample_q(data, {k}, ell, j, split_seed(split_seed(seed, j), s))[0];
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::cap_exceeded) throw;
        continue;
      }
      draws[j].push_back(q.j() / scale);
      q2.push_back((q.q / scale) * (q.q / scale));
    }
    rho += data.pi[j] * mean_and_se(q2).mean;
  }
  ThresholdChoice out = choose_threshold_from_samples(data, k, std::move(draws));
  out.rho = rho;
  return out;
}

double statistic_scale(double alpha, double rho) {
  if (!(alpha > 0.0) || !(rho >= 0.0)) throw invalid_argument("bad scale inputs");
  return std::sqrt(alpha * rho);
}

Assignment assign_labels(const LabeledGraph& graph, const SpectralData& data,
                         int k, const std::vector<double>& stats, double tau,
                         std::uint64_t seed) {
  if (k < 1 || k > data.r()) throw invalid_argument("k out of range");
  const Vertex n = graph.num_vertices();
  if (static_cast<Vertex>(stats.size()) != n) {
    throw invalid_argument("statistic length differs from the vertex count");
  }
  const std::vector<int> plus = plus_types(data, k);
  const std::vector<int> minus = minus_types(data, k);
  if (plus.empty() || minus.empty()) throw invalid_argument("empty J+ or J-");
  const double cut = tau / std::sqrt(static_cast<double>(n));
  Rng rng(seed);
  Assignment labels(n);
  for (Vertex v = 0; v < n; ++v) {
    const auto& group = stats[v] > cut ? plus : minus;
    labels[v] = group.size() == 1 ? group[0] : group[rng.below(group.size())];
  }
  return labels;
}

std::string to_string(Sign sign) {
  switch (sign) {
    case Sign::plus: return "+1";
    case Sign::minus: return "-1";
    case Sign::undetermined: return "undetermined";
  }
  return "undetermined";
}

SignEstimate estimate_sign_from_samples(
    const std::vector<double>& stats, double scale,
    const std::vector<std::vector<double>>& reference,
    const std::vector<double>& pi, double clip) {
  if (reference.size() != pi.size()) throw invalid_argument("one reference per type");
  SignEstimate out;
  const double root_n = std::sqrt(static_cast<double>(stats.size()));
  std::vector<double> g(stats.size());
  for (std::size_t v = 0; v < stats.size(); ++v) {
    g[v] = clipped_cube(scale * root_n * stats[v], clip);
  }
  out.empirical = mean_and_se(g).mean;
  double var = 0.0;
  for (std::size_t j = 0; j < pi.size(); ++j) {
    std::vector<double> gj(reference[j].size());
    for (std::size_t i = 0; i < gj.size(); ++i) gj[i] = clipped_cube(reference[j][i], clip);
    const MeanEstimate e = mean_and_se(gj);
    out.reference += pi[j] * e.mean;
    var += pi[j] * pi[j] * e.se * e.se;
  }
  out.reference_se = std::sqrt(var);
  // E g(-X) = -E g(X): the two references differ by 2 |E g(X)| with SE
  // 2 SE(E g(X)).
  if (out.empirical == 0.0 || std::abs(out.reference) < 4.0 * out.reference_se) {
    out.sign = Sign::undetermined;
  } else {
    out.sign = std::abs(out.empirical - out.reference) <=
                       std::abs(out.empirical + out.reference)
                   ? Sign::plus
                   : Sign::minus;
  }
  return out;
}

SignEstimate estimate_sign(const std::vector<double>& stats,
                           const SpectralData& data, int k, int ell,
                           double scale, std::int64_t samples,
                           std::uint64_t mc_seed, double clip) {
  check_detectable_k(data, k);
  std::vector<std::vector<double>> reference(data.r());
  for (int j = 0; j < data.r(); ++j) {
    for (std::int64_t s = 0; s < samples; ++s) {
      reference[j].push_back(
          sample_limit_statistic(data, k, ell, j, split_seed(split_seed(mc_seed, j), s)));
    }
  }
  return estimate_sign_from_samples(stats, scale, reference, data.pi, clip);
}

std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weight) {
  const int n = static_cast<int>(weight.size());
  for (const auto& row : weight) {
    if (static_cast<int>(row.size()) != n) throw invalid_argument("square matrix expected");
  }
  // Shortest augmenting paths with potentials on cost = -weight; 1-based
  // internal indexing with column 0 as the virtual start.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = -weight[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> out(n, -1);
  for (int j = 1; j <= n; ++j) out[match[j] - 1] = j - 1;
  return out;
}

OverlapReport overlap(const Assignment& assignment, const Assignment& truth,
                      const std::vector<double>& pi, bool assignment_solver) {
  if (assignment.size() != truth.size()) throw invalid_argument("label vectors differ in length");
  if (assignment.empty()) throw invalid_argument("no labels");
  const int r = static_cast<int>(pi.size());
  if (r < 1) throw invalid_argument("pi is empty");
  std::vector<std::vector<double>> confusion(r, std::vector<double>(r, 0.0));
  for (std::size_t v = 0; v < assignment.size(); ++v) {
    if (assignment[v] < 0 || assignment[v] >= r || truth[v] < 0 || truth[v] >= r) {
      throw invalid_argument("label out of range");
    }
    confusion[assignment[v]][truth[v]] += 1.0;
  }
  std::vector<int> best;
  double best_count = -1.0;
  if (r <= 8) {
    std::vector<int> p(r);
    std::iota(p.begin(), p.end(), 0);
    do {
      double c = 0.0;
      for (int a = 0; a < r; ++a) c += confusion[a][p[a]];
      if (c > best_count) {
        best_count = c;
        best = p;
      }
    } while (std::next_permutation(p.begin(), p.end()));
  } else {
    if (!assignment_solver) {
      throw invalid_argument("r > 8 needs the assignment solver");
    }
    best = max_weight_assignment(confusion);
    best_count = 0.0;
    for (int a = 0; a < r; ++a) best_count += confusion[a][best[a]];
  }
  OverlapReport out;
  out.best_permutation = best;
  out.agreement = best_count / static_cast<double>(assignment.size());
  out.overlap = out.agreement - *std::max_element(pi.begin(), pi.end());
  return out;
}

DetectionCalibration calibrate_detection(const SpectralData& data,
                                         const DetectionOptions& options) {
  DetectionCalibration out;
  if (data.r0 < 2 || options.k > data.r0) return out;
  out.detectable = true;
  out.threshold = choose_threshold(data, options.k, options.mc_ell, options.mc_samples,
                                   split_seed(options.seed, 1));
  out.scale = statistic_scale(data.alpha, out.threshold.rho);
  return out;
}

DetectionResult run_detection(const LabeledGraph& graph, const SpectralData& data,
                              const DetectionCalibration& calibration,
                              const DetectionOptions& options) {
  if (graph.num_types() != data.r()) throw invalid_argument("graph and model differ in r");
  if (!calibration.detectable) return below_threshold(graph, data, options);
  const DirectedEdgeIndex index(graph);
  if (index.size() == 0) throw invalid_argument("graph has no edges");
  ArnoldiOptions arnoldi;
  arnoldi.count = options.k;
  arnoldi.tol = options.tol;
  arnoldi.seed = split_seed(options.seed, 4);
  const SpectrumReport spec = leading_eigenpairs(index, arnoldi);
  if (!spec.converged) throw numerical_error("Arnoldi did not converge");
  const Complex lambda = spec.eigenvalues.at(options.k - 1);
  if (lambda.imag() != 0.0) {
    throw numerical_error("eigenvalue " + std::to_string(options.k) + " of B is not real");
  }
  std::size_t slot = 0;
  for (int i = 0; i + 1 < options.k; ++i) {
    if (spec.eigenvalues[i].imag() == 0.0) ++slot;
  }
  DetectionResult out = label_and_score(graph, data, calibration, options, index,
                                        spec.leading_vectors.at(slot), false);
  out.eigenvalue = lambda.real();
  return out;
}

DetectionResult run_oracle_detection(const LabeledGraph& graph,
                                     const SpectralData& data,
                                     const DetectionCalibration& calibration,
                                     const DetectionOptions& options, int ell) {
  if (graph.num_types() != data.r()) throw invalid_argument("graph and model differ in r");
  if (!calibration.detectable) return below_threshold(graph, data, options);
  const DirectedEdgeIndex index(graph);
  const CandidateVector c =
      candidate_vector(index, build_chi(index, graph, data, options.k), ell);
  if (c.degenerate) throw numerical_error("candidate vector vanished");
  return label_and_score(graph, data, calibration, options, index, c.vector, true);
}

std::string assignment_csv(const Assignment& labels) {
  std::ostringstream out;
  out << "vertex,label\n";
  for (std::size_t v = 0; v < labels.size(); ++v) out << v << ',' << labels[v] + 1 << '\n';
  return out.str();
}

}  // namespace nbspec

// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nbspec/graph.hpp"
#include "nbspec/nb_operator.hpp"
#include "nbspec/sbm_model.hpp"

namespace nbspec {

/// Per-vertex labels, 0-based types.
using Assignment = std::vector<int>;

struct OverlapReport {
  /// agreement - max_k pi(k).
  double overlap = 0.0;
  /// best_permutation[estimated label] = true label.
  std::vector<int> best_permutation;
  double agreement = 0.0;
};

/// stat(v) = sum of xi(e) over the oriented edges e with head(e) = v.
std::vector<double> vertex_statistic(const DirectedEdgeIndex& index,
                                     const EdgeVector& xi);

struct ThresholdChoice {
  double t0 = 0.0;
  /// P(X+ > t0) - P(X- > t0) on the samples.
  double gap = 0.0;
  /// Grid spacing.
  double cell = 0.0;
  /// Second moment of Q_{k,ell} / mu_k^{2 ell} under the stationary root,
  /// from the same trees.
  double rho = 0.0;
  /// Draws of J_{k,ell} / mu_k^{2 ell} per root type.
  std::vector<std::vector<double>> samples;
};

/// Grid maximizer of t -> P(X+ > t) - P(X- > t) over 201 points spanning
/// the pooled sample range, where X+- mix the per-type samples with weights
/// pi(j) over J+- = {j : phi_k(j) > 0} / {j : phi_k(j) <= 0}. Among equal
/// maxima the middle one is taken. Requires 2 <= k <= r0 (1-based).
ThresholdChoice choose_threshold(const SpectralData& data, int k, int ell,
                                 std::int64_t samples, std::uint64_t seed);

/// Same, on given per-type samples (no rho).
ThresholdChoice choose_threshold_from_samples(
    const SpectralData& data, int k, std::vector<std::vector<double>> samples);

/// Scale s = sqrt(alpha rho) between the unit eigenvector and the limit
/// statistic: s sqrt(n) stat(v) is comparable with J / mu^{2 ell}.
double statistic_scale(double alpha, double rho);

/// v gets a uniform label from J+ when stat(v) > tau / sqrt(n), otherwise
/// from J-. Deterministic per seed.
Assignment assign_labels(const LabeledGraph& graph, const SpectralData& data,
                         int k, const std::vector<double>& stats, double tau,
                         std::uint64_t seed);

enum class Sign { plus, minus, undetermined };

std::string to_string(Sign sign);

struct SignEstimate {
  Sign sign = Sign::undetermined;
  /// Mean of g(s sqrt(n) stat(v)) over the vertices.
  double empirical = 0.0;
  /// Monte-Carlo E g(X) under the stationary mixture and its SE.
  double reference = 0.0;
  double reference_se = 0.0;
};

inline constexpr double kSignClip = 10.0;

/// Compares the vertex average of g(x) = sign(x) min(|x|, clip)^3 at
/// x = scale sqrt(n) stat(v) with E g(X) and E g(-X) = -E g(X). The closer
/// reference wins; undetermined when |E g(X)| < 4 SE or the average is 0.
SignEstimate estimate_sign(const std::vector<double>& stats,
                           const SpectralData& data, int k, int ell,
                           double scale, std::int64_t samples,
                           std::uint64_t mc_seed, double clip = kSignClip);

/// Same with precomputed draws of X per root type, mixed with weights pi.
SignEstimate estimate_sign_from_samples(
    const std::vector<double>& stats, double scale,
    const std::vector<std::vector<double>>& reference,
    const std::vector<double>& pi, double clip = kSignClip);

/// Agreement maximized over label permutations: brute force for r <= 8,
/// otherwise optimal assignment on the confusion matrix (throws when
/// `assignment_solver` is false).
OverlapReport overlap(const Assignment& assignment, const Assignment& truth,
                      const std::vector<double>& pi,
                      bool assignment_solver = true);

/// Maximum-weight perfect matching on a square matrix (Hungarian method);
/// result[row] = column.
std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weight);

struct DetectionOptions {
  int k = 2;
  /// Depth of the branching statistic standing in for its limit law.
  int mc_ell = 5;
  /// Draws per root type.
  std::int64_t mc_samples = 2000;
  /// Overrides the Monte-Carlo threshold when set.
  bool tau_given = false;
  double tau = 0.0;
  double tol = 1e-8;
  std::uint64_t seed = 1;
};

/// Model-only ingredients of the detection pipeline, shared by all graphs
/// of one model.
struct DetectionCalibration {
  bool detectable = false;
  ThresholdChoice threshold;
  double scale = 0.0;
};

/// Threshold and sign references from the branching process. Not
/// detectable (nothing drawn) when k > r0 or r0 < 2.
DetectionCalibration calibrate_detection(const SpectralData& data,
                                         const DetectionOptions& options);

struct DetectionResult {
  bool attempted = false;
  std::string note;
  Assignment labels;
  OverlapReport overlap;
  double eigenvalue = 0.0;
  double t0 = 0.0;
  double tau = 0.0;
  double scale = 0.0;
  SignEstimate sign;
};

/// Eigenvector xi_k of B, vertex statistic, sign, labels and overlap for a
/// graph with known types. Without a detectable calibration, labels are
/// drawn uniformly at random and scored instead.
DetectionResult run_detection(const LabeledGraph& graph, const SpectralData& data,
                              const DetectionCalibration& calibration,
                              const DetectionOptions& options);

/// Same pipeline with xi_k replaced by the candidate vector
/// B^ell B^{*ell} x̌ built from the true types (x = chi_k).
DetectionResult run_oracle_detection(const LabeledGraph& graph,
                                     const SpectralData& data,
                                     const DetectionCalibration& calibration,
                                     const DetectionOptions& options, int ell);

/// `vertex,label` rows with 1-based labels.
std::string assignment_csv(const Assignment& labels);

}  // namespace nbspec

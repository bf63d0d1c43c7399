// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nbspec/local_stats.hpp"
#include "nbspec/sbm_model.hpp"

namespace nbspec {

using NodeId = std::int64_t;

inline constexpr NodeId kNoParent = -1;
/// Root type placeholder: draw the root type from pi.
inline constexpr int kStationaryRoot = -1;
inline constexpr NodeId kDefaultNodeCap = 10'000'000;
/// Size limit of q_enumeration.
inline constexpr NodeId kEnumerationCap = 200;

/// Rooted tree with typed nodes. Node 0 is the root; children of a node
/// are stored contiguously (CSR).
class GwTree {
 public:
  GwTree() = default;

  /// Builds a tree from parent links (parent[0] == kNoParent, every other
  /// entry a valid node; no cycles) and 0-based types.
  static GwTree from_parents(std::vector<NodeId> parent, std::vector<int> type);

  NodeId size() const { return static_cast<NodeId>(parent_.size()); }
  NodeId parent(NodeId u) const { return parent_[u]; }
  int type(NodeId u) const { return type_[u]; }
  int depth(NodeId u) const { return depth_[u]; }
  int height() const;
  std::span<const NodeId> children(NodeId u) const {
    return {child_list_.data() + child_offset_[u],
            static_cast<std::size_t>(child_offset_[u + 1] - child_offset_[u])};
  }
  /// Nodes sorted by depth (a breadth-first order).
  const std::vector<NodeId>& bfs_order() const { return order_; }
  const std::vector<NodeId>& parents() const { return parent_; }
  const std::vector<int>& types() const { return type_; }

 private:
  std::vector<NodeId> parent_;
  std::vector<int> type_;
  std::vector<int> depth_;
  std::vector<NodeId> child_offset_;
  std::vector<NodeId> child_list_;
  std::vector<NodeId> order_;
};

struct GwOptions {
  NodeId max_nodes = kDefaultNodeCap;
};

/// Multitype Poisson Galton-Watson tree to the given depth: a type-j node
/// has Poi(M_ij) children of type i for every i. `root_type` is 0-based or
/// kStationaryRoot. Throws cap_exceeded beyond `max_nodes`.
GwTree simulate_gw(const SpectralData& data, int root_type, int depth,
                   std::uint64_t seed, const GwOptions& options = {});

/// Z_t for t = 0..height, each of length r.
std::vector<TypeCountVector> population_vectors(const GwTree& tree, int r);
/// Same with r = largest type + 1.
std::vector<TypeCountVector> population_vectors(const GwTree& tree);

/// Z_0..Z_depth of the same process without the tree: Z_{t+1}(i) is
/// Poi((M Z_t)(i)). Throws cap_exceeded when a generation exceeds the cap.
std::vector<TypeCountVector> simulate_populations(const SpectralData& data,
                                                  int root_type, int depth,
                                                  std::uint64_t seed,
                                                  const GwOptions& options = {});

/// <phi_k, Z> with k 1-based.
double phi_dot(const SpectralData& data, int k, const TypeCountVector& z);

/// X_k(t) = <phi_k, Z_t> / mu_k^t - <phi_k, Z_0>. Requires k <= r0.
/// Generations past the end of `z` count as empty.
double martingale_X(const std::vector<TypeCountVector>& z,
                    const SpectralData& data, int k, int t);
double martingale_X(const GwTree& tree, const SpectralData& data, int k, int t);

/// <phi_k, Z_t> / mu_1^{t/2}, with an extra t^{-1/2} when mu_k^2 = mu_1
/// (relative 1e-12). Requires k > r0.
double normalized_X_subcritical(const std::vector<TypeCountVector>& z,
                                const SpectralData& data, int k, int t);
double normalized_X_subcritical(const GwTree& tree, const SpectralData& data,
                                int k, int t);

/// Sum of phi_k(type(u_{2 ell + 1})) over paths u_0 = root, ..., u_{2 ell + 1}
/// whose halves (u_0..u_ell) and (u_ell..u_{2 ell + 1}) are non-backtracking
/// and with u_{ell - 1} = u_{ell + 1}. Brute force, size <= 200.
double q_enumeration(const GwTree& tree, const SpectralData& data, int k,
                     int ell);

/// Same value from subtree population tables: the sum over depths t < ell
/// and nodes u at depth t of
///   L_u = sum_{w != v children of u} S^w_{ell-t-1} <phi_k, Z^v_t>.
double q_recursive(const GwTree& tree, const SpectralData& data, int k,
                   int ell);

/// L_u at the root, the t = 0 term of q_recursive.
double q_root_term(const GwTree& tree, const SpectralData& data, int k,
                   int ell);

/// (D - 1) Q - L_o, D the number of children of the root: the sum over the
/// root's children x of Q on the tree with the subtree of x removed.
double j_statistic(const GwTree& tree, const SpectralData& data, int k,
                   int ell);

/// Samples of Q_{k,ell}, Q_{j,ell} and J_{k,ell} on one simulated tree.
///
/// The tree is generated explicitly to depth ell; below that only the
/// population vectors of each depth-ell subtree are drawn, which is all the
/// functional reads.
struct QSample {
  double q = 0.0;
  double root_term = 0.0;
  int root_type = 0;
  NodeId root_children = 0;
  double j() const { return static_cast<double>(root_children - 1) * q - root_term; }
};

/// Q_{k,ell} for each k in `ks` (1-based) on one tree.
std::vector<QSample> sample_q(const SpectralData& data, const std::vector<int>& ks,
                              int ell, int root_type, std::uint64_t seed,
                              const GwOptions& options = {});

/// One draw of J_{k,ell} / mu_k^{2 ell} (the limit model of the vertex
/// statistic). Requires k <= r0.
double sample_limit_statistic(const SpectralData& data, int k, int ell,
                              int root_type, std::uint64_t seed);

/// Mean of J_{k,ell} / mu_k^{2 ell} as ell -> infinity:
/// alpha mu_k phi_k(i) / (mu_k^2 / alpha - 1).
double limit_statistic_target(const SpectralData& data, int k, int root_type);

/// Mean of Q_{k,ell} / mu_k^{2 ell} as ell -> infinity:
/// mu_k phi_k(i) / (mu_k^2 / alpha - 1).
double q_limit_target(const SpectralData& data, int k, int root_type);

/// Exact mean of Q_{k,ell} / mu_k^{2 ell} at finite ell:
/// mu_k phi_k(i) sum_{s=1}^{ell} (alpha / mu_k^2)^s.
double q_finite_mean(const SpectralData& data, int k, int ell, int root_type);

struct MeanEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::int64_t samples = 0;
  /// Draws dropped because a tree hit the node cap.
  std::int64_t discarded = 0;
};

/// Sample mean (pairwise summation) and standard error.
MeanEstimate mean_and_se(const std::vector<double>& values);

/// E Q_{k,ell} Q_{j,ell} with the root drawn from pi. k != j, 1-based.
MeanEstimate q_decorrelation(const SpectralData& data, int k, int j, int ell,
                             std::int64_t samples, std::uint64_t seed);

/// Exact E[f(types) | shape] under the Markov-field spin law on a fixed
/// shape: root type from pi, child type i given parent type j with
/// probability M_ij / alpha. Sums over all r^size assignments (size <= 8).
double markov_field_expectation(
    const SpectralData& data, const std::vector<NodeId>& parent,
    const std::function<double(const std::vector<int>&)>& f);

/// One statistical check of a Monte-Carlo report.
struct McCheck {
  std::string name;
  double estimate = 0.0;
  double se = 0.0;
  double target = 0.0;
  bool pass = false;
  std::int64_t samples = 0;
  std::int64_t discarded = 0;
};

/// |estimate - target| <= z * se.
McCheck band_check(std::string name, const MeanEstimate& estimate,
                   double target, double z = 4.0);

struct BpSuiteOptions {
  int ell = 5;
  int max_t = 6;
  std::int64_t samples = 2000;
  std::uint64_t seed = 1;
};

/// Martingale, Q-mean, decorrelation and limit-statistic checks.
std::vector<McCheck> run_bp_suite(const SpectralData& data,
                                  const BpSuiteOptions& options);

}  // namespace nbspec

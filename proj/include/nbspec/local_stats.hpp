// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nbspec/graph.hpp"
#include "nbspec/nb_operator.hpp"
#include "nbspec/sbm_model.hpp"

namespace nbspec {

/// Per-type counts, length r.
using TypeCountVector = std::vector<std::int64_t>;

struct TangleReport {
  bool tangle_free = true;
  /// Vertices whose radius-ell ball holds two or more independent cycles.
  std::vector<Vertex> offending;
  /// Number of vertices whose radius-ell ball holds at least one cycle.
  std::int64_t cycle_vertices = 0;
};

/// Cycle rank (edges - vertices + 1) of the subgraph induced by every
/// radius-ell ball; tangle-free iff all ranks are <= 1.
TangleReport tangle_free(const LabeledGraph& graph, int ell);

/// Vertex mask of the ball of radius `radius` around v.
std::vector<char> vertex_ball(const LabeledGraph& graph, Vertex v, int radius);

/// Oriented edges by oriented distance from e: layer 0 is {e}; layer t + 1
/// holds every (u, w) with u a head of layer t and w a vertex not seen so
/// far (tail(e) counts as seen). Exact on tree-like balls.
///
/// With `removed`, an undirected edge whose two endpoints are both marked
/// is skipped.
std::vector<std::vector<EdgeId>> oriented_layers(
    const DirectedEdgeIndex& index, EdgeId e, int depth,
    const std::vector<char>* removed = nullptr);

/// Y_t(e): types of the heads of the oriented edges at oriented distance t.
TypeCountVector oriented_type_counts(const LabeledGraph& graph,
                                     const DirectedEdgeIndex& index, EdgeId e,
                                     int t);

/// S_k(e) for every e: the number of non-backtracking walks of k + 1 edges
/// starting with e, as B^k applied to the all-ones vector.
EdgeVector s_walks_all(const DirectedEdgeIndex& index, int k);
std::int64_t s_walks(const DirectedEdgeIndex& index, EdgeId e, int k);

struct WeakRamanujanBound {
  /// s_{2,k}^2.
  double lhs = 0.0;
  /// (1/m) sum_e S_k(e) - s_{1,k}^2 / m.
  double rhs = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
};

WeakRamanujanBound weak_ramanujan_bound(const DirectedEdgeIndex& index, int k);

/// P_{k,ell}(e): for t < ell and f at oriented distance t, the sum over
/// ordered pairs g != h of continuations of f leaving the ball of radius t
/// around head(e) of <phi_k, Y_t(g)> S_{ell-t-1}(h), both computed in the
/// graph without the edges of that ball. k is 1-based.
double p_functional(const LabeledGraph& graph, const DirectedEdgeIndex& index,
                    const SpectralData& data, EdgeId e, int k, int ell);

/// S_{k,ell}(e) = S_ell(e) phi_k(type(tail e)), with S_ell the size of the
/// oriented-distance layer ell.
double s_kl(const LabeledGraph& graph, const DirectedEdgeIndex& index,
            const SpectralData& data, EdgeId e, int k, int ell);

/// True when, in the graph without the undirected edge of e, the ball of
/// radius `radius` around head(e) induces a tree and does not reach
/// tail(e).
bool tree_ball(const DirectedEdgeIndex& index, EdgeId e, int radius);

/// Smallest radius of tree_ball that makes B^ell B^{*ell} x̌ (e) equal to
/// P_{k,ell}(e) + S_{k,ell}(e): 2 ell - 1.
inline int tree_identity_radius(int ell) { return 2 * ell - 1; }

inline constexpr std::int64_t kCheegerEdgeCap = 12;

struct CheegerReport {
  /// min over edge-symmetric X with 0 < V(X) < 1 of
  /// Sigma(X) / min(V(X), V(X^c)); +inf when no such X exists.
  double h = 0.0;
  /// sigma_{1,k} - sigma_{2,k}, eigenvalues of B^k P in decreasing order.
  double gap = 0.0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  /// Same minimum with Sigma weighted by x(e) x(f) instead of x(e) x̌(f).
  double h_unreflected = 0.0;
  std::int64_t subsets = 0;
};

/// Exhaustive expansion ratio over the 2^|E| edge-symmetric subsets
/// (|E| <= 12, 1 <= k <= 3).
CheegerReport cheeger_bruteforce(const DirectedEdgeIndex& index, int k);

/// Pairs (e, f) with x_{1,k}(e) x_{1,k}(f) > s_{2,k} / s_{1,k} whose tails
/// are more than k + 1 apart. Small graphs only (dense B^k P).
std::vector<std::pair<EdgeId, EdgeId>> diameter_bound_check(
    const DirectedEdgeIndex& index, int k);

/// Graph distances from `source` (-1 when unreachable).
std::vector<int> bfs_distances(const DirectedEdgeIndex& index, Vertex source);

struct InequalityCheck {
  std::string graph;
  /// "weak_ramanujan" (lhs >= rhs), "cheeger" (gap <= 2 h) or "diameter"
  /// (number of far pairs above the threshold, must be 0).
  std::string name;
  int k = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// Named small graphs (at most 12 edges each, so Cheeger is exhaustive).
std::vector<std::pair<std::string, LabeledGraph>> tiny_graph_corpus();

/// Weak Ramanujan, Cheeger and diameter checks on every corpus graph for
/// k = 1..3, each allowed `slack` (relative for the first two).
std::vector<InequalityCheck> inequality_suite(double slack = 1e-6);

}  // namespace nbspec

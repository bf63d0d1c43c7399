// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nbspec {

using Vertex = std::int32_t;
using EdgeId = std::int32_t;
/// Vertex type (community label), 0-based internally: 0 <= type < r.
using TypeLabel = std::int32_t;

/// Undirected simple graph with a type label on every vertex.
///
/// Neighbor lists are sorted; there are no self-loops and no multi-edges.
class LabeledGraph {
 public:
  LabeledGraph() = default;

  /// Builds from an undirected edge list. Throws on self-loops, duplicate
  /// edges, out-of-range vertices or type labels.
  LabeledGraph(Vertex n, int r, std::vector<TypeLabel> types,
               const std::vector<std::pair<Vertex, Vertex>>& edges);

  Vertex num_vertices() const { return static_cast<Vertex>(adj_.size()); }
  int num_types() const { return r_; }
  std::int64_t num_edges() const { return num_edges_; }

  std::span<const Vertex> neighbors(Vertex v) const { return adj_[v]; }
  int degree(Vertex v) const { return static_cast<int>(adj_[v].size()); }
  TypeLabel type(Vertex v) const { return types_[v]; }
  const std::vector<TypeLabel>& types() const { return types_; }

  bool has_edge(Vertex u, Vertex v) const;

  /// Undirected edges {u, v} with u < v in lexicographic order.
  std::vector<std::pair<Vertex, Vertex>> edge_list() const;

  friend bool operator==(const LabeledGraph&, const LabeledGraph&) = default;

 private:
  int r_ = 1;
  std::int64_t num_edges_ = 0;
  std::vector<std::vector<Vertex>> adj_;
  std::vector<TypeLabel> types_;
};

/// Enumeration of the 2|E| oriented edges of a graph.
///
/// Canonical ordering: undirected edges {u, v}, u < v, in lexicographic
/// order; edge j yields (u, v) at index 2j and (v, u) at index 2j + 1, so
/// the reversal of e is e ^ 1.
class DirectedEdgeIndex {
 public:
  DirectedEdgeIndex() = default;
  explicit DirectedEdgeIndex(const LabeledGraph& graph);

  EdgeId size() const { return static_cast<EdgeId>(tail_.size()); }
  Vertex num_vertices() const {
    return static_cast<Vertex>(out_offsets_.size()) - 1;
  }

  Vertex tail(EdgeId e) const { return tail_[e]; }
  Vertex head(EdgeId e) const { return head_[e]; }
  static EdgeId inv(EdgeId e) { return e ^ 1; }

  /// Oriented edges leaving v, ordered by head.
  std::span<const EdgeId> out_edges(Vertex v) const {
    return {out_.data() + out_offsets_[v],
            out_.data() + out_offsets_[v + 1]};
  }
  /// Oriented edges entering v: the reversals of out_edges(v).
  std::span<const EdgeId> in_edges(Vertex v) const {
    return {in_.data() + out_offsets_[v], in_.data() + out_offsets_[v + 1]};
  }
  int degree(Vertex v) const {
    return static_cast<int>(out_offsets_[v + 1] - out_offsets_[v]);
  }

  /// f with tail(f) = head(e) and head(f) != tail(e).
  std::vector<EdgeId> out_continuations(EdgeId e) const;

  /// Index of (u, v), or -1 when {u, v} is not an edge.
  EdgeId find(Vertex u, Vertex v) const;

 private:
  std::vector<Vertex> tail_;
  std::vector<Vertex> head_;
  std::vector<std::int64_t> out_offsets_;
  std::vector<EdgeId> out_;
  std::vector<EdgeId> in_;
};

/// Type-assignment mode for the block model generator.
enum class TypeAssignment {
  /// floor(n pi(i)) vertices per type, remainder to the largest fractional
  /// parts (ties to the lower type); contiguous blocks in type order.
  deterministic_proportional,
  /// i.i.d. draws from pi.
  iid,
};

/// Erdos-Renyi graph G(n, alpha / n).
LabeledGraph generate_er(Vertex n, double alpha, std::uint64_t seed);

/// Stochastic block model: an edge {u, v} is present with probability
/// min(1, W(type u, type v) / n). Pairs are visited in canonical order
/// (u < v lexicographic) with one uniform draw each.
LabeledGraph generate_sbm(const std::vector<double>& pi,
                          const std::vector<std::vector<double>>& W, Vertex n,
                          TypeAssignment assignment, std::uint64_t seed);

/// Type vector for `n` vertices under the given mode.
std::vector<TypeLabel> assign_types(const std::vector<double>& pi, Vertex n,
                                    TypeAssignment assignment,
                                    std::uint64_t seed);

/// Edge-list text format:
///   n r
///   u v          (one line per undirected edge, 0-based, u < v)
///   type v t     (one line per vertex, t in 1..r)
void write_edge_list(std::ostream& out, const LabeledGraph& graph);
LabeledGraph read_edge_list(std::istream& in);

void write_edge_list_file(const std::string& path, const LabeledGraph& graph);
LabeledGraph read_edge_list_file(const std::string& path);

/// Vertices of the 2-core (iterated removal of vertices of degree <= 1).
std::vector<bool> two_core_mask(const LabeledGraph& graph);

/// Subgraph induced by the vertices with mask[v] true, relabeled densely.
LabeledGraph induced_subgraph(const LabeledGraph& graph,
                              const std::vector<bool>& mask);

}  // namespace nbspec

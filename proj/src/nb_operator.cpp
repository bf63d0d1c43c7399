// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "nbspec/nb_operator.hpp"

#include <cmath>
#include <string>

#include "nbspec/error.hpp"

namespace nbspec {

namespace {

void require_aligned(const DirectedEdgeIndex& index, std::size_t size) {
  if (size != static_cast<std::size_t>(index.size())) {
    throw invalid_argument("edge vector has length " + std::to_string(size) +
                           ", index has " + std::to_string(index.size()) +
                           " oriented edges");
  }
}

}  // namespace

double EdgeVector::norm() const { return as_eigen().norm(); }

double EdgeVector::dot(const EdgeVector& other) const {
  if (other.size() != size()) throw invalid_argument("edge vector length mismatch");
  return as_eigen().dot(other.as_eigen());
}

void apply_B(const DirectedEdgeIndex& index, std::span<const double> x,
             std::span<double> y) {
  require_aligned(index, x.size());
  require_aligned(index, y.size());
  for (Vertex v = 0; v < index.num_vertices(); ++v) {
    double total = 0.0;
    for (EdgeId f : index.out_edges(v)) total += x[f];
    for (EdgeId e : index.in_edges(v)) {
      y[e] = total - x[DirectedEdgeIndex::inv(e)];
    }
  }
}

EdgeVector apply_B(const DirectedEdgeIndex& index, const EdgeVector& x) {
  EdgeVector y(index.size());
  apply_B(index, x.span(), y.span());
  return y;
}

void apply_Bt(const DirectedEdgeIndex& index, std::span<const double> x,
              std::span<double> y) {
  require_aligned(index, x.size());
  require_aligned(index, y.size());
  // B_{ef} = 1 iff head(e) = tail(f) and e != inv(f).
  for (Vertex v = 0; v < index.num_vertices(); ++v) {
    double total = 0.0;
    for (EdgeId e : index.in_edges(v)) total += x[e];
    for (EdgeId f : index.out_edges(v)) {
      y[f] = total - x[DirectedEdgeIndex::inv(f)];
    }
  }
}

EdgeVector apply_Bt(const DirectedEdgeIndex& index, const EdgeVector& x) {
  EdgeVector y(index.size());
  apply_Bt(index, x.span(), y.span());
  return y;
}

EdgeVector apply_B_naive(const DirectedEdgeIndex& index, const EdgeVector& x) {
  require_aligned(index, static_cast<std::size_t>(x.size()));
  EdgeVector y(index.size());
  for (EdgeId e = 0; e < index.size(); ++e) {
    double total = 0.0;
    for (EdgeId f : index.out_continuations(e)) total += x[f];
    y[e] = total;
  }
  return y;
}

EdgeVector check(const DirectedEdgeIndex& index, const EdgeVector& x) {
  require_aligned(index, static_cast<std::size_t>(x.size()));
  EdgeVector y(index.size());
  for (EdgeId e = 0; e < index.size(); ++e) y[e] = x[DirectedEdgeIndex::inv(e)];
  return y;
}

EdgeVector build_chi(const DirectedEdgeIndex& index, const LabeledGraph& graph,
                     const SpectralData& data, int k) {
  if (k < 1 || k > data.r()) {
    throw invalid_argument("chi index " + std::to_string(k) + " out of range");
  }
  if (graph.num_types() != data.r()) {
    throw invalid_argument("graph has " + std::to_string(graph.num_types()) +
                           " types, model has " + std::to_string(data.r()));
  }
  EdgeVector chi(index.size());
  for (EdgeId e = 0; e < index.size(); ++e) {
    chi[e] = data.phi(k - 1, graph.type(index.head(e)));
  }
  return chi;
}

Eigen::MatrixXd dense_B(const DirectedEdgeIndex& index, EdgeId cap) {
  if (index.size() > cap) {
    throw cap_exceeded("dense B requested for " + std::to_string(index.size()) +
                       " oriented edges (cap " + std::to_string(cap) + ")");
  }
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(index.size(), index.size());
  for (EdgeId e = 0; e < index.size(); ++e) {
    for (EdgeId f : index.out_continuations(e)) B(e, f) = 1.0;
  }
  return B;
}

namespace {

std::uint64_t count_from(const DirectedEdgeIndex& index, EdgeId current,
                         EdgeId target, int remaining) {
  if (remaining == 0) return current == target ? 1 : 0;
  std::uint64_t total = 0;
  const Vertex back = index.tail(current);
  for (EdgeId next : index.out_edges(index.head(current))) {
    if (index.head(next) == back) continue;
    total += count_from(index, next, target, remaining - 1);
  }
  return total;
}

}  // namespace

std::uint64_t count_nb_walks(const DirectedEdgeIndex& index, EdgeId e,
                             EdgeId f, int k) {
  if (k < 0 || k > 8) throw invalid_argument("walk length must be in 0..8");
  return count_from(index, e, f, k);
}

}  // namespace nbspec

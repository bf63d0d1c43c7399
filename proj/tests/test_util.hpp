// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "nbspec/graph.hpp"

namespace nbspec::testing {

inline LabeledGraph untyped(Vertex n,
                            const std::vector<std::pair<Vertex, Vertex>>& edges) {
  return LabeledGraph(n, 1, std::vector<TypeLabel>(n, 0), edges);
}

inline LabeledGraph complete_graph(Vertex n) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return untyped(n, edges);
}

inline LabeledGraph cycle_graph(Vertex n) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex u = 0; u < n; ++u) edges.emplace_back(u, (u + 1) % n);
  for (auto& [a, b] : edges) {
    if (a > b) std::swap(a, b);
  }
  return untyped(n, edges);
}

inline LabeledGraph path_graph(Vertex n) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
  return untyped(n, edges);
}

inline LabeledGraph star_graph(Vertex leaves) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return untyped(leaves + 1, edges);
}

inline LabeledGraph petersen_graph() {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex i = 0; i < 5; ++i) {
    edges.emplace_back(i, (i + 1) % 5);
    edges.emplace_back(i, i + 5);
    edges.emplace_back(5 + i, 5 + (i + 2) % 5);
  }
  for (auto& [a, b] : edges) {
    if (a > b) std::swap(a, b);
  }
  return untyped(10, edges);
}

/// Triangle 0-1-2 with a pendant path 2-3-4.
inline LabeledGraph lollipop() {
  return untyped(5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}});
}

}  // namespace nbspec::testing

#include <algorithm>
#include <complex>
#include <limits>

namespace nbspec::testing {

/// Largest distance in a greedy matching of two equally sized multisets of
/// complex numbers (each value of `a`, by decreasing modulus, takes the
/// closest unused value of `b`).
inline double spectrum_distance(std::vector<std::complex<double>> a,
                                std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::sort(a.begin(), a.end(), [](auto x, auto y) { return std::abs(x) > std::abs(y); });
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const auto& x : a) {
    std::size_t best = b.size();
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!used[j] && std::abs(x - b[j]) < dist) {
        dist = std::abs(x - b[j]);
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, dist);
  }
  return worst;
}

}  // namespace nbspec::testing

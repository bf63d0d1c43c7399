// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "nbspec/local_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nbspec/error.hpp"
#include "nbspec/spectral.hpp"

namespace nbspec {

namespace {

void require_edge(const DirectedEdgeIndex& index, EdgeId e) {
  if (e < 0 || e >= index.size()) {
    throw invalid_argument("oriented edge " + std::to_string(e) + " out of range");
  }
}

void require_k(const SpectralData& data, int k) {
  if (k < 1 || k > data.r()) {
    throw invalid_argument("eigenvector index " + std::to_string(k) +
                           " out of range");
  }
}

}  // namespace

std::vector<char> vertex_ball(const LabeledGraph& graph, Vertex v, int radius) {
  std::vector<char> in(graph.num_vertices(), 0);
  std::vector<Vertex> frontier = {v};
  in[v] = 1;
  for (int d = 0; d < radius && !frontier.empty(); ++d) {
    std::vector<Vertex> next;
    for (Vertex u : frontier) {
      for (Vertex w : graph.neighbors(u)) {
        if (!in[w]) {
          in[w] = 1;
          next.push_back(w);
        }
      }
    }
    frontier = std::move(next);
  }
  return in;
}

TangleReport tangle_free(const LabeledGraph& graph, int ell) {
  if (ell < 0) throw invalid_argument("ell must be >= 0");
  TangleReport report;
  const Vertex n = graph.num_vertices();
  std::vector<int> stamp(n, -1);
  std::vector<Vertex> ball;
  for (Vertex v = 0; v < n; ++v) {
    ball.assign(1, v);
    stamp[v] = v;
    std::size_t begin = 0;
    for (int d = 0; d < ell; ++d) {
      const std::size_t end = ball.size();
      for (std::size_t i = begin; i < end; ++i) {
        for (Vertex w : graph.neighbors(ball[i])) {
          if (stamp[w] != v) {
            stamp[w] = v;
            ball.push_back(w);
          }
        }
      }
      begin = end;
    }
    std::int64_t twice_edges = 0;
    for (Vertex u : ball) {
      for (Vertex w : graph.neighbors(u)) twice_edges += stamp[w] == v ? 1 : 0;
    }
    const std::int64_t rank =
        twice_edges / 2 - static_cast<std::int64_t>(ball.size()) + 1;
    if (rank >= 1) ++report.cycle_vertices;
    if (rank >= 2) report.offending.push_back(v);
  }
  report.tangle_free = report.offending.empty();
  return report;
}

std::vector<std::vector<EdgeId>> oriented_layers(
    const DirectedEdgeIndex& index, EdgeId e, int depth,
    const std::vector<char>* removed) {
  require_edge(index, e);
  if (depth < 0) throw invalid_argument("depth must be >= 0");
  std::vector<std::vector<EdgeId>> layers(1, std::vector<EdgeId>{e});
  std::vector<char> seen(index.num_vertices(), 0);
  seen[index.tail(e)] = 1;
  seen[index.head(e)] = 1;
  std::vector<Vertex> frontier = {index.head(e)};
  for (int t = 0; t < depth; ++t) {
    std::vector<EdgeId> layer;
    for (Vertex u : frontier) {
      for (EdgeId f : index.out_edges(u)) {
        const Vertex w = index.head(f);
        if (seen[w]) continue;
        if (removed != nullptr && (*removed)[u] && (*removed)[w]) continue;
        layer.push_back(f);
      }
    }
    frontier.clear();
    for (EdgeId f : layer) {
      const Vertex w = index.head(f);
      if (!seen[w]) {
        seen[w] = 1;
        frontier.push_back(w);
      }
    }
    layers.push_back(std::move(layer));
  }
  return layers;
}

TypeCountVector oriented_type_counts(const LabeledGraph& graph,
                                     const DirectedEdgeIndex& index, EdgeId e,
                                     int t) {
  if (t < 0) throw invalid_argument("t must be >= 0");
  TypeCountVector counts(graph.num_types(), 0);
  const auto layers = oriented_layers(index, e, t);
  for (EdgeId f : layers[t]) {
    ++counts[graph.type(index.head(f))];
  }
  return counts;
}

EdgeVector s_walks_all(const DirectedEdgeIndex& index, int k) {
  if (k < 0) throw invalid_argument("k must be >= 0");
  EdgeVector x(index.size(), 1.0);
  EdgeVector y(index.size());
  for (int s = 0; s < k; ++s) {
    apply_B(index, x.span(), y.span());
    std::swap(x, y);
  }
  return x;
}

std::int64_t s_walks(const DirectedEdgeIndex& index, EdgeId e, int k) {
  require_edge(index, e);
  return std::llround(s_walks_all(index, k)[e]);
}

WeakRamanujanBound weak_ramanujan_bound(const DirectedEdgeIndex& index, int k) {
  if (k < 1) throw invalid_argument("k must be >= 1");
  const EdgeId m = index.size();
  if (m < 2) throw invalid_argument("graph has no edges");
  const std::vector<double> s = bkp_singular_values(index, k, 2);
  const EdgeVector walks = s_walks_all(index, k);
  double total = 0.0;
  for (EdgeId e = 0; e < m; ++e) total += walks[e];
  WeakRamanujanBound out;
  out.s1 = s[0];
  out.s2 = s[1];
  out.lhs = s[1] * s[1];
  out.rhs = total / m - s[0] * s[0] / m;
  return out;
}

double p_functional(const LabeledGraph& graph, const DirectedEdgeIndex& index,
                    const SpectralData& data, EdgeId e, int k, int ell) {
  require_edge(index, e);
  require_k(data, k);
  if (ell < 1) throw invalid_argument("ell must be >= 1");
  if (graph.num_types() != data.r()) {
    throw invalid_argument("graph and model have different numbers of types");
  }
  const auto layers = oriented_layers(index, e, ell - 1);
  double total = 0.0;
  for (int t = 0; t < ell; ++t) {
    if (layers[t].empty()) break;
    const std::vector<char> ball = vertex_ball(graph, index.head(e), t);
    const int depth = std::max(t, ell - t - 1);
    for (EdgeId f : layers[t]) {
      double sum_a = 0.0;
      double sum_b = 0.0;
      double diagonal = 0.0;
      for (EdgeId g : index.out_edges(index.head(f))) {
        if (index.head(g) == index.tail(f) || ball[index.head(g)]) continue;
        const auto sub = oriented_layers(index, g, depth, &ball);
        double a = 0.0;
        for (EdgeId h : sub[t]) a += data.phi(k - 1, graph.type(index.head(h)));
        const auto b = static_cast<double>(sub[ell - t - 1].size());
        sum_a += a;
        sum_b += b;
        diagonal += a * b;
      }
      total += sum_a * sum_b - diagonal;
    }
  }
  return total;
}

double s_kl(const LabeledGraph& graph, const DirectedEdgeIndex& index,
            const SpectralData& data, EdgeId e, int k, int ell) {
  require_edge(index, e);
  require_k(data, k);
  if (ell < 0) throw invalid_argument("ell must be >= 0");
  const auto count = static_cast<double>(oriented_layers(index, e, ell)[ell].size());
  return count * data.phi(k - 1, graph.type(index.tail(e)));
}

bool tree_ball(const DirectedEdgeIndex& index, EdgeId e, int radius) {
  require_edge(index, e);
  if (radius < 0) throw invalid_argument("radius must be >= 0");
  const Vertex root = index.head(e);
  const Vertex back = index.tail(e);
  std::vector<int> depth(index.num_vertices(), -1);
  std::vector<Vertex> ball = {root};
  depth[root] = 0;
  std::size_t begin = 0;
  for (int d = 0; d < radius; ++d) {
    const std::size_t end = ball.size();
    for (std::size_t i = begin; i < end; ++i) {
      const Vertex u = ball[i];
      for (EdgeId f : index.out_edges(u)) {
        const Vertex w = index.head(f);
        if (u == root && w == back) continue;
        if (w == back) return false;
        if (depth[w] < 0) {
          depth[w] = d + 1;
          ball.push_back(w);
        }
      }
    }
    begin = end;
  }
  std::int64_t twice_edges = 0;
  for (Vertex u : ball) {
    for (EdgeId f : index.out_edges(u)) {
      if (depth[index.head(f)] >= 0) ++twice_edges;
    }
  }
  return twice_edges / 2 == static_cast<std::int64_t>(ball.size()) - 1;
}

CheegerReport cheeger_bruteforce(const DirectedEdgeIndex& index, int k) {
  const std::int64_t edges = index.size() / 2;
  if (edges > kCheegerEdgeCap) {
    throw cap_exceeded("Cheeger enumeration needs |E| <= " +
                       std::to_string(kCheegerEdgeCap) + ", got " +
                       std::to_string(edges));
  }
  if (k < 1 || k > 3) throw invalid_argument("Cheeger check needs 1 <= k <= 3");
  if (edges == 0) throw invalid_argument("graph has no edges");

  const SymmetricSpectrum spectrum = bkp_dense_spectrum(index, k);
  const Eigen::VectorXd x = spectrum.vectors.col(0);
  const EdgeId m = index.size();
  // B^k = (B^k P) P.
  const Eigen::MatrixXd bkp = dense_bkp(index, k);

  struct Term {
    EdgeId e;
    EdgeId f;
    double reflected;
    double direct;
  };
  std::vector<Term> terms;
  for (EdgeId e = 0; e < m; ++e) {
    for (EdgeId f = 0; f < m; ++f) {
      const double count = bkp(e, DirectedEdgeIndex::inv(f));
      if (count != 0.0) {
        terms.push_back({e, f, count * x[e] * x[DirectedEdgeIndex::inv(f)],
                         count * x[e] * x[f]});
      }
    }
  }

  CheegerReport report;
  report.sigma1 = spectrum.values[0];
  report.sigma2 = m > 1 ? spectrum.values[1] : spectrum.values[0];
  report.gap = report.sigma1 - report.sigma2;
  report.h = std::numeric_limits<double>::infinity();
  report.h_unreflected = std::numeric_limits<double>::infinity();

  const std::uint64_t full = (std::uint64_t{1} << edges) - 1;
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    auto inside = [mask](EdgeId e) { return (mask >> (e / 2)) & 1U; };
    double volume = 0.0;
    for (EdgeId e = 0; e < m; ++e) {
      if (inside(e)) volume += x[e] * x[e];
    }
    const double smaller = std::min(volume, 1.0 - volume);
    if (!(smaller > 1e-14)) continue;
    double sigma = 0.0;
    double sigma_direct = 0.0;
    for (const Term& term : terms) {
      if (inside(term.e) && !inside(term.f)) {
        sigma += term.reflected;
        sigma_direct += term.direct;
      }
    }
    ++report.subsets;
    report.h = std::min(report.h, sigma / smaller);
    report.h_unreflected = std::min(report.h_unreflected, sigma_direct / smaller);
  }
  return report;
}

std::vector<int> bfs_distances(const DirectedEdgeIndex& index, Vertex source) {
  std::vector<int> dist(index.num_vertices(), -1);
  std::vector<Vertex> queue = {source};
  dist[source] = 0;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const Vertex u = queue[i];
    for (EdgeId f : index.out_edges(u)) {
      const Vertex w = index.head(f);
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::vector<std::pair<EdgeId, EdgeId>> diameter_bound_check(
    const DirectedEdgeIndex& index, int k) {
  if (k < 1) throw invalid_argument("k must be >= 1");
  std::vector<std::pair<EdgeId, EdgeId>> violations;
  const EdgeId m = index.size();
  if (m == 0) return violations;
  const SymmetricSpectrum spectrum = bkp_dense_spectrum(index, k);
  std::vector<double> s(m);
  for (EdgeId i = 0; i < m; ++i) s[i] = std::fabs(spectrum.values[i]);
  std::sort(s.begin(), s.end(), std::greater<>());
  if (!(s[0] > 0.0)) return violations;
  const double threshold = (m > 1 ? s[1] : 0.0) / s[0];
  const Eigen::VectorXd x = spectrum.vectors.col(0);

  std::vector<std::vector<int>> dist(index.num_vertices());
  for (EdgeId e = 0; e < m; ++e) {
    for (EdgeId f = 0; f < m; ++f) {
      if (!(x[e] * x[f] > threshold)) continue;
      const Vertex u = index.tail(e);
      if (dist[u].empty()) dist[u] = bfs_distances(index, u);
      const int d = dist[u][index.tail(f)];
      if (d < 0 || d > k + 1) violations.emplace_back(e, f);
    }
  }
  return violations;
}

namespace {

LabeledGraph plain(Vertex n, std::vector<std::pair<Vertex, Vertex>> edges) {
  return LabeledGraph(n, 1, std::vector<TypeLabel>(n, 0), std::move(edges));
}

std::vector<std::pair<Vertex, Vertex>> ring(Vertex n) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex v = 0; v < n; ++v) e.emplace_back(v, (v + 1) % n);
  return e;
}

}  // namespace

std::vector<std::pair<std::string, LabeledGraph>> tiny_graph_corpus() {
  std::vector<std::pair<std::string, LabeledGraph>> out;
  out.emplace_back("triangle", plain(3, ring(3)));
  out.emplace_back("K4", plain(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
  out.emplace_back("C5", plain(5, ring(5)));
  out.emplace_back("C6", plain(6, ring(6)));
  out.emplace_back("lollipop", plain(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}}));
  out.emplace_back("paw", plain(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}}));
  out.emplace_back("bowtie", plain(5, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {0, 4}, {3, 4}}));
  out.emplace_back("joined_triangles",
                   plain(6, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 5}}));
  out.emplace_back("theta", plain(5, {{0, 1}, {1, 4}, {0, 2}, {2, 4}, {0, 3}, {3, 4}}));
  out.emplace_back("house", plain(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {1, 4}}));
  out.emplace_back("K23", plain(5, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}}));
  out.emplace_back("prism", plain(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3},
                                      {0, 3}, {1, 4}, {2, 5}}));
  out.emplace_back("K33", plain(6, {{0, 3}, {0, 4}, {0, 5}, {1, 3}, {1, 4}, {1, 5},
                                    {2, 3}, {2, 4}, {2, 5}}));
  out.emplace_back("cube", plain(8, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
                                     {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}}));
  out.emplace_back("two_cycles_and_tail",
                   plain(8, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 6}, {6, 3},
                             {3, 5}, {6, 7}}));
  return out;
}

std::vector<InequalityCheck> inequality_suite(double slack) {
  std::vector<InequalityCheck> out;
  for (const auto& [name, graph] : tiny_graph_corpus()) {
    const DirectedEdgeIndex index(graph);
    for (int k = 1; k <= 3; ++k) {
      const WeakRamanujanBound w = weak_ramanujan_bound(index, k);
      InequalityCheck a{name, "weak_ramanujan", k, w.lhs, w.rhs, false};
      a.pass = w.lhs >= w.rhs - slack * std::max(1.0, std::abs(w.rhs));
      out.push_back(a);

      const CheegerReport c = cheeger_bruteforce(index, k);
      InequalityCheck b{name, "cheeger", k, c.gap, 2.0 * c.h, false};
      // No admissible subset leaves the bound vacuous (h = +inf).
      b.pass = c.subsets == 0 ||
               c.gap <= b.rhs + slack * std::max(1.0, std::abs(b.rhs));
      out.push_back(b);

      const auto far = diameter_bound_check(index, k);
      InequalityCheck d{name, "diameter", k, static_cast<double>(far.size()), 0.0, far.empty()};
      out.push_back(d);
    }
  }
  return out;
}

}  // namespace nbspec

// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "nbspec/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "nbspec/error.hpp"
#include "nbspec/rng.hpp"

namespace nbspec {

namespace {

// Substreams of a generator seed.
constexpr std::uint64_t kEdgeStream = 0;
constexpr std::uint64_t kTypeStream = 1;

}  // namespace

LabeledGraph::LabeledGraph(Vertex n, int r, std::vector<TypeLabel> types,
                           const std::vector<std::pair<Vertex, Vertex>>& edges)
    : r_(r), adj_(static_cast<std::size_t>(n)), types_(std::move(types)) {
  if (n < 0) throw invalid_argument("negative vertex count");
  if (r < 1) throw invalid_argument("number of types must be >= 1");
  if (types_.size() != static_cast<std::size_t>(n)) {
    throw invalid_argument("type vector length differs from vertex count");
  }
  for (Vertex v = 0; v < n; ++v) {
    if (types_[v] < 0 || types_[v] >= r) {
      throw invalid_argument("type label of vertex " + std::to_string(v) +
                             " out of range");
    }
  }
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw invalid_argument("edge endpoint out of range");
    }
    if (u == v) {
      throw invalid_argument("self-loop at vertex " + std::to_string(u));
    }
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (auto& nb : adj_) {
    std::sort(nb.begin(), nb.end());
    if (std::adjacent_find(nb.begin(), nb.end()) != nb.end()) {
      throw invalid_argument("duplicate edge");
    }
  }
  num_edges_ = static_cast<std::int64_t>(edges.size());
}

bool LabeledGraph::has_edge(Vertex u, Vertex v) const {
  const auto& nb = adj_[u];
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::pair<Vertex, Vertex>> LabeledGraph::edge_list() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(static_cast<std::size_t>(num_edges_));
  for (Vertex u = 0; u < num_vertices(); ++u) {
    for (Vertex v : adj_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

DirectedEdgeIndex::DirectedEdgeIndex(const LabeledGraph& graph) {
  const Vertex n = graph.num_vertices();
  const auto edges = graph.edge_list();
  const auto m = static_cast<std::size_t>(2 * edges.size());
  tail_.resize(m);
  head_.resize(m);
  for (std::size_t j = 0; j < edges.size(); ++j) {
    const auto [u, v] = edges[j];
    tail_[2 * j] = u;
    head_[2 * j] = v;
    tail_[2 * j + 1] = v;
    head_[2 * j + 1] = u;
  }

  out_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t e = 0; e < m; ++e) ++out_offsets_[tail_[e] + 1];
  std::partial_sum(out_offsets_.begin(), out_offsets_.end(),
                   out_offsets_.begin());
  out_.resize(m);
  std::vector<std::int64_t> cursor(out_offsets_.begin(), out_offsets_.end() - 1);
  for (std::size_t e = 0; e < m; ++e) {
    out_[cursor[tail_[e]]++] = static_cast<EdgeId>(e);
  }
  // Bucket order is by edge index; re-sort each bucket by head.
  for (Vertex v = 0; v < n; ++v) {
    std::sort(out_.begin() + out_offsets_[v], out_.begin() + out_offsets_[v + 1],
              [this](EdgeId a, EdgeId b) { return head_[a] < head_[b]; });
  }
  in_.resize(m);
  for (std::size_t i = 0; i < m; ++i) in_[i] = inv(out_[i]);
}

std::vector<EdgeId> DirectedEdgeIndex::out_continuations(EdgeId e) const {
  std::vector<EdgeId> out;
  const Vertex back = tail(e);
  for (EdgeId f : out_edges(head(e))) {
    if (head(f) != back) out.push_back(f);
  }
  return out;
}

EdgeId DirectedEdgeIndex::find(Vertex u, Vertex v) const {
  const auto edges = out_edges(u);
  const auto it = std::lower_bound(
      edges.begin(), edges.end(), v,
      [this](EdgeId f, Vertex target) { return head_[f] < target; });
  if (it != edges.end() && head_[*it] == v) return *it;
  return -1;
}

std::vector<TypeLabel> assign_types(const std::vector<double>& pi, Vertex n,
                                    TypeAssignment assignment,
                                    std::uint64_t seed) {
  const auto r = static_cast<int>(pi.size());
  if (r == 0) throw invalid_argument("empty probability vector");
  std::vector<TypeLabel> types(static_cast<std::size_t>(n), 0);

  if (assignment == TypeAssignment::iid) {
    Rng rng(split_seed(seed, kTypeStream));
    for (auto& t : types) {
      const double u = rng.uniform();
      double acc = 0.0;
      t = r - 1;
      for (int i = 0; i < r; ++i) {
        acc += pi[i];
        if (u < acc) {
          t = i;
          break;
        }
      }
    }
    return types;
  }

  std::vector<std::int64_t> counts(r);
  std::vector<double> frac(r);
  std::int64_t assigned = 0;
  for (int i = 0; i < r; ++i) {
    const double target = static_cast<double>(n) * pi[i];
    counts[i] = static_cast<std::int64_t>(std::floor(target));
    frac[i] = target - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::vector<int> order(r);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return frac[a] > frac[b]; });
  for (std::int64_t k = 0; assigned < n; ++k, ++assigned) {
    ++counts[order[static_cast<std::size_t>(k % r)]];
  }
  std::size_t pos = 0;
  for (int i = 0; i < r; ++i) {
    for (std::int64_t c = 0; c < counts[i]; ++c) types[pos++] = i;
  }
  return types;
}

LabeledGraph generate_sbm(const std::vector<double>& pi,
                          const std::vector<std::vector<double>>& W, Vertex n,
                          TypeAssignment assignment, std::uint64_t seed) {
  const auto r = static_cast<int>(pi.size());
  if (r == 0) throw invalid_argument("number of types must be >= 1");
  if (n < 1) throw invalid_argument("vertex count must be >= 1");
  if (W.size() != pi.size()) throw invalid_argument("W must be r x r");
  for (int i = 0; i < r; ++i) {
    if (W[i].size() != pi.size()) throw invalid_argument("W must be r x r");
    for (int j = 0; j < r; ++j) {
      if (W[i][j] < 0.0) throw invalid_argument("W has a negative entry");
      if (W[i][j] != W[j][i]) throw invalid_argument("W is not symmetric");
    }
  }

  auto types = assign_types(pi, n, assignment, seed);
  std::vector<std::vector<double>> prob(r, std::vector<double>(r));
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      prob[i][j] = std::min(1.0, W[i][j] / static_cast<double>(n));
    }
  }

  Rng rng(split_seed(seed, kEdgeStream));
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex u = 0; u < n; ++u) {
    const auto& row = prob[types[u]];
    for (Vertex v = u + 1; v < n; ++v) {
      if (rng.uniform() < row[types[v]]) edges.emplace_back(u, v);
    }
  }
  return LabeledGraph(n, r, std::move(types), edges);
}

LabeledGraph generate_er(Vertex n, double alpha, std::uint64_t seed) {
  if (n < 1) throw invalid_argument("vertex count must be >= 1");
  if (!(alpha > 0.0)) throw invalid_argument("mean degree must be positive");
  if (alpha / static_cast<double>(n) > 1.0) {
    throw invalid_argument("alpha / n exceeds 1");
  }
  return generate_sbm({1.0}, {{alpha}}, n,
                      TypeAssignment::deterministic_proportional, seed);
}

void write_edge_list(std::ostream& out, const LabeledGraph& graph) {
  out << graph.num_vertices() << ' ' << graph.num_types() << '\n';
  for (const auto& [u, v] : graph.edge_list()) out << u << ' ' << v << '\n';
  for (Vertex v = 0; v < graph.num_vertices(); ++v) {
    out << "type " << v << ' ' << graph.type(v) + 1 << '\n';
  }
}

LabeledGraph read_edge_list(std::istream& in) {
  std::string line;
  Vertex n = -1;
  int r = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream header(line);
    if (!(header >> n >> r) || n < 0 || r < 1) {
      throw invalid_argument("edge list: malformed header '" + line + "'");
    }
    break;
  }
  if (n < 0) throw invalid_argument("edge list: missing header");

  std::vector<TypeLabel> types(static_cast<std::size_t>(n), 0);
  std::vector<bool> typed(static_cast<std::size_t>(n), false);
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    if (line.rfind("type", 0) == 0) {
      std::string tag;
      Vertex v;
      int t;
      if (!(fields >> tag >> v >> t) || v < 0 || v >= n || t < 1 || t > r) {
        throw invalid_argument("edge list line " + std::to_string(lineno) +
                               ": bad type record");
      }
      types[v] = t - 1;
      typed[v] = true;
    } else {
      Vertex u, v;
      if (!(fields >> u >> v)) {
        throw invalid_argument("edge list line " + std::to_string(lineno) +
                               ": bad edge record");
      }
      edges.emplace_back(std::min(u, v), std::max(u, v));
    }
  }
  if (r > 1 && std::find(typed.begin(), typed.end(), false) != typed.end()) {
    throw invalid_argument("edge list: vertex without type record");
  }
  return LabeledGraph(n, r, std::move(types), edges);
}

void write_edge_list_file(const std::string& path, const LabeledGraph& graph) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  write_edge_list(out, graph);
}

LabeledGraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  return read_edge_list(in);
}

std::vector<bool> two_core_mask(const LabeledGraph& graph) {
  const Vertex n = graph.num_vertices();
  std::vector<int> deg(static_cast<std::size_t>(n));
  std::vector<bool> alive(static_cast<std::size_t>(n), true);
  std::vector<Vertex> queue;
  for (Vertex v = 0; v < n; ++v) {
    deg[v] = graph.degree(v);
    if (deg[v] <= 1) {
      alive[v] = false;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    const Vertex v = queue.back();
    queue.pop_back();
    for (Vertex w : graph.neighbors(v)) {
      if (alive[w] && --deg[w] <= 1) {
        alive[w] = false;
        queue.push_back(w);
      }
    }
  }
  return alive;
}

LabeledGraph induced_subgraph(const LabeledGraph& graph,
                              const std::vector<bool>& mask) {
  std::vector<Vertex> relabel(static_cast<std::size_t>(graph.num_vertices()), -1);
  std::vector<TypeLabel> types;
  for (Vertex v = 0; v < graph.num_vertices(); ++v) {
    if (mask[v]) {
      relabel[v] = static_cast<Vertex>(types.size());
      types.push_back(graph.type(v));
    }
  }
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (const auto& [u, v] : graph.edge_list()) {
    if (mask[u] && mask[v]) edges.emplace_back(relabel[u], relabel[v]);
  }
  const auto n = static_cast<Vertex>(types.size());
  return LabeledGraph(n, graph.num_types(), std::move(types), edges);
}

}  // namespace nbspec

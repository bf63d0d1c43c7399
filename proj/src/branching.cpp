// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "nbspec/branching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "nbspec/error.hpp"
#include "nbspec/rng.hpp"

namespace nbspec {

namespace {

void check_k(const SpectralData& data, int k, const char* what) {
  if (k < 1 || k > data.r()) {
    throw invalid_argument(std::string(what) + ": k out of range");
  }
}

int draw_root(const SpectralData& data, int root_type, Rng& rng) {
  if (root_type == kStationaryRoot) {
    double u = rng.uniform();
    for (int i = 0; i + 1 < data.r(); ++i) {
      if (u < data.pi[i]) return i;
      u -= data.pi[i];
    }
    return data.r() - 1;
  }
  if (root_type < 0 || root_type >= data.r()) {
    throw invalid_argument("root type out of range");
  }
  return root_type;
}

// Population counts of every node at relative depths 0..height-1.
class PopTable {
 public:
  PopTable(NodeId nodes, int height, int r)
      : height_(height), r_(r),
        data_(static_cast<std::size_t>(nodes) * height * r, 0) {}
  std::int64_t* at(NodeId u, int j) {
    return data_.data() + (static_cast<std::size_t>(u) * height_ + j) * r_;
  }
  const std::int64_t* at(NodeId u, int j) const {
    return data_.data() + (static_cast<std::size_t>(u) * height_ + j) * r_;
  }
  int height() const { return height_; }

 private:
  int height_;
  int r_;
  std::vector<std::int64_t> data_;
};

// Fills rows 1.. of every node not marked `fixed` from its children, in
// reverse breadth-first order; row 0 is the node's own type.
void fill_table(const GwTree& tree, int r, PopTable& table,
                const std::vector<char>* fixed) {
  const auto& order = tree.bfs_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId u = *it;
    std::int64_t* row0 = table.at(u, 0);
    std::fill(row0, row0 + r, 0);
    row0[tree.type(u)] = 1;
    if (fixed != nullptr && (*fixed)[u]) continue;
    for (int j = 1; j < table.height(); ++j) {
      std::int64_t* row = table.at(u, j);
      std::fill(row, row + r, 0);
      for (NodeId c : tree.children(u)) {
        const std::int64_t* src = table.at(c, j - 1);
        for (int i = 0; i < r; ++i) row[i] += src[i];
      }
    }
  }
}

struct QTerms {
  double q = 0.0;
  double root_term = 0.0;
};

QTerms q_from_table(const GwTree& tree, const PopTable& table,
                    const SpectralData& data, int k, int ell) {
  const int r = data.r();
  QTerms out;
  for (NodeId u : tree.bfs_order()) {
    const int t = tree.depth(u);
    if (t >= ell) break;
    double sa = 0.0, sb = 0.0, sab = 0.0;
    for (NodeId c : tree.children(u)) {
      const std::int64_t* za = table.at(c, t);
      const std::int64_t* zb = table.at(c, ell - t - 1);
      double a = 0.0, b = 0.0;
      for (int i = 0; i < r; ++i) {
        a += data.phi(k - 1, i) * static_cast<double>(za[i]);
        b += static_cast<double>(zb[i]);
      }
      sa += a;
      sb += b;
      sab += a * b;
    }
    const double l = sa * sb - sab;
    out.q += l;
    if (t == 0) out.root_term = l;
  }
  return out;
}

QTerms q_terms(const GwTree& tree, const SpectralData& data, int k, int ell) {
  check_k(data, k, "Q");
  if (ell < 1) throw invalid_argument("Q: ell must be >= 1");
  PopTable table(tree.size(), ell, data.r());
  fill_table(tree, data.r(), table, nullptr);
  return q_from_table(tree, table, data, k, ell);
}

// Sum over the leaves of `values` in a balanced order.
double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

}  // namespace

GwTree GwTree::from_parents(std::vector<NodeId> parent, std::vector<int> type) {
  const auto n = static_cast<NodeId>(parent.size());
  if (n == 0) throw invalid_argument("tree must have a root");
  if (static_cast<NodeId>(type.size()) != n) {
    throw invalid_argument("type vector length differs from parent vector");
  }
  if (parent[0] != kNoParent) throw invalid_argument("node 0 must be the root");
  GwTree tree;
  tree.child_offset_.assign(n + 1, 0);
  for (NodeId u = 1; u < n; ++u) {
    if (parent[u] < 0 || parent[u] >= n || parent[u] == u) {
      throw invalid_argument("invalid parent link");
    }
    ++tree.child_offset_[parent[u] + 1];
  }
  for (NodeId u = 0; u < n; ++u) tree.child_offset_[u + 1] += tree.child_offset_[u];
  tree.child_list_.resize(n - 1 > 0 ? n - 1 : 0);
  std::vector<NodeId> fill(tree.child_offset_.begin(), tree.child_offset_.end() - 1);
  for (NodeId u = 1; u < n; ++u) tree.child_list_[fill[parent[u]]++] = u;

  tree.depth_.assign(n, -1);
  tree.depth_[0] = 0;
  tree.order_.reserve(n);
  tree.order_.push_back(0);
  for (std::size_t h = 0; h < tree.order_.size(); ++h) {
    const NodeId u = tree.order_[h];
    for (NodeId c = tree.child_offset_[u]; c < tree.child_offset_[u + 1]; ++c) {
      const NodeId v = tree.child_list_[c];
      tree.depth_[v] = tree.depth_[u] + 1;
      tree.order_.push_back(v);
    }
  }
  if (static_cast<NodeId>(tree.order_.size()) != n) {
    throw invalid_argument("parent links contain a cycle");
  }
  tree.parent_ = std::move(parent);
  tree.type_ = std::move(type);
  return tree;
}

int GwTree::height() const {
  return order_.empty() ? 0 : depth_[order_.back()];
}

GwTree simulate_gw(const SpectralData& data, int root_type, int depth,
                   std::uint64_t seed, const GwOptions& options) {
  if (depth < 0) throw invalid_argument("depth must be >= 0");
  Rng rng(seed);
  const int r = data.r();
  std::vector<NodeId> parent{kNoParent};
  std::vector<int> type{draw_root(data, root_type, rng)};
  NodeId begin = 0;
  for (int d = 0; d < depth; ++d) {
    const auto end = static_cast<NodeId>(parent.size());
    for (NodeId u = begin; u < end; ++u) {
      const int j = type[u];
      for (int i = 0; i < r; ++i) {
        const auto count = static_cast<NodeId>(rng.poisson(data.M(i, j)));
        if (static_cast<NodeId>(parent.size()) + count > options.max_nodes) {
          throw cap_exceeded("Galton-Watson tree exceeded the node cap of " +
                             std::to_string(options.max_nodes));
        }
        parent.insert(parent.end(), count, u);
        type.insert(type.end(), count, i);
      }
    }
    begin = end;
  }
  return GwTree::from_parents(std::move(parent), std::move(type));
}

std::vector<TypeCountVector> population_vectors(const GwTree& tree) {
  const int r = tree.size() == 0
                    ? 0
                    : *std::max_element(tree.types().begin(), tree.types().end()) + 1;
  return population_vectors(tree, r);
}

std::vector<TypeCountVector> population_vectors(const GwTree& tree, int r) {
  std::vector<TypeCountVector> z(tree.height() + 1, TypeCountVector(r, 0));
  for (NodeId u = 0; u < tree.size(); ++u) ++z[tree.depth(u)][tree.type(u)];
  return z;
}

std::vector<TypeCountVector> simulate_populations(const SpectralData& data,
                                                  int root_type, int depth,
                                                  std::uint64_t seed,
                                                  const GwOptions& options) {
  if (depth < 0) throw invalid_argument("depth must be >= 0");
  Rng rng(seed);
  const int r = data.r();
  std::vector<TypeCountVector> z(depth + 1, TypeCountVector(r, 0));
  z[0][draw_root(data, root_type, rng)] = 1;
  NodeId total = 1;
  for (int t = 0; t < depth; ++t) {
    for (int i = 0; i < r; ++i) {
      double mean = 0.0;
      for (int j = 0; j < r; ++j) mean += data.M(i, j) * static_cast<double>(z[t][j]);
      z[t + 1][i] = static_cast<std::int64_t>(rng.poisson(mean));
      total += z[t + 1][i];
    }
    if (total > options.max_nodes) {
      throw cap_exceeded("population exceeded the node cap of " +
                         std::to_string(options.max_nodes));
    }
  }
  return z;
}

double phi_dot(const SpectralData& data, int k, const TypeCountVector& z) {
  check_k(data, k, "phi_dot");
  double s = 0.0;
  for (int i = 0; i < data.r(); ++i) s += data.phi(k - 1, i) * static_cast<double>(z[i]);
  return s;
}

double martingale_X(const std::vector<TypeCountVector>& z,
                    const SpectralData& data, int k, int t) {
  check_k(data, k, "martingale_X");
  if (k > data.r0) {
    throw invalid_argument(
        "martingale_X requires k <= r0; use normalized_X_subcritical");
  }
  if (t < 0 || z.empty()) throw invalid_argument("martingale_X: bad generation");
  const double zt =
      t < static_cast<int>(z.size()) ? phi_dot(data, k, z[t]) : 0.0;
  return zt / std::pow(data.mu(k - 1), t) - phi_dot(data, k, z[0]);
}

double martingale_X(const GwTree& tree, const SpectralData& data, int k, int t) {
  return martingale_X(population_vectors(tree, data.r()), data, k, t);
}

double normalized_X_subcritical(const std::vector<TypeCountVector>& z,
                                const SpectralData& data, int k, int t) {
  check_k(data, k, "normalized_X_subcritical");
  if (k <= data.r0) {
    throw invalid_argument("normalized_X_subcritical requires k > r0");
  }
  if (t < 0 || z.empty()) throw invalid_argument("normalized_X: bad generation");
  const double zt =
      t < static_cast<int>(z.size()) ? phi_dot(data, k, z[t]) : 0.0;
  const double mu1 = data.mu(0);
  const double muk = data.mu(k - 1);
  double scale = std::pow(mu1, 0.5 * t);
  if (t > 0 && std::abs(muk * muk - mu1) <= 1e-12 * mu1) {
    scale *= std::sqrt(static_cast<double>(t));
  }
  return zt / scale;
}

double normalized_X_subcritical(const GwTree& tree, const SpectralData& data,
                                int k, int t) {
  return normalized_X_subcritical(population_vectors(tree, data.r()), data, k, t);
}

double q_enumeration(const GwTree& tree, const SpectralData& data, int k,
                     int ell) {
  check_k(data, k, "q_enumeration");
  if (ell < 1) throw invalid_argument("q_enumeration: ell must be >= 1");
  if (tree.size() > kEnumerationCap) {
    throw cap_exceeded("q_enumeration is limited to " +
                       std::to_string(kEnumerationCap) + " nodes");
  }
  const NodeId n = tree.size();
  std::vector<std::vector<NodeId>> adj(n);
  for (NodeId u = 1; u < n; ++u) {
    adj[u].push_back(tree.parent(u));
    adj[tree.parent(u)].push_back(u);
  }
  // Non-backtracking walks of `steps` more steps from `cur`, having
  // arrived from `prev`; returns the phi-weighted count of endpoints.
  auto tail_walks = [&](auto&& self, NodeId cur, NodeId prev, int steps) -> double {
    if (steps == 0) return data.phi(k - 1, tree.type(cur));
    double s = 0.0;
    for (NodeId next : adj[cur]) {
      if (next != prev) s += self(self, next, cur, steps - 1);
    }
    return s;
  };
  std::vector<NodeId> path{0};
  auto first_half = [&](auto&& self) -> double {
    const auto len = static_cast<int>(path.size()) - 1;
    if (len == ell) {
      // Step ell + 1 returns to u_{ell-1}; the remaining ell steps must not
      // reverse that step.
      const NodeId u_ell = path[ell];
      const NodeId back = path[ell - 1];
      return tail_walks(tail_walks, back, u_ell, ell);
    }
    double s = 0.0;
    const NodeId cur = path.back();
    const NodeId prev = len > 0 ? path[len - 1] : kNoParent;
    for (NodeId next : adj[cur]) {
      if (next == prev) continue;
      path.push_back(next);
      s += self(self);
      path.pop_back();
    }
    return s;
  };
  return first_half(first_half);
}

double q_recursive(const GwTree& tree, const SpectralData& data, int k,
                   int ell) {
  return q_terms(tree, data, k, ell).q;
}

double q_root_term(const GwTree& tree, const SpectralData& data, int k,
                   int ell) {
  return q_terms(tree, data, k, ell).root_term;
}

double j_statistic(const GwTree& tree, const SpectralData& data, int k,
                   int ell) {
  const QTerms terms = q_terms(tree, data, k, ell);
  const auto d = static_cast<double>(tree.children(0).size());
  return (d - 1.0) * terms.q - terms.root_term;
}

std::vector<QSample> sample_q(const SpectralData& data, const std::vector<int>& ks,
                              int ell, int root_type, std::uint64_t seed,
                              const GwOptions& options) {
  if (ell < 1) throw invalid_argument("sample_q: ell must be >= 1");
  for (int k : ks) check_k(data, k, "sample_q");
  const int r = data.r();
  GwTree tree = simulate_gw(data, root_type, ell, split_seed(seed, 0), options);

  // Subtrees hanging below depth ell enter only through their population
  // vectors at relative depths 1..ell-1; draw those directly.
  PopTable table(tree.size(), ell, r);
  std::vector<char> fixed(tree.size(), 0);
  Rng rng(split_seed(seed, 1));
  NodeId total = tree.size();
  std::vector<double> mean(r);
  for (NodeId u : tree.bfs_order()) {
    if (tree.depth(u) != ell) continue;
    fixed[u] = 1;
    std::int64_t* prev = table.at(u, 0);
    std::fill(prev, prev + r, 0);
    prev[tree.type(u)] = 1;
    for (int j = 1; j < ell; ++j) {
      std::int64_t* row = table.at(u, j);
      for (int i = 0; i < r; ++i) {
        mean[i] = 0.0;
        for (int l = 0; l < r; ++l) mean[i] += data.M(i, l) * static_cast<double>(prev[l]);
      }
      for (int i = 0; i < r; ++i) {
        row[i] = static_cast<std::int64_t>(rng.poisson(mean[i]));
        total += row[i];
      }
      if (total > options.max_nodes) {
        throw cap_exceeded("Galton-Watson tree exceeded the node cap of " +
                           std::to_string(options.max_nodes));
      }
      prev = row;
    }
  }
  fill_table(tree, r, table, &fixed);

  std::vector<QSample> out;
  out.reserve(ks.size());
  for (int k : ks) {
    const QTerms terms = q_from_table(tree, table, data, k, ell);
    QSample s;
    s.q = terms.q;
    s.root_term = terms.root_term;
    s.root_type = tree.type(0);
    s.root_children = static_cast<NodeId>(tree.children(0).size());
    out.push_back(s);
  }
  return out;
}

double sample_limit_statistic(const SpectralData& data, int k, int ell,
                              int root_type, std::uint64_t seed) {
  check_k(data, k, "sample_limit_statistic");
  if (k > data.r0) throw invalid_argument("sample_limit_statistic requires k <= r0");
  const QSample s = sample_q(data, {k}, ell, root_type, seed)[0];
  return s.j() / std::pow(data.mu(k - 1), 2 * ell);
}

double q_limit_target(const SpectralData& data, int k, int root_type) {
  check_k(data, k, "q_limit_target");
  const double mu = data.mu(k - 1);
  return mu * data.phi(k - 1, root_type) / (mu * mu / data.alpha - 1.0);
}

double limit_statistic_target(const SpectralData& data, int k, int root_type) {
  return data.alpha * q_limit_target(data, k, root_type);
}

double q_finite_mean(const SpectralData& data, int k, int ell, int root_type) {
  check_k(data, k, "q_finite_mean");
  const double mu = data.mu(k - 1);
  const double x = data.alpha / (mu * mu);
  double s = 0.0, p = 1.0;
  for (int i = 1; i <= ell; ++i) {
    p *= x;
    s += p;
  }
  return mu * data.phi(k - 1, root_type) * s;
}

MeanEstimate mean_and_se(const std::vector<double>& values) {
  MeanEstimate e;
  e.samples = static_cast<std::int64_t>(values.size());
  if (values.empty()) return e;
  const auto n = static_cast<double>(values.size());
  e.mean = pairwise_sum(values.data(), values.size()) / n;
  if (values.size() > 1) {
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      sq[i] = (values[i] - e.mean) * (values[i] - e.mean);
    }
    const double var = pairwise_sum(sq.data(), sq.size()) / (n - 1.0);
    e.se = std::sqrt(var / n);
  }
  return e;
}

MeanEstimate q_decorrelation(const SpectralData& data, int k, int j, int ell,
                             std::int64_t samples, std::uint64_t seed) {
  check_k(data, k, "q_decorrelation");
  check_k(data, j, "q_decorrelation");
  if (k == j) throw invalid_argument("q_decorrelation requires k != j");
  std::vector<double> products;
  products.reserve(samples);
  std::int64_t discarded = 0;
  for (std::int64_t s = 0; s < samples; ++s) {
    try {
      const auto q = sample_q(data, {k, j}, ell, kStationaryRoot, split_seed(seed, s));
      products.push_back(q[0].q * q[1].q);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::cap_exceeded) throw;
      ++discarded;
    }
  }
  MeanEstimate e = mean_and_se(products);
  e.discarded = discarded;
  return e;
}

double markov_field_expectation(
    const SpectralData& data, const std::vector<NodeId>& parent,
    const std::function<double(const std::vector<int>&)>& f) {
  const auto n = static_cast<int>(parent.size());
  if (n == 0 || n > 8) throw cap_exceeded("markov_field_expectation: 1..8 nodes");
  if (parent[0] != kNoParent) throw invalid_argument("node 0 must be the root");
  for (int u = 1; u < n; ++u) {
    if (parent[u] < 0 || parent[u] >= u) {
      throw invalid_argument("parents must precede their children");
    }
  }
  const int r = data.r();
  std::vector<int> types(n, 0);
  double total = 0.0;
  while (true) {
    double w = data.pi[types[0]];
    for (int u = 1; u < n; ++u) w *= data.M(types[u], types[parent[u]]) / data.alpha;
    if (w != 0.0) total += w * f(types);
    int pos = 0;
    while (pos < n && ++types[pos] == r) types[pos++] = 0;
    if (pos == n) break;
  }
  return total;
}

McCheck band_check(std::string name, const MeanEstimate& estimate,
                   double target, double z) {
  McCheck c;
  c.name = std::move(name);
  c.estimate = estimate.mean;
  c.se = estimate.se;
  c.target = target;
  c.samples = estimate.samples;
  c.discarded = estimate.discarded;
  c.pass = estimate.samples > 0 && std::abs(estimate.mean - target) <= z * estimate.se;
  return c;
}

std::vector<McCheck> run_bp_suite(const SpectralData& data,
                                  const BpSuiteOptions& options) {
  if (options.samples < 2) throw invalid_argument("bp suite needs >= 2 samples");
  if (options.ell < 1 || options.max_t < 1) {
    throw invalid_argument("bp suite needs ell >= 1 and max_t >= 1");
  }
  const int r = data.r();
  std::vector<McCheck> checks;

  // Martingales for every k <= r0, all generations from the same draws.
  {
    std::vector<std::vector<std::vector<double>>> x(
        data.r0, std::vector<std::vector<double>>(options.max_t));
    std::vector<double> sub;
    std::int64_t discarded = 0;
    for (std::int64_t s = 0; s < options.samples; ++s) {
      std::vector<TypeCountVector> z;
      try {
        z = simulate_populations(data, kStationaryRoot, options.max_t,
                                 split_seed(split_seed(options.seed, 10), s));
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::cap_exceeded) throw;
        ++discarded;
        continue;
      }
      for (int k = 1; k <= data.r0; ++k) {
        for (int t = 1; t <= options.max_t; ++t) {
          x[k - 1][t - 1].push_back(martingale_X(z, data, k, t));
        }
      }
      if (data.r0 < r) {
        sub.push_back(normalized_X_subcritical(z, data, data.r0 + 1, options.max_t));
      }
    }
    for (int k = 1; k <= data.r0; ++k) {
      for (int t = 1; t <= options.max_t; ++t) {
        MeanEstimate e = mean_and_se(x[k - 1][t - 1]);
        e.discarded = discarded;
        checks.push_back(band_check("martingale_k" + std::to_string(k) + "_t" +
                                        std::to_string(t),
                                    e, 0.0));
      }
    }
    if (!sub.empty()) {
      MeanEstimate e = mean_and_se(sub);
      e.discarded = discarded;
      // Root from pi: E <phi_k, Z_t> = mu_k^t <phi_k, pi> = 0.
      checks.push_back(band_check("subcritical_k" + std::to_string(data.r0 + 1) +
                                      "_t" + std::to_string(options.max_t),
                                  e, 0.0));
    }
  }

  // Q and J means per root type.
  std::vector<int> ks;
  for (int k = data.r0 >= 2 ? 2 : 1; k <= data.r0; ++k) ks.push_back(k);
  for (int i = 0; i < r; ++i) {
    std::vector<std::vector<double>> q(ks.size()), jv(ks.size());
    std::int64_t discarded = 0;
    for (std::int64_t s = 0; s < options.samples; ++s) {
      std::vector<QSample> draws;
      try {
        draws = sample_q(data, ks, options.ell, i,
                         split_seed(split_seed(options.seed, 20 + i), s));
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::cap_exceeded) throw;
        ++discarded;
        continue;
      }
      for (std::size_t a = 0; a < ks.size(); ++a) {
        const double scale = std::pow(data.mu(ks[a] - 1), 2 * options.ell);
        q[a].push_back(draws[a].q / scale);
        jv[a].push_back(draws[a].j() / scale);
      }
    }
    for (std::size_t a = 0; a < ks.size(); ++a) {
      const int k = ks[a];
      const std::string suffix =
          "_k" + std::to_string(k) + "_root" + std::to_string(i + 1);
      MeanEstimate eq = mean_and_se(q[a]);
      eq.discarded = discarded;
      checks.push_back(band_check("q_mean" + suffix, eq, q_limit_target(data, k, i)));
      checks.push_back(band_check("q_mean_finite_ell" + suffix, eq,
                                  q_finite_mean(data, k, options.ell, i)));
      MeanEstimate ej = mean_and_se(jv[a]);
      ej.discarded = discarded;
      checks.push_back(band_check("limit_statistic" + suffix, ej,
                                  limit_statistic_target(data, k, i)));
    }
  }

  // Decorrelation of Q_k and Q_j for the first pair of distinct indices
  // above the Perron one (or (1, 2) when r = 2).
  if (r >= 2) {
    const int k = r >= 3 ? 2 : 1;
    const int j = k + 1;
    const MeanEstimate e =
        q_decorrelation(data, k, j, std::min(options.ell, 3), options.samples,
                        split_seed(options.seed, 30));
    checks.push_back(band_check(
        "decorrelation_k" + std::to_string(k) + "_j" + std::to_string(j), e, 0.0));
  }
  return checks;
}

}  // namespace nbspec

// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "nbspec/error.hpp"
#include "nbspec/local_stats.hpp"
#include "nbspec/spectral.hpp"
#include "test_util.hpp"

using namespace nbspec;
using namespace nbspec::testing;

namespace {

EdgeVector bbstar_check(const DirectedEdgeIndex& index, const EdgeVector& chi,
                        int ell) {
  EdgeVector x = check(index, chi);
  for (int s = 0; s < ell; ++s) x = apply_Bt(index, x);
  for (int s = 0; s < ell; ++s) x = apply_B(index, x);
  return x;
}

}  // namespace

TEST_CASE("tangle-freeness") {
  const TangleReport tree = tangle_free(star_graph(5), 3);
  CHECK(tree.tangle_free);
  CHECK(tree.offending.empty());
  CHECK(tree.cycle_vertices == 0);

  const LabeledGraph bowtie = untyped(5, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {0, 4}, {3, 4}});
  const TangleReport two = tangle_free(bowtie, 2);
  CHECK_FALSE(two.tangle_free);
  CHECK(std::find(two.offending.begin(), two.offending.end(), 0) != two.offending.end());
  // Radius 1 around a non-shared vertex sees one triangle only.
  const TangleReport one = tangle_free(bowtie, 1);
  CHECK(one.offending == std::vector<Vertex>{0});

  const TangleReport triangle = tangle_free(complete_graph(3), 2);
  CHECK(triangle.tangle_free);
  CHECK(triangle.cycle_vertices == 3);
  CHECK_THROWS_AS(tangle_free(bowtie, -1), Error);
}

TEST_CASE("oriented type counts") {
  // Path 0-1-2 with types 0, 1, 1 (two types).
  const LabeledGraph path(3, 2, {0, 1, 1}, {{0, 1}, {1, 2}});
  const DirectedEdgeIndex index(path);
  const EdgeId e = index.find(0, 1);
  CHECK(oriented_type_counts(path, index, e, 0) == TypeCountVector{0, 1});
  CHECK(oriented_type_counts(path, index, e, 1) == TypeCountVector{0, 1});
  CHECK(oriented_type_counts(path, index, e, 2) == TypeCountVector{0, 0});
  CHECK(oriented_type_counts(path, index, index.find(2, 1), 1) == TypeCountVector{1, 0});

  // Tree balls: <phi_k, Y_t(e)> = (B^t chi_k)(e).
  const LabeledGraph g = generate_sbm({0.5, 0.5}, {{7, 1}, {1, 7}}, 400,
                                      TypeAssignment::deterministic_proportional, 8);
  const DirectedEdgeIndex gi(g);
  const SpectralData data = derive_spectral_data(preset("sbm-2x-7-1"));
  EdgeVector bt = build_chi(gi, g, data, 2);
  int checked = 0;
  for (int t = 0; t <= 3; ++t) {
    for (EdgeId e2 = 0; e2 < gi.size(); ++e2) {
      const TypeCountVector y = oriented_type_counts(g, gi, e2, t);
      const double total = static_cast<double>(y[0] + y[1]);
      CHECK(total == static_cast<double>(oriented_layers(gi, e2, t)[t].size()));
      if (!tree_ball(gi, e2, t)) continue;
      ++checked;
      CHECK(static_cast<double>(y[0] - y[1]) == doctest::Approx(bt[e2]).epsilon(1e-12));
      CHECK(total == static_cast<double>(s_walks(gi, e2, t)));
    }
    bt = apply_B(gi, bt);
  }
  CHECK(checked > 1000);
}

TEST_CASE("walk counts S_k") {
  const DirectedEdgeIndex tri(complete_graph(3));
  for (int k = 0; k <= 4; ++k) {
    for (EdgeId e = 0; e < tri.size(); ++e) CHECK(s_walks(tri, e, k) == 1);
  }
  const DirectedEdgeIndex k4(complete_graph(4));
  for (EdgeId e = 0; e < k4.size(); ++e) CHECK(s_walks(k4, e, 2) == 4);
  const DirectedEdgeIndex path(path_graph(4));
  CHECK(s_walks(path, path.find(1, 2), 1) == 1);
  CHECK(s_walks(path, path.find(2, 3), 1) == 0);
}

TEST_CASE("weak Ramanujan bound") {
  const WeakRamanujanBound tri = weak_ramanujan_bound(DirectedEdgeIndex(complete_graph(3)), 1);
  CHECK(tri.lhs == doctest::Approx(1.0));
  CHECK(tri.rhs == doctest::Approx(5.0 / 6.0));
  for (const LabeledGraph& g : {complete_graph(4), petersen_graph(), lollipop(),
                                generate_er(40, 3.0, 1)}) {
    const DirectedEdgeIndex index(g);
    for (int k = 1; k <= 3; ++k) {
      const WeakRamanujanBound b = weak_ramanujan_bound(index, k);
      CHECK(b.lhs >= b.rhs - 1e-6 * std::max(1.0, std::fabs(b.rhs)));
    }
  }
}

TEST_CASE("tree identity") {
  const SpectralData data = derive_spectral_data(preset("sbm-2x-7-1"));
  int nontrivial = 0;
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const LabeledGraph g = generate_sbm({0.5, 0.5}, {{7, 1}, {1, 7}}, 300,
                                        TypeAssignment::deterministic_proportional, seed);
    const DirectedEdgeIndex index(g);
    for (int ell = 1; ell <= 2; ++ell) {
      for (int k = 1; k <= 2; ++k) {
        const EdgeVector target = bbstar_check(index, build_chi(index, g, data, k), ell);
        for (EdgeId e = 0; e < index.size(); ++e) {
          if (!tree_ball(index, e, tree_identity_radius(ell))) continue;
          const double value = p_functional(g, index, data, e, k, ell) +
                               s_kl(g, index, data, e, k, ell);
          CHECK(std::fabs(value - target[e]) <= 1e-9 * std::max(1.0, std::fabs(target[e])));
          ++checked;
          if (ell == 2 && target[e] != 0.0) ++nontrivial;
        }
      }
    }
  }
  CHECK(checked > 0);
  CHECK(nontrivial > 0);
}

TEST_CASE("P and S edge cases") {
  const SpectralData data = derive_spectral_data(preset("sbm-2x-7-1"));
  // Path 0-1-2, edge into the leaf has no continuation.
  const LabeledGraph path(3, 2, {0, 1, 1}, {{0, 1}, {1, 2}});
  const DirectedEdgeIndex index(path);
  CHECK(p_functional(path, index, data, index.find(1, 2), 2, 1) == 0.0);
  CHECK(s_kl(path, index, data, index.find(1, 2), 1, 1) == 0.0);
  CHECK(s_kl(path, index, data, index.find(0, 1), 1, 1) == 1.0);
  CHECK(s_kl(path, index, data, index.find(0, 1), 2, 1) == doctest::Approx(1.0));
  CHECK(s_kl(path, index, data, index.find(2, 1), 2, 1) == doctest::Approx(-1.0));
  const LabeledGraph single(2, 2, {0, 1}, {{0, 1}});
  CHECK(s_kl(single, DirectedEdgeIndex(single), data, 0, 1, 1) == 0.0);
  CHECK_THROWS_AS(p_functional(path, index, data, 0, 1, 0), Error);
  CHECK_THROWS_AS(p_functional(path, index, data, 0, 3, 1), Error);

  // Star with c leaves, e pointing at the centre, k = 1, ell = 1:
  // (c - 1)(c - 2) ordered pairs.
  const LabeledGraph star = star_graph(5);
  const DirectedEdgeIndex si(star);
  const SpectralData er = derive_spectral_data(preset("er4"));
  CHECK(p_functional(star, si, er, si.find(1, 0), 1, 1) == 12.0);
}

TEST_CASE("tree balls") {
  const DirectedEdgeIndex tri(complete_graph(3));
  CHECK_FALSE(tree_ball(tri, 0, 2));
  CHECK(tree_ball(tri, 0, 1));
  CHECK(tree_ball(tri, 0, 0));
  const DirectedEdgeIndex star(star_graph(4));
  for (EdgeId e = 0; e < star.size(); ++e) CHECK(tree_ball(star, e, 5));
  const DirectedEdgeIndex lol(lollipop());
  CHECK(tree_ball(lol, lol.find(3, 4), 3));
  CHECK_FALSE(tree_ball(lol, lol.find(4, 3), 2));
  CHECK(tree_ball(lol, lol.find(4, 3), 1));
}

TEST_CASE("Cheeger and diameter lemmas on small graphs") {
  const LabeledGraph joined = untyped(6, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 5}});
  for (const LabeledGraph& g : {joined, complete_graph(4), cycle_graph(6), lollipop()}) {
    const DirectedEdgeIndex index(g);
    for (int k = 1; k <= 3; ++k) {
      const CheegerReport c = cheeger_bruteforce(index, k);
      CHECK(c.subsets > 0);
      CHECK(c.gap <= 2.0 * c.h + 1e-8);
      CHECK(diameter_bound_check(index, k).empty());
    }
  }
  const CheegerReport k4 = cheeger_bruteforce(DirectedEdgeIndex(complete_graph(4)), 1);
  CHECK(k4.h > 0.0);
  CHECK(k4.sigma1 == doctest::Approx(2.0));
  CHECK_THROWS_AS(cheeger_bruteforce(DirectedEdgeIndex(complete_graph(6)), 1), Error);
  // Two components: the Perron vector lives on one of them.
  const LabeledGraph two = untyped(7, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {4, 5}, {5, 6}, {3, 6}, {3, 5}});
  CHECK(diameter_bound_check(DirectedEdgeIndex(two), 1).empty());
}

TEST_CASE("inequality suite on the tiny corpus") {
  const auto corpus = tiny_graph_corpus();
  CHECK(corpus.size() >= 10);
  for (const auto& [name, g] : corpus) CHECK(g.num_edges() <= kCheegerEdgeCap);
  const auto checks = inequality_suite();
  CHECK(checks.size() == corpus.size() * 9);
  for (const InequalityCheck& c : checks) {
    INFO(c.graph << " " << c.name << " k=" << c.k << " lhs=" << c.lhs << " rhs=" << c.rhs);
    CHECK(c.pass);
  }
}

// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "nbspec/graph.hpp"
#include "nbspec/sbm_model.hpp"

namespace nbspec {

/// Real vector indexed by the oriented edges of a DirectedEdgeIndex.
class EdgeVector {
 public:
  EdgeVector() = default;
  explicit EdgeVector(EdgeId m, double value = 0.0)
      : values_(static_cast<std::size_t>(m), value) {}
  explicit EdgeVector(std::vector<double> values)
      : values_(std::move(values)) {}

  EdgeId size() const { return static_cast<EdgeId>(values_.size()); }
  double& operator[](EdgeId e) { return values_[e]; }
  double operator[](EdgeId e) const { return values_[e]; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  std::span<double> span() { return values_; }
  std::span<const double> span() const { return values_; }
  const std::vector<double>& values() const { return values_; }

  Eigen::Map<Eigen::VectorXd> as_eigen() {
    return {values_.data(), static_cast<Eigen::Index>(values_.size())};
  }
  Eigen::Map<const Eigen::VectorXd> as_eigen() const {
    return {values_.data(), static_cast<Eigen::Index>(values_.size())};
  }

  double norm() const;
  double dot(const EdgeVector& other) const;

  friend bool operator==(const EdgeVector&, const EdgeVector&) = default;

 private:
  std::vector<double> values_;
};

/// y_e = sum over continuations f of e of x_f.
///
/// Computed as y_e = T(head e) - x_{inv e} with T(v) the sum of x over the
/// edges leaving v; T is accumulated over out_edges(v) in head order, so
/// the result is bitwise deterministic.
EdgeVector apply_B(const DirectedEdgeIndex& index, const EdgeVector& x);
void apply_B(const DirectedEdgeIndex& index, std::span<const double> x,
             std::span<double> y);

/// Adjoint: y_f = sum over e with B_{ef} = 1 of x_e.
EdgeVector apply_Bt(const DirectedEdgeIndex& index, const EdgeVector& x);
void apply_Bt(const DirectedEdgeIndex& index, std::span<const double> x,
              std::span<double> y);

/// Direct double loop over continuations (reference for apply_B).
EdgeVector apply_B_naive(const DirectedEdgeIndex& index, const EdgeVector& x);

/// x̌_e = x_{inv e}.
EdgeVector check(const DirectedEdgeIndex& index, const EdgeVector& x);

/// chi_k(e) = phi_k(type(head e)); k is 1-based, k = 1 gives all ones.
EdgeVector build_chi(const DirectedEdgeIndex& index, const LabeledGraph& graph,
                     const SpectralData& data, int k);

/// Default size cap of the dense oracles.
inline constexpr EdgeId kDenseCap = 5000;

/// Explicit 0/1 matrix of B.
Eigen::MatrixXd dense_B(const DirectedEdgeIndex& index,
                        EdgeId cap = kDenseCap);

/// Number of non-backtracking walks of k + 1 edges starting with e and
/// ending with f, by exhaustive depth-first search (k <= 8).
std::uint64_t count_nb_walks(const DirectedEdgeIndex& index, EdgeId e,
                             EdgeId f, int k);

}  // namespace nbspec

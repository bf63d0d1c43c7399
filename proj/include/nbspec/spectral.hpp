// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nbspec/graph.hpp"
#include "nbspec/nb_operator.hpp"

namespace nbspec {

using Complex = std::complex<double>;

enum class SpectrumMethod { dense, companion, arnoldi };

std::string to_string(SpectrumMethod method);

struct SpectrumReport {
  /// Sorted by decreasing modulus; conjugate pairs adjacent.
  std::vector<Complex> eigenvalues;
  /// Eigenvectors for the real eigenvalues among the returned ones, in
  /// the order of `leading_values`.
  std::vector<EdgeVector> leading_vectors;
  std::vector<double> leading_values;
  /// ||B v - lambda v|| / ||v|| for every entry of `eigenvalues` (Arnoldi
  /// only; empty for the full-spectrum backends).
  std::vector<double> residuals;
  SpectrumMethod method = SpectrumMethod::dense;
  int iterations = 0;
  bool converged = true;
};

/// Sorts by decreasing modulus, ties by decreasing real part, then by
/// decreasing imaginary part.
void sort_by_modulus(std::vector<Complex>& values);

/// All m eigenvalues of B from the dense matrix (balancing, Hessenberg
/// reduction and shifted QR).
///
/// Oriented edges outside the 2-core form nilpotent diagonal blocks of a
/// block-triangular ordering of B; their eigenvalues are exactly 0 and are
/// reported as such rather than passed through QR, whose error on a
/// size-k Jordan block grows like eps^(1/k).
SpectrumReport full_spectrum_dense(const DirectedEdgeIndex& index,
                                   EdgeId cap = kDenseCap);

/// All m eigenvalues of B from the 2n x 2n companion matrix
/// [[A, -(D - I)], [I, 0]] of the Ihara-Bass determinant, plus |E| - n
/// copies of +1 and -1 (or, when |E| < n, with n - |E| eigenvalues closest
/// to +1 and to -1 removed).
///
/// With `deflate_trees` the reduction is applied to the 2-core and the
/// remaining oriented edges contribute exact zeros.
SpectrumReport full_spectrum_companion(const LabeledGraph& graph,
                                       bool deflate_trees = true);

using LinearMap = std::function<void(std::span<const double>, std::span<double>)>;

struct ArnoldiOptions {
  int count = 2;
  double tol = 1e-8;
  int max_restarts = 500;
  /// 0 selects max(30, 4 * count).
  int krylov_dim = 0;
  std::uint64_t seed = 1;
};

/// Leading eigenvalues (by modulus) of a real linear map on R^dim by
/// thick-restart Arnoldi with modified Gram-Schmidt. Vectors returned for
/// real Ritz values; residuals are recomputed with the operator.
SpectrumReport arnoldi_eigenpairs(const LinearMap& op, EdgeId dim,
                                  const ArnoldiOptions& options);

/// arnoldi_eigenpairs on x -> B x.
SpectrumReport leading_eigenpairs(const DirectedEdgeIndex& index,
                                  const ArnoldiOptions& options);

struct CandidateVector {
  EdgeVector vector;
  /// Set when the unnormalized vector had zero (or underflowed) norm; the
  /// vector is then all zeros.
  bool degenerate = false;
};

/// B^ell B^{*ell} x̌ / ||.||, with x = chi_k.
CandidateVector candidate_vector(const DirectedEdgeIndex& index,
                                 const EdgeVector& chi_k, int ell);

/// Default candidate depth max(1, round(kappa * log_alpha n)).
int default_depth(double alpha, std::int64_t n, double kappa = 0.125);

/// |<u, v>| / (||u|| ||v||). Throws on a zero vector.
double alignment(const EdgeVector& u, const EdgeVector& v);

/// Dense symmetric matrix B^k P (P the edge reversal), small graphs.
Eigen::MatrixXd dense_bkp(const DirectedEdgeIndex& index, int k,
                          EdgeId cap = kDenseCap);

struct SymmetricSpectrum {
  /// Eigenvalues sorted by decreasing signed value.
  Eigen::VectorXd values;
  /// Orthonormal eigenvectors, column j for values[j].
  Eigen::MatrixXd vectors;
};

/// Eigendecomposition of dense_bkp; the first vector is sign-fixed to have
/// a nonnegative sum (the Perron vector).
SymmetricSpectrum bkp_dense_spectrum(const DirectedEdgeIndex& index, int k,
                                     EdgeId cap = kDenseCap);

/// Predicted spectrum of B P: deg(v) - 1 for every vertex together with
/// m - n copies of -1 (m the number of oriented edges), ascending.
std::vector<double> bp_predicted_spectrum(const DirectedEdgeIndex& index);

struct BpCheck {
  /// Largest difference between the sorted computed and predicted values.
  double max_error = 0.0;
  std::vector<double> computed;
  std::vector<double> predicted;
};

/// Compares the dense symmetric eigenvalues of B P with the prediction.
BpCheck bp_identity_check(const DirectedEdgeIndex& index,
                          EdgeId cap = kDenseCap);

/// Largest `count` singular values s_{1,k} >= s_{2,k} >= ... of B^k, as
/// |eigenvalues| of the symmetric map x -> B^k x̌, by Lanczos with full
/// re-orthogonalization (restarted with a fresh orthogonal vector on
/// breakdown, so repeated values are resolved).
std::vector<double> bkp_singular_values(const DirectedEdgeIndex& index, int k,
                                        int count, double tol = 1e-10,
                                        std::uint64_t seed = 7);

}  // namespace nbspec

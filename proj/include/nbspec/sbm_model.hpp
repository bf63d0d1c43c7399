// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace nbspec {

/// Block-model parameters: type proportions pi and the symmetric
/// connectivity matrix W (edge probability W(i, j) / n).
struct SbmParams {
  std::vector<double> pi;
  Eigen::MatrixXd W;

  int r() const { return static_cast<int>(pi.size()); }
  /// Row-major copy of W.
  std::vector<std::vector<double>> w_rows() const;
};

/// Deterministic spectral quantities of a block model.
///
/// Eigenvalues of the mean progeny matrix M = diag(pi) W are sorted by
/// decreasing modulus (ties: positive first, then by original order).
/// Row k of `phi` / `psi` holds the left / right eigenvector of mu(k);
/// phi.row(0) is the all-ones vector and psi.row(0) is pi.
struct SpectralData {
  Eigen::MatrixXd M;
  double alpha = 0.0;
  Eigen::VectorXd mu;
  Eigen::MatrixXd phi;
  Eigen::MatrixXd psi;
  int r0 = 0;
  std::vector<double> pi;

  int r() const { return static_cast<int>(mu.size()); }
  /// phi_k evaluated at type i; k is 0-based (k = 0 is the Perron vector).
  double phi_at(int k, int type) const { return phi(k, type); }
};

/// Checks the parameter invariants (probability vector, symmetric
/// nonnegative W, equal column sums of M within 1e-9). Throws on violation.
void validate(const SbmParams& params);

/// Eigendecomposition through S = Pi^{1/2} W Pi^{1/2}. Requires a valid
/// parameter set with M positively regular.
SpectralData derive_spectral_data(const SbmParams& params);

/// True when mu_k^2 > mu_1, i.e. k is within the first r0 eigenvalues.
/// `k` is 1-based to match the usual numbering of the eigenvalues.
bool ks_detectable(const SpectralData& data, int k);

/// Named parameter sets: "er4", "sbm-2x-7-1", "sbm-2x-5-3" and
/// "sbm-sym(r,a,b)" (pi uniform, W_ii = a, W_ij = b).
SbmParams preset(const std::string& name);

/// Symmetric r-block model with diagonal a and off-diagonal b.
SbmParams symmetric_block_model(int r, double a, double b);

/// Params file: JSON object {"r": int, "pi": [..], "W": [row-major ..]}.
SbmParams read_params_file(const std::string& path);
SbmParams params_from_json_text(const std::string& text);
std::string params_to_json_text(const SbmParams& params);

/// A preset name, or otherwise a params file path.
SbmParams resolve_model(const std::string& preset_or_path);

}  // namespace nbspec

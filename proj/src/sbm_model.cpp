// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "nbspec/sbm_model.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "nbspec/error.hpp"

namespace nbspec {

namespace {

constexpr double kDegreeTolerance = 1e-9;

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(12);
  s << x;
  return s.str();
}

}  // namespace

std::vector<std::vector<double>> SbmParams::w_rows() const {
  std::vector<std::vector<double>> rows(W.rows(),
                                        std::vector<double>(W.cols()));
  for (Eigen::Index i = 0; i < W.rows(); ++i) {
    for (Eigen::Index j = 0; j < W.cols(); ++j) rows[i][j] = W(i, j);
  }
  return rows;
}

void validate(const SbmParams& params) {
  const int r = params.r();
  if (r == 0) throw invalid_argument("r must be >= 1");
  if (params.W.rows() != r || params.W.cols() != r) {
    throw invalid_argument("W must be " + std::to_string(r) + " x " +
                           std::to_string(r));
  }
  double total = 0.0;
  for (double p : params.pi) {
    if (!(p > 0.0)) throw invalid_argument("pi entries must be positive");
    total += p;
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    throw invalid_argument("pi sums to " + fmt(total) + ", not 1");
  }
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      if (params.W(i, j) < 0.0) throw invalid_argument("W has a negative entry");
      if (std::fabs(params.W(i, j) - params.W(j, i)) >
          1e-12 * std::max(1.0, std::fabs(params.W(i, j)))) {
        throw invalid_argument("W is not symmetric");
      }
    }
  }
  // Column sums of M = Pi W must coincide.
  std::vector<double> colsum(r, 0.0);
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < r; ++i) colsum[j] += params.pi[i] * params.W(i, j);
  }
  const auto [lo, hi] = std::minmax_element(colsum.begin(), colsum.end());
  if (*hi - *lo > kDegreeTolerance) {
    throw invalid_argument(
        "degree condition violated: column sums of M range over [" +
        fmt(*lo) + ", " + fmt(*hi) + "]");
  }
}

SpectralData derive_spectral_data(const SbmParams& params) {
  validate(params);
  const int r = params.r();
  const Eigen::Map<const Eigen::VectorXd> pi(params.pi.data(), r);

  SpectralData out;
  out.pi = params.pi;
  out.M = pi.asDiagonal() * params.W;

  // Positive regularity: some power of M strictly positive. By Wielandt's
  // bound a primitive r x r matrix has M^k > 0 for k = (r-1)^2 + 1.
  {
    const int max_power = (r - 1) * (r - 1) + 1;
    Eigen::MatrixXd pattern =
        (out.M.array() > 0.0).cast<double>().matrix();
    Eigen::MatrixXd power = pattern;
    bool positive = (power.array() > 0.0).all();
    for (int k = 2; k <= max_power && !positive; ++k) {
      power = ((power * pattern).array() > 0.0).cast<double>().matrix();
      positive = (power.array() > 0.0).all();
    }
    if (!positive) {
      throw invalid_argument("M is not positively regular: M^k has a zero entry"
                             " for every k <= " + std::to_string(max_power));
    }
  }

  const Eigen::VectorXd sqrt_pi = pi.array().sqrt();
  const Eigen::MatrixXd S =
      sqrt_pi.asDiagonal() * params.W * sqrt_pi.asDiagonal();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
  if (eig.info() != Eigen::Success) {
    throw numerical_error("eigendecomposition of S failed");
  }
  const Eigen::VectorXd& values = eig.eigenvalues();
  const Eigen::MatrixXd& vectors = eig.eigenvectors();

  std::vector<int> order(r);
  std::iota(order.begin(), order.end(), 0);
  const double scale = values.cwiseAbs().maxCoeff();
  const double tie = 1e-12 * std::max(1.0, scale);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ma = std::fabs(values[a]);
    const double mb = std::fabs(values[b]);
    if (std::fabs(ma - mb) > tie) return ma > mb;
    return values[a] > values[b] + tie;
  });

  out.mu.resize(r);
  out.phi.resize(r, r);
  out.psi.resize(r, r);
  for (int k = 0; k < r; ++k) {
    const int src = order[k];
    out.mu[k] = values[src];
    Eigen::VectorXd u = vectors.col(src);
    Eigen::VectorXd phi = u.cwiseQuotient(sqrt_pi);
    double sign = 1.0;
    for (int i = 0; i < r; ++i) {
      if (std::fabs(phi[i]) > 1e-12) {
        sign = phi[i] > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    u *= sign;
    out.phi.row(k) = u.cwiseQuotient(sqrt_pi).transpose();
    out.psi.row(k) = u.cwiseProduct(sqrt_pi).transpose();
  }
  out.alpha = out.mu[0];
  if (!(out.alpha > 0.0)) throw invalid_argument("mean degree must be positive");
  // The leading eigenvector of S is sqrt(pi) up to sign and rounding;
  // pin phi_1 and psi_1 to their exact values.
  out.phi.row(0).setOnes();
  out.psi.row(0) = pi.transpose();

  out.r0 = 0;
  for (int k = 0; k < r; ++k) {
    if (out.mu[k] * out.mu[k] > out.alpha) {
      out.r0 = k + 1;
    } else {
      break;
    }
  }
  return out;
}

bool ks_detectable(const SpectralData& data, int k) {
  if (k < 1 || k > data.r()) {
    throw invalid_argument("eigenvalue index " + std::to_string(k) +
                           " out of range 1.." + std::to_string(data.r()));
  }
  const double mu = data.mu[k - 1];
  return mu * mu > data.alpha;
}

SbmParams symmetric_block_model(int r, double a, double b) {
  if (r < 1) throw invalid_argument("sbm-sym: r must be >= 1");
  if (a < 0.0 || b < 0.0) throw invalid_argument("sbm-sym: negative entry");
  SbmParams p;
  p.pi.assign(r, 1.0 / r);
  p.W = Eigen::MatrixXd::Constant(r, r, b);
  p.W.diagonal().setConstant(a);
  return p;
}

SbmParams preset(const std::string& name) {
  if (name == "er4") {
    SbmParams p;
    p.pi = {1.0};
    p.W = Eigen::MatrixXd::Constant(1, 1, 4.0);
    return p;
  }
  if (name == "sbm-2x-7-1") return symmetric_block_model(2, 7.0, 1.0);
  if (name == "sbm-2x-5-3") return symmetric_block_model(2, 5.0, 3.0);

  static const std::regex sym(
      R"(sbm-sym\(\s*(\d+)\s*,\s*([0-9.eE+-]+)\s*,\s*([0-9.eE+-]+)\s*\))");
  std::smatch match;
  if (std::regex_match(name, match, sym)) {
    try {
      return symmetric_block_model(std::stoi(match[1]), std::stod(match[2]),
                                   std::stod(match[3]));
    } catch (const std::logic_error&) {
      throw invalid_argument("malformed preset '" + name + "'");
    }
  }
  throw invalid_argument("unknown preset '" + name + "'");
}

SbmParams params_from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw invalid_argument(std::string("params: ") + e.what());
  }
  try {
    const int r = doc.at("r").get<int>();
    if (r < 1) throw invalid_argument("params: r must be >= 1");
    SbmParams p;
    p.pi = doc.at("pi").get<std::vector<double>>();
    const auto w = doc.at("W").get<std::vector<double>>();
    if (static_cast<int>(p.pi.size()) != r) {
      throw invalid_argument("params: pi must have r entries");
    }
    if (static_cast<int>(w.size()) != r * r) {
      throw invalid_argument("params: W must have r*r entries");
    }
    p.W.resize(r, r);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < r; ++j) p.W(i, j) = w[i * r + j];
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw invalid_argument(std::string("params: ") + e.what());
  }
}

std::string params_to_json_text(const SbmParams& params) {
  nlohmann::json doc;
  doc["r"] = params.r();
  doc["pi"] = params.pi;
  std::vector<double> w;
  for (int i = 0; i < params.r(); ++i) {
    for (int j = 0; j < params.r(); ++j) w.push_back(params.W(i, j));
  }
  doc["W"] = w;
  return doc.dump(2);
}

SbmParams read_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open params file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return params_from_json_text(buffer.str());
}

SbmParams resolve_model(const std::string& preset_or_path) {
  if (std::filesystem::is_regular_file(preset_or_path)) {
    return read_params_file(preset_or_path);
  }
  if (preset_or_path.find(".json") != std::string::npos ||
      preset_or_path.find('/') != std::string::npos) {
    throw io_error("cannot read params file '" + preset_or_path + "'");
  }
  return preset(preset_or_path);
}

}  // namespace nbspec

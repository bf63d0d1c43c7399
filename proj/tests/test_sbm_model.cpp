// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "nbspec/error.hpp"
#include "nbspec/sbm_model.hpp"

using namespace nbspec;
using doctest::Approx;

namespace {

SbmParams make(std::vector<double> pi, std::vector<std::vector<double>> w) {
  SbmParams p;
  p.pi = std::move(pi);
  const int r = p.r();
  p.W.resize(r, r);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) p.W(i, j) = w[i][j];
  }
  return p;
}

void check_eigen_relations(const SbmParams& params) {
  const SpectralData d = derive_spectral_data(params);
  const int r = d.r();
  const Eigen::Map<const Eigen::VectorXd> pi(d.pi.data(), r);
  for (int k = 0; k < r; ++k) {
    const Eigen::VectorXd phi = d.phi.row(k).transpose();
    const Eigen::VectorXd psi = d.psi.row(k).transpose();
    CHECK((d.M * psi - d.mu[k] * psi).norm() < 1e-10);
    CHECK((d.M.transpose() * phi - d.mu[k] * phi).norm() < 1e-10);
    for (int j = 0; j < r; ++j) {
      const double expected = j == k ? 1.0 : 0.0;
      CHECK(d.phi.row(j).dot(d.psi.row(k)) == Approx(expected).epsilon(1e-10));
      CHECK((d.phi.row(j).transpose().cwiseProduct(pi)).dot(phi) ==
            Approx(expected).epsilon(1e-10));
    }
    if (k > 0) CHECK(std::fabs(d.mu[k]) <= std::fabs(d.mu[k - 1]) + 1e-12);
  }
  CHECK(d.phi.row(0).isOnes());
  CHECK((d.psi.row(0).transpose() - pi).norm() == 0.0);
}

}  // namespace

TEST_CASE("two-block preset") {
  const SpectralData d = derive_spectral_data(preset("sbm-2x-7-1"));
  CHECK(d.alpha == Approx(4.0));
  CHECK(d.mu[1] == Approx(3.0));
  CHECK(d.r0 == 2);
  CHECK(d.phi(1, 0) == Approx(1.0));
  CHECK(d.phi(1, 1) == Approx(-1.0));
  CHECK(d.psi(1, 0) == Approx(0.5));
  CHECK(d.psi(1, 1) == Approx(-0.5));
  CHECK(ks_detectable(d, 1));
  CHECK(ks_detectable(d, 2));
  CHECK_THROWS_AS(ks_detectable(d, 3), Error);
  CHECK_THROWS_AS(ks_detectable(d, 0), Error);

  const SpectralData below = derive_spectral_data(preset("sbm-2x-5-3"));
  CHECK(below.mu[1] == Approx(1.0));
  CHECK(below.r0 == 1);
  CHECK_FALSE(ks_detectable(below, 2));
}

TEST_CASE("single type and symmetric presets") {
  const SpectralData er = derive_spectral_data(preset("er4"));
  CHECK(er.r() == 1);
  CHECK(er.alpha == 4.0);
  CHECK(er.r0 == 1);

  const SpectralData sym = derive_spectral_data(preset("sbm-sym(3,6,1)"));
  CHECK(sym.alpha == Approx(8.0 / 3.0));
  CHECK(sym.mu[1] == Approx(5.0 / 3.0));
  CHECK(sym.mu[2] == Approx(5.0 / 3.0));
  CHECK(sym.r0 == 3);
  CHECK(derive_spectral_data(preset("sbm-sym( 4 , 3.5 , 0.5 )")).r() == 4);
  CHECK_THROWS_AS(preset("sbm-sym(3,6)"), Error);
  CHECK_THROWS_AS(preset("nope"), Error);
}

TEST_CASE("eigen relations") {
  check_eigen_relations(preset("sbm-2x-7-1"));
  check_eigen_relations(preset("sbm-sym(3,6,1)"));
  check_eigen_relations(preset("sbm-sym(5,9,1)"));
  // Unequal block sizes: M has eigenvalues 6.5 and 4.5.
  const SbmParams skew = make({0.25, 0.75}, {{20, 2}, {2, 8}});
  check_eigen_relations(skew);
  const SpectralData d = derive_spectral_data(skew);
  CHECK(d.mu[0] == Approx(6.5));
  CHECK(d.mu[1] == Approx(4.5));
  CHECK(d.r0 == 2);
  // Negative second eigenvalue (disassortative).
  const SpectralData dis = derive_spectral_data(make({0.5, 0.5}, {{1, 7}, {7, 1}}));
  CHECK(dis.mu[1] == Approx(-3.0));
  CHECK(dis.r0 == 2);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate(make({0.5, 0.6}, {{1, 1}, {1, 1}})), Error);
  CHECK_THROWS_AS(validate(make({0.5, 0.5}, {{1, 2}, {1, 1}})), Error);
  CHECK_THROWS_AS(validate(make({0.5, 0.5}, {{-1, 1}, {1, -1}})), Error);
  CHECK_THROWS_AS(validate(make({0.0, 1.0}, {{1, 1}, {1, 1}})), Error);
  // Degree condition: column sums 4 and 2.5.
  CHECK_THROWS_AS(validate(make({0.5, 0.5}, {{7, 1}, {1, 4}})), Error);
  // Periodic and reducible mean matrices.
  CHECK_THROWS_AS(derive_spectral_data(make({0.5, 0.5}, {{0, 2}, {2, 0}})), Error);
  CHECK_THROWS_AS(derive_spectral_data(make({0.5, 0.5}, {{4, 0}, {0, 4}})), Error);
  // Zero diagonal but primitive for three types.
  CHECK_NOTHROW(derive_spectral_data(make({1.0 / 3, 1.0 / 3, 1.0 / 3},
                                          {{0, 3, 3}, {3, 0, 3}, {3, 3, 0}})));
}

TEST_CASE("params files") {
  const SbmParams p = preset("sbm-2x-7-1");
  const SbmParams q = params_from_json_text(params_to_json_text(p));
  CHECK(q.pi == p.pi);
  CHECK(q.W == p.W);

  const auto path = std::filesystem::temp_directory_path() / "nbspec_params.json";
  {
    std::ofstream out(path);
    out << R"({"r": 2, "pi": [0.25, 0.75], "W": [20, 2, 2, 8]})";
  }
  const SbmParams f = resolve_model(path.string());
  CHECK(f.W(0, 0) == 20.0);
  CHECK(f.pi[1] == 0.75);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(params_from_json_text("{"), Error);
  CHECK_THROWS_AS(params_from_json_text(R"({"r": 2, "pi": [1], "W": [1]})"), Error);
  CHECK_THROWS_AS(params_from_json_text(R"({"r": 1, "pi": [1]})"), Error);
  CHECK_THROWS_AS(read_params_file("/nonexistent.json"), Error);
}

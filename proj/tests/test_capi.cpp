// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "nbspec.h"

namespace {

struct ModelPtr {
  nbspec_model* p = nullptr;
  ~ModelPtr() { nbspec_model_free(p); }
};
struct GraphPtr {
  nbspec_graph* p = nullptr;
  ~GraphPtr() { nbspec_graph_free(p); }
};

std::vector<std::complex<double>> spectrum(const nbspec_graph* g, const char* method) {
  size_t count = 0;
  REQUIRE(nbspec_spectrum(g, method, nullptr, nullptr, &count) == NBSPEC_OK);
  std::vector<double> re(count), im(count);
  REQUIRE(nbspec_spectrum(g, method, re.data(), im.data(), &count) == NBSPEC_OK);
  std::vector<std::complex<double>> out;
  for (size_t i = 0; i < count; ++i) out.emplace_back(re[i], im[i]);
  return out;
}

}  // namespace

TEST_CASE("model handles") {
  ModelPtr m;
  REQUIRE(nbspec_model_create("sbm-2x-7-1", &m.p) == NBSPEC_OK);
  int r = 0, r0 = 0;
  double alpha = 0;
  REQUIRE(nbspec_model_info(m.p, &r, &r0, &alpha) == NBSPEC_OK);
  CHECK(r == 2);
  CHECK(r0 == 2);
  CHECK(alpha == doctest::Approx(4.0));
  double mu2 = 0;
  REQUIRE(nbspec_model_eigenvalue(m.p, 2, &mu2) == NBSPEC_OK);
  CHECK(mu2 == doctest::Approx(3.0));
  CHECK(nbspec_model_eigenvalue(m.p, 3, &mu2) == NBSPEC_INVALID_ARGUMENT);
  CHECK(std::string(nbspec_last_error()).size() > 0);

  ModelPtr j;
  REQUIRE(nbspec_model_from_json(R"({"r": 2, "pi": [0.5, 0.5], "W": [5, 3, 3, 5]})", &j.p) ==
          NBSPEC_OK);
  REQUIRE(nbspec_model_info(j.p, nullptr, &r0, &alpha) == NBSPEC_OK);
  CHECK(alpha == doctest::Approx(4.0));
  CHECK(r0 == 1);

  nbspec_model* bad = nullptr;
  CHECK(nbspec_model_create("no-such-model", &bad) == NBSPEC_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
  CHECK(nbspec_model_from_json("{not json", &bad) == NBSPEC_INVALID_ARGUMENT);
  CHECK(nbspec_model_create(nullptr, &bad) == NBSPEC_INVALID_ARGUMENT);
}

TEST_CASE("K4 spectrum through the C API") {
  {
    std::ofstream f("capi_k4.txt");
    f << "4 1\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
  }
  GraphPtr g;
  REQUIRE(nbspec_graph_read("capi_k4.txt", &g.p) == NBSPEC_OK);
  CHECK(nbspec_graph_num_vertices(g.p) == 4);
  CHECK(nbspec_graph_num_edges(g.p) == 6);

  // From lambda^2 - a lambda + 2 = 0 over the adjacency eigenvalues
  // a = 3, -1, -1, -1, plus |E| - n copies of +1 and -1.
  const double s7 = std::sqrt(7.0) / 2.0;
  std::vector<std::complex<double>> expected{{2, 0}, {1, 0}, {1, 0}, {1, 0}, {-1, 0}, {-1, 0}};
  for (int i = 0; i < 3; ++i) {
    expected.emplace_back(-0.5, s7);
    expected.emplace_back(-0.5, -s7);
  }
  auto key = [](const std::complex<double>& z) {
    return std::make_tuple(std::round(z.real() * 1e6), std::round(z.imag() * 1e6));
  };
  auto by_key = [&](const auto& a, const auto& b) { return key(a) < key(b); };
  std::sort(expected.begin(), expected.end(), by_key);
  for (const char* method : {"dense", "companion", "auto"}) {
    auto got = spectrum(g.p, method);
    REQUIRE(got.size() == expected.size());
    CHECK(std::abs(got[0] - std::complex<double>(2, 0)) < 1e-9);
    std::sort(got.begin(), got.end(), by_key);
    for (size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - expected[i]) < 1e-6);
  }

  double re[2], im[2];
  REQUIRE(nbspec_leading_eigenvalues(g.p, 1, 1e-10, 7, re, im) == NBSPEC_OK);
  CHECK(re[0] == doctest::Approx(2.0));
  CHECK(im[0] == doctest::Approx(0.0));

  size_t small = 3;
  CHECK(nbspec_spectrum(g.p, "dense", re, im, &small) == NBSPEC_INVALID_ARGUMENT);
  size_t count = 0;
  CHECK(nbspec_spectrum(g.p, "qr", nullptr, nullptr, &count) == NBSPEC_INVALID_ARGUMENT);
  std::remove("capi_k4.txt");
}

TEST_CASE("graph I/O errors and round trip") {
  nbspec_graph* g = nullptr;
  CHECK(nbspec_graph_read("does/not/exist.txt", &g) == NBSPEC_IO);
  CHECK(g == nullptr);
  {
    std::ofstream f("capi_bad.txt");
    f << "3 1\n0 7\n";
  }
  CHECK(nbspec_graph_read("capi_bad.txt", &g) == NBSPEC_INVALID_ARGUMENT);
  std::remove("capi_bad.txt");

  ModelPtr m;
  REQUIRE(nbspec_model_create("er4", &m.p) == NBSPEC_OK);
  GraphPtr a;
  REQUIRE(nbspec_graph_generate(m.p, 200, 3, &a.p) == NBSPEC_OK);
  REQUIRE(nbspec_graph_write(a.p, "capi_rt.txt") == NBSPEC_OK);
  GraphPtr b;
  REQUIRE(nbspec_graph_read("capi_rt.txt", &b.p) == NBSPEC_OK);
  CHECK(nbspec_graph_num_edges(a.p) == nbspec_graph_num_edges(b.p));
  CHECK(spectrum(a.p, "companion") == spectrum(b.p, "companion"));
  std::remove("capi_rt.txt");
  CHECK(nbspec_graph_generate(m.p, 0, 3, &g) == NBSPEC_INVALID_ARGUMENT);
  CHECK(nbspec_graph_num_vertices(nullptr) == -1);
}

TEST_CASE("detection through the C API") {
  ModelPtr m;
  REQUIRE(nbspec_model_create("sbm-2x-7-1", &m.p) == NBSPEC_OK);
  GraphPtr g;
  REQUIRE(nbspec_graph_generate(m.p, 2000, 11, &g.p) == NBSPEC_OK);
  std::vector<int> labels(2000, -1);
  double ov = 0;
  REQUIRE(nbspec_detect(g.p, m.p, 2, 5, labels.data(), &ov) == NBSPEC_OK);
  CHECK(ov > 0.2);
  CHECK(std::all_of(labels.begin(), labels.end(), [](int l) { return l == 0 || l == 1; }));
  CHECK(nbspec_detect(g.p, m.p, 0, 5, labels.data(), &ov) == NBSPEC_INVALID_ARGUMENT);
}

TEST_CASE("run_command") {
  char* summary = nullptr;
  REQUIRE(nbspec_run_command("generate",
                             R"({"model": "er4", "n": 30, "seeds": [4], "out": "capi_out"})",
                             &summary) == NBSPEC_OK);
  REQUIRE(summary != nullptr);
  CHECK(std::string(summary).find("graph_4.txt") != std::string::npos);
  nbspec_string_free(summary);
  CHECK(std::ifstream("capi_out/graph_4.txt").good());

  CHECK(nbspec_run_command("generate", R"({"bogus": 1})", &summary) == NBSPEC_INVALID_ARGUMENT);
  CHECK(summary == nullptr);
  CHECK(std::string(nbspec_last_error()).find("bogus") != std::string::npos);
  CHECK(nbspec_run_command("frobnicate", "{}", &summary) == NBSPEC_INVALID_ARGUMENT);
  CHECK(nbspec_run_command("spectrum", R"({"n": 0})", &summary) == NBSPEC_INVALID_ARGUMENT);
  CHECK(nbspec_run_command("spectrum", "[1", &summary) == NBSPEC_INVALID_ARGUMENT);
}

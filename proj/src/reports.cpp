// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "nbspec/reports.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "nbspec/error.hpp"

namespace nbspec {

Json to_json(const McCheck& check) {
  return Json{{"name", check.name},     {"estimate", check.estimate},
              {"se", check.se},         {"target", check.target},
              {"pass", check.pass},     {"samples", check.samples},
              {"discarded", check.discarded}};
}

Json to_json(const OverlapReport& report) {
  Json perm = Json::array();
  for (int p : report.best_permutation) perm.push_back(p + 1);
  return Json{{"overlap", report.overlap},
              {"agreement", report.agreement},
              {"best_permutation", perm}};
}

Json to_json(const SignEstimate& sign) {
  return Json{{"sign", to_string(sign.sign)},
              {"empirical", sign.empirical},
              {"reference", sign.reference},
              {"reference_se", sign.reference_se}};
}

Json to_json(const DetectionResult& result) {
  Json j{{"attempted", result.attempted}, {"overlap", to_json(result.overlap)}};
  if (!result.note.empty()) j["note"] = result.note;
  if (result.attempted) {
    j["eigenvalue"] = result.eigenvalue;
    j["t0"] = result.t0;
    j["tau"] = result.tau;
    j["scale"] = result.scale;
    j["sign"] = to_json(result.sign);
  }
  return j;
}

Json to_json(const TangleReport& report) {
  return Json{{"tangle_free", report.tangle_free},
              {"offending", report.offending},
              {"cycle_vertices", report.cycle_vertices}};
}

Json to_json(const WeakRamanujanBound& bound) {
  return Json{{"lhs", bound.lhs}, {"rhs", bound.rhs}, {"s1", bound.s1},
              {"s2", bound.s2}, {"holds", bound.lhs >= bound.rhs}};
}

Json to_json(const InequalityCheck& check) {
  return Json{{"graph", check.graph}, {"name", check.name}, {"k", check.k},
              {"lhs", check.lhs},     {"rhs", check.rhs},   {"pass", check.pass}};
}

Json to_json(const SpectralData& data) {
  Json mu = Json::array();
  for (Eigen::Index i = 0; i < data.mu.size(); ++i) mu.push_back(data.mu(i));
  Json m = Json::array();
  for (Eigen::Index i = 0; i < data.M.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < data.M.cols(); ++j) row.push_back(data.M(i, j));
    m.push_back(row);
  }
  return Json{{"alpha", data.alpha}, {"mu", mu}, {"r0", data.r0},
              {"pi", data.pi},       {"M", m}};
}

std::string dump_json(const Json& value) { return value.dump(2) + "\n"; }

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string spectrum_csv(const std::vector<Complex>& values,
                         const std::string& comment) {
  std::ostringstream out;
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "re,im\n";
  for (const Complex& z : values) {
    // Normalize -0 so repeated runs compare equal byte for byte.
    const double re = z.real() == 0.0 ? 0.0 : z.real();
    const double im = z.imag() == 0.0 ? 0.0 : z.imag();
    out << format_double(re) << ',' << format_double(im) << '\n';
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw io_error("write failed for '" + path + "'");
}

}  // namespace nbspec

// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "nbspec/branching.hpp"
#include "nbspec/detection.hpp"
#include "nbspec/local_stats.hpp"
#include "nbspec/sbm_model.hpp"
#include "nbspec/spectral.hpp"

namespace nbspec {

/// Object keys are kept sorted (std::map), so dumps are diffable.
using Json = nlohmann::json;

Json to_json(const McCheck& check);
Json to_json(const OverlapReport& report);
Json to_json(const SignEstimate& sign);
/// Everything except the label vector.
Json to_json(const DetectionResult& result);
Json to_json(const TangleReport& report);
Json to_json(const WeakRamanujanBound& bound);
Json to_json(const InequalityCheck& check);
/// alpha, mu, r0, pi, M.
Json to_json(const SpectralData& data);

/// Two-space indented dump with a trailing newline. Non-finite numbers
/// are written as null.
std::string dump_json(const Json& value);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

/// `re,im` rows, one per eigenvalue, after the header. `comment` (if not
/// empty) is written first as a `# ` line.
std::string spectrum_csv(const std::vector<Complex>& values,
                         const std::string& comment = "");

/// Writes `content` to `path`, replacing it. Throws io_error.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace nbspec

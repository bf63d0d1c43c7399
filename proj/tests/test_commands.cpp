// Copyright 2026 The nbspec Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nbspec/commands.hpp"
#include "nbspec/error.hpp"

using namespace nbspec;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string without_first_line(const std::string& text) {
  return text.substr(text.find('\n') + 1);
}

}  // namespace

TEST_CASE("config round trip and validation") {
  RunConfig c;
  c.model = "sbm-2x-5-3";
  c.seeds = {3, 1, 7};
  c.ell = 2;
  c.tau_given = true;
  c.tau = -0.25;
  const RunConfig back = config_from_json(config_to_json(c));
  CHECK(back.model == c.model);
  CHECK(back.seeds == c.seeds);
  CHECK(back.ell == 2);
  CHECK(back.tau_given);
  CHECK(back.tau == -0.25);
  CHECK(config_to_json(back) == config_to_json(c));

  CHECK_THROWS_AS(config_from_json(Json{{"nn", 3}}), Error);
  CHECK_THROWS_AS(config_from_json(Json{{"n", "ten"}}), Error);
  CHECK_THROWS_AS(config_from_json(Json::array()), Error);
  RunConfig bad;
  bad.seeds = {1, 1};
  CHECK_THROWS_AS(validate(bad), Error);
  bad = RunConfig{};
  bad.kappa = 0.5;
  CHECK_THROWS_AS(validate(bad), Error);
  bad.ell = 3;
  CHECK_NOTHROW(validate(bad));
  bad = RunConfig{};
  bad.method = "qr";
  CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("resolve_ell") {
  RunConfig c;
  CHECK(resolve_ell(c, 4.0, 4096) == 1);  // 0.125 * 6 = 0.75
  c.kappa = 0.4;
  CHECK(resolve_ell(c, 4.0, 4096) == 2);  // 2.4
  c.ell = 0;
  CHECK(resolve_ell(c, 4.0, 4096) == 0);
}

TEST_CASE("outputs do not depend on the worker count") {
  const auto root = std::filesystem::temp_directory_path() / "nbspec_commands_test";
  std::filesystem::remove_all(root);
  RunConfig c;
  c.n = 400;
  c.seeds = {5, 6, 7};
  c.samples = 100;
  c.mc_ell = 3;
  c.threads = 1;
  c.out = (root / "one").string();
  const CommandResult one = cmd_detect(c);
  c.threads = 2;
  c.out = (root / "two").string();
  const CommandResult two = cmd_detect(c);
  CHECK(one.summary["runs"].dump() == two.summary["runs"].dump());
  CHECK(one.summary["mean_overlap"] == two.summary["mean_overlap"]);
  for (int seed : {5, 6, 7}) {
    const std::string name = "assignment_" + std::to_string(seed) + ".csv";
    const std::string a = slurp(root / "one" / name);
    CHECK(a.rfind("# seed=" + std::to_string(seed) + " config=", 0) == 0);
    CHECK(without_first_line(a) == without_first_line(slurp(root / "two" / name)));
  }
  CHECK(one.files.size() == 7);

  c.out = (root / "gen").string();
  const CommandResult gen = cmd_generate(c);
  RunConfig from_file = c;
  from_file.graph = (root / "gen" / "graph_5.txt").string();
  from_file.seeds = {1};
  from_file.out = (root / "spec").string();
  const CommandResult spec = cmd_spectrum(from_file);
  CHECK(spec.summary["runs"][0]["n"] == 400);
  CHECK(spec.summary["runs"][0]["m"] == 2 * gen.summary["runs"][0]["edges"].get<int>());
  std::filesystem::remove_all(root);
}

TEST_CASE("unwritable output directory") {
  const auto file = std::filesystem::temp_directory_path() / "nbspec_not_a_dir";
  std::ofstream(file) << "x";
  RunConfig c;
  c.n = 20;
  c.out = (file / "sub").string();
  try {
    cmd_generate(c);
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::io);
  }
  std::filesystem::remove(file);
}

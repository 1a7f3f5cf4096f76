// Copyright 2026 The sqdrift Authors
// SPDX-License-Identifier: Apache-2.0
//
// Drives the installed CLI binary end to end: subcommands, output files and
// the documented exit codes (parse=2, scale=3, convergence=4, io=5).

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

struct CommandResult {
  int exit_code;
  std::string output;
};

CommandResult run_cli(const std::string& args) {
  const std::string out_file =
      (fs::temp_directory_path() / "sqdrift_cli_capture.txt").string();
  const std::string command =
      std::string(SQDRIFT_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
  const int status = std::system(command.c_str());
  std::ifstream in(out_file);
  std::string output((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return {WEXITSTATUS(status), output};
}

}  // namespace

TEST(Cli, FciSubcommandPrintsOracleEnergy) {
  const auto res = run_cli("fci " + testutil::fixture_path("h2_sto3g.fcidump"));
  EXPECT_EQ(res.exit_code, 0);
  const auto ref = testutil::load_reference("h2_sto3g.ref.json");
  char expect[64];
  std::snprintf(expect, sizeof(expect), "%.9f", ref["fci_energy"].get<double>());
  EXPECT_NE(res.output.find("E_FCI"), std::string::npos);
  EXPECT_NE(res.output.find(expect), std::string::npos) << res.output;
}

TEST(Cli, MapSubcommandDumpsTerms) {
  const auto res = run_cli("map " + testutil::fixture_path("h2_sto3g.fcidump"));
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_NE(res.output.find("IIII"), std::string::npos);
  EXPECT_NE(res.output.find("lambda"), std::string::npos);
  const auto interleaved = run_cli("map --ordering interleaved " +
                                   testutil::fixture_path("h2_sto3g.fcidump"));
  EXPECT_EQ(interleaved.exit_code, 0);
  EXPECT_NE(interleaved.output, res.output);
}

TEST(Cli, RunSubcommandWritesReports) {
  const auto dir = (fs::temp_directory_path() / "sqdrift_cli_run").string();
  fs::remove_all(dir);
  const auto config_path = (fs::temp_directory_path() / "sqdrift_cli_cfg.json").string();
  {
    nlohmann::json cfg{{"input", testutil::fixture_path("h2_sto3g.fcidump")},
                       {"method", "skqd-exact"},
                       {"krylov_depth", 2},
                       {"shots", 2000},
                       {"realizations", 1},
                       {"seed", 11}};
    std::ofstream out(config_path);
    out << cfg.dump(2);
  }
  const auto res = run_cli("run " + config_path + " --out-dir " + dir);
  EXPECT_EQ(res.exit_code, 0) << res.output;
  EXPECT_TRUE(fs::exists(fs::path(dir) / "result.json"));
  EXPECT_TRUE(fs::exists(fs::path(dir) / "convergence.csv"));
  EXPECT_TRUE(fs::exists(fs::path(dir) / "plotdata.csv"));
  // --seed must override the config value.
  const auto res2 = run_cli("run " + config_path + " --seed 99 --out-dir " + dir + "_b");
  EXPECT_EQ(res2.exit_code, 0);
  std::ifstream a(fs::path(dir) / "result.json"), b(fs::path(dir + "_b") / "result.json");
  nlohmann::json ja, jb;
  a >> ja;
  b >> jb;
  EXPECT_EQ(ja["metadata"]["master_seed"], 11);
  EXPECT_EQ(jb["metadata"]["master_seed"], 99);
}

TEST(Cli, ExitCodesFollowErrorClasses) {
  // io error: missing file -> 5
  EXPECT_EQ(run_cli("fci /nonexistent.fcidump").exit_code, 5);

  // parse error in the FCIDUMP -> 2
  const auto bad_dump = (fs::temp_directory_path() / "sqdrift_bad.fcidump").string();
  {
    std::ofstream out(bad_dump);
    out << "&FCI NORB=two,NELEC=2 &END\n";
  }
  EXPECT_EQ(run_cli("fci " + bad_dump).exit_code, 2);

  // config parse error (unknown key) -> 2
  const auto bad_cfg = (fs::temp_directory_path() / "sqdrift_bad_cfg.json").string();
  {
    std::ofstream out(bad_cfg);
    out << "{\"input\": \"x\", \"not_a_key\": 1}";
  }
  EXPECT_EQ(run_cli("run " + bad_cfg).exit_code, 2);

  // scale error: fci on a sector beyond the determinant cap -> 3
  const auto big = (fs::temp_directory_path() / "sqdrift_big.fcidump").string();
  {
    std::ofstream out(big);
    out << "&FCI NORB=20,NELEC=20,MS2=0 &END\n1.0 1 1 0 0\n";
  }
  EXPECT_EQ(run_cli("fci " + big).exit_code, 3);
}

/*
 * Copyright 2026 The Saliency Bias Audit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "fixtures.hpp"
#include "sba/app/commands.hpp"
#include "sba/app/config.hpp"
#include "sba/error.hpp"

namespace sba::app {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string output;  // stdout and stderr
};

CliRun run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " SBA_CLI_PATH " " + args + " 2>&1";
  CliRun r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 512> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) r.output += buf.data();
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const fs::path& p) {
  const std::string s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

// Tiny but complete configuration.
fs::path write_config(const fs::path& dir, nlohmann::json edits = nlohmann::json::object()) {
  nlohmann::json j = nlohmann::json::parse(default_config_json());
  j["gen"]["counts"] = {{"a_bonafide", 8}, {"a_attack", 8}, {"b_bonafide", 8}, {"b_attack", 8}};
  j["test_counts"] = {{"a_bonafide", 6}, {"a_attack", 6}, {"b_bonafide", 6}, {"b_attack", 6}};
  j["train"]["epochs"] = 1;
  j["train"]["batch_size"] = 8;
  j["output_dir"] = (dir / "out").string();
  j["overlay_samples"] = 2;
  j.merge_patch(edits);
  const fs::path path = dir / "config.json";
  std::ofstream(path) << j.dump(2);
  return path;
}

TEST(Cli, HelpListsCommands) {
  const CliRun r = run_cli("--help");
  EXPECT_EQ(r.code, kExitOk);
  for (const char* sub : {"gen", "train", "audit", "report", "SBA_SEED_OVERRIDE"}) {
    EXPECT_NE(r.output.find(sub), std::string::npos) << sub;
  }
}

TEST(Cli, UsageErrorsExitWithConfigCode) {
  testing::TempDir dir("cli_usage");
  EXPECT_EQ(run_cli("").code, kExitConfig);
  EXPECT_EQ(run_cli("gen").code, kExitConfig);
  EXPECT_EQ(run_cli("frobnicate --config x.json").code, kExitConfig);
  const fs::path cfg = write_config(dir.path());
  EXPECT_EQ(run_cli("gen --config " + cfg.string() + " --threads 0").code, kExitConfig);
}

TEST(Cli, ConfigProblemsNameTheField) {
  testing::TempDir dir("cli_config");
  const CliRun missing = run_cli("gen --config " + (dir.path() / "none.json").string());
  EXPECT_EQ(missing.code, kExitConfig);
  const fs::path cfg = write_config(dir.path(), {{"gen", {{"noise_sigma", -1.0}}}});
  const CliRun bad = run_cli("gen --config " + cfg.string());
  EXPECT_EQ(bad.code, kExitConfig);
  EXPECT_NE(bad.output.find("gen.noise_sigma"), std::string::npos) << bad.output;
  const fs::path ok = write_config(dir.path());
  EXPECT_EQ(run_cli("gen --config " + ok.string(), "SBA_SEED_OVERRIDE=abc").code, kExitConfig);
}

TEST(Cli, MissingArtifactsExitWithMissingInputCode) {
  testing::TempDir dir("cli_missing");
  const fs::path cfg = write_config(dir.path());
  EXPECT_EQ(run_cli("train --config " + cfg.string()).code, kExitMissingInput);
  EXPECT_EQ(run_cli("report --config " + cfg.string()).code, kExitMissingInput);
  ASSERT_EQ(run_cli("gen --config " + cfg.string()).code, kExitOk);
  const CliRun audit = run_cli("audit --config " + cfg.string());
  EXPECT_EQ(audit.code, kExitMissingInput);
  EXPECT_NE(audit.output.find("weight"), std::string::npos);
}

TEST(Cli, FullPipelineWritesArtifacts) {
  testing::TempDir dir("cli_full");
  const fs::path cfg = write_config(dir.path());
  const fs::path out = dir.path() / "out";
  ASSERT_EQ(run_cli("gen --config " + cfg.string()).code, kExitOk);
  EXPECT_TRUE(fs::exists(out / "data" / "manifest.json"));
  const CliRun train = run_cli("train --config " + cfg.string());
  ASSERT_EQ(train.code, kExitOk) << train.output;
  EXPECT_NE(train.output.find("PAD_M: trained on 16 samples"), std::string::npos);
  EXPECT_TRUE(fs::exists(out / "models" / "train_summary.json"));
  const CliRun audit = run_cli("audit --svg --threads 2 --config " + cfg.string());
  ASSERT_EQ(audit.code, kExitOk) << audit.output;

  EXPECT_EQ(line_count(out / "report.csv"), 13u);
  EXPECT_EQ(line_count(out / "curves.csv"), 1u + 36u * 7u);
  std::size_t scores = 0, plots = 0, overlays = 0;
  for (const auto& e : fs::directory_iterator(out)) {
    if (e.path().filename().string().rfind("scores_", 0) == 0) {
      ++scores;
      EXPECT_EQ(line_count(e.path()), 25u);
    }
  }
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(out / "plots")) ++plots;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(out / "overlays")) ++overlays;
  EXPECT_EQ(scores, 3u);
  EXPECT_EQ(plots, 12u);
  EXPECT_EQ(overlays, 3u * 2u * 2u);

  const std::string report = slurp(out / "report.csv");
  const std::string curves = slurp(out / "curves.csv");
  fs::remove_all(out / "plots");
  ASSERT_EQ(run_cli("report --config " + cfg.string()).code, kExitOk);
  EXPECT_TRUE(fs::exists(out / "plots" / "PAD_B_GradCAM_deletion.svg"));

  // Same inputs, one thread: byte-identical CSVs.
  ASSERT_EQ(run_cli("audit --threads 1 --config " + cfg.string()).code, kExitOk);
  EXPECT_EQ(slurp(out / "report.csv"), report);
  EXPECT_EQ(slurp(out / "curves.csv"), curves);
}

TEST(Cli, DirectoryFormatAndOutOverride) {
  testing::TempDir dir("cli_dir");
  const fs::path cfg = write_config(dir.path(), {{"dataset_format", "directory"}});
  const fs::path alt = dir.path() / "alt";
  ASSERT_EQ(run_cli("gen --out " + alt.string() + " --config " + cfg.string()).code, kExitOk);
  EXPECT_TRUE(fs::exists(alt / "data" / "manifest.json"));
  EXPECT_FALSE(fs::exists(dir.path() / "out"));
  EXPECT_EQ(run_cli("train --out " + alt.string() + " --config " + cfg.string()).code, kExitOk);
}

TEST(ExitCodes, MapExceptionCategories) {
  auto code = [](auto ex) {
    std::ostringstream err;
    try {
      throw ex;
    } catch (...) {
      return exit_code_for_current_exception(err);
    }
  };
  EXPECT_EQ(code(ConfigError("x", "bad")), kExitConfig);
  EXPECT_EQ(code(MissingInput("gone")), kExitMissingInput);
  EXPECT_EQ(code(InvariantViolation("broken")), kExitInvariant);
  EXPECT_EQ(code(FormatError("garbled")), kExitFailure);
  EXPECT_EQ(code(std::runtime_error("other")), kExitFailure);
}

}  // namespace
}  // namespace sba::app

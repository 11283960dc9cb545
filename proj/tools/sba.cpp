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

#include <CLI11.hpp>
#include <iostream>

#include "sba/app/commands.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  int threads = 0;
  bool svg = false;
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& about,
                      Flags& flags, bool with_svg) {
  auto* sub = app.add_subcommand(name, about);
  sub->add_option("--config", flags.config, "JSON config file")->required();
  sub->add_option("--out", flags.out, "Output directory (overrides output_dir)");
  sub->add_option("--threads", flags.threads, "Worker threads (overrides threads)")
      ->check(CLI::PositiveNumber);
  if (with_svg) sub->add_flag("--svg", flags.svg, "Also write SVG curve plots and overlays");
  return sub;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sba: audit saliency explanations for group bias on a synthetic PAD testbed.\n"
      "Environment: SBA_SEED_OVERRIDE=<int> replaces every seed in the config."};
  app.require_subcommand(1);
  Flags flags;
  auto* gen = add_command(app, "gen", "Generate train/test datasets", flags, false);
  auto* train = add_command(app, "train", "Train the PAD_B, PAD_M and PAD_F models", flags, false);
  auto* audit = add_command(app, "audit", "Run insertion/deletion audit, write CSVs", flags, true);
  auto* report = add_command(app, "report", "Re-render SVG plots from curves.csv", flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return sba::app::kExitConfig;
  }

  try {
    sba::app::Overrides overrides;
    if (!flags.out.empty()) overrides.out = flags.out;
    if (flags.threads > 0) overrides.threads = flags.threads;
    overrides.seed = sba::app::seed_override_from_env();
    const auto cfg = sba::app::load_config(flags.config, overrides);
    if (gen->parsed()) sba::app::cmd_gen(cfg, std::cout);
    if (train->parsed()) sba::app::cmd_train(cfg, std::cout);
    if (audit->parsed()) sba::app::cmd_audit(cfg, flags.svg, std::cout);
    if (report->parsed()) sba::app::cmd_report(cfg, std::cout);
  } catch (...) {
    return sba::app::exit_code_for_current_exception(std::cerr);
  }
  return sba::app::kExitOk;
}

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

#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "sba/app/config.hpp"

namespace sba::app {

// Stable exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitMissingInput = 3;
inline constexpr int kExitInvariant = 4;

// Output layout under AuditConfig::output_dir.
struct OutputLayout {
  std::filesystem::path root;

  std::filesystem::path data_dir() const { return root / "data"; }
  std::filesystem::path dataset(const std::string& split, DatasetFormat f) const;
  std::filesystem::path data_manifest() const { return data_dir() / "manifest.json"; }
  std::filesystem::path models_dir() const { return root / "models"; }
  std::filesystem::path weights(eval::ModelTag tag) const;
  std::filesystem::path train_summary() const { return models_dir() / "train_summary.json"; }
  std::filesystem::path curves_csv() const { return root / "curves.csv"; }
  std::filesystem::path report_csv() const { return root / "report.csv"; }
  std::filesystem::path scores_csv(eval::ModelTag tag) const;
  std::filesystem::path plots_dir() const { return root / "plots"; }
  std::filesystem::path overlays_dir() const { return root / "overlays"; }
};

// Training set of one regime: PAD_B all, PAD_M group A only, PAD_F group B only.
Dataset regime_training_set(const Dataset& train, eval::ModelTag tag);

// Generates train/test datasets and the data manifest.
void cmd_gen(const AuditConfig& cfg, std::ostream& log);
// Trains PAD_B (all), PAD_M (group A only), PAD_F (group B only).
void cmd_train(const AuditConfig& cfg, std::ostream& log);
// Runs the audit and writes curves/report/score CSVs (+ SVGs when asked).
void cmd_audit(const AuditConfig& cfg, bool svg, std::ostream& log);
// Re-renders curve plots from an existing curves CSV.
void cmd_report(const AuditConfig& cfg, std::ostream& log);

// Maps library exceptions onto exit codes and prints the message to `err`.
int exit_code_for_current_exception(std::ostream& err);

}  // namespace sba::app

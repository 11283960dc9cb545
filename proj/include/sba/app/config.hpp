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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sba/eval/curves.hpp"
#include "sba/nn/minipadnet.hpp"
#include "sba/synth/dataset.hpp"

namespace sba::app {

enum class DatasetFormat { Packed, Directory };

struct AuditConfig {
  GenConfig gen;          // training split
  CellCounts test_counts;  // test split; defaults to gen.counts
  nn::TrainConfig train;
  eval::AuditOptions audit;
  std::filesystem::path output_dir;
  DatasetFormat dataset_format = DatasetFormat::Packed;
  int overlay_samples = 4;

  // The test split reuses every generator knob except seed and counts.
  GenConfig test_gen() const;
};

// Seed of the test split, derived from the training generator seed.
std::uint64_t derive_test_seed(std::uint64_t train_seed);

struct Overrides {
  std::optional<std::filesystem::path> out;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;  // replaces gen.seed and train.seed
};

// Parses the JSON config; throws ConfigError naming the offending field.
// Required: gen.seed, train.seed, and output_dir unless overridden.
AuditConfig parse_config(const std::string& json_text, const Overrides& overrides = {});
AuditConfig load_config(const std::filesystem::path& path, const Overrides& overrides = {});

// Reads SBA_SEED_OVERRIDE; throws ConfigError when set but not an integer.
std::optional<std::uint64_t> seed_override_from_env();

// Default configuration as JSON text (what configs/default.json holds).
std::string default_config_json();

}  // namespace sba::app

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
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "sba/tensor.hpp"

namespace sba {

enum class Label : std::uint8_t { BonaFide = 0, Attack = 1 };
// GroupA plays the first demographic role,
// GroupB the second.
enum class Group : std::uint8_t { A = 0, B = 1 };

std::string_view to_string(Label l);
std::string_view to_string(Group g);
Label parse_label(std::string_view s);
Group parse_group(std::string_view s);

inline constexpr std::size_t kImageSide = 32;
inline constexpr std::size_t kPixelCount = kImageSide * kImageSide;

struct Sample {
  std::int64_t id = 0;
  Tensor image;  // 1x32x32, values in [0,1]
  Label label = Label::BonaFide;
  Group group = Group::A;
};

struct CellCounts {
  int a_bonafide = 500;
  int a_attack = 500;
  int b_bonafide = 500;
  int b_attack = 500;

  int get(Group g, Label l) const;
  int total() const { return a_bonafide + a_attack + b_bonafide + b_attack; }
};

struct GenConfig {
  std::uint64_t seed = 1;
  CellCounts counts;
  double noise_sigma = 0.2;
  double attack_amp_a = 0.3;
  double attack_amp_b = 0.3;
  double group_cue_amp = 0.1;

  // Throws ConfigError naming the first offending field.
  void validate() const;
  // Canonical text form hashed into the fingerprint.
  std::string canonical() const;
  std::string fingerprint() const;
};

struct Dataset {
  GenConfig config;
  // Config hash, followed by "|tag" for each split applied.
  std::string fingerprint;
  std::vector<Sample> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  std::size_t count(Group g) const;
  std::size_t count(Label l) const;
  bool has_both_labels() const;
};

struct SplitPredicate {
  std::string tag;
  std::function<bool(const Sample&)> keep;

  static SplitPredicate all();
  static SplitPredicate group(Group g);
  static SplitPredicate label(Label l);
};

// Order- and id-preserving filter.
Dataset split_by(const Dataset& data, const SplitPredicate& pred);

// Packed single-file container ("SBAD" v1).
void save_packed(const Dataset& data, const std::filesystem::path& path);
Dataset load_packed(const std::filesystem::path& path);

// Directory form: manifest.json plus one raw little-endian image per sample.
void save_directory(const Dataset& data, const std::filesystem::path& dir);
Dataset load_directory(const std::filesystem::path& dir);

}  // namespace sba

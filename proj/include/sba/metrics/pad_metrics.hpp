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
#include <vector>

#include "sba/synth/dataset.hpp"

namespace sba::metrics {

struct ScoreEntry {
  double score = 0.0;  // attack probability
  Label label = Label::BonaFide;
  Group group = Group::A;
  std::int64_t sample_id = 0;
};

struct ScoreSet {
  std::vector<ScoreEntry> entries;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
  bool has_both_labels() const;
  ScoreSet filter(Group g) const;
};

struct OperatingPoint {
  double threshold = 0.0;
  double eer = 0.0;
};

struct ErrorRates {
  double apcer = 0.0;
  double bpcer = 0.0;
  double hter = 0.0;
};

// Decision rule: predict attack iff score >= threshold.
// APCER = attacks scored below the threshold / attacks,
// BPCER = bona fides scored at or above it / bona fides.
ErrorRates error_rates_at(const ScoreSet& scores, double threshold);

// Raw counts behind error_rates_at; curve aggregation sums these.
struct ErrorCounts {
  std::size_t attacks = 0;
  std::size_t bonafides = 0;
  std::size_t missed_attacks = 0;     // attack, score < t
  std::size_t rejected_bonafide = 0;  // bona fide, score >= t

  ErrorRates rates() const;
};
ErrorCounts error_counts_at(const ScoreSet& scores, double threshold);

// Sweeps every distinct score and every midpoint between consecutive
// distinct scores; returns the threshold minimizing |APCER - BPCER|, the
// lowest one on ties. eer is the HTER at that threshold.
OperatingPoint eer_operating_point(const ScoreSet& scores);

// Columns sample_id, group, label, score (6 decimals), one header row.
void write_scores_csv(const ScoreSet& scores, const std::filesystem::path& path);
ScoreSet read_scores_csv(const std::filesystem::path& path);

}  // namespace sba::metrics

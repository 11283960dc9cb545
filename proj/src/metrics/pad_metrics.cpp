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

#include "sba/metrics/pad_metrics.hpp"

#include <algorithm>
#include <cmath>

#include "sba/error.hpp"

namespace sba::metrics {
namespace {

void require_both_labels(const ScoreSet& s, const char* op) {
  if (s.empty()) throw InvalidArgument(std::string(op) + ": empty score set");
  if (!s.has_both_labels()) {
    throw InvalidArgument(std::string(op) + ": score set must contain both labels");
  }
}

}  // namespace

bool ScoreSet::has_both_labels() const {
  bool attack = false, bonafide = false;
  for (const auto& e : entries) {
    (e.label == Label::Attack ? attack : bonafide) = true;
  }
  return attack && bonafide;
}

ScoreSet ScoreSet::filter(Group g) const {
  ScoreSet out;
  for (const auto& e : entries) {
    if (e.group == g) out.entries.push_back(e);
  }
  return out;
}

ErrorRates ErrorCounts::rates() const {
  ErrorRates r;
  r.apcer = static_cast<double>(missed_attacks) / static_cast<double>(attacks);
  r.bpcer = static_cast<double>(rejected_bonafide) / static_cast<double>(bonafides);
  r.hter = (r.apcer + r.bpcer) / 2.0;
  return r;
}

ErrorCounts error_counts_at(const ScoreSet& scores, double threshold) {
  ErrorCounts c;
  for (const auto& e : scores.entries) {
    if (e.label == Label::Attack) {
      ++c.attacks;
      if (e.score < threshold) ++c.missed_attacks;
    } else {
      ++c.bonafides;
      if (e.score >= threshold) ++c.rejected_bonafide;
    }
  }
  return c;
}

ErrorRates error_rates_at(const ScoreSet& scores, double threshold) {
  require_both_labels(scores, "error_rates_at");
  return error_counts_at(scores, threshold).rates();
}

OperatingPoint eer_operating_point(const ScoreSet& scores) {
  require_both_labels(scores, "eer_operating_point");
  std::vector<double> attack, bonafide, distinct;
  for (const auto& e : scores.entries) {
    (e.label == Label::Attack ? attack : bonafide).push_back(e.score);
    distinct.push_back(e.score);
  }
  std::sort(attack.begin(), attack.end());
  std::sort(bonafide.begin(), bonafide.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  const double na = static_cast<double>(attack.size());
  const double nb = static_cast<double>(bonafide.size());
  OperatingPoint best;
  double best_gap = INFINITY;
  auto consider = [&](double t) {
    const auto below = std::lower_bound(attack.begin(), attack.end(), t) - attack.begin();
    const auto at_or_above =
        bonafide.end() - std::lower_bound(bonafide.begin(), bonafide.end(), t);
    const double apcer = static_cast<double>(below) / na;
    const double bpcer = static_cast<double>(at_or_above) / nb;
    const double gap = std::abs(apcer - bpcer);
    if (gap < best_gap) {
      best_gap = gap;
      best.threshold = t;
      best.eer = (apcer + bpcer) / 2.0;
    }
  };
  // Ascending candidate order makes "first strictly better" the lowest
  // threshold among ties.
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    consider(distinct[i]);
    if (i + 1 < distinct.size()) consider((distinct[i] + distinct[i + 1]) / 2.0);
  }
  return best;
}

}  // namespace sba::metrics

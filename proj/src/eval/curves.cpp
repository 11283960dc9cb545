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

#include "sba/eval/curves.hpp"

#include <algorithm>
#include <cmath>

#include "sba/error.hpp"
#include "sba/eval/scoring.hpp"

namespace sba::eval {
namespace {

ImageList image_list(const Dataset& d) {
  ImageList out;
  out.reserve(d.size());
  for (const auto& s : d.samples) {
    require_shape(s.image, {1, kImageSide, kImageSide}, "evaluation image");
    out.push_back(&s.image);
  }
  return out;
}

void check_group_set(const Dataset& d) {
  if (d.empty()) throw InvalidArgument("evaluation set is empty");
  if (!d.has_both_labels()) throw InvalidArgument("evaluation set must contain both labels");
  const Group g = d.samples.front().group;
  if (d.count(g) != d.size()) throw InvalidArgument("evaluation set mixes groups");
}

metrics::ScoreSet with_scores(const Dataset& d, const std::vector<double>& scores) {
  metrics::ScoreSet set;
  set.entries.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& s = d.samples[i];
    set.entries.push_back({scores[i], s.label, s.group, s.id});
  }
  return set;
}

}  // namespace

std::string_view to_string(ModelTag t) {
  switch (t) {
    case ModelTag::PadB: return "PAD_B";
    case ModelTag::PadM: return "PAD_M";
    case ModelTag::PadF: return "PAD_F";
  }
  return "?";
}

ModelTag parse_model_tag(std::string_view s) {
  if (s == "PAD_B") return ModelTag::PadB;
  if (s == "PAD_M") return ModelTag::PadM;
  if (s == "PAD_F") return ModelTag::PadF;
  throw InvalidArgument("unknown model tag '" + std::string(s) + "'");
}

NormalizationAnchor parse_anchor(std::string_view s) {
  if (s == "first_point") return NormalizationAnchor::FirstPoint;
  if (s == "unaltered") return NormalizationAnchor::Unaltered;
  throw InvalidArgument("unknown normalization anchor '" + std::string(s) + "'");
}

std::string_view to_string(NormalizationAnchor a) {
  return a == NormalizationAnchor::FirstPoint ? "first_point" : "unaltered";
}

std::vector<double> default_fractions() { return {0.0, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30}; }

void validate_fractions(const std::vector<double>& fractions) {
  if (fractions.size() < 2) throw InvalidArgument("need at least two fractions");
  if (fractions.front() != 0.0) throw InvalidArgument("fractions must start at 0");
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (!(fractions[i] >= 0.0 && fractions[i] <= 1.0)) {
      throw InvalidArgument("fractions must lie in [0,1]");
    }
    if (i > 0 && !(fractions[i] > fractions[i - 1])) {
      throw InvalidArgument("fractions must be strictly increasing");
    }
  }
}

EvalCurve curve_from_rankings(const nn::MiniPadNet& model, const Dataset& group_set,
                              const std::vector<saliency::SaliencyMap>& maps,
                              const std::vector<double>& unaltered, const CurveSpec& spec) {
  check_group_set(group_set);
  validate_fractions(spec.fractions);
  if (maps.size() != group_set.size() || unaltered.size() != group_set.size()) {
    throw InvalidArgument("saliency/score lists do not match the evaluation set");
  }
  const ImageList images = image_list(group_set);
  RankingList rankings;
  rankings.reserve(maps.size());
  for (const auto& m : maps) rankings.push_back(&m.ranking);

  EvalCurve curve;
  curve.mode = spec.mode;
  curve.group = group_set.samples.front().group;
  curve.model = spec.model;
  curve.explainer = spec.explainer;
  curve.fractions = spec.fractions;
  curve.threshold = spec.threshold;
  curve.unaltered_hter =
      metrics::error_rates_at(with_scores(group_set, unaltered), spec.threshold).hter;

  std::vector<double> black_scores;
  for (double f : spec.fractions) {
    const std::size_t k = pixels_for_fraction(f, kPixelCount);
    std::vector<double> scores;
    if (k == 0 && spec.mode == PerturbationMode::Deletion) {
      scores = unaltered;
    } else if (k == 0) {
      if (black_scores.empty()) {
        const double black = nn::score(model, Tensor({1, kImageSide, kImageSide}));
        black_scores.assign(group_set.size(), black);
      }
      scores = black_scores;
    } else {
      scores = score_perturbed_parallel(model, images, rankings, k, spec.mode, spec.threads);
    }
    curve.hter.push_back(
        metrics::error_counts_at(with_scores(group_set, scores), spec.threshold).rates().hter);
  }
  return curve;
}

EvalCurve evaluation_curve(const nn::MiniPadNet& model, const Dataset& group_set,
                           const CurveSpec& spec) {
  check_group_set(group_set);
  const ImageList images = image_list(group_set);
  std::vector<std::int64_t> ids;
  for (const auto& s : group_set.samples) ids.push_back(s.id);
  const auto maps =
      explain_parallel(model, images, ids, spec.explainer, spec.threshold, spec.threads);
  const auto unaltered = score_images_parallel(model, images, spec.threads);
  return curve_from_rankings(model, group_set, maps, unaltered, spec);
}

EvalCurve normalize_pair(const EvalCurve& reference, const EvalCurve& other,
                         NormalizationAnchor anchor) {
  if (reference.mode != other.mode || reference.model != other.model ||
      reference.explainer != other.explainer || reference.fractions != other.fractions ||
      reference.hter.size() != other.hter.size() || reference.hter.empty()) {
    throw InvalidArgument("normalize_pair: curves do not describe the same evaluation");
  }
  if (reference.normalized || other.normalized) {
    throw InvalidArgument("normalize_pair: curves are already normalized");
  }
  const double offset = anchor == NormalizationAnchor::FirstPoint
                            ? other.hter.front() - reference.hter.front()
                            : other.unaltered_hter - reference.unaltered_hter;
  EvalCurve out = other;
  out.normalized = true;
  for (auto& v : out.hter) v -= offset;
  return out;
}

double curve_auc(const std::vector<double>& fractions, const std::vector<double>& values,
                 bool include_anchor) {
  if (fractions.size() != values.size()) throw InvalidArgument("curve_auc: length mismatch");
  const std::size_t first = include_anchor ? 0 : 1;
  if (values.size() < first + 2) throw InvalidArgument("curve_auc: need at least two points");
  const double span = fractions.back() - fractions[first];
  if (!(span > 0.0)) throw InvalidArgument("curve_auc: fractions must increase");
  // Integrate deviations from the first value so a constant curve is exact.
  const double ref = values[first];
  double area = 0.0;
  for (std::size_t i = first; i + 1 < values.size(); ++i) {
    area += (fractions[i + 1] - fractions[i]) * ((values[i] - ref) + (values[i + 1] - ref)) / 2.0;
  }
  return ref + area / span;
}

double curve_auc(const EvalCurve& curve, bool include_anchor) {
  return curve_auc(curve.fractions, curve.hter, include_anchor);
}

double bias_delta(double auc_reference, double auc_other_normalized) {
  if (!std::isfinite(auc_reference) || !std::isfinite(auc_other_normalized)) {
    throw InvalidArgument("bias_delta: non-finite AUC");
  }
  return std::abs(auc_reference - auc_other_normalized);
}

const BiasEntry& BiasReport::find(ModelTag m, saliency::Explainer e,
                                  PerturbationMode mode) const {
  for (const auto& entry : entries) {
    if (entry.model == m && entry.explainer == e && entry.mode == mode) return entry;
  }
  throw InvalidArgument("no report entry for the requested combination");
}

metrics::ScoreSet score_dataset(const nn::MiniPadNet& model, const Dataset& data, int threads) {
  const ImageList images = image_list(data);
  return with_scores(data, score_images_parallel(model, images, threads));
}

}  // namespace sba::eval

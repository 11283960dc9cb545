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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sba/eval/perturb.hpp"
#include "sba/metrics/pad_metrics.hpp"
#include "sba/nn/minipadnet.hpp"
#include "sba/saliency/saliency.hpp"
#include "sba/synth/dataset.hpp"

namespace sba::eval {

// Training regime of an audited model: balanced, group-A-only, group-B-only.
enum class ModelTag : std::uint8_t { PadB, PadM, PadF };

std::string_view to_string(ModelTag t);
ModelTag parse_model_tag(std::string_view s);

enum class NormalizationAnchor : std::uint8_t { FirstPoint, Unaltered };

NormalizationAnchor parse_anchor(std::string_view s);
std::string_view to_string(NormalizationAnchor a);

// {0, 0.05, ..., 0.30}.
std::vector<double> default_fractions();

// Throws InvalidArgument unless fractions start at 0, increase strictly and
// stay within [0,1].
void validate_fractions(const std::vector<double>& fractions);

struct EvalCurve {
  PerturbationMode mode = PerturbationMode::Deletion;
  Group group = Group::A;
  ModelTag model = ModelTag::PadB;
  saliency::Explainer explainer = saliency::Explainer::GradCAM;
  bool normalized = false;
  std::vector<double> fractions;
  std::vector<double> hter;
  double threshold = 0.0;
  double unaltered_hter = 0.0;  // HTER of the unperturbed group set
};

struct CurveSpec {
  ModelTag model = ModelTag::PadB;
  saliency::Explainer explainer = saliency::Explainer::GradCAM;
  PerturbationMode mode = PerturbationMode::Deletion;
  std::vector<double> fractions = default_fractions();
  double threshold = 0.5;
  int threads = 1;
};

// Computes saliency once per unaltered image, then re-scores every image
// perturbed along its own ranking at each fraction. The set must hold a
// single group and both labels.
EvalCurve evaluation_curve(const nn::MiniPadNet& model, const Dataset& group_set,
                           const CurveSpec& spec);

// Curve for precomputed rankings. `unaltered` are the group's scores on the
// original images, in the same order as `group_set.samples`.
EvalCurve curve_from_rankings(const nn::MiniPadNet& model, const Dataset& group_set,
                              const std::vector<saliency::SaliencyMap>& maps,
                              const std::vector<double>& unaltered, const CurveSpec& spec);

// Shifts the second-group curve so it shares the first group's anchor value.
// Values are left unclamped.
EvalCurve normalize_pair(const EvalCurve& reference, const EvalCurve& other,
                         NormalizationAnchor anchor = NormalizationAnchor::FirstPoint);

// Trapezoidal area divided by the fraction span (a mean error level).
// Without the anchor, integration starts at the second point.
double curve_auc(const EvalCurve& curve, bool include_anchor = true);
double curve_auc(const std::vector<double>& fractions, const std::vector<double>& values,
                 bool include_anchor = true);

double bias_delta(double auc_reference, double auc_other_normalized);

struct BiasEntry {
  ModelTag model = ModelTag::PadB;
  saliency::Explainer explainer = saliency::Explainer::GradCAM;
  PerturbationMode mode = PerturbationMode::Deletion;
  double auc_male = 0.0;         // group A
  double auc_female_norm = 0.0;  // group B, normalized
  double delta = 0.0;
};

struct BiasReport {
  std::vector<BiasEntry> entries;  // sorted by (model, explainer, mode) tag strings
  std::string config_fingerprint;
  std::vector<std::uint64_t> seeds;

  const BiasEntry& find(ModelTag m, saliency::Explainer e, PerturbationMode mode) const;
};

enum class ThresholdScope : std::uint8_t { Pooled, PerGroup };

struct AuditOptions {
  std::vector<saliency::Explainer> explainers = {saliency::Explainer::GradCAM,
                                                 saliency::Explainer::GradCAMpp};
  std::vector<double> fractions = default_fractions();
  NormalizationAnchor anchor = NormalizationAnchor::FirstPoint;
  ThresholdScope threshold_scope = ThresholdScope::Pooled;
  bool include_anchor_in_auc = true;
  int threads = 1;
};

struct AuditedModel {
  ModelTag tag;
  const nn::MiniPadNet* model;
};

struct ModelSummary {
  ModelTag tag = ModelTag::PadB;
  metrics::OperatingPoint pooled;   // EER point on the unaltered test set
  metrics::OperatingPoint group_a;  // per-group EER points
  metrics::OperatingPoint group_b;
  metrics::ScoreSet scores;         // unaltered test scores

  double threshold_for(Group g, ThresholdScope scope) const {
    if (scope == ThresholdScope::Pooled) return pooled.threshold;
    return g == Group::A ? group_a.threshold : group_b.threshold;
  }
};

struct AuditResult {
  BiasReport report;
  // Per (model, explainer, mode): group A, group B, normalized group B.
  std::vector<EvalCurve> curves;
  std::vector<ModelSummary> models;
};

AuditResult run_audit(const std::vector<AuditedModel>& models, const Dataset& test,
                      const AuditOptions& options);

// Unaltered scores of a whole dataset, ordered like its samples.
metrics::ScoreSet score_dataset(const nn::MiniPadNet& model, const Dataset& data,
                                int threads = 1);

}  // namespace sba::eval

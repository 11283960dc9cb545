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

#include <algorithm>
#include <tuple>

#include "sba/error.hpp"
#include "sba/eval/curves.hpp"
#include "sba/eval/scoring.hpp"

namespace sba::eval {
namespace {

auto sort_key(ModelTag m, saliency::Explainer e, PerturbationMode mode) {
  return std::make_tuple(std::string(to_string(m)), std::string(saliency::to_string(e)),
                         std::string(to_string(mode)));
}

struct GroupSlice {
  Dataset data;
  ImageList images;
  std::vector<std::int64_t> ids;
  std::vector<double> unaltered;
};

}  // namespace

AuditResult run_audit(const std::vector<AuditedModel>& models, const Dataset& test,
                      const AuditOptions& options) {
  validate_fractions(options.fractions);
  if (options.explainers.empty()) throw InvalidArgument("no explainers selected");
  if (models.empty()) throw InvalidArgument("no models to audit");

  std::array<Dataset, 2> groups = {split_by(test, SplitPredicate::group(Group::A)),
                                   split_by(test, SplitPredicate::group(Group::B))};
  for (const auto& g : groups) {
    if (g.empty() || !g.has_both_labels()) {
      throw InvalidArgument("test set needs both labels in both groups");
    }
  }

  AuditResult result;
  result.report.config_fingerprint = test.fingerprint;
  result.report.seeds = {test.config.seed};

  for (const auto& audited : models) {
    const nn::MiniPadNet& model = *audited.model;
    ModelSummary summary;
    summary.tag = audited.tag;
    summary.scores = score_dataset(model, test, options.threads);
    summary.pooled = metrics::eer_operating_point(summary.scores);
    summary.group_a = metrics::eer_operating_point(summary.scores.filter(Group::A));
    summary.group_b = metrics::eer_operating_point(summary.scores.filter(Group::B));

    std::array<GroupSlice, 2> slices;
    for (std::size_t gi = 0; gi < 2; ++gi) {
      auto& slice = slices[gi];
      slice.data = groups[gi];
      for (const auto& s : slice.data.samples) {
        slice.images.push_back(&s.image);
        slice.ids.push_back(s.id);
      }
      const auto group_scores = summary.scores.filter(static_cast<Group>(gi));
      for (const auto& e : group_scores.entries) slice.unaltered.push_back(e.score);
    }
    auto threshold_for = [&](std::size_t gi) {
      return summary.threshold_for(static_cast<Group>(gi), options.threshold_scope);
    };

    for (const auto explainer : options.explainers) {
      std::array<std::vector<saliency::SaliencyMap>, 2> maps;
      for (std::size_t gi = 0; gi < 2; ++gi) {
        maps[gi] = explain_parallel(model, slices[gi].images, slices[gi].ids, explainer,
                                    threshold_for(gi), options.threads);
      }
      for (const auto mode : {PerturbationMode::Deletion, PerturbationMode::Insertion}) {
        std::array<EvalCurve, 2> curves;
        for (std::size_t gi = 0; gi < 2; ++gi) {
          CurveSpec spec;
          spec.model = audited.tag;
          spec.explainer = explainer;
          spec.mode = mode;
          spec.fractions = options.fractions;
          spec.threshold = threshold_for(gi);
          spec.threads = options.threads;
          curves[gi] =
              curve_from_rankings(model, slices[gi].data, maps[gi], slices[gi].unaltered, spec);
        }
        EvalCurve normalized = normalize_pair(curves[0], curves[1], options.anchor);
        BiasEntry entry;
        entry.model = audited.tag;
        entry.explainer = explainer;
        entry.mode = mode;
        entry.auc_male = curve_auc(curves[0], options.include_anchor_in_auc);
        entry.auc_female_norm = curve_auc(normalized, options.include_anchor_in_auc);
        entry.delta = bias_delta(entry.auc_male, entry.auc_female_norm);
        result.report.entries.push_back(entry);
        result.curves.push_back(std::move(curves[0]));
        result.curves.push_back(std::move(curves[1]));
        result.curves.push_back(std::move(normalized));
      }
    }
    result.models.push_back(std::move(summary));
  }

  // Stable (model, explainer, mode) order by tag text; curve triples follow
  // their entries.
  std::vector<std::size_t> order(result.report.entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ea = result.report.entries[a];
    const auto& eb = result.report.entries[b];
    return sort_key(ea.model, ea.explainer, ea.mode) < sort_key(eb.model, eb.explainer, eb.mode);
  });
  std::vector<BiasEntry> entries;
  std::vector<EvalCurve> curves;
  for (auto i : order) {
    entries.push_back(result.report.entries[i]);
    for (std::size_t j = 0; j < 3; ++j) curves.push_back(result.curves[3 * i + j]);
  }
  result.report.entries = std::move(entries);
  result.curves = std::move(curves);

  const std::size_t expected = models.size() * options.explainers.size() * 2;
  if (result.report.entries.size() != expected) {
    throw InvariantViolation("report has an unexpected number of entries");
  }
  return result;
}

}  // namespace sba::eval

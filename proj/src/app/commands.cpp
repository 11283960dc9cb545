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

#include "sba/app/commands.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "sba/app/svg_plot.hpp"
#include "sba/error.hpp"
#include "sba/eval/csv.hpp"
#include "sba/saliency/svg_overlay.hpp"
#include "sba/synth/generator.hpp"

namespace sba::app {
namespace {

namespace fs = std::filesystem;
using eval::ModelTag;

constexpr ModelTag kModels[] = {ModelTag::PadB, ModelTag::PadM, ModelTag::PadF};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

void save_dataset(const Dataset& d, const fs::path& path, DatasetFormat f) {
  if (f == DatasetFormat::Packed) {
    save_packed(d, path);
  } else {
    fs::remove_all(path);
    save_directory(d, path);
  }
}

Dataset load_dataset(const fs::path& path, DatasetFormat f) {
  if (!fs::exists(path)) throw MissingInput("dataset not found: " + path.string());
  return f == DatasetFormat::Packed ? load_packed(path) : load_directory(path);
}

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

fs::path OutputLayout::dataset(const std::string& split, DatasetFormat f) const {
  return data_dir() / (f == DatasetFormat::Packed ? split + ".sbad" : split);
}

fs::path OutputLayout::weights(ModelTag tag) const {
  return models_dir() / (lower(eval::to_string(tag)) + ".sbaw");
}

fs::path OutputLayout::scores_csv(ModelTag tag) const {
  return root / ("scores_" + std::string(eval::to_string(tag)) + ".csv");
}

Dataset regime_training_set(const Dataset& train, ModelTag tag) {
  switch (tag) {
    case ModelTag::PadB: return train;
    case ModelTag::PadM: return split_by(train, SplitPredicate::group(Group::A));
    case ModelTag::PadF: return split_by(train, SplitPredicate::group(Group::B));
  }
  throw InvalidArgument("unknown model tag");
}

void cmd_gen(const AuditConfig& cfg, std::ostream& log) {
  const OutputLayout out{cfg.output_dir};
  fs::create_directories(out.data_dir());
  nlohmann::ordered_json manifest;
  manifest["format"] = cfg.dataset_format == DatasetFormat::Packed ? "packed" : "directory";
  for (const auto& [split, gen] : {std::pair{std::string("train"), cfg.gen},
                                   std::pair{std::string("test"), cfg.test_gen()}}) {
    const Dataset d = synth::generate(gen);
    const fs::path path = out.dataset(split, cfg.dataset_format);
    save_dataset(d, path, cfg.dataset_format);
    manifest[split] = {{"path", path.filename().string()},
                       {"fingerprint", d.fingerprint},
                       {"seed", gen.seed},
                       {"samples", d.size()}};
    log << split << " fingerprint " << d.fingerprint << " (" << d.size() << " samples)\n";
  }
  eval::write_text(out.data_manifest(), manifest.dump(2) + "\n");
}

void cmd_train(const AuditConfig& cfg, std::ostream& log) {
  const OutputLayout out{cfg.output_dir};
  const Dataset train = load_dataset(out.dataset("train", cfg.dataset_format), cfg.dataset_format);
  const Dataset test = load_dataset(out.dataset("test", cfg.dataset_format), cfg.dataset_format);
  fs::create_directories(out.models_dir());

  nlohmann::ordered_json summary;
  for (const ModelTag tag : kModels) {
    const Dataset split = regime_training_set(train, tag);
    nn::TrainHistory history;
    const nn::MiniPadNet model = nn::train(nn::init_model(cfg.train.seed), split, cfg.train, &history);
    nn::save_model(model, out.weights(tag));

    const auto scores = eval::score_dataset(model, test, cfg.audit.threads);
    const auto pooled = metrics::eer_operating_point(scores);
    const auto eer_a = metrics::eer_operating_point(scores.filter(Group::A)).eer;
    const auto eer_b = metrics::eer_operating_point(scores.filter(Group::B)).eer;
    const std::string name(eval::to_string(tag));
    log << name << ": trained on " << split.size() << " samples, loss "
        << fmt6(history.initial_loss) << " -> " << fmt6(history.epoch_losses.empty()
                                                             ? history.initial_loss
                                                             : history.epoch_losses.back())
        << "; test EER pooled " << fmt6(pooled.eer) << " (threshold " << fmt6(pooled.threshold)
        << "), group A " << fmt6(eer_a) << ", group B " << fmt6(eer_b) << "\n";
    summary[name] = {{"train_samples", split.size()},
                     {"train_fingerprint", split.fingerprint},
                     {"initial_loss", history.initial_loss},
                     {"epoch_losses", history.epoch_losses},
                     {"eer_pooled", pooled.eer},
                     {"eer_threshold", pooled.threshold},
                     {"eer_group_a", eer_a},
                     {"eer_group_b", eer_b}};
  }
  eval::write_text(out.train_summary(), summary.dump(2) + "\n");
}

void cmd_audit(const AuditConfig& cfg, bool svg, std::ostream& log) {
  const OutputLayout out{cfg.output_dir};
  const Dataset test = load_dataset(out.dataset("test", cfg.dataset_format), cfg.dataset_format);
  std::vector<nn::MiniPadNet> models;
  for (const ModelTag tag : kModels) {
    if (!fs::exists(out.weights(tag))) {
      throw MissingInput("weight file not found: " + out.weights(tag).string());
    }
    models.push_back(nn::load_model(out.weights(tag)));
  }
  std::vector<eval::AuditedModel> audited;
  for (std::size_t i = 0; i < models.size(); ++i) audited.push_back({kModels[i], &models[i]});

  const eval::AuditResult result = eval::run_audit(audited, test, cfg.audit);
  for (const auto& c : result.curves) {
    for (double v : c.hter) {
      if (!std::isfinite(v)) throw InvariantViolation("non-finite curve value");
    }
  }
  eval::write_text(out.curves_csv(), eval::curves_csv(result.curves));
  eval::write_text(out.report_csv(), eval::report_csv(result.report));
  for (const auto& m : result.models) metrics::write_scores_csv(m.scores, out.scores_csv(m.tag));

  for (const auto& e : result.report.entries) {
    log << eval::to_string(e.model) << " " << saliency::to_string(e.explainer) << " "
        << eval::to_string(e.mode) << ": auc A " << fmt6(e.auc_male) << ", auc B(norm) "
        << fmt6(e.auc_female_norm) << ", delta " << fmt6(e.delta) << "\n";
  }

  if (!svg) return;
  fs::create_directories(out.plots_dir());
  for (std::size_t i = 0; i + 2 < result.curves.size(); i += 3) {
    const auto& c = result.curves[i];
    const std::string name = std::string(eval::to_string(c.model)) + "_" +
                             std::string(saliency::to_string(c.explainer)) + "_" +
                             std::string(eval::to_string(c.mode)) + ".svg";
    eval::write_text(out.plots_dir() / name,
                     curve_panel_svg({&result.curves[i], &result.curves[i + 1],
                                      &result.curves[i + 2]}));
  }
  fs::create_directories(out.overlays_dir());
  for (std::size_t m = 0; m < models.size(); ++m) {
    const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(cfg.overlay_samples),
                                                test.size());
    for (std::size_t i = 0; i < n; ++i) {
      // Spread the picks across the four cells.
      const Sample& s = test.samples[i * test.size() / std::max<std::size_t>(n, 1)];
      const double threshold = result.models[m].threshold_for(s.group, cfg.audit.threshold_scope);
      for (const auto ex : cfg.audit.explainers) {
        const auto map = saliency::explain(models[m], s.image, ex, threshold, s.id);
        const std::string name = std::string(eval::to_string(kModels[m])) + "_" +
                                 std::string(saliency::to_string(ex)) + "_sample" +
                                 std::to_string(s.id) + ".svg";
        eval::write_text(out.overlays_dir() / name, saliency::overlay_svg(s.image, map));
      }
    }
  }
}

void cmd_report(const AuditConfig& cfg, std::ostream& log) {
  const OutputLayout out{cfg.output_dir};
  if (!fs::exists(out.curves_csv())) {
    throw MissingInput("curves CSV not found: " + out.curves_csv().string());
  }
  const auto curves = eval::read_curves_csv(out.curves_csv());
  if (curves.size() % 3 != 0) throw FormatError("curves CSV does not hold series triples");
  fs::create_directories(out.plots_dir());
  for (std::size_t i = 0; i < curves.size(); i += 3) {
    const auto& c = curves[i];
    const std::string name = std::string(eval::to_string(c.model)) + "_" +
                             std::string(saliency::to_string(c.explainer)) + "_" +
                             std::string(eval::to_string(c.mode)) + ".svg";
    eval::write_text(out.plots_dir() / name,
                     curve_panel_svg({&curves[i], &curves[i + 1], &curves[i + 2]}));
  }
  log << "rendered " << curves.size() / 3 << " plots into " << out.plots_dir().string() << "\n";
}

int exit_code_for_current_exception(std::ostream& err) {
  try {
    throw;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const MissingInput& e) {
    err << "missing input: " << e.what() << "\n";
    return kExitMissingInput;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace sba::app

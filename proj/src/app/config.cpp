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

#include "sba/app/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "sba/error.hpp"
#include "sba/rng.hpp"

namespace sba::app {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& prefix) {
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) throw ConfigError(prefix + key, "unknown field");
  }
}

const json& require_object(const json& parent, const std::string& key,
                           const std::string& path) {
  if (!parent.contains(key)) throw ConfigError(path, "missing required field");
  const json& v = parent.at(key);
  if (!v.is_object()) throw ConfigError(path, "must be an object");
  return v;
}

template <typename T>
T get_field(const json& obj, const std::string& key, const std::string& path, T fallback,
            bool required = false) {
  if (!obj.contains(key)) {
    if (required) throw ConfigError(path, "missing required field");
    return fallback;
  }
  try {
    const json& v = obj.at(key);
    if constexpr (std::is_same_v<T, std::uint64_t> || std::is_same_v<T, int>) {
      if (!v.is_number_integer()) throw ConfigError(path, "must be an integer");
      if constexpr (std::is_same_v<T, std::uint64_t>) {
        if (!v.is_number_unsigned()) throw ConfigError(path, "must be a non-negative integer");
      }
    } else if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError(path, "must be a number");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(path, "must be a boolean");
    } else {
      if (!v.is_string()) throw ConfigError(path, "must be a string");
    }
    return v.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(path, e.what());
  }
}

CellCounts parse_counts(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "must be an object");
  reject_unknown(j, {"a_bonafide", "a_attack", "b_bonafide", "b_attack"}, path + ".");
  CellCounts c;
  c.a_bonafide = get_field<int>(j, "a_bonafide", path + ".a_bonafide", c.a_bonafide);
  c.a_attack = get_field<int>(j, "a_attack", path + ".a_attack", c.a_attack);
  c.b_bonafide = get_field<int>(j, "b_bonafide", path + ".b_bonafide", c.b_bonafide);
  c.b_attack = get_field<int>(j, "b_attack", path + ".b_attack", c.b_attack);
  for (auto [v, name] : {std::pair{c.a_bonafide, "a_bonafide"}, {c.a_attack, "a_attack"},
                         {c.b_bonafide, "b_bonafide"}, {c.b_attack, "b_attack"}}) {
    if (v <= 0) throw ConfigError(path + "." + name, "must be > 0");
  }
  return c;
}

}  // namespace

std::uint64_t derive_test_seed(std::uint64_t train_seed) {
  return SplitMix64(train_seed ^ 0x7465737473706c74ULL).next();
}

GenConfig AuditConfig::test_gen() const {
  GenConfig t = gen;
  t.seed = derive_test_seed(gen.seed);
  t.counts = test_counts;
  return t;
}

AuditConfig parse_config(const std::string& json_text, const Overrides& overrides) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("<document>", "must be a JSON object");
  reject_unknown(root,
                 {"gen", "test_counts", "train", "fractions", "normalization_anchor",
                  "threshold_scope", "auc_include_anchor", "explainers", "output_dir", "threads",
                  "dataset_format", "overlay_samples"},
                 "");

  AuditConfig cfg;
  const json& gen = require_object(root, "gen", "gen");
  reject_unknown(gen,
                 {"seed", "counts", "noise_sigma", "attack_amp_a", "attack_amp_b",
                  "group_cue_amp"},
                 "gen.");
  cfg.gen.seed = get_field<std::uint64_t>(gen, "seed", "gen.seed", 0, true);
  if (gen.contains("counts")) cfg.gen.counts = parse_counts(gen.at("counts"), "gen.counts");
  cfg.gen.noise_sigma = get_field(gen, "noise_sigma", "gen.noise_sigma", cfg.gen.noise_sigma);
  cfg.gen.attack_amp_a =
      get_field(gen, "attack_amp_a", "gen.attack_amp_a", cfg.gen.attack_amp_a);
  cfg.gen.attack_amp_b =
      get_field(gen, "attack_amp_b", "gen.attack_amp_b", cfg.gen.attack_amp_b);
  cfg.gen.group_cue_amp =
      get_field(gen, "group_cue_amp", "gen.group_cue_amp", cfg.gen.group_cue_amp);
  cfg.test_counts = root.contains("test_counts")
                        ? parse_counts(root.at("test_counts"), "test_counts")
                        : cfg.gen.counts;

  const json& train = require_object(root, "train", "train");
  reject_unknown(train, {"seed", "epochs", "batch_size", "learning_rate", "momentum",
                         "grad_clip"}, "train.");
  cfg.train.seed = get_field<std::uint64_t>(train, "seed", "train.seed", 0, true);
  cfg.train.epochs = get_field(train, "epochs", "train.epochs", cfg.train.epochs);
  cfg.train.batch_size = get_field(train, "batch_size", "train.batch_size", cfg.train.batch_size);
  cfg.train.learning_rate =
      get_field(train, "learning_rate", "train.learning_rate", cfg.train.learning_rate);
  cfg.train.momentum = get_field(train, "momentum", "train.momentum", cfg.train.momentum);
  cfg.train.grad_clip = get_field(train, "grad_clip", "train.grad_clip", cfg.train.grad_clip);

  if (root.contains("fractions")) {
    const json& f = root.at("fractions");
    if (!f.is_array()) throw ConfigError("fractions", "must be an array of numbers");
    cfg.audit.fractions.clear();
    for (const auto& v : f) {
      if (!v.is_number()) throw ConfigError("fractions", "must be an array of numbers");
      cfg.audit.fractions.push_back(v.get<double>());
    }
  }
  try {
    eval::validate_fractions(cfg.audit.fractions);
  } catch (const InvalidArgument& e) {
    throw ConfigError("fractions", e.what());
  }

  try {
    cfg.audit.anchor = eval::parse_anchor(
        get_field<std::string>(root, "normalization_anchor", "normalization_anchor",
                               "first_point"));
  } catch (const InvalidArgument& e) {
    throw ConfigError("normalization_anchor", e.what());
  }
  const auto scope =
      get_field<std::string>(root, "threshold_scope", "threshold_scope", "pooled");
  if (scope == "pooled") {
    cfg.audit.threshold_scope = eval::ThresholdScope::Pooled;
  } else if (scope == "per_group") {
    cfg.audit.threshold_scope = eval::ThresholdScope::PerGroup;
  } else {
    throw ConfigError("threshold_scope", "must be 'pooled' or 'per_group'");
  }
  cfg.audit.include_anchor_in_auc =
      get_field(root, "auc_include_anchor", "auc_include_anchor", true);

  if (root.contains("explainers")) {
    const json& e = root.at("explainers");
    if (!e.is_array() || e.empty()) throw ConfigError("explainers", "must be a non-empty array");
    cfg.audit.explainers.clear();
    for (const auto& v : e) {
      try {
        const auto ex = saliency::parse_explainer(v.is_string() ? v.get<std::string>() : "");
        if (std::find(cfg.audit.explainers.begin(), cfg.audit.explainers.end(), ex) !=
            cfg.audit.explainers.end()) {
          throw ConfigError("explainers", "duplicate explainer");
        }
        cfg.audit.explainers.push_back(ex);
      } catch (const InvalidArgument& err) {
        throw ConfigError("explainers", err.what());
      }
    }
  }

  cfg.audit.threads = get_field(root, "threads", "threads", 1);
  if (overrides.threads) cfg.audit.threads = *overrides.threads;
  if (cfg.audit.threads < 1) throw ConfigError("threads", "must be >= 1");

  if (overrides.out) {
    cfg.output_dir = *overrides.out;
  } else {
    cfg.output_dir = get_field<std::string>(root, "output_dir", "output_dir", "", true);
  }
  if (cfg.output_dir.empty()) throw ConfigError("output_dir", "must not be empty");

  const auto format = get_field<std::string>(root, "dataset_format", "dataset_format", "packed");
  if (format == "packed") {
    cfg.dataset_format = DatasetFormat::Packed;
  } else if (format == "directory") {
    cfg.dataset_format = DatasetFormat::Directory;
  } else {
    throw ConfigError("dataset_format", "must be 'packed' or 'directory'");
  }
  cfg.overlay_samples = get_field(root, "overlay_samples", "overlay_samples", 4);
  if (cfg.overlay_samples < 0) throw ConfigError("overlay_samples", "must be >= 0");

  if (overrides.seed) {
    cfg.gen.seed = *overrides.seed;
    cfg.train.seed = *overrides.seed;
  }
  cfg.gen.validate();
  cfg.train.validate();
  return cfg;
}

AuditConfig load_config(const std::filesystem::path& path, const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::optional<std::uint64_t> seed_override_from_env() {
  const char* raw = std::getenv("SBA_SEED_OVERRIDE");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const std::string s(raw);
    if (s.front() == '-') throw std::invalid_argument("negative");
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("SBA_SEED_OVERRIDE", "must be a non-negative integer");
  }
}

std::string default_config_json() {
  return R"({
  "gen": {
    "seed": 1,
    "counts": {"a_bonafide": 500, "a_attack": 500, "b_bonafide": 500, "b_attack": 500},
    "noise_sigma": 0.2,
    "attack_amp_a": 0.4,
    "attack_amp_b": 0.15,
    "group_cue_amp": 0.1
  },
  "test_counts": {"a_bonafide": 500, "a_attack": 500, "b_bonafide": 500, "b_attack": 500},
  "train": {"seed": 1, "epochs": 12, "batch_size": 32, "learning_rate": 0.03, "momentum": 0.9,
            "grad_clip": 0.3},
  "fractions": [0.0, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30],
  "normalization_anchor": "first_point",
  "threshold_scope": "pooled",
  "auc_include_anchor": true,
  "explainers": ["GradCAM", "GradCAMpp"],
  "output_dir": "out",
  "threads": 1,
  "dataset_format": "packed",
  "overlay_samples": 4
}
)";
}

}  // namespace sba::app

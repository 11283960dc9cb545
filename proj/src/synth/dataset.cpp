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

#include "sba/synth/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "sba/binary_io.hpp"
#include "sba/error.hpp"
#include "sba/rng.hpp"

namespace sba {
namespace {

constexpr std::uint16_t kPackedVersion = 1;
constexpr std::uint16_t kDirectoryVersion = 1;

nlohmann::ordered_json config_to_json(const GenConfig& c) {
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["counts"] = {{"a_bonafide", c.counts.a_bonafide},
                 {"a_attack", c.counts.a_attack},
                 {"b_bonafide", c.counts.b_bonafide},
                 {"b_attack", c.counts.b_attack}};
  j["noise_sigma"] = c.noise_sigma;
  j["attack_amp_a"] = c.attack_amp_a;
  j["attack_amp_b"] = c.attack_amp_b;
  j["group_cue_amp"] = c.group_cue_amp;
  return j;
}

GenConfig config_from_json(const nlohmann::json& j) {
  try {
    GenConfig c;
    c.seed = j.at("seed").get<std::uint64_t>();
    const auto& n = j.at("counts");
    c.counts = {n.at("a_bonafide").get<int>(), n.at("a_attack").get<int>(),
                n.at("b_bonafide").get<int>(), n.at("b_attack").get<int>()};
    c.noise_sigma = j.at("noise_sigma").get<double>();
    c.attack_amp_a = j.at("attack_amp_a").get<double>();
    c.attack_amp_b = j.at("attack_amp_b").get<double>();
    c.group_cue_amp = j.at("group_cue_amp").get<double>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad dataset config: ") + e.what());
  }
}

void check_fingerprint(const Dataset& d) {
  const std::string expect = d.config.fingerprint();
  if (d.fingerprint.compare(0, expect.size(), expect) != 0) {
    throw FormatError("dataset fingerprint does not match its config");
  }
}

void write_image(std::ostream& out, const Tensor& img) {
  for (double v : img.values()) io::write_f64(out, v);
}

Tensor read_image(std::istream& in) {
  std::vector<double> v(kPixelCount);
  for (auto& x : v) x = io::read_f64(in, "image");
  return Tensor({1, kImageSide, kImageSide}, std::move(v));
}

}  // namespace

std::string_view to_string(Label l) {
  return l == Label::Attack ? "attack" : "bonafide";
}
std::string_view to_string(Group g) { return g == Group::A ? "A" : "B"; }

Label parse_label(std::string_view s) {
  if (s == "attack") return Label::Attack;
  if (s == "bonafide") return Label::BonaFide;
  throw FormatError("unknown label '" + std::string(s) + "'");
}

Group parse_group(std::string_view s) {
  if (s == "A") return Group::A;
  if (s == "B") return Group::B;
  throw FormatError("unknown group '" + std::string(s) + "'");
}

int CellCounts::get(Group g, Label l) const {
  if (g == Group::A) return l == Label::BonaFide ? a_bonafide : a_attack;
  return l == Label::BonaFide ? b_bonafide : b_attack;
}

void GenConfig::validate() const {
  if (counts.a_bonafide <= 0) throw ConfigError("gen.counts.a_bonafide", "must be > 0");
  if (counts.a_attack <= 0) throw ConfigError("gen.counts.a_attack", "must be > 0");
  if (counts.b_bonafide <= 0) throw ConfigError("gen.counts.b_bonafide", "must be > 0");
  if (counts.b_attack <= 0) throw ConfigError("gen.counts.b_attack", "must be > 0");
  if (!(noise_sigma >= 0.0)) throw ConfigError("gen.noise_sigma", "must be >= 0");
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(attack_amp_a)) throw ConfigError("gen.attack_amp_a", "must be in [0,1]");
  if (!unit(attack_amp_b)) throw ConfigError("gen.attack_amp_b", "must be in [0,1]");
  if (!unit(group_cue_amp)) throw ConfigError("gen.group_cue_amp", "must be in [0,1]");
}

std::string GenConfig::canonical() const { return config_to_json(*this).dump(); }

std::string GenConfig::fingerprint() const {
  const std::string text = canonical();
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(text.data(), text.size())));
  return buf;
}

std::size_t Dataset::count(Group g) const {
  return static_cast<std::size_t>(std::count_if(
      samples.begin(), samples.end(), [g](const Sample& s) { return s.group == g; }));
}

std::size_t Dataset::count(Label l) const {
  return static_cast<std::size_t>(std::count_if(
      samples.begin(), samples.end(), [l](const Sample& s) { return s.label == l; }));
}

bool Dataset::has_both_labels() const {
  return count(Label::Attack) > 0 && count(Label::BonaFide) > 0;
}

SplitPredicate SplitPredicate::all() {
  return {"true", [](const Sample&) { return true; }};
}
SplitPredicate SplitPredicate::group(Group g) {
  return {"group=" + std::string(to_string(g)),
          [g](const Sample& s) { return s.group == g; }};
}
SplitPredicate SplitPredicate::label(Label l) {
  return {"label=" + std::string(to_string(l)),
          [l](const Sample& s) { return s.label == l; }};
}

Dataset split_by(const Dataset& data, const SplitPredicate& pred) {
  Dataset out;
  out.config = data.config;
  out.fingerprint = data.fingerprint;
  if (pred.tag != "true") out.fingerprint += "|" + pred.tag;
  for (const auto& s : data.samples) {
    if (pred.keep(s)) out.samples.push_back(s);
  }
  return out;
}

void save_packed(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write("SBAD", 4);
  io::write_le<std::uint16_t>(out, kPackedVersion);
  const std::string cfg = data.config.canonical();
  io::write_le<std::uint64_t>(out, cfg.size());
  out.write(cfg.data(), static_cast<std::streamsize>(cfg.size()));
  io::write_le<std::uint64_t>(out, data.fingerprint.size());
  out.write(data.fingerprint.data(), static_cast<std::streamsize>(data.fingerprint.size()));
  io::write_le<std::uint64_t>(out, data.samples.size());
  for (const auto& s : data.samples) {
    io::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(s.id));
    io::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(s.label));
    io::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(s.group));
    write_image(out, s.image);
  }
  if (!out) throw Error("write failed for " + path.string());
}

Dataset load_packed(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInput("cannot open dataset " + path.string());
  io::expect_magic(in, "SBAD");
  const auto version = io::read_le<std::uint16_t>(in, "version");
  if (version != kPackedVersion) {
    throw FormatError("unsupported dataset version " + std::to_string(version));
  }
  auto read_string = [&](const char* what) {
    const auto n = io::read_le<std::uint64_t>(in, what);
    if (n > (1u << 20)) throw FormatError(std::string("implausible length for ") + what);
    std::string s(n, '\0');
    if (!in.read(s.data(), static_cast<std::streamsize>(n))) {
      throw FormatError(std::string("truncated file while reading ") + what);
    }
    return s;
  };
  Dataset d;
  try {
    d.config = config_from_json(nlohmann::json::parse(read_string("config")));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad dataset config: ") + e.what());
  }
  d.fingerprint = read_string("fingerprint");
  const auto n = io::read_le<std::uint64_t>(in, "sample count");
  for (std::uint64_t i = 0; i < n; ++i) {
    Sample s;
    s.id = static_cast<std::int64_t>(io::read_le<std::uint64_t>(in, "sample id"));
    const auto label = io::read_le<std::uint8_t>(in, "label");
    const auto group = io::read_le<std::uint8_t>(in, "group");
    if (label > 1 || group > 1) throw FormatError("bad label/group tag");
    s.label = static_cast<Label>(label);
    s.group = static_cast<Group>(group);
    s.image = read_image(in);
    d.samples.push_back(std::move(s));
  }
  check_fingerprint(d);
  return d;
}

void save_directory(const Dataset& data, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "images");
  nlohmann::ordered_json manifest;
  manifest["format"] = "sbad-dir";
  manifest["version"] = kDirectoryVersion;
  manifest["config"] = config_to_json(data.config);
  manifest["fingerprint"] = data.fingerprint;
  auto& index = manifest["samples"] = nlohmann::ordered_json::array();
  for (const auto& s : data.samples) {
    const std::string file = "images/" + std::to_string(s.id) + ".f64";
    index.push_back({{"id", s.id},
                     {"label", to_string(s.label)},
                     {"group", to_string(s.group)},
                     {"file", file}});
    std::ofstream out(dir / file, std::ios::binary | std::ios::trunc);
    write_image(out, s.image);
    if (!out) throw Error("write failed for " + (dir / file).string());
  }
  std::ofstream m(dir / "manifest.json", std::ios::trunc);
  m << manifest.dump(1) << "\n";
  if (!m) throw Error("write failed for manifest in " + dir.string());
}

Dataset load_directory(const std::filesystem::path& dir) {
  std::ifstream m(dir / "manifest.json");
  if (!m) throw MissingInput("no manifest.json in " + dir.string());
  Dataset d;
  try {
    const auto manifest = nlohmann::json::parse(m);
    if (manifest.at("format") != "sbad-dir") throw FormatError("unrecognized format");
    if (manifest.at("version").get<int>() != kDirectoryVersion) {
      throw FormatError("unsupported dataset directory version");
    }
    d.config = config_from_json(manifest.at("config"));
    d.fingerprint = manifest.at("fingerprint").get<std::string>();
    for (const auto& e : manifest.at("samples")) {
      Sample s;
      s.id = e.at("id").get<std::int64_t>();
      s.label = parse_label(e.at("label").get<std::string>());
      s.group = parse_group(e.at("group").get<std::string>());
      std::ifstream img(dir / e.at("file").get<std::string>(), std::ios::binary);
      if (!img) throw MissingInput("missing image file for sample " + std::to_string(s.id));
      s.image = read_image(img);
      d.samples.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad manifest: ") + e.what());
  }
  check_fingerprint(d);
  return d;
}

}  // namespace sba

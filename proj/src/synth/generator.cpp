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

#include "sba/synth/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sba/rng.hpp"

namespace sba::synth {
namespace {

double cue_value(Group g, std::size_t row, std::size_t col, double amp) {
  if (row >= kCueRows) return 0.0;
  // Reduce the phase first so both orientations evaluate identical sin() calls.
  const std::size_t period = static_cast<std::size_t>(kCuePeriod);
  const double phase = static_cast<double>((g == Group::A ? row : col) % period);
  return amp * std::sin(2.0 * std::numbers::pi * phase / kCuePeriod);
}

}  // namespace

std::uint64_t cell_stream_seed(std::uint64_t seed, Group g, Label l) {
  const unsigned char key[2] = {static_cast<unsigned char>(g),
                                static_cast<unsigned char>(l)};
  return seed ^ fnv1a(key, sizeof key);
}

std::vector<Tensor> generate_cell_images(const GenConfig& cfg, Group g, Label l,
                                         int count, std::uint64_t stream_seed) {
  Rng rng(stream_seed);
  const double attack_amp = g == Group::A ? cfg.attack_amp_a : cfg.attack_amp_b;
  std::vector<Tensor> images;
  images.reserve(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) {
    Tensor img({1, kImageSide, kImageSide});
    std::size_t r0 = 0, c0 = 0;
    if (l == Label::Attack) {
      // The patch lives below the cue band so the two signals never overlap.
      r0 = kCueRows + rng.below(kImageSide - kCueRows - kPatchSide + 1);
      c0 = rng.below(kImageSide - kPatchSide + 1);
    }
    for (std::size_t r = 0; r < kImageSide; ++r) {
      for (std::size_t c = 0; c < kImageSide; ++c) {
        double v = 0.5 + cue_value(g, r, c, cfg.group_cue_amp);
        if (l == Label::Attack && r >= r0 && r < r0 + kPatchSide && c >= c0 &&
            c < c0 + kPatchSide) {
          const bool even = (((r - r0) / 2 + (c - c0) / 2) % 2) == 0;
          v += even ? attack_amp : -attack_amp;
        }
        if (cfg.noise_sigma > 0.0) v += cfg.noise_sigma * rng.normal();
        img.at(0, r, c) = std::clamp(v, 0.0, 1.0);
      }
    }
    images.push_back(std::move(img));
  }
  return images;
}

Dataset generate(const GenConfig& cfg) {
  cfg.validate();
  Dataset data;
  data.config = cfg;
  data.fingerprint = cfg.fingerprint();
  data.samples.reserve(static_cast<std::size_t>(cfg.counts.total()));
  std::int64_t next_id = 0;
  for (Group g : {Group::A, Group::B}) {
    for (Label l : {Label::BonaFide, Label::Attack}) {
      auto images = generate_cell_images(cfg, g, l, cfg.counts.get(g, l),
                                         cell_stream_seed(cfg.seed, g, l));
      for (auto& img : images) {
        data.samples.push_back(Sample{next_id++, std::move(img), l, g});
      }
    }
  }
  return data;
}

}  // namespace sba::synth

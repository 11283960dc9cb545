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
#include <string>

#include <unistd.h>

#include "sba/nn/minipadnet.hpp"
#include "sba/rng.hpp"
#include "sba/synth/dataset.hpp"
#include "sba/synth/generator.hpp"
#include "sba/tensor.hpp"

namespace sba::testing {

inline Tensor random_image(Rng& rng) {
  Tensor t({1, kImageSide, kImageSide});
  for (auto& v : t.values()) v = rng.uniform01();
  return t;
}

inline Tensor random_tensor(Rng& rng, std::vector<std::size_t> shape, double lo, double hi) {
  Tensor t(std::move(shape));
  for (auto& v : t.values()) v = rng.uniform(lo, hi);
  return t;
}

// init_model leaves biases at zero; randomize them so every path is used.
inline nn::MiniPadNet random_model(std::uint64_t seed) {
  nn::MiniPadNet m = nn::init_model(seed);
  Rng rng(seed ^ 0xb1a5);
  for (auto& l : m.layers) {
    for (auto& v : l.bias.values()) v = rng.uniform(-0.1, 0.1);
  }
  return m;
}

// Small generated set, fast enough for unit tests.
inline Dataset small_dataset(std::uint64_t seed, int per_cell, double amp_a = 0.4,
                             double amp_b = 0.15) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.counts = {per_cell, per_cell, per_cell, per_cell};
  cfg.attack_amp_a = amp_a;
  cfg.attack_amp_b = amp_b;
  return synth::generate(cfg);
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name) {
    path_ = std::filesystem::temp_directory_path() /
            ("sba_test_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace sba::testing

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
#include <vector>

#include "sba/synth/dataset.hpp"

namespace sba::synth {

inline constexpr std::size_t kPatchSide = 12;
inline constexpr std::size_t kCueRows = 16;
inline constexpr double kCuePeriod = 8.0;

// Stream seed for one (group, label) cell: cfg.seed xor a fixed cell hash.
std::uint64_t cell_stream_seed(std::uint64_t seed, Group g, Label l);

// Generates `count` images of one cell from its own substream. Exposed so
// property tests can drive two cells from identical streams.
std::vector<Tensor> generate_cell_images(const GenConfig& cfg, Group g, Label l,
                                         int count, std::uint64_t stream_seed);

// Full dataset, cells in order (A,BF), (A,AT), (B,BF), (B,AT); ids are
// assigned sequentially in that order.
Dataset generate(const GenConfig& cfg);

}  // namespace sba::synth

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
#include <string_view>
#include <vector>

#include "sba/tensor.hpp"

namespace sba::eval {

enum class PerturbationMode : std::uint8_t { Deletion, Insertion };

std::string_view to_string(PerturbationMode m);
PerturbationMode parse_mode(std::string_view s);

// round(fraction * pixel_count), ties to even.
std::size_t pixels_for_fraction(double fraction, std::size_t pixel_count);

// Throws InvalidArgument unless `ranking` is a permutation of [0, n).
void validate_ranking(const std::vector<std::uint32_t>& ranking, std::size_t n);

// Deletion zeroes the top-k ranked pixels of a copy of the image; insertion
// copies them onto an all-zero canvas. One pixel is one spatial location.
Tensor perturb(const Tensor& image, const std::vector<std::uint32_t>& ranking,
               double fraction, PerturbationMode mode);

// Same without the permutation check, writing into `out` (same shape as image).
void perturb_into(const Tensor& image, const std::vector<std::uint32_t>& ranking,
                  std::size_t k, PerturbationMode mode, Tensor& out);

}  // namespace sba::eval

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

#include "sba/nn/minipadnet.hpp"
#include "sba/tensor.hpp"

namespace sba::saliency {

enum class Explainer : std::uint8_t { GradCAM, GradCAMpp };

std::string_view to_string(Explainer e);
Explainer parse_explainer(std::string_view s);

struct SaliencyMap {
  Tensor map;                          // side x side, values in [0,1]
  std::vector<std::uint32_t> ranking;  // pixel indices, most important first
  Explainer explainer = Explainer::GradCAM;
  std::int64_t sample_id = -1;
};

// Raw class-activation maps at the activation resolution (h x w), before
// upsampling. Inputs are (channels, h, w) with identical shapes.
Tensor grad_cam_raw(const Tensor& acts, const Tensor& grads);
Tensor grad_cam_pp_raw(const Tensor& acts, const Tensor& grads);

// Bilinear resize with align-corners sampling: output corners coincide
// with input corners.
Tensor upsample_bilinear(const Tensor& raw, std::size_t out_h, std::size_t out_w);

// Min-max normalization to [0,1], snapped to multiples of 2^-32; a constant
// map becomes all zeros.
void normalize_min_max(Tensor& map);

// Descending by value, ties by ascending row-major index.
std::vector<std::uint32_t> rank_pixels(const Tensor& map);

// raw -> upsample -> normalize -> rank. The raw map must be 2-D.
SaliencyMap finalize(const Tensor& raw, Explainer e, std::size_t side = 32);

SaliencyMap grad_cam(const Tensor& acts, const Tensor& grads, std::size_t side = 32);
SaliencyMap grad_cam_pp(const Tensor& acts, const Tensor& grads, std::size_t side = 32);

// Explains the predicted class of one image: the gradient target is +logit
// when score >= threshold (attack) and -logit otherwise.
SaliencyMap explain(const nn::MiniPadNet& model, const Tensor& image, Explainer e,
                    double threshold, std::int64_t sample_id = -1);

// Same, reusing an existing forward pass.
SaliencyMap explain(const nn::MiniPadNet& model, const nn::ActivationCache& cache,
                    Explainer e, double threshold, std::int64_t sample_id = -1);

// Fraction of the top-k pixels shared by two rankings.
double top_k_overlap(const std::vector<std::uint32_t>& a,
                     const std::vector<std::uint32_t>& b, std::size_t k);

}  // namespace sba::saliency

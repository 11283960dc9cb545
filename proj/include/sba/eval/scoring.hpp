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

#include "sba/eval/perturb.hpp"
#include "sba/nn/minipadnet.hpp"
#include "sba/saliency/saliency.hpp"

// Per-image batch kernels. Each exists as a plain serial loop (the reference
// the tests compare against) and an OpenMP variant. Every image writes only
// its own output slot, so both produce identical results for any thread count.

namespace sba::eval {

using ImageList = std::vector<const Tensor*>;
using RankingList = std::vector<const std::vector<std::uint32_t>*>;

std::vector<double> score_images_serial(const nn::MiniPadNet& model, const ImageList& images);
std::vector<double> score_images_parallel(const nn::MiniPadNet& model,
                                          const ImageList& images, int threads);

// Scores of each image perturbed by its own ranking at k pixels.
std::vector<double> score_perturbed_serial(const nn::MiniPadNet& model,
                                           const ImageList& images,
                                           const RankingList& rankings, std::size_t k,
                                           PerturbationMode mode);
std::vector<double> score_perturbed_parallel(const nn::MiniPadNet& model,
                                             const ImageList& images,
                                             const RankingList& rankings, std::size_t k,
                                             PerturbationMode mode, int threads);

// Saliency for each image; the threshold selects the explained class.
std::vector<saliency::SaliencyMap> explain_serial(const nn::MiniPadNet& model,
                                                  const ImageList& images,
                                                  const std::vector<std::int64_t>& ids,
                                                  saliency::Explainer explainer,
                                                  double threshold);
std::vector<saliency::SaliencyMap> explain_parallel(const nn::MiniPadNet& model,
                                                    const ImageList& images,
                                                    const std::vector<std::int64_t>& ids,
                                                    saliency::Explainer explainer,
                                                    double threshold, int threads);

}  // namespace sba::eval

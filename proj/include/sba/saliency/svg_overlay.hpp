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

#include <string>

#include "sba/saliency/saliency.hpp"

namespace sba::saliency {

// Standalone SVG: the grayscale image as a rect grid with the saliency map
// as a red layer whose opacity is the normalized importance.
std::string overlay_svg(const Tensor& image, const SaliencyMap& map, int cell_px = 8);

}  // namespace sba::saliency

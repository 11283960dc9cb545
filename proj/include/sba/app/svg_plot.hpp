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
#include <vector>

#include "sba/eval/curves.hpp"

namespace sba::app {

// HTER vs fraction for one (model, explainer, mode): group A solid blue,
// group B solid red, normalized group B dashed red.
std::string curve_panel_svg(const std::vector<const eval::EvalCurve*>& series);

}  // namespace sba::app

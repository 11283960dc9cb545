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

#include <filesystem>
#include <string>
#include <vector>

#include "sba/eval/curves.hpp"

namespace sba::eval {

// model_tag,explainer,mode,group,normalized,fraction,hter
std::string curves_csv(const std::vector<EvalCurve>& curves);
// model_tag,explainer,mode,auc_male,auc_female_norm,delta
std::string report_csv(const BiasReport& report);

void write_text(const std::filesystem::path& path, const std::string& text);

// Parses a curves CSV back into curves (threshold fields are not stored).
std::vector<EvalCurve> read_curves_csv(const std::filesystem::path& path);
BiasReport read_report_csv(const std::filesystem::path& path);

}  // namespace sba::eval

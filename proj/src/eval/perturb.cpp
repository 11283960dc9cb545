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

#include "sba/eval/perturb.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>

#include "sba/error.hpp"

namespace sba::eval {

std::string_view to_string(PerturbationMode m) {
  return m == PerturbationMode::Deletion ? "deletion" : "insertion";
}

PerturbationMode parse_mode(std::string_view s) {
  if (s == "deletion") return PerturbationMode::Deletion;
  if (s == "insertion") return PerturbationMode::Insertion;
  throw InvalidArgument("unknown perturbation mode '" + std::string(s) + "'");
}

std::size_t pixels_for_fraction(double fraction, std::size_t pixel_count) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw InvalidArgument("fraction must lie in [0,1]");
  }
  // nearbyint honours the current rounding mode; pin it to nearest-even.
  const int saved = std::fegetround();
  std::fesetround(FE_TONEAREST);
  const double k = std::nearbyint(fraction * static_cast<double>(pixel_count));
  std::fesetround(saved);
  return static_cast<std::size_t>(k);
}

void validate_ranking(const std::vector<std::uint32_t>& ranking, std::size_t n) {
  if (ranking.size() != n) throw InvalidArgument("ranking length does not match pixel count");
  std::vector<bool> seen(n, false);
  for (auto idx : ranking) {
    if (idx >= n || seen[idx]) throw InvalidArgument("ranking is not a permutation");
    seen[idx] = true;
  }
}

void perturb_into(const Tensor& image, const std::vector<std::uint32_t>& ranking,
                  std::size_t k, PerturbationMode mode, Tensor& out) {
  if (mode == PerturbationMode::Deletion) {
    std::copy(image.values().begin(), image.values().end(), out.values().begin());
    for (std::size_t i = 0; i < k; ++i) out[ranking[i]] = 0.0;
  } else {
    std::fill(out.values().begin(), out.values().end(), 0.0);
    for (std::size_t i = 0; i < k; ++i) out[ranking[i]] = image[ranking[i]];
  }
}

Tensor perturb(const Tensor& image, const std::vector<std::uint32_t>& ranking,
               double fraction, PerturbationMode mode) {
  validate_ranking(ranking, image.size());
  const std::size_t k = pixels_for_fraction(fraction, image.size());
  Tensor out(image.shape());
  perturb_into(image, ranking, k, mode, out);
  return out;
}

}  // namespace sba::eval

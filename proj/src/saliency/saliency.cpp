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

#include "sba/saliency/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sba/error.hpp"

namespace sba::saliency {
namespace {

void check_pair(const Tensor& acts, const Tensor& grads) {
  if (acts.rank() != 3) throw ShapeError("activations must be (channels, h, w)");
  if (acts.shape() != grads.shape()) {
    throw ShapeError("activation shape " + acts.shape_string() +
                     " does not match gradient shape " + grads.shape_string());
  }
}

// L = ReLU(sum_k weights[k] * acts[k]).
Tensor weighted_relu_sum(const Tensor& acts, const std::vector<double>& weights) {
  const std::size_t h = acts.dim(1), w = acts.dim(2), plane = h * w;
  Tensor raw({h, w});
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double* a = acts.data() + k * plane;
    for (std::size_t p = 0; p < plane; ++p) raw[p] += weights[k] * a[p];
  }
  for (auto& v : raw.values()) v = std::max(v, 0.0);
  return raw;
}

}  // namespace

std::string_view to_string(Explainer e) {
  return e == Explainer::GradCAM ? "GradCAM" : "GradCAMpp";
}

Explainer parse_explainer(std::string_view s) {
  if (s == "GradCAM") return Explainer::GradCAM;
  if (s == "GradCAMpp") return Explainer::GradCAMpp;
  throw InvalidArgument("unknown explainer '" + std::string(s) + "'");
}

Tensor grad_cam_raw(const Tensor& acts, const Tensor& grads) {
  check_pair(acts, grads);
  const std::size_t channels = acts.dim(0), plane = acts.dim(1) * acts.dim(2);
  std::vector<double> weights(channels);
  for (std::size_t k = 0; k < channels; ++k) {
    const double* g = grads.data() + k * plane;
    weights[k] = std::accumulate(g, g + plane, 0.0) / static_cast<double>(plane);
  }
  return weighted_relu_sum(acts, weights);
}

Tensor grad_cam_pp_raw(const Tensor& acts, const Tensor& grads) {
  check_pair(acts, grads);
  const std::size_t channels = acts.dim(0), plane = acts.dim(1) * acts.dim(2);
  std::vector<double> weights(channels);
  for (std::size_t k = 0; k < channels; ++k) {
    const double* a = acts.data() + k * plane;
    const double* g = grads.data() + k * plane;
    const double act_sum = std::accumulate(a, a + plane, 0.0);
    double wk = 0.0;
    for (std::size_t p = 0; p < plane; ++p) {
      const double g2 = g[p] * g[p];
      const double denom = 2.0 * g2 + act_sum * g2 * g[p];
      const double alpha = std::abs(denom) < 1e-12 ? 0.0 : g2 / denom;
      wk += alpha * std::max(g[p], 0.0);
    }
    weights[k] = wk;
  }
  return weighted_relu_sum(acts, weights);
}

Tensor upsample_bilinear(const Tensor& raw, std::size_t out_h, std::size_t out_w) {
  if (raw.rank() != 2) throw ShapeError("upsample expects a 2-D map");
  const std::size_t in_h = raw.dim(0), in_w = raw.dim(1);
  Tensor out({out_h, out_w});
  auto coord = [](std::size_t i, std::size_t in, std::size_t out) {
    if (out == 1 || in == 1) return 0.0;
    return static_cast<double>(i) * static_cast<double>(in - 1) /
           static_cast<double>(out - 1);
  };
  for (std::size_t y = 0; y < out_h; ++y) {
    const double sy = coord(y, in_h, out_h);
    const std::size_t y0 = std::min(static_cast<std::size_t>(sy), in_h - 1);
    const std::size_t y1 = std::min(y0 + 1, in_h - 1);
    const double fy = sy - static_cast<double>(y0);
    for (std::size_t x = 0; x < out_w; ++x) {
      const double sx = coord(x, in_w, out_w);
      const std::size_t x0 = std::min(static_cast<std::size_t>(sx), in_w - 1);
      const std::size_t x1 = std::min(x0 + 1, in_w - 1);
      const double fx = sx - static_cast<double>(x0);
      const double top = raw[y0 * in_w + x0] * (1.0 - fx) + raw[y0 * in_w + x1] * fx;
      const double bottom = raw[y1 * in_w + x0] * (1.0 - fx) + raw[y1 * in_w + x1] * fx;
      out[y * out_w + x] = top * (1.0 - fy) + bottom * fy;
    }
  }
  return out;
}

void normalize_min_max(Tensor& map) {
  const auto [lo, hi] = std::minmax_element(map.values().begin(), map.values().end());
  const double min = *lo, max = *hi;
  if (max == min) {
    std::fill(map.values().begin(), map.values().end(), 0.0);
    return;
  }
  const double span = max - min;
  // Snap to a 2^-32 grid: pixels that tie in exact arithmetic but differ by
  // rounding noise stay tied, so rankings do not depend on gradient scale.
  constexpr double kGrid = 4294967296.0;
  for (auto& v : map.values()) v = std::round((v - min) / span * kGrid) / kGrid;
}

std::vector<std::uint32_t> rank_pixels(const Tensor& map) {
  std::vector<std::uint32_t> order(map.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&map](std::uint32_t a, std::uint32_t b) { return map[a] > map[b]; });
  return order;
}

SaliencyMap finalize(const Tensor& raw, Explainer e, std::size_t side) {
  SaliencyMap s;
  s.map = upsample_bilinear(raw, side, side);
  normalize_min_max(s.map);
  s.ranking = rank_pixels(s.map);
  s.explainer = e;
  return s;
}

SaliencyMap grad_cam(const Tensor& acts, const Tensor& grads, std::size_t side) {
  return finalize(grad_cam_raw(acts, grads), Explainer::GradCAM, side);
}

SaliencyMap grad_cam_pp(const Tensor& acts, const Tensor& grads, std::size_t side) {
  return finalize(grad_cam_pp_raw(acts, grads), Explainer::GradCAMpp, side);
}

SaliencyMap explain(const nn::MiniPadNet& model, const nn::ActivationCache& cache,
                    Explainer e, double threshold, std::int64_t sample_id) {
  const int sign = cache.score() >= threshold ? 1 : -1;
  const Tensor grads = nn::backward_to_layer(model, cache, sign);
  SaliencyMap s = e == Explainer::GradCAM ? grad_cam(cache.target, grads)
                                          : grad_cam_pp(cache.target, grads);
  s.sample_id = sample_id;
  return s;
}

SaliencyMap explain(const nn::MiniPadNet& model, const Tensor& image, Explainer e,
                    double threshold, std::int64_t sample_id) {
  return explain(model, nn::forward(model, image), e, threshold, sample_id);
}

double top_k_overlap(const std::vector<std::uint32_t>& a,
                     const std::vector<std::uint32_t>& b, std::size_t k) {
  if (k == 0 || k > a.size() || k > b.size()) {
    throw InvalidArgument("top_k_overlap: k out of range");
  }
  std::vector<std::uint32_t> ta(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<std::uint32_t> tb(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(ta.begin(), ta.end());
  std::sort(tb.begin(), tb.end());
  std::vector<std::uint32_t> common;
  std::set_intersection(ta.begin(), ta.end(), tb.begin(), tb.end(),
                        std::back_inserter(common));
  return static_cast<double>(common.size()) / static_cast<double>(k);
}

}  // namespace sba::saliency

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

#include "sba/nn/minipadnet.hpp"

#include <bit>
#include <cmath>
#include <numeric>

#include "sba/error.hpp"
#include "sba/nn/conv.hpp"
#include "sba/rng.hpp"

namespace sba::nn {

using kernels::conv3x3_backward;
using kernels::conv3x3_relu;
using kernels::maxpool2;

void MiniPadNet::validate() const {
  if (layers.size() != 4) throw ShapeError("MiniPadNet must have 4 layers");
  if (target_layer_id != kTargetLayer) throw ShapeError("target layer must be the last conv");
  for (std::size_t i = 0; i < 3; ++i) {
    const auto [out, in] = kConvChannels[i];
    if (layers[i].kind != LayerKind::Conv3x3) throw ShapeError("layer kind mismatch");
    require_shape(layers[i].weight, {out, in, 3, 3}, "conv weight");
    require_shape(layers[i].bias, {out}, "conv bias");
  }
  if (layers[3].kind != LayerKind::Linear) throw ShapeError("layer kind mismatch");
  require_shape(layers[3].weight, {1, kTargetChannels}, "linear weight");
  require_shape(layers[3].bias, {1}, "linear bias");
}

std::size_t MiniPadNet::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

std::uint64_t MiniPadNet::checksum() const {
  // Word-wise multiply-xor over the parameter bit patterns.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const Tensor& t) {
    for (double v : t.values()) {
      h ^= std::bit_cast<std::uint64_t>(v);
      h *= 0x100000001b3ULL;
      h ^= h >> 29;
    }
  };
  for (const auto& l : layers) {
    mix(l.weight);
    mix(l.bias);
  }
  return h;
}

bool operator==(const MiniPadNet& a, const MiniPadNet& b) {
  if (a.layers.size() != b.layers.size() || a.target_layer_id != b.target_layer_id) {
    return false;
  }
  for (std::size_t i = 0; i < a.layers.size(); ++i) {
    if (a.layers[i].kind != b.layers[i].kind || !(a.layers[i].weight == b.layers[i].weight) ||
        !(a.layers[i].bias == b.layers[i].bias)) {
      return false;
    }
  }
  return true;
}

MiniPadNet init_model(std::uint64_t seed) {
  Rng rng(seed);
  MiniPadNet m;
  auto fill = [&](Tensor& t, std::size_t fan_in) {
    const double b = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (auto& v : t.values()) v = rng.uniform(-b, b);
  };
  for (const auto& [out, in] : kConvChannels) {
    Layer l{LayerKind::Conv3x3, Tensor({out, in, 3, 3}), Tensor({out})};
    fill(l.weight, in * 9);
    if (in == 1) {
      // Inputs sit around 0.5; zero-mean first-layer filters start out texture
      // sensitive instead of tracking brightness.
      for (std::size_t o = 0; o < out; ++o) {
        double* w = l.weight.data() + o * 9;
        double mean = 0.0;
        for (int i = 0; i < 9; ++i) mean += w[i];
        mean /= 9.0;
        for (int i = 0; i < 9; ++i) w[i] -= mean;
      }
    }
    m.layers.push_back(std::move(l));
  }
  Layer head{LayerKind::Linear, Tensor({1, MiniPadNet::kTargetChannels}), Tensor({1})};
  fill(head.weight, MiniPadNet::kTargetChannels);
  m.layers.push_back(std::move(head));
  return m;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double ActivationCache::score() const { return sigmoid(logit); }

ActivationCache forward(const MiniPadNet& model, const Tensor& image) {
  require_shape(image, {1, kImageSide, kImageSide}, "forward input");
  ActivationCache c;
  c.model_checksum = model.checksum();
  c.input = image;
  c.conv1 = Tensor({8, 32, 32});
  c.pool1 = Tensor({8, 16, 16});
  c.pool1_argmax.resize(c.pool1.size());
  c.conv2 = Tensor({16, 16, 16});
  c.pool2 = Tensor({16, 8, 8});
  c.pool2_argmax.resize(c.pool2.size());
  c.target = Tensor({32, 8, 8});

  const auto& L = model.layers;
  conv3x3_relu(image.data(), 1, 32, 32, L[0].weight.data(), L[0].bias.data(), 8,
               c.conv1.data());
  maxpool2(c.conv1.data(), 8, 32, 32, c.pool1.data(), c.pool1_argmax.data());
  conv3x3_relu(c.pool1.data(), 8, 16, 16, L[1].weight.data(), L[1].bias.data(), 16,
               c.conv2.data());
  maxpool2(c.conv2.data(), 16, 16, 16, c.pool2.data(), c.pool2_argmax.data());
  conv3x3_relu(c.pool2.data(), 16, 8, 8, L[2].weight.data(), L[2].bias.data(), 32,
               c.target.data());

  constexpr std::size_t spatial = MiniPadNet::kTargetSide * MiniPadNet::kTargetSide;
  double logit = L[3].bias[0];
  for (std::size_t k = 0; k < MiniPadNet::kTargetChannels; ++k) {
    const double* a = c.target.data() + k * spatial;
    c.pooled[k] = std::accumulate(a, a + spatial, 0.0) / static_cast<double>(spatial);
    logit += L[3].weight[k] * c.pooled[k];
  }
  if (!std::isfinite(logit)) throw InvariantViolation("non-finite logit");
  c.logit = logit;
  return c;
}

double score(const MiniPadNet& model, const Tensor& image) {
  return forward(model, image).score();
}

Tensor backward_to_layer(const MiniPadNet& model, const ActivationCache& cache,
                         int target_sign) {
  if (target_sign != 1 && target_sign != -1) {
    throw InvalidArgument("target_sign must be +1 or -1");
  }
  if (cache.model_checksum != model.checksum()) {
    throw InvalidArgument("activation cache was produced by a different model");
  }
  constexpr std::size_t side = MiniPadNet::kTargetSide;
  constexpr double spatial = static_cast<double>(side * side);
  Tensor grad({MiniPadNet::kTargetChannels, side, side});
  for (std::size_t k = 0; k < MiniPadNet::kTargetChannels; ++k) {
    const double g = target_sign * model.layers[3].weight[k] / spatial;
    std::fill(grad.data() + k * side * side, grad.data() + (k + 1) * side * side, g);
  }
  return grad;
}

Gradients Gradients::zeros_like(const MiniPadNet& model) {
  Gradients g;
  for (const auto& l : model.layers) {
    g.weight.emplace_back(l.weight.shape());
    g.bias.emplace_back(l.bias.shape());
  }
  return g;
}

void Gradients::clear() {
  for (auto& t : weight) std::fill(t.values().begin(), t.values().end(), 0.0);
  for (auto& t : bias) std::fill(t.values().begin(), t.values().end(), 0.0);
}

double bce_with_logit(double logit, double target) {
  return std::max(logit, 0.0) - logit * target + std::log1p(std::exp(-std::abs(logit)));
}

double accumulate_loss_gradient(const MiniPadNet& model, const ActivationCache& c,
                                Label label, Gradients& g) {
  const double y = label == Label::Attack ? 1.0 : 0.0;
  const double dlogit = sigmoid(c.logit) - y;
  const auto& L = model.layers;
  constexpr std::size_t spatial = MiniPadNet::kTargetSide * MiniPadNet::kTargetSide;

  // Head and global average pool; ReLU mask uses the post-activation value.
  g.bias[3][0] += dlogit;
  thread_local Tensor d3({32, 8, 8});
  for (std::size_t k = 0; k < MiniPadNet::kTargetChannels; ++k) {
    g.weight[3][k] += dlogit * c.pooled[k];
    const double dk = dlogit * L[3].weight[k] / static_cast<double>(spatial);
    for (std::size_t p = 0; p < spatial; ++p) {
      const std::size_t i = k * spatial + p;
      d3[i] = c.target[i] > 0.0 ? dk : 0.0;
    }
  }

  thread_local Tensor dpool2({16, 8, 8});
  conv3x3_backward(c.pool2.data(), 16, 8, 8, L[2].weight.data(), 32, d3.data(),
                   g.weight[2].data(), g.bias[2].data(), dpool2.data());

  thread_local Tensor d2({16, 16, 16});
  std::fill(d2.values().begin(), d2.values().end(), 0.0);
  for (std::size_t i = 0; i < dpool2.size(); ++i) {
    const auto src = c.pool2_argmax[i];
    if (c.conv2[src] > 0.0) d2[src] += dpool2[i];
  }

  thread_local Tensor dpool1({8, 16, 16});
  conv3x3_backward(c.pool1.data(), 8, 16, 16, L[1].weight.data(), 16, d2.data(),
                   g.weight[1].data(), g.bias[1].data(), dpool1.data());

  thread_local Tensor d1({8, 32, 32});
  std::fill(d1.values().begin(), d1.values().end(), 0.0);
  for (std::size_t i = 0; i < dpool1.size(); ++i) {
    const auto src = c.pool1_argmax[i];
    if (c.conv1[src] > 0.0) d1[src] += dpool1[i];
  }

  conv3x3_backward(c.input.data(), 1, 32, 32, L[0].weight.data(), 8, d1.data(),
                   g.weight[0].data(), g.bias[0].data(), nullptr);

  return bce_with_logit(c.logit, y);
}

}  // namespace sba::nn

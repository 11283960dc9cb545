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

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "sba/synth/dataset.hpp"
#include "sba/tensor.hpp"

namespace sba::nn {

enum class LayerKind : std::uint8_t { Conv3x3 = 1, Linear = 2 };

struct Layer {
  LayerKind kind;
  Tensor weight;  // conv: (out,in,3,3); linear: (out,in)
  Tensor bias;    // (out)
};

// conv3x3(1->8)+ReLU+pool2 -> conv3x3(8->16)+ReLU+pool2 ->
// conv3x3(16->32)+ReLU [target, 8x8] -> global average pool -> linear(32->1).
struct MiniPadNet {
  static constexpr std::size_t kTargetLayer = 2;
  static constexpr std::size_t kTargetChannels = 32;
  static constexpr std::size_t kTargetSide = 8;

  std::vector<Layer> layers;
  std::size_t target_layer_id = kTargetLayer;

  // Throws ShapeError if the layers deviate from the fixed architecture.
  void validate() const;
  std::size_t parameter_count() const;
  // FNV-1a over the raw parameter bits; ties caches to the model that made them.
  std::uint64_t checksum() const;

  friend bool operator==(const MiniPadNet& a, const MiniPadNet& b);
};

// Declared (out, in) channel pairs for the three conv layers.
inline constexpr std::array<std::array<std::size_t, 2>, 3> kConvChannels = {
    {{8, 1}, {16, 8}, {32, 16}}};

// He-uniform weights, b = sqrt(6 / fan_in), drawn layer by layer in row-major
// order from one xoshiro256** stream; biases start at zero. Each first-layer
// filter is then shifted to zero mean.
MiniPadNet init_model(std::uint64_t seed);

struct ActivationCache {
  std::uint64_t model_checksum = 0;
  Tensor input;                              // 1x32x32
  Tensor conv1;                              // 8x32x32, post-ReLU
  Tensor pool1;                              // 8x16x16
  std::vector<std::uint32_t> pool1_argmax;   // flat index into conv1
  Tensor conv2;                              // 16x16x16, post-ReLU
  Tensor pool2;                              // 16x8x8
  std::vector<std::uint32_t> pool2_argmax;
  Tensor target;                             // 32x8x8, post-ReLU
  std::array<double, MiniPadNet::kTargetChannels> pooled{};
  double logit = 0.0;

  // Probability of the attack class.
  double score() const;
};

ActivationCache forward(const MiniPadNet& model, const Tensor& image);

// Attack probability only; skips nothing but avoids exposing the cache.
double score(const MiniPadNet& model, const Tensor& image);

double sigmoid(double z);

// d(target_sign * logit) / d(target activations), shape 32x8x8.
Tensor backward_to_layer(const MiniPadNet& model, const ActivationCache& cache,
                         int target_sign);

// Parameter gradients laid out like MiniPadNet::layers.
struct Gradients {
  std::vector<Tensor> weight;
  std::vector<Tensor> bias;

  static Gradients zeros_like(const MiniPadNet& model);
  void clear();
};

// Binary cross-entropy on the logit; attack is the positive class.
double bce_with_logit(double logit, double target);

// Adds d(BCE)/d(params) for one sample into `grads`; returns the sample loss.
double accumulate_loss_gradient(const MiniPadNet& model, const ActivationCache& cache,
                                Label label, Gradients& grads);

struct TrainConfig {
  int epochs = 12;
  int batch_size = 32;
  double learning_rate = 0.03;
  double momentum = 0.9;
  double grad_clip = 0.3;  // max L2 norm of the batch-mean gradient, 0 disables
  std::uint64_t seed = 1;

  void validate() const;
};

struct TrainHistory {
  double initial_loss = 0.0;           // mean loss over the data before any step
  std::vector<double> epoch_losses;    // mean per-sample loss during each epoch
};

MiniPadNet train(MiniPadNet model, const Dataset& data, const TrainConfig& cfg,
                 TrainHistory* history = nullptr);

double mean_loss(const MiniPadNet& model, const Dataset& data);

// "SBAW" weight file, see README for the layout.
void save_model(const MiniPadNet& model, const std::filesystem::path& path);
MiniPadNet load_model(const std::filesystem::path& path);

}  // namespace sba::nn

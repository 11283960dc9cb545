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

#include <cmath>
#include <numeric>

#include "sba/error.hpp"
#include "sba/nn/minipadnet.hpp"
#include "sba/rng.hpp"

namespace sba::nn {

void TrainConfig::validate() const {
  if (epochs < 0) throw ConfigError("train.epochs", "must be >= 0");
  if (batch_size <= 0) throw ConfigError("train.batch_size", "must be > 0");
  if (!(learning_rate > 0.0)) throw ConfigError("train.learning_rate", "must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw ConfigError("train.momentum", "must be in [0,1)");
  }
  if (!(grad_clip >= 0.0) || !std::isfinite(grad_clip)) {
    throw ConfigError("train.grad_clip", "must be a finite value >= 0");
  }
}

double mean_loss(const MiniPadNet& model, const Dataset& data) {
  double total = 0.0;
  for (const auto& s : data.samples) {
    total += bce_with_logit(forward(model, s.image).logit,
                            s.label == Label::Attack ? 1.0 : 0.0);
  }
  return total / static_cast<double>(data.size());
}

MiniPadNet train(MiniPadNet model, const Dataset& data, const TrainConfig& cfg,
                 TrainHistory* history) {
  cfg.validate();
  model.validate();
  if (data.empty()) throw InvalidArgument("training set is empty");
  if (!data.has_both_labels()) {
    throw InvalidArgument("training set must contain both bona fide and attack samples");
  }
  if (history) {
    history->initial_loss = mean_loss(model, data);
    history->epoch_losses.clear();
  }

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Gradients grads = Gradients::zeros_like(model);
  Gradients velocity = Gradients::zeros_like(model);

  auto step = [&](Tensor& param, const Tensor& grad, Tensor& vel, double scale) {
    for (std::size_t i = 0; i < param.size(); ++i) {
      vel[i] = cfg.momentum * vel[i] + grad[i] * scale;
      param[i] -= cfg.learning_rate * vel[i];
    }
  };

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // Fisher-Yates from the top down.
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      std::swap(order[i], order[rng.below(i + 1)]);
    }
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      grads.clear();
      for (std::size_t i = start; i < end; ++i) {
        const Sample& s = data.samples[order[i]];
        epoch_loss += accumulate_loss_gradient(model, forward(model, s.image), s.label, grads);
      }
      double scale = 1.0 / static_cast<double>(end - start);
      if (cfg.grad_clip > 0.0) {
        double sq = 0.0;
        for (std::size_t l = 0; l < model.layers.size(); ++l) {
          for (double g : grads.weight[l].values()) sq += g * g;
          for (double g : grads.bias[l].values()) sq += g * g;
        }
        const double norm = std::sqrt(sq) * scale;
        if (norm > cfg.grad_clip) scale *= cfg.grad_clip / norm;
      }
      for (std::size_t l = 0; l < model.layers.size(); ++l) {
        step(model.layers[l].weight, grads.weight[l], velocity.weight[l], scale);
        step(model.layers[l].bias, grads.bias[l], velocity.bias[l], scale);
      }
    }
    if (history) history->epoch_losses.push_back(epoch_loss / static_cast<double>(data.size()));
  }

  for (const auto& l : model.layers) {
    if (!l.weight.all_finite() || !l.bias.all_finite()) {
      throw InvariantViolation("training produced non-finite parameters");
    }
  }
  return model;
}

}  // namespace sba::nn

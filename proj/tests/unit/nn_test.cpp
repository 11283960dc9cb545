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
#include <fstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sba/error.hpp"
#include "sba/nn/conv.hpp"
#include "sba/nn/minipadnet.hpp"

namespace sba::nn {
namespace {

using testing::random_image;
using testing::random_tensor;
using testing::random_model;
using testing::TempDir;

TEST(InitModel, SameSeedIsBitIdentical) {
  EXPECT_TRUE(init_model(7) == init_model(7));
  EXPECT_EQ(init_model(7).checksum(), init_model(7).checksum());
}

TEST(InitModel, DifferentSeedsDiffer) {
  EXPECT_FALSE(init_model(7) == init_model(8));
}

TEST(InitModel, ShapesFollowArchitecture) {
  const MiniPadNet m = init_model(3);
  ASSERT_EQ(m.layers.size(), 4u);
  EXPECT_EQ(m.target_layer_id, 2u);
  EXPECT_TRUE(m.layers[0].weight.has_shape({8, 1, 3, 3}));
  EXPECT_TRUE(m.layers[1].weight.has_shape({16, 8, 3, 3}));
  EXPECT_TRUE(m.layers[2].weight.has_shape({32, 16, 3, 3}));
  EXPECT_TRUE(m.layers[3].weight.has_shape({1, 32}));
  EXPECT_EQ(m.parameter_count(), 80u + 1168u + 4640u + 33u);
  EXPECT_NO_THROW(m.validate());
}

TEST(InitModel, WeightsWithinHeBounds) {
  const MiniPadNet m = init_model(11);
  const std::size_t fan_in[] = {9, 72, 144, 32};
  for (std::size_t i = 0; i < 4; ++i) {
    const double b = std::sqrt(6.0 / static_cast<double>(fan_in[i]));
    // The first layer is re-centered, which can move a value by up to b.
    const double bound = i == 0 ? 2.0 * b : b;
    for (double v : m.layers[i].weight.values()) EXPECT_LE(std::abs(v), bound);
    for (double v : m.layers[i].bias.values()) EXPECT_EQ(v, 0.0);
  }
  for (std::size_t o = 0; o < 8; ++o) {
    double sum = 0.0;
    for (std::size_t j = 0; j < 9; ++j) sum += m.layers[0].weight[o * 9 + j];
    EXPECT_NEAR(sum, 0.0, 1e-12);
  }
}

TEST(Forward, ZeroImageWithZeroBiasesScoresHalf) {
  const MiniPadNet m = init_model(5);
  const auto c = forward(m, Tensor({1, 32, 32}));
  EXPECT_EQ(c.logit, 0.0);
  EXPECT_EQ(c.score(), 0.5);
}

TEST(Forward, TargetActivationsAreNonNegative) {
  Rng rng(1);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto c = forward(random_model(s), random_image(rng));
    ASSERT_TRUE(c.target.has_shape({32, 8, 8}));
    for (double v : c.target.values()) EXPECT_GE(v, 0.0);
    EXPECT_TRUE(std::isfinite(c.logit));
  }
}

TEST(Forward, MatchesDirectLoopOracle) {
  Rng rng(2);
  for (std::uint64_t s = 0; s < 4; ++s) {
    const MiniPadNet m = random_model(100 + s);
    const Tensor img = random_image(rng);
    const auto c = forward(m, img);
    const auto target = oracle::target_activations(m, img);
    for (std::size_t i = 0; i < target.size(); ++i) {
      ASSERT_NEAR(c.target[i], target[i], 1e-12 * std::max(1.0, std::abs(target[i])));
    }
    EXPECT_NEAR(c.logit, oracle::head_logit(m, target), 1e-12);
    EXPECT_EQ(score(m, img), c.score());
  }
}

TEST(Forward, RejectsWrongShape) {
  const MiniPadNet m = init_model(1);
  EXPECT_THROW(forward(m, Tensor({1, 16, 16})), ShapeError);
  EXPECT_THROW(forward(m, Tensor({32, 32})), ShapeError);
}

TEST(ConvKernel, HandComputedFourPixelImage) {
  // Taps: centre 1, right neighbour 2; bias -3, then ReLU.
  const double in[] = {1, 2, 3, 4};
  double w[9] = {0, 0, 0, 0, 1, 2, 0, 0, 0};
  const double bias[] = {-3};
  double out[4];
  kernels::conv3x3_relu(in, 1, 2, 2, w, bias, 1, out);
  // Pre-activation [[1+4, 2], [3+8, 4]] minus 3.
  EXPECT_EQ(out[0], 2.0);
  EXPECT_EQ(out[1], 0.0);
  EXPECT_EQ(out[2], 8.0);
  EXPECT_EQ(out[3], 1.0);
}

TEST(ConvKernel, MatchesOracleOnOddSizes) {
  Rng rng(3);
  const std::size_t cin = 3, h = 5, w = 7, cout = 5;
  const Tensor in = random_tensor(rng, {cin, h, w}, -1, 1);
  const Tensor weight = random_tensor(rng, {cout, cin, 3, 3}, -1, 1);
  const Tensor bias = random_tensor(rng, {cout}, -0.5, 0.5);
  std::vector<double> out(cout * h * w);
  kernels::conv3x3_relu(in.data(), cin, h, w, weight.data(), bias.data(), cout, out.data());
  const auto ref = oracle::conv3x3({in.values().begin(), in.values().end()}, cin, h, w, weight,
                                   bias, true);
  for (std::size_t i = 0; i < ref.size(); ++i) ASSERT_NEAR(out[i], ref[i], 1e-12);
}

TEST(ConvKernel, BackwardMatchesLinearOracle) {
  // L = sum(r * conv(in, w) + b) is linear in w, b and in, so central
  // differences of the oracle are exact up to rounding.
  Rng rng(4);
  const std::size_t cin = 2, h = 6, w = 9, cout = 3;
  Tensor in = random_tensor(rng, {cin, h, w}, -1, 1);
  Tensor weight = random_tensor(rng, {cout, cin, 3, 3}, -1, 1);
  Tensor bias = random_tensor(rng, {cout}, -1, 1);
  const Tensor r = random_tensor(rng, {cout, h, w}, -1, 1);

  Tensor dw({cout, cin, 3, 3}), db({cout}), din({cin, h, w});
  kernels::conv3x3_backward(in.data(), cin, h, w, weight.data(), cout, r.data(), dw.data(),
                            db.data(), din.data());

  auto loss = [&] {
    const auto y = oracle::conv3x3({in.values().begin(), in.values().end()}, cin, h, w, weight,
                                   bias, false);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += r[i] * y[i];
    return s;
  };
  auto fd = [&](double& p) {
    const double old = p;
    p = old + 1e-3;
    const double up = loss();
    p = old - 1e-3;
    const double down = loss();
    p = old;
    return (up - down) / 2e-3;
  };
  for (std::size_t i = 0; i < weight.size(); ++i) ASSERT_NEAR(dw[i], fd(weight[i]), 1e-9);
  for (std::size_t i = 0; i < bias.size(); ++i) ASSERT_NEAR(db[i], fd(bias[i]), 1e-9);
  for (std::size_t i = 0; i < in.size(); ++i) ASSERT_NEAR(din[i], fd(in[i]), 1e-9);
}

TEST(ConvKernel, BackwardAccumulatesAndSkipsInputGradient) {
  Rng rng(5);
  const Tensor in = random_tensor(rng, {1, 4, 4}, 0, 1);
  const Tensor weight = random_tensor(rng, {2, 1, 3, 3}, -1, 1);
  const Tensor r = random_tensor(rng, {2, 4, 4}, -1, 1);
  Tensor dw1({2, 1, 3, 3}), db1({2});
  kernels::conv3x3_backward(in.data(), 1, 4, 4, weight.data(), 2, r.data(), dw1.data(),
                            db1.data(), nullptr);
  Tensor dw2 = dw1, db2 = db1;
  kernels::conv3x3_backward(in.data(), 1, 4, 4, weight.data(), 2, r.data(), dw2.data(),
                            db2.data(), nullptr);
  for (std::size_t i = 0; i < dw1.size(); ++i) EXPECT_NEAR(dw2[i], 2.0 * dw1[i], 1e-12);
  for (std::size_t i = 0; i < db1.size(); ++i) EXPECT_NEAR(db2[i], 2.0 * db1[i], 1e-12);
}

TEST(MaxPool, FirstMaximumWinsTies) {
  const double in[] = {1, 3, 0, 0,   //
                       3, 2, 5, 5,   //
                       0, 0, 7, 7,   //
                       0, 0, 7, 7};
  double out[4];
  std::uint32_t arg[4];
  kernels::maxpool2(in, 1, 4, 4, out, arg);
  EXPECT_EQ(out[0], 3.0);
  EXPECT_EQ(arg[0], 1u);
  EXPECT_EQ(out[1], 5.0);
  EXPECT_EQ(arg[1], 6u);
  EXPECT_EQ(out[2], 0.0);
  EXPECT_EQ(arg[2], 8u);
  EXPECT_EQ(out[3], 7.0);
  EXPECT_EQ(arg[3], 10u);
}

TEST(BackwardToLayer, EqualsSignedHeadWeightOverSpatialSize) {
  const MiniPadNet m = random_model(9);
  Rng rng(9);
  const auto c = forward(m, random_image(rng));
  const Tensor g = backward_to_layer(m, c, +1);
  ASSERT_TRUE(g.has_shape({32, 8, 8}));
  for (std::size_t k = 0; k < 32; ++k) {
    for (std::size_t i = 0; i < 64; ++i) EXPECT_EQ(g[k * 64 + i], m.layers[3].weight[k] / 64.0);
  }
}

TEST(BackwardToLayer, SignFlipNegatesExactly) {
  const MiniPadNet m = random_model(10);
  Rng rng(10);
  const auto c = forward(m, random_image(rng));
  const Tensor pos = backward_to_layer(m, c, +1);
  const Tensor neg = backward_to_layer(m, c, -1);
  for (std::size_t i = 0; i < pos.size(); ++i) EXPECT_EQ(neg[i], -pos[i]);
}

TEST(BackwardToLayer, MatchesCentralDifferences) {
  Rng rng(11);
  for (std::uint64_t s = 0; s < 3; ++s) {
    const MiniPadNet m = random_model(200 + s);
    const auto c = forward(m, random_image(rng));
    const Tensor g = backward_to_layer(m, c, -1);
    std::vector<double> a(c.target.values().begin(), c.target.values().end());
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double old = a[i];
      a[i] = old + 1e-4;
      const double up = -oracle::head_logit(m, a);
      a[i] = old - 1e-4;
      const double down = -oracle::head_logit(m, a);
      a[i] = old;
      ASSERT_LT(oracle::relative_error(g[i], (up - down) / 2e-4), 1e-5) << "entry " << i;
    }
  }
}

TEST(BackwardToLayer, RejectsForeignCacheAndBadSign) {
  const MiniPadNet m = init_model(1);
  Rng rng(1);
  const auto c = forward(m, random_image(rng));
  EXPECT_THROW(backward_to_layer(init_model(2), c, 1), InvalidArgument);
  EXPECT_THROW(backward_to_layer(m, c, 0), InvalidArgument);
  EXPECT_THROW(backward_to_layer(m, c, 2), InvalidArgument);
}

TEST(LossGradient, BceValues) {
  EXPECT_NEAR(bce_with_logit(0.0, 1.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(bce_with_logit(0.0, 0.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(bce_with_logit(800.0, 0.0), 800.0, 1e-9);
  EXPECT_NEAR(bce_with_logit(-800.0, 1.0), 800.0, 1e-9);
  EXPECT_NEAR(bce_with_logit(800.0, 1.0), 0.0, 1e-12);
  EXPECT_NEAR(sigmoid(-800.0), 0.0, 1e-300);
  EXPECT_EQ(sigmoid(0.0), 0.5);
}

TEST(LossGradient, ParameterGradientsMatchCentralDifferences) {
  Rng rng(12);
  for (std::uint64_t s = 0; s < 2; ++s) {
    MiniPadNet m = random_model(300 + s);
    const Tensor img = random_image(rng);
    const Label label = s == 0 ? Label::Attack : Label::BonaFide;
    const double y = label == Label::Attack ? 1.0 : 0.0;
    Gradients g = Gradients::zeros_like(m);
    accumulate_loss_gradient(m, forward(m, img), label, g);

    auto loss = [&] { return bce_with_logit(oracle::logit(m, img), y); };
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t l = rng.below(4);
      const bool is_bias = rng.below(4) == 0;
      Tensor& p = is_bias ? m.layers[l].bias : m.layers[l].weight;
      const std::size_t i = rng.below(p.size());
      const double analytic = is_bias ? g.bias[l][i] : g.weight[l][i];
      const double old = p[i];
      p[i] = old + 1e-6;
      const double up = loss();
      p[i] = old - 1e-6;
      const double down = loss();
      p[i] = old;
      const double numeric = (up - down) / 2e-6;
      EXPECT_LT(oracle::relative_error(analytic, numeric, 1e-6), 1e-4)
          << "layer " << l << (is_bias ? " bias " : " weight ") << i;
    }
  }
}

TEST(Train, ZeroEpochsReturnsInputModel) {
  const Dataset d = testing::small_dataset(1, 8);
  TrainConfig cfg;
  cfg.epochs = 0;
  const MiniPadNet m = init_model(4);
  EXPECT_TRUE(train(m, d, cfg) == m);
}

TEST(Train, DeterministicGivenInputs) {
  const Dataset d = testing::small_dataset(2, 16);
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 8;
  const MiniPadNet a = train(init_model(5), d, cfg);
  const MiniPadNet b = train(init_model(5), d, cfg);
  EXPECT_TRUE(a == b);
  cfg.seed = 99;
  EXPECT_FALSE(train(init_model(5), d, cfg) == a);
}

TEST(Train, RejectsSingleLabelAndEmptyData) {
  const Dataset d = testing::small_dataset(3, 4);
  TrainConfig cfg;
  EXPECT_THROW(train(init_model(1), split_by(d, SplitPredicate::label(Label::Attack)), cfg),
               InvalidArgument);
  EXPECT_THROW(train(init_model(1), Dataset{}, cfg), InvalidArgument);
}

TEST(Train, ConfigValidationNamesField) {
  auto field_of = [](TrainConfig c) {
    try {
      c.validate();
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string();
  };
  TrainConfig c;
  EXPECT_EQ(field_of(c), "");
  c.batch_size = 0;
  EXPECT_EQ(field_of(c), "train.batch_size");
  c = {};
  c.learning_rate = 0.0;
  EXPECT_EQ(field_of(c), "train.learning_rate");
  c = {};
  c.momentum = 1.0;
  EXPECT_EQ(field_of(c), "train.momentum");
  c = {};
  c.epochs = -1;
  EXPECT_EQ(field_of(c), "train.epochs");
  c = {};
  c.grad_clip = -0.5;
  EXPECT_EQ(field_of(c), "train.grad_clip");
}

TEST(Train, DefaultBalancedSetLowersLoss) {
  // 4x500 images, 10 epochs, otherwise default settings.
  GenConfig gen;
  gen.attack_amp_a = 0.4;
  gen.attack_amp_b = 0.15;
  const Dataset d = synth::generate(gen);
  TrainConfig cfg;
  cfg.epochs = 10;
  TrainHistory h;
  const MiniPadNet m = train(init_model(cfg.seed), d, cfg, &h);
  ASSERT_EQ(h.epoch_losses.size(), 10u);
  EXPECT_LT(h.epoch_losses.back(), h.epoch_losses.front());
  EXPECT_LT(mean_loss(m, d), h.initial_loss);
  ::testing::Test::RecordProperty("final_epoch_loss", std::to_string(h.epoch_losses.back()));
}

TEST(WeightFile, RoundTripIsBitIdentical) {
  TempDir dir("weights_rt");
  const MiniPadNet m = random_model(21);
  save_model(m, dir.path() / "m.sbaw");
  const MiniPadNet back = load_model(dir.path() / "m.sbaw");
  EXPECT_TRUE(back == m);
  EXPECT_EQ(back.checksum(), m.checksum());
}

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_bytes(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << bytes;
}

TEST(WeightFile, RejectsCorruptFiles) {
  TempDir dir("weights_bad");
  const auto good = dir.path() / "good.sbaw";
  save_model(init_model(1), good);
  const std::string bytes = read_bytes(good);
  const auto bad = dir.path() / "bad.sbaw";

  write_bytes(bad, bytes.substr(0, bytes.size() / 2));
  EXPECT_THROW(load_model(bad), FormatError);

  std::string magic = bytes;
  magic[0] = 'X';
  write_bytes(bad, magic);
  try {
    load_model(bad);
    FAIL() << "wrong magic accepted";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("unrecognized format"), std::string::npos);
  }

  std::string version = bytes;
  version[4] = 2;
  write_bytes(bad, version);
  EXPECT_THROW(load_model(bad), FormatError);

  write_bytes(bad, bytes + "x");
  EXPECT_THROW(load_model(bad), FormatError);

  write_bytes(bad, "");
  EXPECT_THROW(load_model(bad), FormatError);

  EXPECT_THROW(load_model(dir.path() / "missing.sbaw"), MissingInput);
}

}  // namespace
}  // namespace sba::nn

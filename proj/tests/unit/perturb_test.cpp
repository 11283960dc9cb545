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

#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "sba/error.hpp"
#include "sba/eval/perturb.hpp"

namespace sba::eval {
namespace {

std::vector<std::uint32_t> random_ranking(Rng& rng, std::size_t n) {
  std::vector<std::uint32_t> r(n);
  std::iota(r.begin(), r.end(), 0u);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(r[i], r[rng.below(i + 1)]);
  return r;
}

// Image with no exact zeros, so every touched pixel visibly changes.
Tensor positive_image(Rng& rng) {
  Tensor t({1, kImageSide, kImageSide});
  for (auto& v : t.values()) v = 0.05 + 0.95 * rng.uniform01();
  return t;
}

TEST(PixelsForFraction, RoundsHalfToEven) {
  EXPECT_EQ(pixels_for_fraction(0.05, 1024), 51u);
  EXPECT_EQ(pixels_for_fraction(0.30, 1024), 307u);
  EXPECT_EQ(pixels_for_fraction(0.25, 10), 2u);
  EXPECT_EQ(pixels_for_fraction(0.75, 10), 8u);
  EXPECT_EQ(pixels_for_fraction(0.0, 1024), 0u);
  EXPECT_EQ(pixels_for_fraction(1.0, 1024), 1024u);
  EXPECT_THROW(pixels_for_fraction(-0.01, 1024), InvalidArgument);
  EXPECT_THROW(pixels_for_fraction(1.5, 1024), InvalidArgument);
}

TEST(Perturb, EndpointIdentities) {
  Rng rng(1);
  const Tensor img = positive_image(rng);
  const auto rank = random_ranking(rng, kPixelCount);
  const Tensor zeros({1, kImageSide, kImageSide});
  EXPECT_EQ(perturb(img, rank, 0.0, PerturbationMode::Deletion), img);
  EXPECT_EQ(perturb(img, rank, 1.0, PerturbationMode::Insertion), img);
  EXPECT_EQ(perturb(img, rank, 1.0, PerturbationMode::Deletion), zeros);
  EXPECT_EQ(perturb(img, rank, 0.0, PerturbationMode::Insertion), zeros);
}

TEST(Perturb, TouchesExactlyTheTopRankedPixels) {
  Rng rng(2);
  const Tensor img = positive_image(rng);
  const auto rank = random_ranking(rng, kPixelCount);
  const Tensor del = perturb(img, rank, 0.05, PerturbationMode::Deletion);
  const Tensor ins = perturb(img, rank, 0.05, PerturbationMode::Insertion);
  std::size_t deleted = 0, inserted = 0;
  for (std::size_t i = 0; i < kPixelCount; ++i) {
    deleted += del[i] != img[i] ? 1 : 0;
    inserted += ins[i] != 0.0 ? 1 : 0;
  }
  EXPECT_EQ(deleted, 51u);
  EXPECT_EQ(inserted, 51u);
  for (std::size_t i = 0; i < 51; ++i) {
    EXPECT_EQ(del[rank[i]], 0.0);
    EXPECT_EQ(ins[rank[i]], img[rank[i]]);
  }
}

TEST(Perturb, DeletionAndInsertionPartitionTheImage) {
  Rng rng(3);
  for (double f : {0.05, 0.1, 0.3, 0.77}) {
    const Tensor img = positive_image(rng);
    const auto rank = random_ranking(rng, kPixelCount);
    const Tensor del = perturb(img, rank, f, PerturbationMode::Deletion);
    const Tensor ins = perturb(img, rank, f, PerturbationMode::Insertion);
    for (std::size_t i = 0; i < kPixelCount; ++i) ASSERT_EQ(del[i] + ins[i], img[i]);
  }
}

TEST(Perturb, IdempotentAndMonotoneInFraction) {
  Rng rng(4);
  const Tensor img = positive_image(rng);
  const auto rank = random_ranking(rng, kPixelCount);
  const Tensor once = perturb(img, rank, 0.2, PerturbationMode::Deletion);
  EXPECT_EQ(perturb(once, rank, 0.2, PerturbationMode::Deletion), once);
  // A larger deletion of the smaller one equals the larger deletion.
  EXPECT_EQ(perturb(once, rank, 0.3, PerturbationMode::Deletion),
            perturb(img, rank, 0.3, PerturbationMode::Deletion));
  const Tensor ins = perturb(img, rank, 0.2, PerturbationMode::Insertion);
  EXPECT_EQ(perturb(ins, rank, 0.2, PerturbationMode::Insertion), ins);
}

TEST(Perturb, RejectsInvalidRanking) {
  Rng rng(5);
  const Tensor img = positive_image(rng);
  auto rank = random_ranking(rng, kPixelCount);
  EXPECT_THROW(perturb(img, {0, 1, 2}, 0.1, PerturbationMode::Deletion), InvalidArgument);
  rank[5] = rank[6];
  EXPECT_THROW(perturb(img, rank, 0.1, PerturbationMode::Deletion), InvalidArgument);
  rank[5] = kPixelCount;
  EXPECT_THROW(validate_ranking(rank, kPixelCount), InvalidArgument);
}

TEST(PerturbationMode, TagsRoundTrip) {
  EXPECT_EQ(parse_mode(to_string(PerturbationMode::Deletion)), PerturbationMode::Deletion);
  EXPECT_EQ(parse_mode(to_string(PerturbationMode::Insertion)), PerturbationMode::Insertion);
  EXPECT_THROW(parse_mode("blur"), InvalidArgument);
}

}  // namespace
}  // namespace sba::eval

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

#include "sba/eval/scoring.hpp"

#include <exception>

#include "sba/error.hpp"

namespace sba::eval {
namespace {

void check_threads(int threads) {
  if (threads < 1) throw InvalidArgument("thread count must be positive");
}

void check_lists(const ImageList& images, const RankingList& rankings) {
  if (images.size() != rankings.size()) {
    throw InvalidArgument("image and ranking lists differ in length");
  }
}

// Exceptions must not escape an OpenMP region; the first one is kept and
// rethrown after the join.
class ErrorSlot {
 public:
  template <typename F>
  void run(F&& f) {
    try {
      f();
    } catch (...) {
#pragma omp critical(sba_error_slot)
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

}  // namespace

std::vector<double> score_images_serial(const nn::MiniPadNet& model, const ImageList& images) {
  std::vector<double> out(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) out[i] = nn::score(model, *images[i]);
  return out;
}

std::vector<double> score_images_parallel(const nn::MiniPadNet& model,
                                          const ImageList& images, int threads) {
  check_threads(threads);
  std::vector<double> out(images.size());
  const auto n = static_cast<std::ptrdiff_t>(images.size());
  ErrorSlot err;
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    err.run([&] { out[i] = nn::score(model, *images[i]); });
  }
  err.rethrow();
  return out;
}

std::vector<double> score_perturbed_serial(const nn::MiniPadNet& model,
                                           const ImageList& images,
                                           const RankingList& rankings, std::size_t k,
                                           PerturbationMode mode) {
  check_lists(images, rankings);
  std::vector<double> out(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    Tensor work(images[i]->shape());
    perturb_into(*images[i], *rankings[i], k, mode, work);
    out[i] = nn::score(model, work);
  }
  return out;
}

std::vector<double> score_perturbed_parallel(const nn::MiniPadNet& model,
                                             const ImageList& images,
                                             const RankingList& rankings, std::size_t k,
                                             PerturbationMode mode, int threads) {
  check_threads(threads);
  check_lists(images, rankings);
  std::vector<double> out(images.size());
  const auto n = static_cast<std::ptrdiff_t>(images.size());
  ErrorSlot err;
#pragma omp parallel num_threads(threads)
  {
    Tensor work({1, kImageSide, kImageSide});
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      err.run([&] {
        perturb_into(*images[i], *rankings[i], k, mode, work);
        out[i] = nn::score(model, work);
      });
    }
  }
  err.rethrow();
  return out;
}

std::vector<saliency::SaliencyMap> explain_serial(const nn::MiniPadNet& model,
                                                  const ImageList& images,
                                                  const std::vector<std::int64_t>& ids,
                                                  saliency::Explainer explainer,
                                                  double threshold) {
  std::vector<saliency::SaliencyMap> out(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    out[i] = saliency::explain(model, *images[i], explainer, threshold, ids.at(i));
  }
  return out;
}

std::vector<saliency::SaliencyMap> explain_parallel(const nn::MiniPadNet& model,
                                                    const ImageList& images,
                                                    const std::vector<std::int64_t>& ids,
                                                    saliency::Explainer explainer,
                                                    double threshold, int threads) {
  check_threads(threads);
  if (ids.size() != images.size()) throw InvalidArgument("id list length mismatch");
  std::vector<saliency::SaliencyMap> out(images.size());
  const auto n = static_cast<std::ptrdiff_t>(images.size());
  ErrorSlot err;
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    err.run([&] { out[i] = saliency::explain(model, *images[i], explainer, threshold, ids[i]); });
  }
  err.rethrow();
  return out;
}

}  // namespace sba::eval

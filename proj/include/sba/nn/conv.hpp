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

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sba::nn::kernels {

// 3x3 convolution with zero padding 1 and stride 1, followed by ReLU.
// in: (cin,h,w), weight: (cout,cin,3,3), out: (cout,h,w).
void conv3x3_relu(const double* in, std::size_t cin, std::size_t h, std::size_t w,
                  const double* weight, const double* bias, std::size_t cout,
                  double* out);

// Backward of conv3x3 given the gradient w.r.t. the pre-activation output.
// Accumulates into dweight/dbias; writes din when non-null.
void conv3x3_backward(const double* in, std::size_t cin, std::size_t h, std::size_t w,
                      const double* weight, std::size_t cout, const double* dout,
                      double* dweight, double* dbias, double* din);

// 2x2 max pooling, stride 2. Records the flat input index of each max
// (first maximum in row-major window order).
void maxpool2(const double* in, std::size_t c, std::size_t h, std::size_t w,
              double* out, std::uint32_t* argmax);

}  // namespace sba::nn::kernels

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

#include "sba/nn/conv.hpp"

#include <algorithm>
#include <cstring>

namespace sba::nn::kernels {
namespace {

// Inputs are copied into a zero-padded (h+2)x(w+2) plane. Outputs are then
// computed over a flat range in padded-row layout, so every tap is one
// contiguous axpy; the two junk columns per row are discarded afterwards.
void pad_input(const double* in, std::size_t cin, std::size_t h, std::size_t w,
               std::vector<double>& padded) {
  const std::size_t pw = w + 2, ph = h + 2;
  padded.assign(cin * ph * pw, 0.0);
  for (std::size_t c = 0; c < cin; ++c) {
    for (std::size_t y = 0; y < h; ++y) {
      std::memcpy(&padded[(c * ph + y + 1) * pw + 1], &in[(c * h + y) * w],
                  w * sizeof(double));
    }
  }
}

}  // namespace

namespace {

constexpr std::size_t kOutBlock = 4;   // output channels per register block
constexpr std::size_t kSpan = 8;       // flat positions per register block

// acc[k][j] = bias + sum over (c, tap) of weight * padded input, for one
// block of kOutBlock channels and kSpan consecutive flat positions.
inline void conv_block(const double* __restrict padded, std::size_t cin,
                       std::size_t plane, std::size_t pw,
                       const double* __restrict wblock, const double* __restrict bias,
                       double (&acc)[kOutBlock][kSpan]) {
  for (std::size_t k = 0; k < kOutBlock; ++k) {
    for (std::size_t j = 0; j < kSpan; ++j) acc[k][j] = bias[k];
  }
  for (std::size_t c = 0; c < cin; ++c) {
    for (std::size_t t = 0; t < 9; ++t) {
      const double* __restrict src = padded + c * plane + (t / 3) * pw + (t % 3);
      const double* wk = wblock + (c * 9 + t) * kOutBlock;
      for (std::size_t k = 0; k < kOutBlock; ++k) {
        for (std::size_t j = 0; j < kSpan; ++j) acc[k][j] += wk[k] * src[j];
      }
    }
  }
}

}  // namespace

void conv3x3_relu(const double* in, std::size_t cin, std::size_t h, std::size_t w,
                  const double* weight, const double* bias, std::size_t cout,
                  double* out) {
  thread_local std::vector<double> padded;
  thread_local std::vector<double> wpacked;
  const std::size_t pw = w + 2, plane = (h + 2) * pw;
  const std::size_t n = (h - 1) * pw + w;
  pad_input(in, cin, h, w, padded);
  // Slack so the last position block may read past the final plane.
  padded.resize(padded.size() + kSpan + 2 * pw + 2, 0.0);

  // Repack weights as [block][c][tap][k] so a block's taps are contiguous.
  const std::size_t cout_padded = (cout + kOutBlock - 1) / kOutBlock * kOutBlock;
  wpacked.assign(cout_padded * cin * 9, 0.0);
  std::vector<double> bpacked(cout_padded, 0.0);
  for (std::size_t o = 0; o < cout; ++o) {
    bpacked[o] = bias[o];
    const std::size_t blk = o / kOutBlock, k = o % kOutBlock;
    for (std::size_t c = 0; c < cin; ++c) {
      for (std::size_t t = 0; t < 9; ++t) {
        wpacked[((blk * cin + c) * 9 + t) * kOutBlock + k] = weight[(o * cin + c) * 9 + t];
      }
    }
  }

  for (std::size_t o0 = 0; o0 < cout; o0 += kOutBlock) {
    const double* wblock = &wpacked[o0 * cin * 9];
    for (std::size_t p0 = 0; p0 < n; p0 += kSpan) {
      double acc[kOutBlock][kSpan];
      conv_block(padded.data() + p0, cin, plane, pw, wblock, &bpacked[o0], acc);
      const std::size_t ob = std::min(kOutBlock, cout - o0);
      for (std::size_t j = 0; j < kSpan; ++j) {
        const std::size_t p = p0 + j;
        const std::size_t y = p / pw, x = p - y * pw;
        if (x >= w || y >= h) continue;
        for (std::size_t k = 0; k < ob; ++k) {
          out[((o0 + k) * h + y) * w + x] = std::max(acc[k][j], 0.0);
        }
      }
    }
  }
}

void conv3x3_backward(const double* in, std::size_t cin, std::size_t h, std::size_t w,
                      const double* weight, std::size_t cout, const double* dout,
                      double* dweight, double* dbias, double* din) {
  thread_local std::vector<double> padded;
  thread_local std::vector<double> dq;
  const std::size_t pw = w + 2, ph = h + 2, plane = ph * pw;
  const std::size_t n = (h - 1) * pw + w;
  const std::size_t n_blocked = (n + kSpan - 1) / kSpan * kSpan;
  // Output gradients sit at offset `lead` inside a zeroed plane-sized slot per
  // channel; the leading zeros let the input gradient be computed as a
  // forward pass with flipped taps.
  const std::size_t lead = 2 * pw + 2;
  const std::size_t slot = lead + plane + kSpan;
  pad_input(in, cin, h, w, padded);
  padded.resize(padded.size() + kSpan + 2 * pw + 2, 0.0);

  dq.assign(cout * slot, 0.0);
  for (std::size_t o = 0; o < cout; ++o) {
    double bsum = 0.0;
    double* g = &dq[o * slot + lead];
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        const double v = dout[(o * h + y) * w + x];
        g[y * pw + x] = v;
        bsum += v;
      }
    }
    dbias[o] += bsum;
  }

  // Weight gradients: for each input channel and tap row, a 4-output x
  // 3-tap block of lane-wise accumulators, reduced in a fixed order.
  for (std::size_t c = 0; c < cin; ++c) {
    for (std::size_t ky = 0; ky < 3; ++ky) {
      const double* src = &padded[c * plane + ky * pw];
      for (std::size_t o0 = 0; o0 < cout; o0 += kOutBlock) {
        const std::size_t ob = std::min(kOutBlock, cout - o0);
        double acc[kOutBlock][3][kSpan] = {};
        for (std::size_t p0 = 0; p0 < n_blocked; p0 += kSpan) {
          for (std::size_t k = 0; k < kOutBlock; ++k) {
            const double* g = &dq[std::min(o0 + k, cout - 1) * slot + lead + p0];
            for (std::size_t kx = 0; kx < 3; ++kx) {
              for (std::size_t j = 0; j < kSpan; ++j) {
                acc[k][kx][j] += g[j] * src[p0 + kx + j];
              }
            }
          }
        }
        for (std::size_t k = 0; k < ob; ++k) {
          for (std::size_t kx = 0; kx < 3; ++kx) {
            double sum = 0.0;
            for (std::size_t j = 0; j < kSpan; ++j) sum += acc[k][kx][j];
            dweight[((o0 + k) * cin + c) * 9 + ky * 3 + kx] += sum;
          }
        }
      }
    }
  }

  if (din == nullptr) return;
  // din[c] at padded position q = sum_o sum_t w[o][c][t] * dq[o][q - off(t)]
  //                             = sum_o sum_t' w[o][c][8-t'] * slot_o[q + off(t')].
  thread_local std::vector<double> wflip;
  const std::size_t cin_padded = (cin + kOutBlock - 1) / kOutBlock * kOutBlock;
  wflip.assign(cin_padded * cout * 9, 0.0);
  for (std::size_t c = 0; c < cin; ++c) {
    const std::size_t blk = c / kOutBlock, k = c % kOutBlock;
    for (std::size_t o = 0; o < cout; ++o) {
      for (std::size_t t = 0; t < 9; ++t) {
        wflip[((blk * cout + o) * 9 + t) * kOutBlock + k] = weight[(o * cin + c) * 9 + (8 - t)];
      }
    }
  }
  const double zero_bias[kOutBlock] = {};
  for (std::size_t c0 = 0; c0 < cin; c0 += kOutBlock) {
    const std::size_t cb = std::min(kOutBlock, cin - c0);
    for (std::size_t y = 0; y < h; ++y) {
      // Interior row y of the padded plane, positions (y+1)*pw+1 .. +w.
      for (std::size_t x0 = 0; x0 < w; x0 += kSpan) {
        const std::size_t q = (y + 1) * pw + 1 + x0;
        double acc[kOutBlock][kSpan];
        conv_block(dq.data() + q, cout, slot, pw, &wflip[c0 * cout * 9], zero_bias, acc);
        for (std::size_t k = 0; k < cb; ++k) {
          for (std::size_t j = 0; j < kSpan && x0 + j < w; ++j) {
            din[((c0 + k) * h + y) * w + x0 + j] = acc[k][j];
          }
        }
      }
    }
  }
}

void maxpool2(const double* in, std::size_t c, std::size_t h, std::size_t w,
              double* out, std::uint32_t* argmax) {
  const std::size_t oh = h / 2, ow = w / 2;
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t y = 0; y < oh; ++y) {
      for (std::size_t x = 0; x < ow; ++x) {
        std::size_t best = (ch * h + 2 * y) * w + 2 * x;
        for (std::size_t dy = 0; dy < 2; ++dy) {
          for (std::size_t dx = 0; dx < 2; ++dx) {
            const std::size_t idx = (ch * h + 2 * y + dy) * w + 2 * x + dx;
            if (in[idx] > in[best]) best = idx;
          }
        }
        const std::size_t o = (ch * oh + y) * ow + x;
        out[o] = in[best];
        argmax[o] = static_cast<std::uint32_t>(best);
      }
    }
  }
}

}  // namespace sba::nn::kernels

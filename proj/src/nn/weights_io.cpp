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

#include <fstream>

#include "sba/binary_io.hpp"
#include "sba/error.hpp"
#include "sba/nn/minipadnet.hpp"

// Layout: "SBAW", u16 version, u32 layer count, then per layer: u8 kind,
// and for weight then bias: u8 rank, u32 dims[rank], f64 values (all LE).

namespace sba::nn {
namespace {

constexpr std::uint16_t kWeightVersion = 1;

void write_tensor(std::ostream& out, const Tensor& t) {
  io::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(t.rank()));
  for (auto d : t.shape()) io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(d));
  for (double v : t.values()) io::write_f64(out, v);
}

Tensor read_tensor(std::istream& in) {
  const auto rank = io::read_le<std::uint8_t>(in, "tensor rank");
  if (rank == 0 || rank > 4) throw FormatError("bad tensor rank");
  std::vector<std::size_t> shape(rank);
  std::size_t n = 1;
  for (auto& d : shape) {
    d = io::read_le<std::uint32_t>(in, "tensor dims");
    if (d == 0 || d > 4096) throw FormatError("bad tensor dimension");
    n *= d;
  }
  std::vector<double> values(n);
  for (auto& v : values) v = io::read_f64(in, "tensor values");
  return Tensor(std::move(shape), std::move(values));
}

}  // namespace

void save_model(const MiniPadNet& model, const std::filesystem::path& path) {
  model.validate();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write("SBAW", 4);
  io::write_le<std::uint16_t>(out, kWeightVersion);
  io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.layers.size()));
  for (const auto& l : model.layers) {
    io::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(l.kind));
    write_tensor(out, l.weight);
    write_tensor(out, l.bias);
  }
  if (!out) throw Error("write failed for " + path.string());
}

MiniPadNet load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInput("cannot open weight file " + path.string());
  io::expect_magic(in, "SBAW");
  const auto version = io::read_le<std::uint16_t>(in, "version");
  if (version != kWeightVersion) {
    throw FormatError("unsupported weight file version " + std::to_string(version));
  }
  const auto count = io::read_le<std::uint32_t>(in, "layer count");
  if (count != 4) throw FormatError("weight file does not describe a MiniPadNet");
  MiniPadNet m;
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto kind = io::read_le<std::uint8_t>(in, "layer kind");
    if (kind != 1 && kind != 2) throw FormatError("unknown layer kind tag");
    Tensor w = read_tensor(in);
    Tensor b = read_tensor(in);
    m.layers.push_back({static_cast<LayerKind>(kind), std::move(w), std::move(b)});
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("trailing bytes after weight data");
  }
  try {
    m.validate();
  } catch (const ShapeError& e) {
    throw FormatError(std::string("weight file architecture mismatch: ") + e.what());
  }
  return m;
}

}  // namespace sba::nn

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

#include "sba/saliency/svg_overlay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sba/error.hpp"

namespace sba::saliency {

std::string overlay_svg(const Tensor& image, const SaliencyMap& map, int cell_px) {
  if (image.size() != map.map.size()) throw ShapeError("overlay: image/map size mismatch");
  const std::size_t side = map.map.dim(0);
  const int px = static_cast<int>(side) * cell_px;
  std::string svg;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                "shape-rendering=\"crispEdges\">\n",
                px, px);
  svg += buf;
  for (std::size_t y = 0; y < side; ++y) {
    for (std::size_t x = 0; x < side; ++x) {
      const std::size_t i = y * side + x;
      const int g = static_cast<int>(std::lround(std::clamp(image[i], 0.0, 1.0) * 255.0));
      std::snprintf(buf, sizeof buf,
                    "<rect x=\"%zu\" y=\"%zu\" width=\"%d\" height=\"%d\" fill=\"rgb(%d,%d,%d)\"/>",
                    x * cell_px, y * cell_px, cell_px, cell_px, g, g, g);
      svg += buf;
      if (map.map[i] > 0.0) {
        std::snprintf(buf, sizeof buf,
                      "<rect x=\"%zu\" y=\"%zu\" width=\"%d\" height=\"%d\" fill=\"red\" "
                      "fill-opacity=\"%.3f\"/>",
                      x * cell_px, y * cell_px, cell_px, cell_px, 0.6 * map.map[i]);
        svg += buf;
      }
    }
    svg += "\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace sba::saliency

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

#include "sba/app/svg_plot.hpp"

#include <algorithm>
#include <cstdio>

#include "sba/error.hpp"

namespace sba::app {

std::string curve_panel_svg(const std::vector<const eval::EvalCurve*>& series) {
  if (series.empty()) throw InvalidArgument("curve_panel_svg: no series");
  constexpr double W = 360, H = 260, L = 50, R = 20, T = 30, B = 40;
  double xmax = 0.0, ymin = 0.0, ymax = 0.5;
  for (const auto* c : series) {
    xmax = std::max(xmax, c->fractions.back());
    for (double v : c->hter) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (xmax <= 0.0) xmax = 1.0;
  auto sx = [&](double x) { return L + (W - L - R) * x / xmax; };
  auto sy = [&](double y) { return H - B - (H - T - B) * (y - ymin) / (ymax - ymin); };

  std::string svg;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\">\n"
                "<rect width=\"100%%\" height=\"100%%\" fill=\"white\"/>\n",
                W, H);
  svg += buf;
  const auto* first = series.front();
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.0f\" y=\"18\" font-size=\"12\" font-family=\"sans-serif\">%s %s "
                "%s</text>\n",
                L, std::string(eval::to_string(first->model)).c_str(),
                std::string(saliency::to_string(first->explainer)).c_str(),
                std::string(eval::to_string(first->mode)).c_str());
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n"
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                L, H - B, W - R, H - B, L, T, L, H - B);
  svg += buf;
  for (double x : first->fractions) {
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"9\" text-anchor=\"middle\" "
                  "font-family=\"sans-serif\">%.2f</text>\n",
                  sx(x), H - B + 14, x);
    svg += buf;
  }
  for (int i = 0; i <= 4; ++i) {
    const double y = ymin + (ymax - ymin) * i / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"9\" text-anchor=\"end\" "
                  "font-family=\"sans-serif\">%.3f</text>\n",
                  L - 4, sy(y) + 3, y);
    svg += buf;
  }
  for (const auto* c : series) {
    const bool b = c->group == Group::B;
    std::string points;
    for (std::size_t i = 0; i < c->fractions.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", sx(c->fractions[i]),
                    sy(c->hter[i]));
      points += buf;
    }
    svg += "<polyline fill=\"none\" stroke-width=\"2\" stroke=\"";
    svg += b ? "#d62728\"" : "#1f77b4\"";
    if (c->normalized) svg += " stroke-dasharray=\"4,3\"";
    svg += " points=\"" + points + "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace sba::app

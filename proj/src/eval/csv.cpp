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

#include "sba/eval/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sba/error.hpp"

namespace sba::eval {
namespace {

constexpr const char* kCurvesHeader = "model_tag,explainer,mode,group,normalized,fraction,hter";
constexpr const char* kReportHeader = "model_tag,explainer,mode,auc_male,auc_female_norm,delta";

std::vector<std::string> split_row(const std::string& line, std::size_t expected) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (cells.size() != expected) throw FormatError("malformed CSV row '" + line + "'");
  return cells;
}

std::ifstream open_with_header(const std::filesystem::path& path, const char* header) {
  std::ifstream in(path);
  if (!in) throw MissingInput("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw FormatError("unexpected CSV header in " + path.string());
  }
  return in;
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw FormatError("bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw FormatError("bad number '" + s + "'");
  }
}

}  // namespace

std::string curves_csv(const std::vector<EvalCurve>& curves) {
  std::string out = std::string(kCurvesHeader) + "\n";
  char buf[160];
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.fractions.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s,%s,%s,%s,%d,%.6f,%.6f\n",
                    std::string(to_string(c.model)).c_str(),
                    std::string(saliency::to_string(c.explainer)).c_str(),
                    std::string(to_string(c.mode)).c_str(),
                    std::string(to_string(c.group)).c_str(), c.normalized ? 1 : 0,
                    c.fractions[i], c.hter[i]);
      out += buf;
    }
  }
  return out;
}

std::string report_csv(const BiasReport& report) {
  std::string out = std::string(kReportHeader) + "\n";
  char buf[160];
  for (const auto& e : report.entries) {
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%.6f,%.6f,%.6f\n",
                  std::string(to_string(e.model)).c_str(),
                  std::string(saliency::to_string(e.explainer)).c_str(),
                  std::string(to_string(e.mode)).c_str(), e.auc_male, e.auc_female_norm,
                  e.delta);
    out += buf;
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

std::vector<EvalCurve> read_curves_csv(const std::filesystem::path& path) {
  auto in = open_with_header(path, kCurvesHeader);
  std::vector<EvalCurve> curves;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_row(line, 7);
    try {
      const ModelTag model = parse_model_tag(cells[0]);
      const auto explainer = saliency::parse_explainer(cells[1]);
      const auto mode = parse_mode(cells[2]);
      const Group group = parse_group(cells[3]);
      const bool normalized = cells[4] == "1";
      if (!normalized && cells[4] != "0") throw FormatError("bad normalized flag");
      if (curves.empty() || curves.back().model != model ||
          curves.back().explainer != explainer || curves.back().mode != mode ||
          curves.back().group != group || curves.back().normalized != normalized) {
        EvalCurve c;
        c.model = model;
        c.explainer = explainer;
        c.mode = mode;
        c.group = group;
        c.normalized = normalized;
        curves.push_back(std::move(c));
      }
      curves.back().fractions.push_back(to_double(cells[5]));
      curves.back().hter.push_back(to_double(cells[6]));
    } catch (const InvalidArgument& e) {
      throw FormatError(std::string("curves CSV: ") + e.what());
    }
  }
  return curves;
}

BiasReport read_report_csv(const std::filesystem::path& path) {
  auto in = open_with_header(path, kReportHeader);
  BiasReport report;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_row(line, 6);
    try {
      report.entries.push_back({parse_model_tag(cells[0]), saliency::parse_explainer(cells[1]),
                                parse_mode(cells[2]), to_double(cells[3]), to_double(cells[4]),
                                to_double(cells[5])});
    } catch (const InvalidArgument& e) {
      throw FormatError(std::string("report CSV: ") + e.what());
    }
  }
  return report;
}

}  // namespace sba::eval

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

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sba/error.hpp"
#include "sba/metrics/pad_metrics.hpp"

namespace sba::metrics {

void write_scores_csv(const ScoreSet& scores, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "sample_id,group,label,score\n";
  char buf[96];
  for (const auto& e : scores.entries) {
    std::snprintf(buf, sizeof buf, "%lld,%s,%s,%.6f\n", static_cast<long long>(e.sample_id),
                  std::string(to_string(e.group)).c_str(),
                  std::string(to_string(e.label)).c_str(), e.score);
    out << buf;
  }
  if (!out) throw Error("write failed for " + path.string());
}

ScoreSet read_scores_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingInput("cannot open scores file " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "sample_id,group,label,score") {
    throw FormatError("scores CSV: unexpected header in " + path.string());
  }
  ScoreSet set;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string id, group, label, score;
    if (!std::getline(ss, id, ',') || !std::getline(ss, group, ',') ||
        !std::getline(ss, label, ',') || !std::getline(ss, score)) {
      throw FormatError("scores CSV: malformed row '" + line + "'");
    }
    try {
      set.entries.push_back(
          {std::stod(score), parse_label(label), parse_group(group), std::stoll(id)});
    } catch (const std::logic_error&) {
      throw FormatError("scores CSV: bad number in row '" + line + "'");
    }
  }
  return set;
}

}  // namespace sba::metrics

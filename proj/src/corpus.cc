// Copyright 2026 The blockmark Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "blockmark/corpus.h"

#include <fstream>
#include <unordered_set>

#include "blockmark/errors.h"

namespace blockmark {
namespace {

void CheckRecords(const std::vector<CorpusRecord>& records) {
  std::unordered_set<std::string> ids;
  for (const auto& r : records) {
    if (!ids.insert(r.id).second) {
      throw ConfigError("duplicate corpus id \"" + r.id + "\"");
    }
    if (r.text.empty()) {
      throw ConfigError("corpus record \"" + r.id + "\" has empty text");
    }
  }
}

}  // namespace

std::string_view LabelName(Label label) {
  return label == Label::kWatermarked ? "watermarked" : "human";
}

Label ParseLabel(std::string_view s) {
  if (s == "watermarked") return Label::kWatermarked;
  if (s == "human") return Label::kHuman;
  throw ConfigError("unknown label \"" + std::string(s) + "\"");
}

nlohmann::json CorpusRecord::ToJson() const {
  return {{"id", id},
          {"prompt", prompt},
          {"text", text},
          {"label", LabelName(label)},
          {"meta", meta}};
}

CorpusRecord CorpusRecord::FromJson(const nlohmann::json& j) {
  try {
    CorpusRecord r;
    r.id = j.at("id").get<std::string>();
    r.prompt = j.value("prompt", std::string());
    r.text = j.at("text").get<std::string>();
    r.label = ParseLabel(j.at("label").get<std::string>());
    r.meta = j.value("meta", nlohmann::json::object());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed corpus record: ") + e.what());
  }
}

std::vector<CorpusRecord> ReadCorpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read corpus " + path);
  std::vector<CorpusRecord> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(CorpusRecord::FromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  CheckRecords(out);
  return out;
}

void WriteCorpus(const std::string& path,
                 const std::vector<CorpusRecord>& records) {
  CheckRecords(records);
  std::vector<nlohmann::json> lines;
  lines.reserve(records.size());
  for (const auto& r : records) lines.push_back(r.ToJson());
  WriteJsonl(path, lines);
}

void WriteJsonl(const std::string& path,
                const std::vector<nlohmann::json>& lines) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  for (const auto& l : lines) out << l.dump() << '\n';
}

}  // namespace blockmark

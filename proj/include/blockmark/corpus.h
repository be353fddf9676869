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

#ifndef BLOCKMARK_CORPUS_H_
#define BLOCKMARK_CORPUS_H_

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace blockmark {

enum class Label { kWatermarked, kHuman };

std::string_view LabelName(Label label);
Label ParseLabel(std::string_view s);

// One line of a JSONL corpus.
struct CorpusRecord {
  std::string id;
  std::string prompt;
  std::string text;
  Label label = Label::kHuman;
  nlohmann::json meta = nlohmann::json::object();

  nlohmann::json ToJson() const;
  static CorpusRecord FromJson(const nlohmann::json& j);
};

// Throw ConfigError on duplicate ids, empty text or malformed lines.
std::vector<CorpusRecord> ReadCorpus(const std::string& path);
void WriteCorpus(const std::string& path,
                 const std::vector<CorpusRecord>& records);

// Writes one compact JSON document per line.
void WriteJsonl(const std::string& path,
                const std::vector<nlohmann::json>& lines);

}  // namespace blockmark

#endif  // BLOCKMARK_CORPUS_H_

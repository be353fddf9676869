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

#ifndef BLOCKMARK_HTTP_BACKENDS_H_
#define BLOCKMARK_HTTP_BACKENDS_H_

#include <chrono>
#include <memory>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "blockmark/embedding.h"
#include "blockmark/generator.h"
#include "json.hpp"

namespace blockmark {

struct HttpOptions {
  std::string base_url;  // "http://host:port"
  std::chrono::milliseconds timeout{30000};
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{250};  // doubled per retry
  int max_in_flight = 4;
};

// JSON-over-HTTP POST with bounded concurrency and retries. Connection
// failures, 429 and 5xx are retried with exponential backoff; other non-200
// statuses fail at once. A 200 with an unparseable body is a ProtocolError.
class HttpJsonClient {
 public:
  explicit HttpJsonClient(HttpOptions options);

  nlohmann::json Post(const std::string& path, const nlohmann::json& body) const;
  const HttpOptions& options() const { return options_; }

 private:
  HttpOptions options_;
  std::unique_ptr<std::counting_semaphore<>> in_flight_;
};

// POST /embed {"texts": [...]} -> {"embeddings": [[...], ...], "dim": int}
class HttpEmbedder final : public EmbedderBackend {
 public:
  HttpEmbedder(HttpOptions options, int embed_dim);

  std::string name() const override { return "http:" + client_.options().base_url; }
  int embed_dim() const override { return embed_dim_; }
  std::vector<Embedding> Embed(
      std::span<const std::string> texts) const override;

 private:
  HttpJsonClient client_;
  int embed_dim_;
};

struct SamplingParams {
  double top_p = 0.95;
  double temperature = 0.7;
  double repetition_penalty = 1.15;
};

// POST /generate {"context", "n", "params"} -> {"sentences": [...]}
class HttpCandidateSource final : public CandidateSource {
 public:
  explicit HttpCandidateSource(HttpOptions options, SamplingParams params = {});

  std::string name() const override { return "http:" + client_.options().base_url; }
  std::vector<std::string> NextSentences(std::string_view context,
                                         int n) const override;

 private:
  HttpJsonClient client_;
  SamplingParams params_;
};

// POST /paraphrase {"text"} -> {"text"}. For live experiments.
class HttpParaphraser {
 public:
  explicit HttpParaphraser(HttpOptions options);
  std::string Paraphrase(std::string_view text) const;

 private:
  HttpJsonClient client_;
};

}  // namespace blockmark

#endif  // BLOCKMARK_HTTP_BACKENDS_H_

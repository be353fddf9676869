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

#include "blockmark/http_backends.h"

#include <thread>

#include "blockmark/errors.h"
#include "httplib.h"

namespace blockmark {
namespace {

class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<>& sem) : sem_(sem) {
    sem_.acquire();
  }
  ~SlotGuard() { sem_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<>& sem_;
};

template <typename T>
T Field(const nlohmann::json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(where + ": bad or missing \"" + key + "\": " + e.what());
  }
}

}  // namespace

HttpJsonClient::HttpJsonClient(HttpOptions options)
    : options_(std::move(options)) {
  if (options_.base_url.empty()) throw ConfigError("HTTP backend needs a URL");
  if (options_.max_in_flight < 1) {
    throw ConfigError("max_in_flight must be >= 1");
  }
  if (options_.max_retries < 0) throw ConfigError("max_retries must be >= 0");
  in_flight_ =
      std::make_unique<std::counting_semaphore<>>(options_.max_in_flight);
}

nlohmann::json HttpJsonClient::Post(const std::string& path,
                                    const nlohmann::json& body) const {
  SlotGuard slot(*in_flight_);
  const std::string payload = body.dump();
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
      options_.timeout - secs);
  std::string last_error;
  auto backoff = options_.initial_backoff;

  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client cli(options_.base_url);
    cli.set_connection_timeout(secs.count(), usecs.count());
    cli.set_read_timeout(secs.count(), usecs.count());
    cli.set_write_timeout(secs.count(), usecs.count());

    auto res = cli.Post(path, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw BackendError(options_.base_url + path + " returned HTTP " +
                             std::to_string(res->status),
                         /*retryable=*/false);
    }
    try {
      return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw ProtocolError(options_.base_url + path +
                          " returned invalid JSON: " + e.what());
    }
  }
  throw BackendError(options_.base_url + path + " failed after " +
                     std::to_string(options_.max_retries + 1) +
                     " attempts: " + last_error);
}

HttpEmbedder::HttpEmbedder(HttpOptions options, int embed_dim)
    : client_(std::move(options)), embed_dim_(embed_dim) {
  if (embed_dim < 2) throw ConfigError("embed_dim must be at least 2");
}

std::vector<Embedding> HttpEmbedder::Embed(
    std::span<const std::string> texts) const {
  if (texts.empty()) return {};
  const nlohmann::json request = {
      {"texts", std::vector<std::string>(texts.begin(), texts.end())}};
  const nlohmann::json response = client_.Post("/embed", request);
  const std::string where = name() + "/embed";

  const int dim = Field<int>(response, "dim", where);
  if (dim != embed_dim_) {
    throw ProtocolError(where + " reports dim " + std::to_string(dim) +
                        ", expected " + std::to_string(embed_dim_));
  }
  auto out = Field<std::vector<std::vector<double>>>(response, "embeddings", where);
  if (out.size() != texts.size()) {
    throw ProtocolError(where + " returned " + std::to_string(out.size()) +
                        " embeddings for " + std::to_string(texts.size()) +
                        " texts");
  }
  return out;
}

HttpCandidateSource::HttpCandidateSource(HttpOptions options,
                                         SamplingParams params)
    : client_(std::move(options)), params_(params) {}

std::vector<std::string> HttpCandidateSource::NextSentences(
    std::string_view context, int n) const {
  const nlohmann::json request = {
      {"context", std::string(context)},
      {"n", n},
      {"params",
       {{"top_p", params_.top_p},
        {"temperature", params_.temperature},
        {"repetition_penalty", params_.repetition_penalty}}}};
  return Field<std::vector<std::string>>(client_.Post("/generate", request),
                                         "sentences", name() + "/generate");
}

HttpParaphraser::HttpParaphraser(HttpOptions options)
    : client_(std::move(options)) {}

std::string HttpParaphraser::Paraphrase(std::string_view text) const {
  const nlohmann::json request = {{"text", std::string(text)}};
  return Field<std::string>(client_.Post("/paraphrase", request), "text",
                            client_.options().base_url + "/paraphrase");
}

}  // namespace blockmark

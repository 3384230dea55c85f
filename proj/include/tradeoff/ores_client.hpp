// Copyright 2026 The Tradeoff Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Client for an ORES-compatible scoring service (v3 response layout).
//
//   GET {base_url}/v3/scores/{context}/?models={model}&revids=1|2|3
//
//   {"enwiki": {"scores": {"12345": {"damaging": {
//       "score": {"prediction": false,
//                 "probability": {"false": 0.93, "true": 0.07}}}}}}}
//
// A revision the service cannot score carries {"error": {"type", "message"}}
// in place of "score".

#ifndef TRADEOFF_ORES_CLIENT_HPP_
#define TRADEOFF_ORES_CLIENT_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tradeoff/metrics.hpp"

namespace tradeoff::ores {

using RevId = std::int64_t;

struct ScoreRequest {
  std::string base_url;  // e.g. "https://ores.wikimedia.org"
  std::string context;   // e.g. "enwiki"
  std::string model;     // e.g. "damaging"
  std::vector<RevId> rev_ids;
};

struct RevisionScore {
  RevId rev_id = 0;
  bool prediction = false;
  double p_true = 0.0;  // probability damaging
  double p_false = 0.0;

  friend bool operator==(const RevisionScore&, const RevisionScore&) = default;
};

struct ClientError {
  enum class Kind { kTransport, kHttpStatus, kMalformedBody, kRevisionError };

  Kind kind = Kind::kTransport;
  std::optional<RevId> rev_id;  // always set for kRevisionError
  std::string detail;
};

std::string_view ClientErrorKindName(ClientError::Kind kind);

using ScoreOutcome = std::variant<RevisionScore, ClientError>;
using ScoreMap = std::map<RevId, ScoreOutcome>;

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Performs one GET. Returns nullopt on a transport failure (connection
/// refused, timeout, ...) with `error` describing it. Implementations must
/// be safe to call from several threads at once.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::optional<HttpResponse> Get(const std::string& base_url,
                                          const std::string& path_and_query,
                                          std::string* error) = 0;
};

/// Live HTTP(S) via cpp-httplib.
class HttpTransport : public Transport {
 public:
  explicit HttpTransport(std::chrono::milliseconds timeout =
                             std::chrono::seconds(10),
                         std::string user_agent = "tradeoff-ores-client/0.1");

  std::optional<HttpResponse> Get(const std::string& base_url,
                                  const std::string& path_and_query,
                                  std::string* error) override;

 private:
  std::chrono::milliseconds timeout_;
  std::string user_agent_;
};

/// Offline mode: answers requests from recorded v3 response bodies
/// (every *.json file in a directory, merged). Revisions absent from the
/// recordings come back as a RevisionNotFound error object.
class FixtureTransport : public Transport {
 public:
  explicit FixtureTransport(const std::filesystem::path& dir);

  std::optional<HttpResponse> Get(const std::string& base_url,
                                  const std::string& path_and_query,
                                  std::string* error) override;

 private:
  // context -> rev id (as string) -> model -> recorded object
  std::map<std::string, std::map<std::string, std::map<std::string, std::string>>>
      recorded_;
};

struct ClientOptions {
  std::size_t batch_size = 50;
  /// One retry per failed batch after this delay.
  std::chrono::milliseconds retry_delay = std::chrono::seconds(1);
  std::size_t max_parallel_batches = 4;
};

/// Builds "/v3/scores/{context}/?models={model}&revids=1|2|3" (with the
/// base URL's own path prefix prepended by the transport).
std::string BuildScoresPath(std::string_view context, std::string_view model,
                            std::span<const RevId> rev_ids);

/// Parses one v3 response body for the given batch. Every id in `batch`
/// gets an entry; ids missing from the body become revision errors.
/// A body that is not the expected shape yields kMalformedBody for all.
ScoreMap ParseScoresBody(std::string_view body, std::string_view context,
                         std::string_view model, std::span<const RevId> batch);

class Client {
 public:
  explicit Client(std::shared_ptr<Transport> transport,
                  ClientOptions options = {});

  /// Throws std::invalid_argument if the request is invalid (empty rev_ids,
  /// context or model, non-positive ids). Network conditions never throw:
  /// they surface per revision. Duplicate ids are fetched once.
  ScoreMap FetchScores(const ScoreRequest& request) const;

 private:
  ScoreMap FetchBatch(const ScoreRequest& request,
                      std::span<const RevId> batch) const;

  std::shared_ptr<Transport> transport_;
  ClientOptions options_;
};

struct JoinResult {
  Dataset dataset;
  std::vector<RevId> skipped;  // ascending; present in only one input
};

/// One example per rev id present in both maps, score = p_true, id = the
/// decimal rev id. Throws DomainError(empty_join) if the maps are disjoint.
JoinResult BuildDataset(const std::map<RevId, RevisionScore>& scores,
                        const std::map<RevId, Label>& labels);

}  // namespace tradeoff::ores

#endif  // TRADEOFF_ORES_CLIENT_HPP_

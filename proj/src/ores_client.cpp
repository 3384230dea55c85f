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

#include "tradeoff/ores_client.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "tradeoff/errors.hpp"

namespace tradeoff::ores {

namespace {

using nlohmann::json;

constexpr double kProbabilitySumTolerance = 1e-6;

ClientError RevisionError(RevId id, std::string detail) {
  return ClientError{.kind = ClientError::Kind::kRevisionError,
                     .rev_id = id,
                     .detail = std::move(detail)};
}

ScoreMap FailAll(std::span<const RevId> batch, ClientError::Kind kind,
                 const std::string& detail) {
  ScoreMap out;
  for (RevId id : batch) {
    out.emplace(id, ClientError{.kind = kind, .rev_id = id, .detail = detail});
  }
  return out;
}

// "https://host:port/prefix" -> {"https://host:port", "/prefix"}
std::pair<std::string, std::string> SplitBaseUrl(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto path_start = url.find('/', host_start);
  if (path_start == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path_start), prefix};
}

std::optional<std::string> QueryParam(std::string_view query,
                                      std::string_view key) {
  std::size_t pos = 0;
  while (pos <= query.size()) {
    auto amp = query.find('&', pos);
    if (amp == std::string_view::npos) amp = query.size();
    const auto pair = query.substr(pos, amp - pos);
    const auto eq = pair.find('=');
    if (eq != std::string_view::npos && pair.substr(0, eq) == key) {
      return httplib::detail::decode_url(std::string(pair.substr(eq + 1)), true);
    }
    pos = amp + 1;
  }
  return std::nullopt;
}

std::vector<std::string> SplitPipes(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, '|')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

std::string_view ClientErrorKindName(ClientError::Kind kind) {
  switch (kind) {
    case ClientError::Kind::kTransport:
      return "transport";
    case ClientError::Kind::kHttpStatus:
      return "http_status";
    case ClientError::Kind::kMalformedBody:
      return "malformed_body";
    case ClientError::Kind::kRevisionError:
      return "revision_error";
  }
  return "?";
}

HttpTransport::HttpTransport(std::chrono::milliseconds timeout,
                             std::string user_agent)
    : timeout_(timeout), user_agent_(std::move(user_agent)) {}

std::optional<HttpResponse> HttpTransport::Get(
    const std::string& base_url, const std::string& path_and_query,
    std::string* error) {
  const auto [origin, prefix] = SplitBaseUrl(base_url);
  httplib::Client cli(origin);
  if (!cli.is_valid()) {
    if (error) *error = "invalid base url '" + base_url + "'";
    return std::nullopt;
  }
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto usecs =
      std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  cli.set_connection_timeout(secs.count(), usecs.count());
  cli.set_read_timeout(secs.count(), usecs.count());
  cli.set_follow_location(true);
  auto res = cli.Get(prefix + path_and_query,
                     httplib::Headers{{"User-Agent", user_agent_}});
  if (!res) {
    if (error) *error = httplib::to_string(res.error());
    return std::nullopt;
  }
  return HttpResponse{.status = res->status, .body = res->body};
}

FixtureTransport::FixtureTransport(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw std::invalid_argument("fixtures directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    std::ifstream in(file);
    const json body = json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (!body.is_object()) {
      throw std::invalid_argument("fixture is not a JSON object: " +
                                  file.string());
    }
    for (const auto& [context, ctx_body] : body.items()) {
      if (!ctx_body.is_object() || !ctx_body.contains("scores")) continue;
      for (const auto& [rev, models] : ctx_body["scores"].items()) {
        for (const auto& [model, obj] : models.items()) {
          recorded_[context][rev][model] = obj.dump();
        }
      }
    }
  }
}

std::optional<HttpResponse> FixtureTransport::Get(
    const std::string& /*base_url*/, const std::string& path_and_query,
    std::string* /*error*/) {
  const auto qmark = path_and_query.find('?');
  const std::string path = path_and_query.substr(0, qmark);
  const std::string query =
      qmark == std::string::npos ? "" : path_and_query.substr(qmark + 1);

  constexpr std::string_view kPrefix = "/v3/scores/";
  if (!path.starts_with(kPrefix)) return HttpResponse{404, R"({"error":{}})"};
  std::string context = path.substr(kPrefix.size());
  while (!context.empty() && context.back() == '/') context.pop_back();

  const auto model = QueryParam(query, "models");
  const auto revids = QueryParam(query, "revids");
  if (!model || !revids) return HttpResponse{400, R"({"error":{}})"};

  json scores = json::object();
  for (const auto& rev : SplitPipes(*revids)) {
    json entry;
    const auto ctx = recorded_.find(context);
    if (ctx != recorded_.end()) {
      const auto r = ctx->second.find(rev);
      if (r != ctx->second.end()) {
        const auto m = r->second.find(*model);
        if (m != r->second.end()) entry = json::parse(m->second);
      }
    }
    if (entry.is_null()) {
      entry = {{"error",
                {{"type", "RevisionNotFound"},
                 {"message", "No recorded score for revision " + rev}}}};
    }
    scores[rev][*model] = std::move(entry);
  }
  json body = {{context, {{"scores", std::move(scores)}}}};
  return HttpResponse{200, body.dump()};
}

std::string BuildScoresPath(std::string_view context, std::string_view model,
                            std::span<const RevId> rev_ids) {
  std::string path = "/v3/scores/";
  path += context;
  path += "/?models=";
  path += model;
  path += "&revids=";
  for (std::size_t i = 0; i < rev_ids.size(); ++i) {
    if (i > 0) path += "%7C";
    path += std::to_string(rev_ids[i]);
  }
  return path;
}

ScoreMap ParseScoresBody(std::string_view body, std::string_view context,
                         std::string_view model, std::span<const RevId> batch) {
  const json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
  const std::string ctx(context);
  if (!doc.is_object() || !doc.contains(ctx) || !doc[ctx].is_object() ||
      !doc[ctx].contains("scores") || !doc[ctx]["scores"].is_object()) {
    return FailAll(batch, ClientError::Kind::kMalformedBody,
                   "response lacks '" + ctx + ".scores'");
  }
  const json& scores = doc[ctx]["scores"];
  const std::string mdl(model);

  ScoreMap out;
  for (RevId id : batch) {
    const std::string key = std::to_string(id);
    if (!scores.contains(key) || !scores[key].is_object() ||
        !scores[key].contains(mdl)) {
      out.emplace(id, RevisionError(id, "revision missing from response"));
      continue;
    }
    const json& m = scores[key][mdl];
    if (m.contains("error")) {
      const json& err = m["error"];
      std::string detail = err.value("type", std::string("error"));
      if (err.contains("message") && err["message"].is_string()) {
        detail += ": " + err["message"].get<std::string>();
      }
      out.emplace(id, RevisionError(id, std::move(detail)));
      continue;
    }
    const json* score = m.contains("score") ? &m["score"] : nullptr;
    const json* prob = score && score->contains("probability")
                           ? &(*score)["probability"]
                           : nullptr;
    if (!score || !prob || !score->contains("prediction") ||
        !(*score)["prediction"].is_boolean() || !prob->contains("true") ||
        !prob->contains("false") || !(*prob)["true"].is_number() ||
        !(*prob)["false"].is_number()) {
      out.emplace(id, ClientError{.kind = ClientError::Kind::kMalformedBody,
                                  .rev_id = id,
                                  .detail = "score object has unexpected shape"});
      continue;
    }
    RevisionScore rs{.rev_id = id,
                     .prediction = (*score)["prediction"].get<bool>(),
                     .p_true = (*prob)["true"].get<double>(),
                     .p_false = (*prob)["false"].get<double>()};
    const bool in_range = rs.p_true >= 0.0 && rs.p_true <= 1.0 &&
                          rs.p_false >= 0.0 && rs.p_false <= 1.0;
    if (!in_range ||
        std::abs(rs.p_true + rs.p_false - 1.0) > kProbabilitySumTolerance) {
      out.emplace(id, ClientError{.kind = ClientError::Kind::kMalformedBody,
                                  .rev_id = id,
                                  .detail = "probabilities do not sum to 1"});
      continue;
    }
    out.emplace(id, rs);
  }
  return out;
}

Client::Client(std::shared_ptr<Transport> transport, ClientOptions options)
    : transport_(std::move(transport)), options_(options) {
  if (!transport_) throw std::invalid_argument("transport is required");
  if (options_.batch_size == 0) options_.batch_size = 1;
  if (options_.max_parallel_batches == 0) options_.max_parallel_batches = 1;
}

ScoreMap Client::FetchBatch(const ScoreRequest& request,
                            std::span<const RevId> batch) const {
  const std::string path = BuildScoresPath(request.context, request.model, batch);
  ScoreMap failed;
  for (int attempt = 0; attempt < 2; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(options_.retry_delay);
    std::string error;
    const auto res = transport_->Get(request.base_url, path, &error);
    if (!res) {
      failed = FailAll(batch, ClientError::Kind::kTransport, error);
      continue;
    }
    if (res->status != 200) {
      failed = FailAll(batch, ClientError::Kind::kHttpStatus,
                       "HTTP " + std::to_string(res->status));
      continue;
    }
    ScoreMap parsed =
        ParseScoresBody(res->body, request.context, request.model, batch);
    const bool whole_body_bad = std::all_of(
        parsed.begin(), parsed.end(), [](const auto& kv) {
          const auto* e = std::get_if<ClientError>(&kv.second);
          return e && e->kind == ClientError::Kind::kMalformedBody;
        });
    if (whole_body_bad) {
      failed = std::move(parsed);
      continue;
    }
    return parsed;
  }
  return failed;
}

ScoreMap Client::FetchScores(const ScoreRequest& request) const {
  if (request.rev_ids.empty()) {
    throw std::invalid_argument("at least one revision id is required");
  }
  if (request.context.empty() || request.model.empty()) {
    throw std::invalid_argument("context and model must be non-empty");
  }
  std::vector<RevId> ids;
  std::set<RevId> seen;
  for (RevId id : request.rev_ids) {
    if (id <= 0) {
      throw std::invalid_argument("revision ids must be positive");
    }
    if (seen.insert(id).second) ids.push_back(id);
  }

  std::vector<std::span<const RevId>> batches;
  for (std::size_t i = 0; i < ids.size(); i += options_.batch_size) {
    batches.emplace_back(ids.data() + i,
                         std::min(options_.batch_size, ids.size() - i));
  }

  ScoreMap result;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t b = next++; b < batches.size(); b = next++) {
      ScoreMap part = FetchBatch(request, batches[b]);
      std::lock_guard lock(mu);
      result.merge(part);
    }
  };
  const std::size_t n_threads =
      std::min(options_.max_parallel_batches, batches.size());
  std::vector<std::jthread> threads;
  for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(worker);
  worker();
  threads.clear();
  return result;
}

JoinResult BuildDataset(const std::map<RevId, RevisionScore>& scores,
                        const std::map<RevId, Label>& labels) {
  std::vector<ScoredExample> examples;
  std::vector<RevId> skipped;
  for (const auto& [id, score] : scores) {
    const auto label = labels.find(id);
    if (label == labels.end()) {
      skipped.push_back(id);
    } else {
      examples.push_back({std::to_string(id), score.p_true, label->second});
    }
  }
  for (const auto& [id, label] : labels) {
    if (!scores.contains(id)) skipped.push_back(id);
  }
  if (examples.empty()) {
    throw DomainError(error_code::kEmptyJoin,
                      "no revision has both a score and a label");
  }
  std::sort(skipped.begin(), skipped.end());
  return JoinResult{.dataset = Dataset(std::move(examples)),
                    .skipped = std::move(skipped)};
}

}  // namespace tradeoff::ores

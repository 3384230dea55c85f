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

#include "tradeoff/service.hpp"

#include <algorithm>
#include <charconv>
#include <csignal>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <pthread.h>

#include "tradeoff/errors.hpp"
#include "tradeoff/ingest.hpp"
#include "tradeoff/json_io.hpp"
#include "tradeoff/preview.hpp"
#include "tradeoff/query.hpp"

namespace tradeoff::service {

using nlohmann::json;

namespace {

struct ApiError {
  int status;
  std::string code;
  std::string detail;
};

void Reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void ReplyError(httplib::Response& res, const ApiError& e,
                json extra = json::object()) {
  json body = {{"status", e.status}, {"code", e.code}, {"detail", e.detail}};
  body.update(extra);
  Reply(res, e.status, body);
}

int StatusForDomainCode(const std::string& code) {
  if (code == error_code::kBadThreshold || code == error_code::kBadTarget ||
      code == error_code::kBadIcons || code == error_code::kBadObjective) {
    return 400;
  }
  if (code == error_code::kInfeasible || code == error_code::kRecallUndefined ||
      code == error_code::kFprUndefined) {
    return 409;
  }
  return 422;
}

std::string FormatTime(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::chrono::system_clock::time_point ParseTime(const std::string& s) {
  std::tm tm{};
  std::istringstream in(s);
  in >> std::get_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  if (in.fail()) return std::chrono::system_clock::now();
  return std::chrono::system_clock::from_time_t(timegm(&tm));
}

// Strict full-string number parse.
std::optional<double> ParseDouble(const std::string& text) {
  double v = 0.0;
  const auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> ParseCount(const std::string& text) {
  std::uint64_t v = 0;
  const auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
  return v;
}

double RequireUnit(const httplib::Request& req, const std::string& key,
                   const std::string& code) {
  if (!req.has_param(key)) {
    throw ApiError{400, code, "missing query parameter '" + key + "'"};
  }
  const std::string raw = req.get_param_value(key);
  const auto v = ParseDouble(raw);
  if (!v || !(*v >= 0.0 && *v <= 1.0)) {
    throw ApiError{400, code,
                   "'" + key + "' must be a number in [0,1], got '" + raw + "'"};
  }
  return *v;
}

MetricId RequireMetric(const httplib::Request& req, const std::string& key,
                       const std::string& code) {
  const std::string raw = req.get_param_value(key);
  const auto m = ParseMetric(raw);
  if (!m) {
    throw ApiError{400, code,
                   "'" + key + "' must be one of recall, precision, fpr; got '" +
                       raw + "'"};
  }
  return *m;
}

const json& RouteListing() {
  static const json kRoutes = json::array({
      {{"method", "GET"}, {"path", "/api/routes"}, {"params", json::array()}},
      {{"method", "GET"}, {"path", "/api/datasets"}, {"params", json::array()}},
      {{"method", "POST"},
       {"path", "/api/datasets"},
       {"params", {"name"}},
       {"body", "CSV (id,score,label) or JSONL"}},
      {{"method", "GET"}, {"path", "/api/datasets/{id}"}, {"params", json::array()}},
      {{"method", "GET"},
       {"path", "/api/datasets/{id}/metrics"},
       {"params", {"threshold"}}},
      {{"method", "GET"},
       {"path", "/api/datasets/{id}/curve"},
       {"params", json::array()}},
      {{"method", "GET"},
       {"path", "/api/datasets/{id}/inverse"},
       {"params", {"metric", "target"}}},
      {{"method", "GET"},
       {"path", "/api/datasets/{id}/optimize"},
       {"params", {"maximize", "constraint (repeatable)"}}},
      {{"method", "GET"},
       {"path", "/api/datasets/{id}/preview"},
       {"params", {"threshold", "icons"}}},
  });
  return kRoutes;
}

}  // namespace

json ToJson(const DatasetHandle& h) {
  return {{"id", h.id},
          {"name", h.name},
          {"n_total", h.n_total},
          {"n_damaging", h.n_damaging},
          {"created_at", FormatTime(h.created_at)}};
}

DatasetHandle DatasetStore::Add(const Dataset& dataset, std::string name) {
  auto curve = BuildCurve(dataset);
  DatasetHandle handle{.id = {},
                       .name = std::move(name),
                       .n_total = dataset.n_total(),
                       .n_damaging = dataset.n_damaging(),
                       .created_at = std::chrono::system_clock::now()};
  std::unique_lock lock(mu_);
  handle.id = NewIdLocked();
  datasets_.emplace(handle.id, std::make_shared<const StoredDataset>(
                                   StoredDataset{handle, std::move(curve)}));
  return handle;
}

std::string DatasetStore::NewIdLocked() {
  for (;;) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "ds-%06llu",
                  static_cast<unsigned long long>(next_id_++));
    if (!datasets_.contains(buf)) return buf;
  }
}

void DatasetStore::Insert(std::shared_ptr<const StoredDataset> entry) {
  std::unique_lock lock(mu_);
  datasets_[entry->handle.id] = std::move(entry);
}

std::shared_ptr<const StoredDataset> DatasetStore::Find(
    const std::string& id) const {
  std::shared_lock lock(mu_);
  const auto it = datasets_.find(id);
  return it == datasets_.end() ? nullptr : it->second;
}

std::vector<DatasetHandle> DatasetStore::List() const {
  std::shared_lock lock(mu_);
  std::vector<DatasetHandle> out;
  for (const auto& [id, entry] : datasets_) out.push_back(entry->handle);
  return out;
}

void DatasetStore::SaveSnapshot(const std::filesystem::path& path) const {
  json datasets = json::array();
  {
    std::shared_lock lock(mu_);
    for (const auto& [id, entry] : datasets_) {
      json doc = ToJson(entry->handle);
      json examples = json::array();
      for (const auto& e : entry->curve.dataset().examples()) {
        examples.push_back({{"id", e.id},
                            {"score", e.score},
                            {"label", std::string(LabelName(e.label))}});
      }
      doc["examples"] = std::move(examples);
      datasets.push_back(std::move(doc));
    }
  }
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write snapshot " + tmp);
    out << json{{"version", 1}, {"datasets", std::move(datasets)}}.dump();
  }
  std::filesystem::rename(tmp, path);
}

std::size_t DatasetStore::LoadSnapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return 0;
  const json doc = json::parse(in);
  std::size_t restored = 0;
  for (const auto& d : doc.at("datasets")) {
    std::vector<ScoredExample> examples;
    for (const auto& e : d.at("examples")) {
      const auto label = ParseLabel(e.at("label").get<std::string>());
      if (!label) throw std::runtime_error("snapshot has an invalid label");
      examples.push_back(
          {e.at("id").get<std::string>(), e.at("score").get<double>(), *label});
    }
    Dataset dataset(std::move(examples));
    DatasetHandle handle{.id = d.at("id").get<std::string>(),
                         .name = d.at("name").get<std::string>(),
                         .n_total = dataset.n_total(),
                         .n_damaging = dataset.n_damaging(),
                         .created_at = ParseTime(d.at("created_at"))};
    Insert(std::make_shared<const StoredDataset>(
        StoredDataset{std::move(handle), BuildCurve(dataset)}));
    ++restored;
  }
  return restored;
}

void ParseListenAddress(const std::string& addr, ServiceConfig& config) {
  const auto colon = addr.rfind(':');
  const std::string host =
      colon == std::string::npos ? "" : addr.substr(0, colon);
  const std::string port =
      colon == std::string::npos ? addr : addr.substr(colon + 1);
  const auto p = ParseCount(port);
  if (!p || *p == 0 || *p > 65535) {
    throw std::invalid_argument("invalid listen address '" + addr + "'");
  }
  if (!host.empty()) config.host = host;
  config.port = static_cast<int>(*p);
}

Service::Service(ServiceConfig config) : config_(std::move(config)) {}

void Service::LoadStartupData() {
  if (config_.fixtures_dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry :
         std::filesystem::directory_iterator(*config_.fixtures_dir)) {
      const auto ext = entry.path().extension();
      if (ext == ".csv" || ext == ".jsonl" || ext == ".ndjson") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      store_.Add(LoadFile(f), f.stem().string());
    }
  }
  if (config_.snapshot_path) store_.LoadSnapshot(*config_.snapshot_path);
}

void Service::Register(httplib::Server& server) {
  server.set_default_headers(
      {{"Access-Control-Allow-Origin", config_.cors_origin}});
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  // Wraps a handler with the error-to-JSON mapping.
  auto guarded = [](auto handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
      try {
        handler(req, res);
      } catch (const ApiError& e) {
        ReplyError(res, e);
      } catch (const IngestError& e) {
        json extra = json::object();
        if (e.line() > 0) extra["line"] = e.line();
        ReplyError(res, {422, std::string(e.code()), e.detail()}, extra);
      } catch (const InfeasibleError& e) {
        ReplyError(res, {409, e.code(), e.what()},
                   {{"near_miss", ToJson(e.near_miss())},
                    {"violated", e.violated().ToString()}});
      } catch (const DomainError& e) {
        ReplyError(res, {StatusForDomainCode(e.code()), e.code(), e.what()});
      }
    };
  };

  auto lookup = [this](const httplib::Request& req) {
    auto entry = store_.Find(req.matches[1]);
    if (!entry) {
      throw ApiError{404, "dataset_not_found",
                     "no dataset with id '" + std::string(req.matches[1]) + "'"};
    }
    return entry;
  };

  server.Get("/api/routes", guarded([](const httplib::Request&,
                                       httplib::Response& res) {
               Reply(res, 200, {{"routes", RouteListing()}});
             }));

  server.Get("/api/datasets", guarded([this](const httplib::Request&,
                                             httplib::Response& res) {
               json list = json::array();
               for (const auto& h : store_.List()) list.push_back(ToJson(h));
               Reply(res, 200, {{"datasets", std::move(list)}});
             }));

  server.Post("/api/datasets", guarded([this](const httplib::Request& req,
                                              httplib::Response& res) {
                const std::string type = req.get_header_value("Content-Type");
                DataFormat format = SniffFormat(req.body);
                if (type.starts_with("text/csv")) format = DataFormat::kCsv;
                if (type.starts_with("application/x-ndjson") ||
                    type.starts_with("application/jsonl")) {
                  format = DataFormat::kJsonl;
                }
                const Dataset dataset = ParseText(req.body, format);
                const std::string name = req.has_param("name")
                                             ? req.get_param_value("name")
                                             : "dataset";
                Reply(res, 201, ToJson(store_.Add(dataset, name)));
              }));

  server.Get(R"(/api/datasets/([^/]+))",
             guarded([lookup](const httplib::Request& req,
                              httplib::Response& res) {
               Reply(res, 200, ToJson(lookup(req)->handle));
             }));

  server.Get(R"(/api/datasets/([^/]+)/metrics)",
             guarded([lookup](const httplib::Request& req,
                              httplib::Response& res) {
               const auto entry = lookup(req);
               const double t = RequireUnit(req, "threshold", "bad_threshold");
               Reply(res, 200, ToJson(PointAt(entry->curve, t)));
             }));

  server.Get(R"(/api/datasets/([^/]+)/curve)",
             guarded([lookup](const httplib::Request& req,
                              httplib::Response& res) {
               const auto entry = lookup(req);
               json doc = ToJson(entry->curve);
               doc["dataset_id"] = entry->handle.id;
               Reply(res, 200, doc);
             }));

  server.Get(R"(/api/datasets/([^/]+)/inverse)",
             guarded([lookup](const httplib::Request& req,
                              httplib::Response& res) {
               const auto entry = lookup(req);
               const MetricId metric = RequireMetric(req, "metric", "bad_metric");
               const double target = RequireUnit(req, "target", "bad_target");
               const auto result = InverseForMetric(entry->curve, metric, target);
               const MetricId objective =
                   metric == MetricId::kPrecision ? MetricId::kRecall : metric;
               json doc = ToJson(result, objective);
               doc["metric"] = std::string(MetricName(metric));
               doc["target"] = target;
               Reply(res, 200, doc);
             }));

  server.Get(R"(/api/datasets/([^/]+)/optimize)",
             guarded([lookup](const httplib::Request& req,
                              httplib::Response& res) {
               const auto entry = lookup(req);
               const MetricId objective =
                   RequireMetric(req, "maximize", "bad_objective");
               if (objective == MetricId::kFpr) {
                 throw ApiError{400, "bad_objective",
                                "'maximize' must be recall or precision"};
               }
               std::vector<Constraint> constraints;
               const auto n = req.get_param_value_count("constraint");
               for (std::size_t i = 0; i < n; ++i) {
                 const std::string raw = req.get_param_value("constraint", i);
                 const auto c = ParseConstraint(raw);
                 if (!c) {
                   throw ApiError{400, "bad_constraint",
                                  "constraint '" + raw +
                                      "' must look like precision>=0.9 or "
                                      "fpr<=0.05 with a bound in [0,1]"};
                 }
                 constraints.push_back(*c);
               }
               const auto result = Optimize(entry->curve, objective, constraints);
               json doc = ToJson(result, objective);
               json cs = json::array();
               for (const auto& c : constraints) cs.push_back(c.ToString());
               doc["constraints"] = std::move(cs);
               Reply(res, 200, doc);
             }));

  server.Get(R"(/api/datasets/([^/]+)/preview)",
             guarded([lookup](const httplib::Request& req,
                              httplib::Response& res) {
               const auto entry = lookup(req);
               const double t = RequireUnit(req, "threshold", "bad_threshold");
               std::uint64_t icons = kDefaultIcons;
               if (req.has_param("icons")) {
                 const auto n = ParseCount(req.get_param_value("icons"));
                 if (!n || *n == 0) {
                   throw ApiError{400, "bad_icons",
                                  "'icons' must be a positive integer"};
                 }
                 icons = *n;
               }
               const auto point = PointAt(entry->curve, t);
               json doc = ToJson(AllocateIcons(point.counts, icons));
               doc["threshold"] = t;
               Reply(res, 200, doc);
             }));

  if (config_.ui_dir) server.set_mount_point("/", config_.ui_dir->string());

  server.set_error_handler([](const httplib::Request& req,
                              httplib::Response& res) {
    if (!res.body.empty()) return;
    const int status = res.status;
    if (status == 404) {
      ReplyError(res, {404, "not_found", "no route for " + req.path});
    } else {
      ReplyError(res, {status >= 500 ? 500 : 400, "bad_request",
                       "request failed with HTTP " + std::to_string(status)});
    }
  });
  server.set_exception_handler([](const httplib::Request&,
                                  httplib::Response& res, std::exception_ptr ep) {
    std::string detail = "internal error";
    try {
      if (ep) std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      detail = e.what();
    } catch (...) {
    }
    ReplyError(res, {500, "internal", detail});
  });
}

int RunServer(ServiceConfig config) {
  Service service(std::move(config));
  try {
    service.LoadStartupData();
  } catch (const std::exception& e) {
    std::cerr << "startup failed: " << e.what() << "\n";
    return 1;
  }

  // Route SIGINT/SIGTERM to a waiter thread so shutdown runs outside a
  // signal handler.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  httplib::Server server;
  service.Register(server);
  std::thread waiter([&server, signals] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });

  const auto& cfg = service.config();
  std::cerr << "listening on http://" << cfg.host << ":" << cfg.port << "\n";
  const bool ok = server.listen(cfg.host, cfg.port);
  if (!ok) {
    std::cerr << "cannot listen on " << cfg.host << ":" << cfg.port << "\n";
    waiter.detach();
    return 1;
  }
  waiter.join();
  if (cfg.snapshot_path) {
    service.store().SaveSnapshot(*cfg.snapshot_path);
    std::cerr << "snapshot written to " << cfg.snapshot_path->string() << "\n";
  }
  return 0;
}

}  // namespace tradeoff::service

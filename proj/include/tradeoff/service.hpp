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

// HTTP/JSON service over stored datasets.
//
//   GET  /api/routes
//   GET  /api/datasets
//   POST /api/datasets?name=...                 body: CSV or JSONL
//   GET  /api/datasets/{id}
//   GET  /api/datasets/{id}/metrics?threshold=t
//   GET  /api/datasets/{id}/curve
//   GET  /api/datasets/{id}/inverse?metric=m&target=x
//   GET  /api/datasets/{id}/optimize?maximize=m&constraint=precision>=0.9...
//   GET  /api/datasets/{id}/preview?threshold=t&icons=n
//
// Errors are {"status", "code", "detail"} with status 400, 404, 409, 422 or
// 500.

#ifndef TRADEOFF_SERVICE_HPP_
#define TRADEOFF_SERVICE_HPP_

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tradeoff/metrics.hpp"

namespace httplib {
class Server;
}

namespace tradeoff::service {

struct DatasetHandle {
  std::string id;
  std::string name;
  std::size_t n_total = 0;
  std::size_t n_damaging = 0;
  std::chrono::system_clock::time_point created_at;
};

nlohmann::json ToJson(const DatasetHandle& handle);

/// A stored dataset with its eagerly built curve. Immutable once stored.
struct StoredDataset {
  DatasetHandle handle;
  ThresholdCurve curve;
};

/// Concurrent reads, exclusive inserts.
class DatasetStore {
 public:
  /// Builds the curve before taking the write lock.
  /// Throws DomainError(empty_dataset).
  DatasetHandle Add(const Dataset& dataset, std::string name);
  std::shared_ptr<const StoredDataset> Find(const std::string& id) const;
  std::vector<DatasetHandle> List() const;

  /// {"version": 1, "datasets": [{handle fields..., "examples": [...]}]}
  void SaveSnapshot(const std::filesystem::path& path) const;
  /// Returns the number of datasets restored; ids are kept.
  std::size_t LoadSnapshot(const std::filesystem::path& path);

 private:
  void Insert(std::shared_ptr<const StoredDataset> entry);
  std::string NewIdLocked();

  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<const StoredDataset>> datasets_;
  std::uint64_t next_id_ = 1;
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8808;
  std::string cors_origin = "*";
  /// Built UI bundle served at "/".
  std::optional<std::filesystem::path> ui_dir;
  /// Every *.csv / *.jsonl here is loaded at startup, named after the file.
  std::optional<std::filesystem::path> fixtures_dir;
  /// Restored at startup when present, written on shutdown.
  std::optional<std::filesystem::path> snapshot_path;
};

/// Parses "host:port" (or ":port" / "port"). Throws std::invalid_argument.
void ParseListenAddress(const std::string& addr, ServiceConfig& config);

class Service {
 public:
  explicit Service(ServiceConfig config = {});

  /// Installs routes, CORS headers, error handlers and the static mount.
  void Register(httplib::Server& server);

  DatasetStore& store() { return store_; }
  const ServiceConfig& config() const { return config_; }

  /// Loads fixtures and the snapshot (if configured).
  void LoadStartupData();

 private:
  ServiceConfig config_;
  DatasetStore store_;
};

/// Blocks until SIGINT/SIGTERM, then writes the snapshot if configured.
/// Returns a process exit code.
int RunServer(ServiceConfig config);

}  // namespace tradeoff::service

#endif  // TRADEOFF_SERVICE_HPP_

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

#ifndef TRADEOFF_INGEST_HPP_
#define TRADEOFF_INGEST_HPP_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "tradeoff/metrics.hpp"

namespace tradeoff {

class IngestError : public std::runtime_error {
 public:
  enum class Kind {
    kBadScoreRange,
    kBadLabel,
    kMalformedRow,
    kEmptyInput,
    kDuplicateId
  };

  /// `line` is 1-based; 0 when the error is not tied to a row.
  IngestError(Kind kind, std::size_t line, std::string detail);

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  const std::string& detail() const { return detail_; }
  /// "bad_score_range", "bad_label", ...
  std::string_view code() const;

 private:
  Kind kind_;
  std::size_t line_;
  std::string detail_;
};

std::string_view IngestErrorCode(IngestError::Kind kind);

/// Header `id,score,label`, LF or CRLF line endings. Blank lines are
/// skipped. Ids must be unique when present.
Dataset ParseCsv(std::istream& in);

/// One JSON object per line with `id` (string), `score` (number) and
/// `label` (string); unknown fields are ignored.
Dataset ParseJsonl(std::istream& in);

enum class DataFormat { kCsv, kJsonl };

/// JSONL for `.jsonl` / `.ndjson`, CSV otherwise.
DataFormat FormatForPath(const std::filesystem::path& path);
/// JSONL when the first non-blank character is '{', CSV otherwise.
DataFormat SniffFormat(std::string_view text);

Dataset Parse(std::istream& in, DataFormat format);
Dataset ParseText(std::string_view text, DataFormat format);
/// Throws std::runtime_error if the file cannot be opened.
Dataset LoadFile(const std::filesystem::path& path);

/// Scores are written in shortest round-trip form, so ParseCsv(WriteCsv(d))
/// reproduces every score bit for bit.
void WriteCsv(std::ostream& out, const Dataset& dataset);
void WriteJsonl(std::ostream& out, const Dataset& dataset);

struct SynthConfig {
  std::size_t n_total = 1000;
  double prevalence = 0.1;
  std::pair<double, double> good_score_shape = {1.0, 8.0};
  std::pair<double, double> damaging_score_shape = {6.0, 2.0};
  std::uint64_t seed = 0;
};

/// Seeded synthetic corpus: round(prevalence * n_total) damaging examples
/// with Beta(damaging_score_shape) scores, the rest good with
/// Beta(good_score_shape) scores, ids "synth-0001", ... Throws
/// std::invalid_argument on an invalid config.
Dataset Synthesize(const SynthConfig& config);

/// Deterministic N=1000 corpus whose confusion at threshold 0.4 is exactly
/// tp=20, fp=60, tn=910, fn=10:
///   910 good     evenly spaced in [0.01, 0.39]
///    60 good     evenly spaced in [0.40, 0.80]
///    20 damaging evenly spaced in [0.40, 0.95]
///    10 damaging evenly spaced in [0.05, 0.39]
Dataset CalibratedFixture();

}  // namespace tradeoff

#endif  // TRADEOFF_INGEST_HPP_

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

#include "tradeoff/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

namespace tradeoff {

namespace {

using Kind = IngestError::Kind;

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::string_view StripLineEnd(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

bool IsBlank(std::string_view s) { return Trim(s).empty(); }

// Shared row validation for both formats.
class RowCollector {
 public:
  void Add(std::size_t line, std::string id, double score,
           std::string_view label_token) {
    if (!(score >= 0.0 && score <= 1.0)) {
      std::ostringstream msg;
      msg << "score " << score << " outside [0,1]";
      throw IngestError(Kind::kBadScoreRange, line, msg.str());
    }
    const auto label = ParseLabel(label_token);
    if (!label) {
      throw IngestError(Kind::kBadLabel, line,
                        "unknown label '" + std::string(label_token) +
                            "' (expected 'good' or 'damaging')");
    }
    if (!id.empty() && !seen_.insert(id).second) {
      throw IngestError(Kind::kDuplicateId, line, "duplicate id '" + id + "'");
    }
    examples_.push_back({std::move(id), score, *label});
  }

  Dataset Finish() && {
    if (examples_.empty()) {
      throw IngestError(Kind::kEmptyInput, 0, "no data rows");
    }
    return Dataset(std::move(examples_));
  }

 private:
  std::vector<ScoredExample> examples_;
  std::unordered_set<std::string> seen_;
};

std::string ShortestDouble(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

double EvenlySpaced(double lo, double hi, std::size_t i, std::size_t n) {
  if (n == 1) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

std::string PaddedId(std::string_view prefix, std::size_t index,
                     std::size_t count) {
  const std::size_t width = std::max<std::size_t>(4, std::to_string(count).size());
  std::string digits = std::to_string(index);
  return std::string(prefix) + std::string(width - digits.size(), '0') + digits;
}

}  // namespace

IngestError::IngestError(Kind kind, std::size_t line, std::string detail)
    : std::runtime_error(std::string(IngestErrorCode(kind)) +
                         (line > 0 ? " at line " + std::to_string(line) : "") +
                         ": " + detail),
      kind_(kind),
      line_(line),
      detail_(std::move(detail)) {}

std::string_view IngestError::code() const { return IngestErrorCode(kind_); }

std::string_view IngestErrorCode(IngestError::Kind kind) {
  switch (kind) {
    case Kind::kBadScoreRange:
      return "bad_score_range";
    case Kind::kBadLabel:
      return "bad_label";
    case Kind::kMalformedRow:
      return "malformed_row";
    case Kind::kEmptyInput:
      return "empty_input";
    case Kind::kDuplicateId:
      return "duplicate_id";
  }
  return "?";
}

Dataset ParseCsv(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  RowCollector rows;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = StripLineEnd(raw);
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (IsBlank(line)) continue;
    if (!have_header) {
      if (line != "id,score,label") {
        throw IngestError(Kind::kMalformedRow, line_no,
                          "expected header 'id,score,label'");
      }
      have_header = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos ||
        line.find(',', c2 + 1) != std::string_view::npos) {
      throw IngestError(Kind::kMalformedRow, line_no,
                        "expected 3 comma-separated fields");
    }
    const auto id = Trim(line.substr(0, c1));
    const auto score_text = Trim(line.substr(c1 + 1, c2 - c1 - 1));
    const auto label = Trim(line.substr(c2 + 1));
    double score = 0.0;
    const auto [end, ec] = std::from_chars(
        score_text.data(), score_text.data() + score_text.size(), score);
    if (ec == std::errc::result_out_of_range) {
      throw IngestError(Kind::kBadScoreRange, line_no,
                        "score '" + std::string(score_text) + "' out of range");
    }
    if (ec != std::errc() || end != score_text.data() + score_text.size()) {
      throw IngestError(Kind::kMalformedRow, line_no,
                        "score '" + std::string(score_text) + "' is not a number");
    }
    rows.Add(line_no, std::string(id), score, label);
  }
  return std::move(rows).Finish();
}

Dataset ParseJsonl(std::istream& in) {
  using nlohmann::json;
  std::string raw;
  std::size_t line_no = 0;
  RowCollector rows;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = StripLineEnd(raw);
    if (IsBlank(line)) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw IngestError(Kind::kMalformedRow, line_no, "invalid JSON");
    }
    if (!obj.is_object()) {
      throw IngestError(Kind::kMalformedRow, line_no, "expected a JSON object");
    }
    std::string id;
    if (auto it = obj.find("id"); it != obj.end() && !it->is_null()) {
      if (it->is_string()) {
        id = it->get<std::string>();
      } else if (it->is_number_integer()) {
        id = it->dump();
      } else {
        throw IngestError(Kind::kMalformedRow, line_no, "'id' must be a string");
      }
    }
    const auto score = obj.find("score");
    if (score == obj.end() || !score->is_number()) {
      throw IngestError(Kind::kMalformedRow, line_no,
                        "'score' missing or not a number");
    }
    const auto label = obj.find("label");
    if (label == obj.end() || !label->is_string()) {
      throw IngestError(Kind::kMalformedRow, line_no,
                        "'label' missing or not a string");
    }
    rows.Add(line_no, std::move(id), score->get<double>(),
             label->get_ref<const std::string&>());
  }
  return std::move(rows).Finish();
}

DataFormat FormatForPath(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return ext == ".jsonl" || ext == ".ndjson" ? DataFormat::kJsonl
                                             : DataFormat::kCsv;
}

DataFormat SniffFormat(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  return first != std::string_view::npos && text[first] == '{'
             ? DataFormat::kJsonl
             : DataFormat::kCsv;
}

Dataset Parse(std::istream& in, DataFormat format) {
  return format == DataFormat::kJsonl ? ParseJsonl(in) : ParseCsv(in);
}

Dataset ParseText(std::string_view text, DataFormat format) {
  std::istringstream in{std::string(text)};
  return Parse(in, format);
}

Dataset LoadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return Parse(in, FormatForPath(path));
}

void WriteCsv(std::ostream& out, const Dataset& dataset) {
  out << "id,score,label\n";
  for (const auto& e : dataset.examples()) {
    out << e.id << ',' << ShortestDouble(e.score) << ',' << LabelName(e.label)
        << '\n';
  }
}

void WriteJsonl(std::ostream& out, const Dataset& dataset) {
  for (const auto& e : dataset.examples()) {
    nlohmann::json row = {{"id", e.id},
                          {"score", e.score},
                          {"label", std::string(LabelName(e.label))}};
    out << row.dump() << '\n';
  }
}

Dataset Synthesize(const SynthConfig& config) {
  auto positive = [](std::pair<double, double> s) {
    return s.first > 0.0 && s.second > 0.0;
  };
  if (config.n_total == 0) {
    throw std::invalid_argument("n_total must be at least 1");
  }
  if (!(config.prevalence >= 0.0 && config.prevalence <= 1.0)) {
    throw std::invalid_argument("prevalence must lie in [0,1]");
  }
  if (!positive(config.good_score_shape) ||
      !positive(config.damaging_score_shape)) {
    throw std::invalid_argument("Beta shape parameters must be positive");
  }

  std::mt19937_64 rng(config.seed);
  // Beta(a, b) = X / (X + Y) with X ~ Gamma(a), Y ~ Gamma(b).
  auto draw_beta = [&rng](std::pair<double, double> shape) {
    std::gamma_distribution<double> ga(shape.first, 1.0);
    std::gamma_distribution<double> gb(shape.second, 1.0);
    for (;;) {
      const double x = ga(rng);
      const double y = gb(rng);
      if (x + y > 0.0) return std::clamp(x / (x + y), 0.0, 1.0);
    }
  };

  const auto n_damaging = static_cast<std::size_t>(
      std::llround(config.prevalence * static_cast<double>(config.n_total)));
  std::vector<Label> labels(config.n_total, Label::kGood);
  std::fill_n(labels.begin(), n_damaging, Label::kDamaging);
  std::shuffle(labels.begin(), labels.end(), rng);

  std::vector<ScoredExample> examples;
  examples.reserve(config.n_total);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double score = draw_beta(labels[i] == Label::kDamaging
                                       ? config.damaging_score_shape
                                       : config.good_score_shape);
    examples.push_back(
        {PaddedId("synth-", i + 1, config.n_total), score, labels[i]});
  }
  return Dataset(std::move(examples));
}

Dataset CalibratedFixture() {
  struct Band {
    std::size_t count;
    double lo;
    double hi;
    Label label;
  };
  constexpr Band kBands[] = {
      {910, 0.01, 0.39, Label::kGood},
      {60, 0.40, 0.80, Label::kGood},
      {20, 0.40, 0.95, Label::kDamaging},
      {10, 0.05, 0.39, Label::kDamaging},
  };
  std::vector<ScoredExample> examples;
  examples.reserve(1000);
  for (const auto& band : kBands) {
    for (std::size_t i = 0; i < band.count; ++i) {
      examples.push_back({PaddedId("cal-", examples.size() + 1, 1000),
                          EvenlySpaced(band.lo, band.hi, i, band.count),
                          band.label});
    }
  }
  return Dataset(std::move(examples));
}

}  // namespace tradeoff

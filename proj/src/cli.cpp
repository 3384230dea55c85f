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

#include "tradeoff/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "tradeoff/errors.hpp"
#include "tradeoff/ingest.hpp"
#include "tradeoff/json_io.hpp"
#include "tradeoff/metrics.hpp"
#include "tradeoff/ores_client.hpp"
#include "tradeoff/preview.hpp"
#include "tradeoff/query.hpp"
#include "tradeoff/service.hpp"

namespace tradeoff::cli {

namespace {

// Thrown for bad flag values found after CLI11 parsing succeeded.
struct UsageError {
  std::string message;
};

std::string Fixed3(const std::optional<double>& v) {
  return v ? fmt::format("{:.3f}", *v) : "n/a";
}

std::string Full(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string FullOpt(const std::optional<double>& v) {
  return v ? Full(*v) : "";
}

std::string ThresholdText(const Threshold& t) {
  return t.is_above_max() ? "above_max" : fmt::format("{:.3f}", t.value());
}

void PrintPoint(std::ostream& out, const OperatingPoint& p) {
  const auto& c = p.counts;
  const auto& m = p.metrics;
  fmt::print(out, "threshold={}\n", ThresholdText(p.threshold));
  fmt::print(out, "tp={} fp={} tn={} fn={}\n", c.tp, c.fp, c.tn, c.fn);
  fmt::print(out, "precision={} recall={} fpr={}\n", Fixed3(m.precision),
             Fixed3(m.recall), Fixed3(m.fpr));
}

void PrintResult(std::ostream& out, const QueryResult& r, MetricId objective) {
  PrintPoint(out, r.point);
  fmt::print(out, "objective {}={}\n", MetricName(objective),
             Fixed3(r.objective_value));
}

void WriteDataset(const std::string& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (FormatForPath(path) == DataFormat::kJsonl) {
    WriteJsonl(out, dataset);
  } else {
    WriteCsv(out, dataset);
  }
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(line.substr(first));
  }
  return out;
}

std::optional<ores::RevId> ParseRevId(std::string_view s) {
  ores::RevId v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || v <= 0) {
    return std::nullopt;
  }
  return v;
}

std::vector<ores::RevId> ReadRevIds(const std::string& path) {
  std::vector<ores::RevId> ids;
  for (const auto& line : Lines(ReadFile(path))) {
    const auto id = ParseRevId(line.substr(0, line.find_first_of(" \t,")));
    if (!id) throw std::runtime_error("bad revision id '" + line + "' in " + path);
    ids.push_back(*id);
  }
  return ids;
}

// "rev_id,label" per line; an optional header line is skipped.
std::map<ores::RevId, Label> ReadLabels(const std::string& path) {
  std::map<ores::RevId, Label> labels;
  const auto lines = Lines(ReadFile(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto comma = lines[i].find(',');
    const auto id = ParseRevId(lines[i].substr(0, comma));
    const auto label = comma == std::string::npos
                           ? std::nullopt
                           : ParseLabel(lines[i].substr(comma + 1));
    if (!id || !label) {
      if (i == 0) continue;  // header
      throw std::runtime_error("bad label row '" + lines[i] + "' in " + path);
    }
    labels[*id] = *label;
  }
  return labels;
}

void RenderPreview(std::ostream& out, const PreviewGrid& grid, bool color) {
  if (!color) {
    for (auto c : kAllCategories) {
      const auto& e = Legend(c);
      fmt::print(out, "{} {:>4}  {:<4} {:<8}  {}\n", CategoryName(c),
                 grid.icons(c), ColorName(e.color), ShapeName(e.shape),
                 e.caption);
    }
    return;
  }
  constexpr std::uint64_t kRowWidth = 10;
  std::uint64_t col = 0;
  for (auto c : kAllCategories) {
    const auto& e = Legend(c);
    const char* ansi = e.color == IconColor::kBlue ? "\033[34m" : "\033[31m";
    const char glyph = e.shape == IconShape::kCircle ? 'o' : '^';
    for (std::uint64_t i = 0; i < grid.icons(c); ++i) {
      out << ansi << glyph << "\033[0m";
      if (++col % kRowWidth == 0) {
        out << '\n';
      } else {
        out << ' ';
      }
    }
  }
  if (col % kRowWidth != 0) out << '\n';
  for (auto c : kAllCategories) {
    const auto& e = Legend(c);
    const char* ansi = e.color == IconColor::kBlue ? "\033[34m" : "\033[31m";
    fmt::print(out, "{}{}\033[0m {} {:>4}  {}\n", ansi,
               e.shape == IconShape::kCircle ? 'o' : '^', CategoryName(c),
               grid.icons(c), e.caption);
  }
}

}  // namespace

int RunCli(const std::vector<std::string>& args, Io io) {
  CLI::App app{"Threshold explorer for scored binary classifiers", "tradeoff"};
  app.require_subcommand(1);
  app.fallthrough(false);

  const auto unit = CLI::Range(0.0, 1.0);
  std::function<int()> action;

  // validate
  std::string file;
  auto* validate = app.add_subcommand("validate", "Parse a dataset and report counts");
  validate->add_option("file", file, "CSV or JSONL dataset")->required();
  validate->callback([&] {
    action = [&] {
      const Dataset d = LoadFile(file);
      fmt::print(io.out, "ok: n_total={} n_damaging={} n_good={}\n", d.n_total(),
                 d.n_damaging(), d.n_good());
      return kExitOk;
    };
  });

  // metrics
  double threshold = 0.5;
  auto* metrics = app.add_subcommand("metrics", "Counts and metrics at a threshold");
  metrics->add_option("file", file, "CSV or JSONL dataset")->required();
  metrics->add_option("--threshold,-t", threshold, "Decision threshold in [0,1]")
      ->required()
      ->check(unit);
  metrics->callback([&] {
    action = [&] {
      const auto curve = BuildCurve(LoadFile(file));
      PrintPoint(io.out, PointAt(curve, threshold));
      return kExitOk;
    };
  });

  // sweep
  std::string format = "csv";
  auto* sweep = app.add_subcommand("sweep", "Emit the full threshold curve");
  sweep->add_option("file", file, "CSV or JSONL dataset")->required();
  sweep->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->callback([&] {
    action = [&] {
      const auto curve = BuildCurve(LoadFile(file));
      if (format == "json") {
        io.out << ToJson(curve).dump(2) << '\n';
        return kExitOk;
      }
      io.out << "threshold,tp,fp,tn,fn,recall,precision,fpr\n";
      for (const auto& p : curve.points()) {
        io.out << (p.threshold.is_above_max() ? "above_max"
                                              : Full(p.threshold.value()))
               << ',' << p.counts.tp << ',' << p.counts.fp << ','
               << p.counts.tn << ',' << p.counts.fn << ','
               << FullOpt(p.metrics.recall) << ','
               << FullOpt(p.metrics.precision) << ',' << FullOpt(p.metrics.fpr)
               << '\n';
      }
      return kExitOk;
    };
  });

  // inverse
  std::string metric_name;
  double target = 0.0;
  auto* inverse = app.add_subcommand("inverse", "Threshold achieving a metric target");
  inverse->add_option("file", file, "CSV or JSONL dataset")->required();
  inverse->add_option("--metric", metric_name, "recall, precision or fpr")
      ->required()
      ->check(CLI::IsMember({"recall", "precision", "fpr"}));
  inverse->add_option("--target", target, "Target value in [0,1]")
      ->required()
      ->check(unit);
  inverse->callback([&] {
    action = [&] {
      const auto curve = BuildCurve(LoadFile(file));
      const MetricId metric = *ParseMetric(metric_name);
      const auto result = InverseForMetric(curve, metric, target);
      PrintResult(io.out, result,
                  metric == MetricId::kPrecision ? MetricId::kRecall : metric);
      return kExitOk;
    };
  });

  // optimize
  std::string maximize;
  std::vector<std::string> constraint_texts;
  auto* optimize =
      app.add_subcommand("optimize", "Maximize a metric subject to constraints");
  optimize->add_option("file", file, "CSV or JSONL dataset")->required();
  optimize->add_option("--maximize", maximize, "recall or precision")
      ->required()
      ->check(CLI::IsMember({"recall", "precision"}));
  optimize->add_option("--constraint", constraint_texts,
                       "e.g. \"precision>=0.9\" or \"fpr<=0.05\" (repeatable)")
      ->each([](const std::string& text) {
        if (!ParseConstraint(text)) {
          throw CLI::ValidationError(
              "--constraint", "'" + text + "' must look like precision>=0.9");
        }
      });
  optimize->callback([&] {
    action = [&] {
      std::vector<Constraint> constraints;
      for (const auto& t : constraint_texts) constraints.push_back(*ParseConstraint(t));
      const auto curve = BuildCurve(LoadFile(file));
      const MetricId objective = *ParseMetric(maximize);
      PrintResult(io.out, Optimize(curve, objective, constraints), objective);
      return kExitOk;
    };
  });

  // preview
  std::uint64_t icons = kDefaultIcons;
  auto* preview = app.add_subcommand("preview", "Pictogram of the expected outcome");
  preview->add_option("file", file, "CSV or JSONL dataset")->required();
  preview->add_option("--threshold,-t", threshold, "Decision threshold in [0,1]")
      ->required()
      ->check(unit);
  preview->add_option("--icons", icons, "Number of icons (default 100)")
      ->check(CLI::PositiveNumber);
  preview->callback([&] {
    action = [&] {
      const auto curve = BuildCurve(LoadFile(file));
      const auto point = PointAt(curve, threshold);
      fmt::print(io.out, "threshold={:.3f} icons={}\n", threshold, icons);
      RenderPreview(io.out, AllocateIcons(point.counts, icons), io.color);
      return kExitOk;
    };
  });

  // fetch
  ores::ScoreRequest request{.base_url = "https://ores.wikimedia.org",
                             .context = {},
                             .model = "damaging",
                             .rev_ids = {}};
  std::string revids_path;
  std::string labels_path;
  std::string out_path;
  std::string fixtures_dir;
  bool offline = false;
  double timeout_s = 10.0;
  auto* fetch = app.add_subcommand("fetch", "Fetch scores from an ORES-style service");
  fetch->add_option("--base-url", request.base_url, "Scoring service URL");
  fetch->add_option("--context", request.context, "Wiki, e.g. enwiki")->required();
  fetch->add_option("--model", request.model, "Model name (default damaging)");
  fetch->add_option("--revids", revids_path, "File with one revision id per line")
      ->required();
  fetch->add_option("--labels", labels_path, "File with rev_id,label rows")
      ->required();
  fetch->add_option("--out", out_path, "Output dataset (.csv or .jsonl)")
      ->required();
  fetch->add_flag("--offline", offline, "Answer from recorded fixtures");
  fetch->add_option("--fixtures", fixtures_dir, "Recorded response directory");
  fetch->add_option("--timeout", timeout_s, "Per-request timeout in seconds")
      ->check(CLI::PositiveNumber);
  fetch->callback([&] {
    if (offline && fixtures_dir.empty()) {
      throw UsageError{"--offline requires --fixtures"};
    }
    action = [&] {
      request.rev_ids = ReadRevIds(revids_path);
      const auto labels = ReadLabels(labels_path);
      std::shared_ptr<ores::Transport> transport;
      if (offline) {
        transport = std::make_shared<ores::FixtureTransport>(fixtures_dir);
      } else {
        transport = std::make_shared<ores::HttpTransport>(
            std::chrono::milliseconds(static_cast<long>(timeout_s * 1000)));
      }
      const ores::Client client(transport);
      std::map<ores::RevId, ores::RevisionScore> scores;
      for (const auto& [id, outcome] : client.FetchScores(request)) {
        if (const auto* s = std::get_if<ores::RevisionScore>(&outcome)) {
          scores.emplace(id, *s);
        } else {
          const auto& e = std::get<ores::ClientError>(outcome);
          fmt::print(io.err, "rev {}: {}: {}\n", id,
                     ores::ClientErrorKindName(e.kind), e.detail);
        }
      }
      const auto joined = ores::BuildDataset(scores, labels);
      WriteDataset(out_path, joined.dataset);
      fmt::print(io.out, "scored={} written={} skipped={}\n", scores.size(),
                 joined.dataset.n_total(), joined.skipped.size());
      return kExitOk;
    };
  });

  // synth
  SynthConfig synth_config;
  std::vector<double> good_shape;
  std::vector<double> damaging_shape;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("--n", synth_config.n_total, "Number of examples")
      ->required()
      ->check(CLI::PositiveNumber);
  synth->add_option("--prevalence", synth_config.prevalence,
                    "Fraction damaging in [0,1] (default 0.1)")
      ->check(unit);
  synth->add_option("--seed", synth_config.seed, "Generator seed")->required();
  synth->add_option("--good-shape", good_shape, "Beta(a,b) for good scores")
      ->expected(2)
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  synth->add_option("--damaging-shape", damaging_shape,
                    "Beta(a,b) for damaging scores")
      ->expected(2)
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  synth->add_option("--out", out_path, "Output dataset (.csv or .jsonl)")->required();
  synth->callback([&] {
    action = [&] {
      if (good_shape.size() == 2) {
        synth_config.good_score_shape = {good_shape[0], good_shape[1]};
      }
      if (damaging_shape.size() == 2) {
        synth_config.damaging_score_shape = {damaging_shape[0], damaging_shape[1]};
      }
      const Dataset d = Synthesize(synth_config);
      WriteDataset(out_path, d);
      fmt::print(io.out, "wrote {}: n_total={} n_damaging={}\n", out_path,
                 d.n_total(), d.n_damaging());
      return kExitOk;
    };
  });

  // fixture
  auto* fixture =
      app.add_subcommand("fixture", "Write the calibrated 1000-example fixture");
  fixture->add_option("--out", out_path, "Output dataset (.csv or .jsonl)")
      ->required();
  fixture->callback([&] {
    action = [&] {
      WriteDataset(out_path, CalibratedFixture());
      fmt::print(io.out, "wrote {}\n", out_path);
      return kExitOk;
    };
  });

  // serve
  service::ServiceConfig serve_config;
  std::string addr;
  std::string ui_dir;
  std::string serve_fixtures;
  std::string snapshot;
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--addr", addr, "Listen address (default 127.0.0.1:8808)");
  serve->add_option("--ui-dir", ui_dir, "Static UI bundle served at /")
      ->check(CLI::ExistingDirectory);
  serve->add_option("--fixtures-dir", serve_fixtures,
                    "Datasets loaded at startup")
      ->check(CLI::ExistingDirectory);
  serve->add_option("--snapshot", snapshot,
                    "Snapshot file restored at startup and written on exit");
  serve->add_option("--cors-origin", serve_config.cors_origin,
                    "Access-Control-Allow-Origin value");
  serve->callback([&] {
    if (!addr.empty()) {
      try {
        service::ParseListenAddress(addr, serve_config);
      } catch (const std::invalid_argument& e) {
        throw UsageError{e.what()};
      }
    }
    if (!ui_dir.empty()) serve_config.ui_dir = ui_dir;
    if (!serve_fixtures.empty()) serve_config.fixtures_dir = serve_fixtures;
    if (!snapshot.empty()) serve_config.snapshot_path = snapshot;
    action = [&] { return service::RunServer(serve_config); };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    io.out << (subs.empty() ? app.help() : subs.front()->help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    io.err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    io.err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  } catch (const UsageError& e) {
    io.err << "error: " << e.message << "\n";
    io.err << app.get_subcommands().front()->help();
    return kExitUsage;
  }

  try {
    return action();
  } catch (const InfeasibleError& e) {
    io.err << "infeasible: " << e.what() << "\n";
  } catch (const IngestError& e) {
    io.err << "invalid dataset: " << e.what() << "\n";
  } catch (const DomainError& e) {
    io.err << e.code() << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << "\n";
  }
  return kExitDomain;
}

}  // namespace tradeoff::cli

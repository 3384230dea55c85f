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

#include <numeric>

#include "gtest/gtest.h"
#include "stub_server.hpp"
#include "tradeoff/errors.hpp"

namespace tradeoff::ores {
namespace {

using std::chrono::milliseconds;

constexpr const char* kRecorded12345 =
    R"({"enwiki":{"scores":{"12345":{"damaging":{"score":{"prediction":false,"probability":{"false":0.93,"true":0.07}}}}}}})";

const std::string kFixtureDir = std::string(TRADEOFF_TEST_DATA_DIR) + "/fixtures/ores";

ClientOptions FastRetry() {
  return ClientOptions{.batch_size = 50,
                       .retry_delay = milliseconds(5),
                       .max_parallel_batches = 4};
}

std::vector<RevId> Range(RevId first, std::size_t n) {
  std::vector<RevId> ids(n);
  std::iota(ids.begin(), ids.end(), first);
  return ids;
}

const RevisionScore& ScoreOf(const ScoreMap& m, RevId id) {
  return std::get<RevisionScore>(m.at(id));
}
const ClientError& ErrorOf(const ScoreMap& m, RevId id) {
  return std::get<ClientError>(m.at(id));
}

TEST(ParseScoresBody, RecordedFixture) {
  const RevId ids[] = {12345};
  const auto m = ParseScoresBody(kRecorded12345, "enwiki", "damaging", ids);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(ScoreOf(m, 12345),
            (RevisionScore{.rev_id = 12345,
                           .prediction = false,
                           .p_true = 0.07,
                           .p_false = 0.93}));
}

TEST(ParseScoresBody, RevisionErrorIsIsolated) {
  const std::string body =
      R"({"enwiki":{"scores":{
        "1":{"damaging":{"score":{"prediction":true,"probability":{"false":0.2,"true":0.8}}}},
        "2":{"damaging":{"error":{"type":"RevisionNotFound","message":"no such revision"}}}}}})";
  const RevId ids[] = {1, 2, 3};
  const auto m = ParseScoresBody(body, "enwiki", "damaging", ids);
  EXPECT_EQ(ScoreOf(m, 1).p_true, 0.8);
  EXPECT_EQ(ErrorOf(m, 2).kind, ClientError::Kind::kRevisionError);
  EXPECT_EQ(ErrorOf(m, 2).rev_id, 2);
  EXPECT_NE(ErrorOf(m, 2).detail.find("RevisionNotFound"), std::string::npos);
  EXPECT_EQ(ErrorOf(m, 3).kind, ClientError::Kind::kRevisionError);
}

TEST(ParseScoresBody, MalformedBodies) {
  const RevId ids[] = {1, 2};
  for (const char* body : {"not json", "[]", R"({"frwiki":{"scores":{}}})",
                           R"({"enwiki":{"models":{}}})"}) {
    const auto m = ParseScoresBody(body, "enwiki", "damaging", ids);
    ASSERT_EQ(m.size(), 2u) << body;
    EXPECT_EQ(ErrorOf(m, 1).kind, ClientError::Kind::kMalformedBody) << body;
  }
  const auto bad_sum = ParseScoresBody(
      R"({"enwiki":{"scores":{"1":{"damaging":{"score":{"prediction":true,"probability":{"false":0.5,"true":0.8}}}}}}})",
      "enwiki", "damaging", std::span<const RevId>(ids, 1));
  EXPECT_EQ(ErrorOf(bad_sum, 1).kind, ClientError::Kind::kMalformedBody);
}

TEST(BuildScoresPath, V3Layout) {
  const RevId ids[] = {1, 22, 333};
  EXPECT_EQ(BuildScoresPath("enwiki", "damaging", ids),
            "/v3/scores/enwiki/?models=damaging&revids=1%7C22%7C333");
}

TEST(FetchScores, BatchesOf50AgainstStub) {
  testing::StubOres stub;
  const Client client(std::make_shared<HttpTransport>(), FastRetry());
  const auto ids = Range(1000, 120);
  const auto result = client.FetchScores(
      {.base_url = stub.url(), .context = "enwiki", .model = "damaging", .rev_ids = ids});
  EXPECT_EQ(stub.calls(), 3);
  auto sizes = stub.batch_sizes();
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{20, 50, 50}));
  ASSERT_EQ(result.size(), 120u);
  for (RevId id : ids) {
    const auto& s = ScoreOf(result, id);
    EXPECT_DOUBLE_EQ(s.p_true, static_cast<double>(id % 100) / 100.0);
  }
  EXPECT_NE(stub.user_agent().find("tradeoff"), std::string::npos);
}

TEST(FetchScores, PerRevisionErrorLeavesSiblingsScored) {
  testing::StubOres stub(/*missing=*/{1007});
  const Client client(std::make_shared<HttpTransport>(), FastRetry());
  const auto result = client.FetchScores({.base_url = stub.url(),
                                          .context = "enwiki",
                                          .model = "damaging",
                                          .rev_ids = Range(1000, 10)});
  ASSERT_EQ(result.size(), 10u);
  EXPECT_EQ(ErrorOf(result, 1007).kind, ClientError::Kind::kRevisionError);
  EXPECT_EQ(ErrorOf(result, 1007).rev_id, 1007);
  for (RevId id = 1000; id < 1010; ++id) {
    if (id != 1007) EXPECT_TRUE(std::holds_alternative<RevisionScore>(result.at(id)));
  }
}

TEST(FetchScores, RetriesAFailedBatchOnce) {
  testing::StubOres stub({}, /*fail_first=*/1);
  const Client client(std::make_shared<HttpTransport>(), FastRetry());
  const auto result = client.FetchScores({.base_url = stub.url(),
                                          .context = "enwiki",
                                          .model = "damaging",
                                          .rev_ids = Range(1, 5)});
  EXPECT_EQ(stub.calls(), 2);
  for (RevId id = 1; id <= 5; ++id) {
    EXPECT_TRUE(std::holds_alternative<RevisionScore>(result.at(id)));
  }
}

TEST(FetchScores, PersistentHttpFailureSurfacesPerRevision) {
  testing::StubOres stub({}, /*fail_first=*/100);
  ClientOptions options = FastRetry();
  options.max_parallel_batches = 1;
  const Client client(std::make_shared<HttpTransport>(), options);
  const auto result = client.FetchScores({.base_url = stub.url(),
                                          .context = "enwiki",
                                          .model = "damaging",
                                          .rev_ids = Range(1, 60)});
  EXPECT_EQ(stub.calls(), 4);  // two batches, one retry each
  ASSERT_EQ(result.size(), 60u);
  for (const auto& [id, outcome] : result) {
    const auto& e = std::get<ClientError>(outcome);
    EXPECT_EQ(e.kind, ClientError::Kind::kHttpStatus);
    EXPECT_EQ(e.rev_id, id);
  }
}

TEST(FetchScores, TransportFailureSurfacesPerRevision) {
  int dead_port = 0;
  {
    testing::LocalServer probe;
    probe.Start();
    dead_port = probe.port();
  }  // closed again: connections are refused
  const Client client(std::make_shared<HttpTransport>(milliseconds(500)),
                      FastRetry());
  const auto result = client.FetchScores(
      {.base_url = "http://127.0.0.1:" + std::to_string(dead_port),
       .context = "enwiki",
       .model = "damaging",
       .rev_ids = {1, 2}});
  ASSERT_EQ(result.size(), 2u);
  EXPECT_EQ(ErrorOf(result, 1).kind, ClientError::Kind::kTransport);
}

TEST(FetchScores, DuplicatesAreFetchedOnce) {
  testing::StubOres stub;
  const Client client(std::make_shared<HttpTransport>(), FastRetry());
  const auto result = client.FetchScores({.base_url = stub.url(),
                                          .context = "enwiki",
                                          .model = "damaging",
                                          .rev_ids = {5, 5, 6}});
  EXPECT_EQ(result.size(), 2u);
  EXPECT_EQ(stub.batch_sizes(), (std::vector<std::size_t>{2}));
}

TEST(FetchScores, InvalidRequests) {
  const Client client(std::make_shared<FixtureTransport>(kFixtureDir));
  EXPECT_THROW(client.FetchScores({.base_url = "", .context = "enwiki",
                                   .model = "damaging", .rev_ids = {}}),
               std::invalid_argument);
  EXPECT_THROW(client.FetchScores({.base_url = "", .context = "",
                                   .model = "damaging", .rev_ids = {1}}),
               std::invalid_argument);
  EXPECT_THROW(client.FetchScores({.base_url = "", .context = "enwiki",
                                   .model = "damaging", .rev_ids = {0}}),
               std::invalid_argument);
}

TEST(FixtureTransport, OfflineFetch) {
  const Client client(std::make_shared<FixtureTransport>(kFixtureDir));
  const auto result = client.FetchScores({.base_url = "https://ores.invalid",
                                          .context = "enwiki",
                                          .model = "damaging",
                                          .rev_ids = {12345, 880001, 880003, 999}});
  ASSERT_EQ(result.size(), 4u);
  EXPECT_EQ(ScoreOf(result, 12345).p_true, 0.07);
  EXPECT_FALSE(ScoreOf(result, 12345).prediction);
  EXPECT_EQ(ScoreOf(result, 880001).p_true, 0.88);
  EXPECT_TRUE(ScoreOf(result, 880001).prediction);
  EXPECT_EQ(ErrorOf(result, 880003).kind, ClientError::Kind::kRevisionError);
  EXPECT_EQ(ErrorOf(result, 999).kind, ClientError::Kind::kRevisionError);
}

TEST(FixtureTransport, MissingDirectory) {
  EXPECT_THROW(FixtureTransport("/nonexistent/fixtures"), std::invalid_argument);
}

TEST(BuildDataset, Joins) {
  const std::map<RevId, RevisionScore> scores = {
      {1, {1, true, 0.9, 0.1}}, {2, {2, false, 0.1, 0.9}}};
  const auto both =
      BuildDataset(scores, {{1, Label::kDamaging}, {2, Label::kGood}});
  EXPECT_EQ(both.dataset.n_total(), 2u);
  EXPECT_TRUE(both.skipped.empty());
  EXPECT_EQ(both.dataset.examples()[0].score, 0.9);
  EXPECT_EQ(both.dataset.examples()[0].id, "1");

  const auto partial = BuildDataset({{1, {1, true, 0.9, 0.1}}},
                                    {{1, Label::kDamaging}, {2, Label::kGood}});
  EXPECT_EQ(partial.dataset.n_total(), 1u);
  EXPECT_EQ(partial.skipped, (std::vector<RevId>{2}));

  EXPECT_THROW(BuildDataset({{1, {1, true, 0.9, 0.1}}}, {{2, Label::kGood}}),
               DomainError);
}

}  // namespace
}  // namespace tradeoff::ores

// Copyright 2026 The PIR-CSI Authors
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

#include "pircsi/net.h"

#include <thread>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "pircsi/protocol.h"
#include "pircsi/rng.h"

namespace pircsi {
namespace {

using ::testing::HasSubstr;

class NetTest : public ::testing::Test {
 protected:
  void SetUp() override {
    Rng rng(99);
    params_ = *FieldParams::Create(5, 2);
    db_ = std::make_shared<Database>(Database::Random(params_, kMessages, rng));
    server_ = *Server::Start(db_, 0);
  }

  // Builds a query for a fresh scenario, fetches it and checks the decode.
  void RoundTrip(Client& client, Model model, int M, Rng& rng) {
    const Protocol protocol = *Protocol::Create(model, kMessages, M);
    const Scenario sc = *SampleScenario(*db_, M, model, rng);
    SeededSource source(rng);
    const BuiltQuery built = *protocol.Build(sc, source);
    const auto answer = client.Fetch(built.query, params_);
    ASSERT_TRUE(answer.ok()) << answer.status();
    ASSERT_EQ(*RecoverDemand(*answer, built.state), db_->message(sc.demand))
        << ModelName(model) << " M=" << M;
  }

  static constexpr uint32_t kMessages = 9;
  FieldParamsPtr params_;
  std::shared_ptr<Database> db_;
  std::unique_ptr<Server> server_;
};

TEST_F(NetTest, HelloDescribesDatabase) {
  Client client = *Client::Connect("127.0.0.1", server_->port());
  const DatabaseInfo info = *client.Hello();
  EXPECT_EQ(info.q, 5u);
  EXPECT_EQ(info.m, 2u);
  EXPECT_EQ(info.num_messages, kMessages);
}

TEST_F(NetTest, LoopbackDecodesEveryInstance) {
  Client client = *Client::Connect("localhost", server_->port());
  Rng rng(1);
  long long sent = 0;
  for (int M = 0; M < static_cast<int>(kMessages); ++M) {
    for (int t = 0; t < 5; ++t, ++sent) RoundTrip(client, Model::kI, M, rng);
  }
  for (int M = 1; M <= static_cast<int>(kMessages); ++M) {
    for (int t = 0; t < 5; ++t, ++sent) RoundTrip(client, Model::kII, M, rng);
  }
  EXPECT_EQ(server_->queries_answered(), sent);
  EXPECT_EQ(server_->queries_rejected(), 0);
}

TEST_F(NetTest, EightConcurrentClients) {
  std::vector<std::thread> threads;
  std::atomic<int> failures{0};
  for (int c = 0; c < 8; ++c) {
    threads.emplace_back([&, c] {
      auto client = Client::Connect("127.0.0.1", server_->port());
      if (!client.ok()) {
        ++failures;
        return;
      }
      Rng rng(1000 + c);
      for (int t = 0; t < 40; ++t) {
        const Model model = t % 2 ? Model::kI : Model::kII;
        const int M = 1 + t % 5;
        const Protocol protocol = *Protocol::Create(model, kMessages, M);
        const Scenario sc = *SampleScenario(*db_, M, model, rng);
        SeededSource source(rng);
        const BuiltQuery built = *protocol.Build(sc, source);
        const auto answer = client->Fetch(built.query, params_);
        if (!answer.ok() || *RecoverDemand(*answer, built.state) != db_->message(sc.demand)) {
          ++failures;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(failures.load(), 0);
  EXPECT_EQ(server_->queries_answered(), 8 * 40);
}

TEST_F(NetTest, MalformedQueryGetsErrorAndConnectionSurvives) {
  Client client = *Client::Connect("127.0.0.1", server_->port());
  const Frame reply = *client.Exchange(Frame{MessageType::kQuery, {1, 0, 9}});
  EXPECT_EQ(reply.type, MessageType::kError);
  EXPECT_THAT(std::string(reply.payload.begin(), reply.payload.end()),
              HasSubstr("malformed query"));

  // Decodes fine but names a message the server does not hold.
  const FieldElement one = FieldElement::One(params_);
  const Query out_of_range{Model::kI, CaseTag::kNone, {QuerySet{{kMessages + 1}, {one}}}};
  const auto rejected = client.Fetch(out_of_range, params_);
  EXPECT_EQ(rejected.status().code(), absl::StatusCode::kInvalidArgument);

  Rng rng(2);
  RoundTrip(client, Model::kI, 2, rng);
  EXPECT_EQ(server_->queries_rejected(), 2);
  EXPECT_EQ(server_->queries_answered(), 1);
}

TEST_F(NetTest, UnexpectedFrameTypeGetsError) {
  Client client = *Client::Connect("127.0.0.1", server_->port());
  const Frame reply = *client.Exchange(Frame{MessageType::kAnswer, {0, 0}});
  EXPECT_EQ(reply.type, MessageType::kError);
  Rng rng(3);
  RoundTrip(client, Model::kII, 3, rng);
}

TEST_F(NetTest, BadHeaderGetsErrorThenClose) {
  Client client = *Client::Connect("127.0.0.1", server_->port());
  const std::vector<uint8_t> junk = {0x7f, 0, 0, 0, 0};
  ASSERT_TRUE(client.SendRaw(junk).ok());
  const Frame reply = *client.Receive();
  EXPECT_EQ(reply.type, MessageType::kError);
  EXPECT_FALSE(client.Receive().ok());
}

TEST_F(NetTest, StopClosesOpenConnections) {
  Client client = *Client::Connect("127.0.0.1", server_->port());
  ASSERT_TRUE(client.Hello().ok());
  const uint16_t port = server_->port();
  server_->Stop();
  EXPECT_FALSE(client.Hello().ok());
  EXPECT_FALSE(Client::Connect("127.0.0.1", port).ok());
}

TEST(ServerTest, RejectsBadBindAddress) {
  Rng rng(4);
  auto db = std::make_shared<Database>(Database::Random(*FieldParams::Create(3, 1), 3, rng));
  EXPECT_FALSE(Server::Start(db, 0, "not-an-address").ok());
}

}  // namespace
}  // namespace pircsi

#include <gtest/gtest.h>

#include "mbf/proto_cum.hpp"
#include "rig.hpp"

using namespace mbf;
using namespace mbf::proto;
using mbf::test::envelope;
using mbf::test::Rig;

namespace {

constexpr Dur kDelta = 10;

struct CumFixture : ::testing::Test {
  Thresholds th = thresholds_cum(kDelta, 20, 1);
  Rig rig{th.n_min, kDelta};
  std::vector<std::pair<int, Tick>> corrected;
  std::unique_ptr<CumServer> s;

  void SetUp() override {
    auto env = rig.env(th, th.n_min, kDelta);
    env.on_correct = [this](int id, Tick t) { corrected.emplace_back(id, t); };
    s = std::make_unique<CumServer>(0, env, 0);
    s->start();
    rig.engine.run_until(0);
  }

  void from_client(int c, Payload p) {
    s->deliver(envelope(ProcessId::client(c), ProcessId::server(0), std::move(p), rig.engine.now()));
  }
  void from_server(int j, Payload p) {
    s->deliver(envelope(ProcessId::server(j), ProcessId::server(0), std::move(p), rig.engine.now()));
  }
  void echo(int j, std::vector<ValueEntry> entries, std::optional<Nonce> nonce,
            std::vector<int> pending = {}) {
    from_server(j, EchoMsg{j, std::move(entries), false, std::move(pending), nonce});
  }
};

}  // namespace

TEST(CumThresholds, TableValues) {
  auto t = thresholds_cum(10, 20, 1);
  EXPECT_EQ(t.k, 1);
  EXPECT_EQ(t.n_min, 8);
  EXPECT_EQ(t.reply_q, 5);
  EXPECT_EQ(t.echo_q, 4);  // 3kf+1
  auto u = thresholds_cum(10, 10, 1);
  EXPECT_EQ(u.k, 2);
  EXPECT_EQ(u.n_min, 13);
  EXPECT_EQ(u.reply_q, 8);
  EXPECT_EQ(u.echo_q, 7);
  EXPECT_EQ(thresholds_cum(10, 10, 3).n_min, 37);
  EXPECT_THROW(thresholds_cum(10, 30, 1), ConfigError);
}

TEST(CumServerCtor, PhaseMustFitTheCycle) {
  auto th = thresholds_cum(kDelta, 20, 1);
  Rig rig(th.n_min, kDelta);
  EXPECT_THROW(CumServer(0, rig.env(th, th.n_min, kDelta), 2 * kDelta), ConfigError);
  EXPECT_THROW(CumServer(0, rig.env(th, th.n_min, kDelta), -1), ConfigError);
}

TEST_F(CumFixture, CycleBroadcastsFreshNonces) {
  auto first = s->nonce();
  ASSERT_TRUE(first.has_value());
  auto reqs = rig.of_kind<EchoReqMsg>();
  ASSERT_EQ(reqs.size(), static_cast<std::size_t>(th.n_min));
  EXPECT_EQ(std::get<EchoReqMsg>(reqs[0].payload).nonce, first);
  rig.engine.run_until(2 * kDelta);
  EXPECT_NE(s->nonce(), first);
  EXPECT_EQ(rig.of_kind<EchoReqMsg>().size(), 2u * th.n_min);
}

TEST_F(CumFixture, QuorumEchoesEnterVSafeAndReachReaders) {
  from_client(3, ReadMsg{3});
  rig.sent.clear();
  auto r = s->nonce();
  for (int j = 1; j < th.echo_q; ++j) echo(j, {{55, 4}}, r);
  EXPECT_FALSE(s->v_safe().contains({55, 4}));
  EXPECT_TRUE(rig.of_kind<ReplyMsg>().empty());
  echo(th.echo_q, {{55, 4}}, r);
  EXPECT_TRUE(s->v_safe().contains({55, 4}));
  auto replies = rig.of_kind<ReplyMsg>();
  ASSERT_EQ(replies.size(), 1u);
  EXPECT_EQ(replies[0].recipient, ProcessId::client(3));
}

TEST_F(CumFixture, EchoReadersAlsoGetReplies) {
  auto r = s->nonce();
  for (int j = 1; j <= th.echo_q; ++j) echo(j, {{55, 4}}, r, {6});
  auto replies = rig.of_kind<ReplyMsg>();
  ASSERT_EQ(replies.size(), 1u);
  EXPECT_EQ(replies[0].recipient, ProcessId::client(6));
}

TEST_F(CumFixture, StaleNonceIgnored) {
  auto old = s->nonce();
  rig.engine.run_until(2 * kDelta);
  for (int j = 1; j <= th.echo_q; ++j) echo(j, {{55, 4}}, old);
  for (int j = 1; j <= th.echo_q; ++j) echo(j, {{56, 5}}, std::nullopt);
  EXPECT_FALSE(s->v_safe().contains({55, 4}));
  EXPECT_FALSE(s->v_safe().contains({56, 5}));
}

TEST_F(CumFixture, CycleStartPromotesVSafe) {
  auto r = s->nonce();
  for (int j = 1; j <= th.echo_q; ++j) echo(j, {{55, 4}}, r);
  rig.engine.run_until(2 * kDelta);
  EXPECT_TRUE(s->v().contains({55, 4}));
  EXPECT_TRUE(s->v_safe().empty());
}

TEST_F(CumFixture, TimerExpiresAfterFourDelta) {
  rig.engine.run_until(100);
  from_client(0, WriteMsg{77, 1});
  ASSERT_EQ(s->w().size(), 1u);
  EXPECT_EQ(s->w()[0].expires_at, 140);
  rig.engine.run_until(139);
  s->timer_check();
  EXPECT_EQ(s->w().size(), 1u);
  rig.engine.run_until(140);
  s->timer_check();
  EXPECT_TRUE(s->w().empty());
}

TEST_F(CumFixture, NonCompliantTimerPurged) {
  rig.engine.run_until(50);
  s->plant_w({{-1, 80}, 50 + 9 * kDelta});
  s->timer_check();
  EXPECT_TRUE(s->w().empty());
  s->timer_check();  // empty W is fine
}

TEST_F(CumFixture, WriteRepliesToReadersWithoutEchoBroadcast) {
  from_client(1, ReadMsg{1});
  from_server(2, ReadFwMsg{2});
  rig.sent.clear();
  from_client(0, WriteMsg{77, 3});
  auto replies = rig.of_kind<ReplyMsg>();
  ASSERT_EQ(replies.size(), 2u);
  for (const auto& e : replies) {
    EXPECT_EQ(std::get<ReplyMsg>(e.payload).entries, (std::vector<ValueEntry>{{77, 3}}));
  }
  EXPECT_TRUE(rig.of_kind<EchoMsg>().empty());
}

TEST_F(CumFixture, DuplicateWriteStagedOnce) {
  from_client(0, WriteMsg{77, 3});
  from_client(0, WriteMsg{77, 3});
  EXPECT_EQ(s->w().size(), 1u);
}

TEST_F(CumFixture, ReadRepliesWithConCutAndForwards) {
  for (SeqNo sn = 1; sn <= 4; ++sn) from_client(0, WriteMsg{100 + sn, sn});
  rig.sent.clear();
  from_client(5, ReadMsg{5});
  auto replies = rig.of_kind<ReplyMsg>();
  ASSERT_EQ(replies.size(), 1u);
  EXPECT_EQ(std::get<ReplyMsg>(replies[0].payload).entries,
            (std::vector<ValueEntry>{{102, 2}, {103, 3}, {104, 4}}));
  EXPECT_EQ(rig.of_kind<ReadFwMsg>().size(), static_cast<std::size_t>(th.n_min));
  EXPECT_TRUE(s->pending_read().count(5));
}

TEST_F(CumFixture, ForwardedReadRegistersClient) {
  from_server(4, ReadFwMsg{8});
  EXPECT_TRUE(s->pending_read().count(8));
  from_client(8, ReadAckMsg{8});
  EXPECT_TRUE(s->pending_read().empty());
  from_client(9, ReadAckMsg{9});  // unknown client
  EXPECT_TRUE(s->pending_read().empty());
}

TEST_F(CumFixture, EchoReqAnsweredWithNonceAndPendingReads) {
  from_client(0, WriteMsg{77, 3});
  from_client(2, ReadMsg{2});
  rig.sent.clear();
  from_server(5, EchoReqMsg{5, Nonce{1234}});
  auto echoes = rig.of_kind<EchoMsg>();
  ASSERT_EQ(echoes.size(), 1u);
  const auto& m = std::get<EchoMsg>(echoes[0].payload);
  EXPECT_EQ(m.nonce, Nonce{1234});
  EXPECT_EQ(m.pending_reads, (std::vector<int>{2}));
  EXPECT_EQ(m.entries, (std::vector<ValueEntry>{kInitialEntry, {77, 3}}));
}

TEST_F(CumFixture, ByzantineAnswersRequestsWithForgedPairs) {
  mob::ByzStrategy st;
  st.kind = mob::StrategyKind::kEchoFixedValue;
  s->capture(st);
  rig.sent.clear();
  from_server(5, EchoReqMsg{5, Nonce{77}});
  auto echoes = rig.of_kind<EchoMsg>();
  ASSERT_EQ(echoes.size(), 1u);
  EXPECT_EQ(std::get<EchoMsg>(echoes[0].payload).nonce, Nonce{77});
  EXPECT_EQ(std::get<EchoMsg>(echoes[0].payload).entries, (std::vector<ValueEntry>{{-7, 99}}));
}

TEST_F(CumFixture, AgentStartsWithoutNonces) {
  from_server(5, EchoReqMsg{5, Nonce{77}});
  rig.sent.clear();
  mob::ByzStrategy st;
  st.kind = mob::StrategyKind::kEchoFixedValue;
  s->capture(st);
  EXPECT_TRUE(rig.of_kind<EchoMsg>().empty());
}

TEST_F(CumFixture, ByzantineHostSkipsMaintenance) {
  mob::ByzStrategy st;
  s->capture(st);
  rig.sent.clear();
  rig.engine.run_until(6 * kDelta);
  EXPECT_TRUE(rig.of_kind<EchoReqMsg>().empty());
}

TEST_F(CumFixture, CuredWithinFourDeltaWhenEchoesAreHonest) {
  rig.engine.run_until(5);
  mob::ByzStrategy st;
  st.kind = mob::StrategyKind::kEchoFixedValue;
  s->capture(st);
  rig.engine.run_until(10);
  s->release();
  EXPECT_TRUE(s->v().contains({-7, 99}));
  // Feed honest echoes at every cycle start until the server reports itself correct.
  for (Tick t = 10; t <= 10 + 4 * kDelta && corrected.empty(); ++t) {
    rig.engine.run_until(t);
    if (auto r = s->nonce()) {
      for (int j = 1; j <= th.echo_q; ++j) echo(j, {{55, 4}}, r);
    }
  }
  ASSERT_EQ(corrected.size(), 1u);
  EXPECT_LE(corrected[0].second - 10, 4 * kDelta);
  EXPECT_FALSE(s->v().contains({-7, 99}));
}

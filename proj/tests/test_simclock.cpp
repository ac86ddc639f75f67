#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "mbf/simclock.hpp"

using namespace mbf;
using namespace mbf::sim;

TEST(Engine, FiresAtRequestedTick) {
  Engine e;
  e.run_until(3);
  Tick fired = -1;
  e.schedule(5, [&] { fired = e.now(); });
  e.run_until(10);
  EXPECT_EQ(fired, 5);
  EXPECT_EQ(e.now(), 10);
}

TEST(Engine, SameTickScheduleRunsAfterQueuedEvents) {
  Engine e;
  std::vector<std::string> order;
  e.schedule(3, [&] {
    order.push_back("first");
    e.schedule(3, [&] { order.push_back("late"); });
  });
  e.schedule(3, [&] { order.push_back("second"); });
  e.run_until(3);
  EXPECT_EQ(order, (std::vector<std::string>{"first", "second", "late"}));
}

TEST(Engine, InsertionOrderBreaksTies) {
  Engine e;
  std::string order;
  e.schedule(7, [&] { order += "a"; });
  e.schedule(7, [&] { order += "b"; });
  e.run_until(7);
  EXPECT_EQ(order, "ab");
}

TEST(Engine, PhaseOrderBeatsInsertionOrder) {
  Engine e;
  std::string order;
  e.schedule(4, [&] { order += "p"; }, Phase::kProbe);
  e.schedule(4, [&] { order += "t"; }, Phase::kTimer);
  e.schedule(4, [&] { order += "d"; }, Phase::kDeliver);
  e.schedule(4, [&] { order += "a"; }, Phase::kAgent);
  e.run_until(4);
  EXPECT_EQ(order, "adtp");
}

TEST(Engine, RejectsThePast) {
  Engine e;
  e.run_until(5);
  EXPECT_THROW(e.schedule(4, [] {}), std::logic_error);
  EXPECT_THROW(e.run_until(4), std::logic_error);
}

TEST(Network, FixedMaxBroadcastDeliversAfterDelta) {
  Engine e;
  Network net(e, 5, DelayPolicy(DelayKind::kFixedMax, 10));
  std::vector<Envelope> got;
  net.set_receiver([&](const Envelope& env) { got.push_back(env); });
  e.run_until(100);
  net.broadcast(ProcessId::client(0), WriteMsg{1, 1});
  e.run_until(109);
  EXPECT_TRUE(got.empty());
  e.run_until(110);
  ASSERT_EQ(got.size(), 5u);
  for (const auto& env : got) {
    EXPECT_EQ(env.sent_at, 100);
    EXPECT_EQ(env.deliver_at, 110);
    EXPECT_TRUE(env.recipient.is_server());
  }
}

TEST(Network, UnicastFixedMax) {
  Engine e;
  Network net(e, 3, DelayPolicy(DelayKind::kFixedMax, 10));
  Tick at = -1;
  net.set_receiver([&](const Envelope& env) { at = e.now(); (void)env; });
  e.run_until(100);
  net.unicast(ProcessId::server(1), ProcessId::client(2), ReplyMsg{1, {{5, 1}}});
  e.run_until(200);
  EXPECT_EQ(at, 110);
}

TEST(Network, AdversarialIsFastAroundByzantineServers) {
  Engine e;
  DelayPolicy p(DelayKind::kAdversarial, 10);
  p.set_faulty_predicate([](int s, Tick) { return s == 2; });
  Network net(e, 4, std::move(p));
  std::vector<Envelope> sent;
  net.set_send_observer([&](const Envelope& env) { sent.push_back(env); });
  e.run_until(100);
  net.broadcast(ProcessId::server(0), EchoReqMsg{0, std::nullopt});
  net.unicast(ProcessId::server(2), ProcessId::client(1), ReplyMsg{2, {}});
  ASSERT_EQ(sent.size(), 5u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(sent[i].deliver_at, i == 2 ? 101 : 110);
  EXPECT_EQ(sent[4].deliver_at, 101);
}

TEST(Network, RejectsForgedOrigin) {
  Engine e;
  Network net(e, 3, DelayPolicy(DelayKind::kFixedMax, 2));
  EXPECT_THROW(net.unicast(ProcessId::server(1), ProcessId::client(0), ReplyMsg{2, {}}),
               std::logic_error);
  EXPECT_THROW(net.unicast(ProcessId::client(1), ProcessId::server(0), EchoReqMsg{0, {}}),
               std::logic_error);
}

TEST(Network, SeededUniformIsReproducible) {
  auto draw = [](std::uint64_t seed) {
    DelayPolicy p(DelayKind::kSeededUniform, 10, seed);
    std::vector<Dur> out;
    for (int i = 0; i < 100; ++i) out.push_back(p.delay(ProcessId::client(0), ProcessId::server(1), i));
    return out;
  };
  EXPECT_EQ(draw(42), draw(42));
  EXPECT_NE(draw(42), draw(43));
}

TEST(Network, DelayBoundHoldsAndEverythingArrives) {
  for (auto kind : {DelayKind::kFixedMax, DelayKind::kSeededUniform, DelayKind::kAdversarial}) {
    Engine e;
    DelayPolicy p(kind, 7, 99);
    p.set_faulty_predicate([](int s, Tick t) { return (s + t) % 3 == 0; });
    Network net(e, 4, std::move(p));
    std::size_t bad = 0;
    net.set_send_observer([&](const Envelope& env) {
      Dur d = env.deliver_at - env.sent_at;
      if (d < 1 || d > 7) ++bad;
    });
    Rng rng(5);
    for (int i = 0; i < 10000; ++i) {
      e.run_until(e.now() + rng.uniform(0, 1));
      net.unicast(ProcessId::server(static_cast<int>(rng.uniform(0, 3))), ProcessId::client(1),
                  ReadAckMsg{1});
    }
    e.run_until(e.now() + 100);
    EXPECT_EQ(bad, 0u) << to_string(kind);
    EXPECT_EQ(net.sent(), 10000u);
    EXPECT_EQ(net.delivered(), net.sent());
  }
}

TEST(Rng, UniformStaysInRange) {
  Rng r(1);
  for (int i = 0; i < 10000; ++i) {
    auto x = r.uniform(-3, 4);
    ASSERT_GE(x, -3);
    ASSERT_LE(x, 4);
  }
  EXPECT_THROW(r.uniform(2, 1), std::invalid_argument);
}

TEST(DelayKind, ParsesNames) {
  EXPECT_EQ(parse_delay_kind("fixed-max"), DelayKind::kFixedMax);
  EXPECT_EQ(parse_delay_kind("uniform"), DelayKind::kSeededUniform);
  EXPECT_EQ(parse_delay_kind("adversarial"), DelayKind::kAdversarial);
  EXPECT_THROW(parse_delay_kind("fast"), ConfigError);
}

#include <gtest/gtest.h>

#include "mbf/bounds.hpp"
#include "mbf/oracle.hpp"

using namespace mbf;
using namespace mbf::oracle;

namespace {

bounds::BoundsInput cell(Model m, Dur Delta, Dur gamma, Dur delta = 10, Dur tr = 20) {
  bounds::BoundsInput in;
  in.model = m;
  in.delta = delta;
  in.Delta = Delta;
  in.gamma = gamma;
  in.tr = tr;
  in.f = 1;
  return in;
}

}  // namespace

TEST(EnumerateMaxB, Examples) {
  EXPECT_EQ(enumerate_maxB({5, 10, 20}).max_b, 3);
  EXPECT_EQ(enumerate_maxB({5, 20, 20}).max_b, 2);
  EXPECT_EQ(enumerate_maxB({5, 50, 10, 40}).max_b, 1);
}

TEST(EnumerateMaxB, MatchesFormulaOnSmallGrid) {
  for (Dur Delta = 1; Delta <= 6; ++Delta) {
    for (Dur tr = 1; tr <= 12; ++tr) {
      // Four servers cap the count of distinct hosts.
      EXPECT_EQ(enumerate_maxB({4, Delta, tr}).max_b, std::min<std::int64_t>(4, bounds::max_b(tr, Delta, 1)))
          << "Delta " << Delta << " tr " << tr;
    }
  }
}

TEST(EnumerateMaxB, MoreServersThanHosts) {
  for (auto [Delta, tr] : {std::pair<Dur, Dur>{2, 9}, {3, 12}, {4, 12}}) {
    EXPECT_EQ(enumerate_maxB({8, Delta, tr}).max_b, bounds::max_b(tr, Delta, 1))
        << "Delta " << Delta << " tr " << tr;
  }
}

TEST(EnumerateMaxB, GuardTrips) {
  EnumGrid g{8, 1, 6};
  g.max_schedules = 100;
  EXPECT_THROW(enumerate_maxB(g), std::runtime_error);
  EXPECT_THROW(enumerate_maxB({9, 2, 4}), ConfigError);
}

TEST(EnumerateReplySets, MatchesFormulaAboveTheBound) {
  for (auto in : {cell(Model::kCam, 20, 20), cell(Model::kCam, 10, 20), cell(Model::kCum, 20, 40),
                  cell(Model::kCum, 10, 40)}) {
    auto n = static_cast<int>(bounds::n_lb(in)) + 1;
    EXPECT_EQ(enumerate_reply_sets(in, n), bounds::reply_counts(in, n));
  }
}

TEST(EnumerateReplySets, NoAgentMeansAllCorrect) {
  auto in = cell(Model::kCam, 20, 20);
  in.f = 0;
  EXPECT_EQ(enumerate_reply_sets(in, 6), (bounds::ReplyCounts{0, 6}));
}

TEST(Attack, FeasibleAtTheBoundAndIndistinguishable) {
  struct Cell {
    bounds::BoundsInput in;
    int n_lb;
  };
  for (const auto& c : {Cell{cell(Model::kCam, 20, 20), 4}, Cell{cell(Model::kCam, 10, 20), 6},
                        Cell{cell(Model::kCum, 20, 40), 7}, Cell{cell(Model::kCum, 10, 40), 12}}) {
    ASSERT_EQ(bounds::n_lb(c.in), c.n_lb);
    auto plan = build_attack(c.n_lb, c.in);
    ASSERT_TRUE(plan.has_value()) << c.n_lb;
    auto out = simulate_attack(*plan);
    EXPECT_TRUE(out.indistinguishable) << c.n_lb;
    EXPECT_TRUE(out.values_differ);
    EXPECT_EQ(out.e0.value_counts.at(plan->v0), out.e1.value_counts.at(plan->v1));
    EXPECT_EQ(out.e0.value_counts.at(plan->v1), out.e1.value_counts.at(plan->v0));
    EXPECT_FALSE(build_attack(c.n_lb + 1, c.in).has_value()) << c.n_lb + 1;
  }
}

TEST(Attack, SingleAgentOnly) {
  auto in = cell(Model::kCam, 20, 20);
  in.f = 2;
  EXPECT_THROW(build_attack(8, in), ConfigError);
}

TEST(OccurrenceProfile, Examples) {
  EXPECT_EQ(occurrence_profile(5, 11), (std::vector<std::int64_t>{3, 2, 2, 2, 2}));
  EXPECT_EQ(occurrence_profile(4, 4), (std::vector<std::int64_t>{1, 1, 1, 1}));
  EXPECT_EQ(occurrence_profile(4, 9), (std::vector<std::int64_t>{3, 2, 2, 2}));
  EXPECT_EQ(occurrence_profile(3, 0), (std::vector<std::int64_t>{0, 0, 0}));
}

TEST(OccurrenceProfile, CompositionIdentityHolds) {
  auto rep = sweep_composition_identity(8, 60);
  EXPECT_EQ(rep.checked, 8u * 61u);
  EXPECT_EQ(rep.failures, 0u);
}

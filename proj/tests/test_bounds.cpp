#include <gtest/gtest.h>

#include "mbf/bounds.hpp"

using namespace mbf;
using namespace mbf::bounds;

namespace {

BoundsInput cell(Model m, Dur delta, Dur Delta, Dur gamma, Dur tr, int f = 1) {
  BoundsInput in;
  in.model = m;
  in.delta = delta;
  in.Delta = Delta;
  in.gamma = gamma;
  in.tr = tr;
  in.f = f;
  return in;
}

// ceil((y*S + s) / (D*S)) with a rational epsilon s/S.
std::int64_t rational_ceil(std::int64_t y, std::int64_t D, int sign) {
  constexpr std::int64_t S = 1'000'000;
  return ceil_div(y * S + sign, D * S);
}

}  // namespace

TEST(Ramp, Examples) {
  EXPECT_EQ(ramp(3), 3);
  EXPECT_EQ(ramp(0), 0);
  EXPECT_EQ(ramp(-5), 0);
}

TEST(CeilDiv, AnySign) {
  EXPECT_EQ(ceil_div(7, 2), 4);
  EXPECT_EQ(ceil_div(-7, 2), -3);
  EXPECT_EQ(ceil_div(-8, 2), -4);
  EXPECT_EQ(floor_div(-7, 2), -4);
  EXPECT_EQ(floor_div(7, 2), 3);
}

TEST(CeilLimits, Examples) {
  EXPECT_EQ(ceil_plus(0, 10), 1);
  EXPECT_EQ(ceil_plus(10, 10), 2);
  EXPECT_EQ(ceil_plus(-10, 10), 0);
  EXPECT_EQ(ceil_minus(20, 10), 2);
  EXPECT_EQ(ceil_minus(11, 10), 2);
  EXPECT_EQ(ceil_minus(1, 10), 1);
}

TEST(CeilLimits, MatchRationalEpsilon) {
  for (std::int64_t y = -100; y <= 100; ++y) {
    for (std::int64_t D = 1; D <= 50; ++D) {
      ASSERT_EQ(ceil_plus(y, D), rational_ceil(y, D, +1)) << y << "/" << D;
      ASSERT_EQ(ceil_minus(y, D), rational_ceil(y, D, -1)) << y << "/" << D;
    }
  }
}

TEST(MaxB, Formula) {
  EXPECT_EQ(max_b(20, 20, 1), 2);
  EXPECT_EQ(max_b(20, 10, 2), 6);
  EXPECT_EQ(max_b1(21, 10), 4);
}

TEST(MaxCu, Examples) {
  EXPECT_EQ(max_cu(cell(Model::kCam, 10, 20, 20, 20)), 1);
  EXPECT_EQ(max_cu(cell(Model::kCum, 10, 20, 40, 20)), 2);
  EXPECT_EQ(max_cu(cell(Model::kCam, 10, 20, 0, 20)), 0);
  EXPECT_EQ(max_cu(cell(Model::kCum, 10, 20, 0, 20)), 0);
}

TEST(MaxSil, Examples) {
  EXPECT_EQ(max_sil(cell(Model::kCam, 10, 10, 20, 20)), 1);
  EXPECT_EQ(max_sil(cell(Model::kCam, 10, 20, 20, 20)), 0);
  EXPECT_EQ(max_sil(cell(Model::kCum, 10, 10, 40, 20)), 3);
}

TEST(MinCbc, Examples) {
  EXPECT_EQ(min_cbc(cell(Model::kCam, 10, 20, 20, 20)), 0);
  EXPECT_EQ(min_cbc(cell(Model::kCam, 10, 10, 20, 20)), 1);
  EXPECT_EQ(min_cbc(cell(Model::kCum, 10, 10, 40, 20)), 2);
}

TEST(MinCbc, CumFallsBackWithoutCuredServers) {
  auto cum = cell(Model::kCum, 10, 20, 0, 20);
  auto cam = cell(Model::kCam, 10, 20, 0, 20);
  ASSERT_EQ(max_cu(cum), 0);
  EXPECT_EQ(min_cbc(cum), min_cbc(cam));
}

TEST(NLb, TableCells) {
  for (int f = 1; f <= 3; ++f) {
    EXPECT_EQ(n_lb(cell(Model::kCam, 10, 20, 20, 20, f)), 4 * f);
    EXPECT_EQ(n_lb(cell(Model::kCam, 10, 10, 20, 20, f)), 6 * f);
    EXPECT_EQ(n_lb(cell(Model::kCum, 10, 10, 40, 20, f)), 12 * f);
    EXPECT_EQ(n_lb(cell(Model::kCum, 10, 20, 40, 20, f)), 7 * f);
  }
}

TEST(NLb, EvaluateAgrees) {
  auto in = cell(Model::kCum, 10, 10, 40, 20);
  auto out = evaluate(in);
  EXPECT_EQ(out.max_b, 3);
  EXPECT_EQ(out.max_cu, 4);
  EXPECT_EQ(out.max_sil, 3);
  EXPECT_EQ(out.min_cbc, 2);
  EXPECT_EQ(out.n_lb, 12);
}

TEST(ReplyCounts, CamAtFourFPlusOne) {
  for (int f = 1; f <= 3; ++f) {
    auto rc = reply_counts(cell(Model::kCam, 10, 20, 20, 20, f), 4 * f + 1);
    EXPECT_EQ(rc.max_incorrect, 2 * f);
    EXPECT_EQ(rc.min_correct, 2 * f + 1);
  }
}

TEST(ReplyCounts, EqualityAtBoundStrictAbove) {
  for (Model m : {Model::kCam, Model::kCum}) {
    for (Dur delta : {2, 3, 10}) {
      for (Dur Delta = delta; Delta < 3 * delta; ++Delta) {
        for (Dur gamma : {2 * delta, 4 * delta}) {
          for (Dur tr = 2 * delta; tr <= 6 * delta; ++tr) {
            for (int f = 1; f <= 2; ++f) {
              auto in = cell(m, delta, Delta, gamma, tr, f);
              auto lb = n_lb(in);
              auto at = reply_counts(in, lb);
              auto above = reply_counts(in, lb + 1);
              ASSERT_EQ(at.min_correct, at.max_incorrect);
              ASSERT_GT(above.min_correct, above.max_incorrect);
            }
          }
        }
      }
    }
  }
}

// At the read length the protocols use, fewer agent moves or faster cures
// never raise the bound, and more agents never lower it.
TEST(NLb, MonotoneAtMinimalReadLength) {
  for (Model m : {Model::kCam, Model::kCum}) {
    for (Dur delta : {2, 3, 5, 10}) {
      Dur tr = 2 * delta;
      for (Dur gamma = 0; gamma <= 5 * delta; ++gamma) {
        for (Dur Delta = delta; Delta + 1 < 3 * delta; ++Delta) {
          EXPECT_GE(n_lb(cell(m, delta, Delta, gamma, tr)), n_lb(cell(m, delta, Delta + 1, gamma, tr)));
          EXPECT_LE(n_lb(cell(m, delta, Delta, gamma, tr)), n_lb(cell(m, delta, Delta, gamma + 1, tr)));
          EXPECT_LE(n_lb(cell(m, delta, Delta, gamma, tr, 1)), n_lb(cell(m, delta, Delta, gamma, tr, 2)));
        }
      }
    }
  }
}

TEST(Check, RejectsBadInput) {
  EXPECT_THROW(check(cell(Model::kCam, 10, 20, 20, 19)), ConfigError);
  EXPECT_THROW(check(cell(Model::kCam, 0, 20, 20, 20)), ConfigError);
  EXPECT_THROW(check(cell(Model::kCam, 10, 20, -1, 20)), ConfigError);
  EXPECT_THROW(check(cell(Model::kCam, 10, 20, 20, 20, -1)), ConfigError);
  EXPECT_NO_THROW(check(cell(Model::kCum, 10, 20, 0, 20, 0)));
}

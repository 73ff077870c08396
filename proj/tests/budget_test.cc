// Copyright 2026 The vlmfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "test_util.h"
#include "vlmfuzz/budget.h"
#include "vlmfuzz/error.h"
#include "vlmfuzz/rng.h"

namespace vlmfuzz {
namespace {

using testing::Fixture;

std::vector<ComplexityAssessment> Weights(const std::vector<int>& w,
                                          const std::vector<bool>& failed = {}) {
  std::vector<ComplexityAssessment> out;
  for (size_t i = 0; i < w.size(); ++i) {
    out.push_back({"c" + std::to_string(i), w[i], 0,
                   i < failed.size() && failed[i]});
  }
  return out;
}

ErrorCode CodeOf(const std::vector<ComplexityAssessment>& a, int64_t total) {
  try {
    AllocateBudget(a, total);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIoError;
}

TEST(AllocateBudget, Proportional) {
  const BudgetPlan p = AllocateBudget(Weights({5, 10, 15}), 3600);
  EXPECT_EQ(p.For("c0"), 600);
  EXPECT_EQ(p.For("c1"), 1200);
  EXPECT_EQ(p.For("c2"), 1800);
  EXPECT_EQ(p.Sum(), 3600);
  EXPECT_EQ(p.total, 3600);
}

TEST(AllocateBudget, ZeroWeightGetsFloor) {
  const BudgetPlan p = AllocateBudget(Weights({0, 100}), 3600);
  EXPECT_EQ(p.For("c0"), 180);
  EXPECT_EQ(p.For("c1"), 3420);
}

TEST(AllocateBudget, SingleComponentTakesAll) {
  EXPECT_EQ(AllocateBudget(Weights({3}), 3600).For("c0"), 3600);
  EXPECT_EQ(AllocateBudget(Weights({0}), 3600).For("c0"), 3600);
}

TEST(AllocateBudget, SmallWeightPinnedToFloor) {
  const BudgetPlan p = AllocateBudget(Weights({1, 1000}), 3600);
  EXPECT_EQ(p.For("c0"), 180);
  EXPECT_EQ(p.For("c1"), 3420);
}

TEST(AllocateBudget, FailedComponentsGetNothing) {
  const BudgetPlan p = AllocateBudget(Weights({50, 10, 0}, {true}), 600);
  EXPECT_EQ(p.For("c0"), 0);
  EXPECT_EQ(p.For("c2"), 30);
  EXPECT_EQ(p.For("c1"), 570);
}

TEST(AllocateBudget, RemainderToHeaviest) {
  const BudgetPlan p = AllocateBudget(Weights({1, 1, 2}), 1001);
  EXPECT_EQ(p.Sum(), 1001);
  EXPECT_EQ(p.For("c2"), 501);
}

TEST(AllocateBudget, Errors) {
  EXPECT_EQ(CodeOf(Weights({1}), 0), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf(Weights({1}), -5), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf({}, 100), ErrorCode::kNoLaunchableComponents);
  EXPECT_EQ(CodeOf(Weights({4, 4}, {true, true}), 100),
            ErrorCode::kNoLaunchableComponents);
}

struct Trial {
  std::vector<int> weights;
  std::vector<bool> failed;
  int64_t total;
};

Trial RandomTrial(Rng& rng) {
  Trial t;
  const size_t n = 1 + rng.Below(15);
  for (size_t i = 0; i < n; ++i) {
    t.weights.push_back(rng.Below(5) == 0 ? 0 : static_cast<int>(rng.Below(300)));
    t.failed.push_back(rng.Below(8) == 0);
  }
  t.failed[rng.Below(n)] = false;
  t.total = 1 + static_cast<int64_t>(rng.Below(50000));
  return t;
}

TEST(AllocateBudgetProperty, SumNeverExceedsTotal) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Trial t = RandomTrial(rng);
    const BudgetPlan p = AllocateBudget(Weights(t.weights, t.failed), t.total);
    EXPECT_LE(p.Sum(), t.total);
    for (const auto& [name, s] : p.per_component) EXPECT_GE(s, 0);
  }
}

TEST(AllocateBudgetProperty, Monotone) {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const Trial t = RandomTrial(rng);
    const BudgetPlan p = AllocateBudget(Weights(t.weights, t.failed), t.total);
    for (size_t a = 0; a < t.weights.size(); ++a) {
      for (size_t b = 0; b < t.weights.size(); ++b) {
        if (t.failed[a] || t.failed[b]) continue;
        if (t.weights[a] >= t.weights[b]) {
          EXPECT_GE(p.per_component[a].second, p.per_component[b].second);
        }
      }
    }
  }
}

TEST(AllocateBudgetProperty, ScaleKeepsOrdering) {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    Trial t = RandomTrial(rng);
    const int k = 2 + static_cast<int>(rng.Below(9));
    std::vector<int> scaled = t.weights;
    for (int& w : scaled) w *= k;
    const BudgetPlan p = AllocateBudget(Weights(t.weights, t.failed), t.total);
    const BudgetPlan q = AllocateBudget(Weights(scaled, t.failed), t.total);
    for (size_t a = 0; a < scaled.size(); ++a) {
      for (size_t b = 0; b < scaled.size(); ++b) {
        if (p.per_component[a].second > p.per_component[b].second) {
          EXPECT_GE(q.per_component[a].second, q.per_component[b].second);
        }
      }
    }
  }
}

TEST(AllocateBudgetProperty, FloorsAndFailures) {
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const Trial t = RandomTrial(rng);
    const BudgetPlan p = AllocateBudget(Weights(t.weights, t.failed), t.total);
    const int64_t n = std::count(t.failed.begin(), t.failed.end(), false);
    const int64_t floor =
        std::min(std::max<int64_t>(30, t.total / (10 * n)), t.total / n);
    for (size_t a = 0; a < t.weights.size(); ++a) {
      const int64_t s = p.per_component[a].second;
      if (t.failed[a]) {
        EXPECT_EQ(s, 0);
      } else {
        EXPECT_GE(s, floor);
      }
    }
  }
}

TEST(AllocateBudgetProperty, ExactWhenFloorsDoNotBind) {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const size_t n = 1 + rng.Below(5);
    std::vector<int> w(n);
    for (int& x : w) x = 100 + static_cast<int>(rng.Below(50));
    // Make the leader unique so the remainder is never split.
    w[0] = 1000;
    const int64_t total = 3600 + static_cast<int64_t>(rng.Below(3600));
    EXPECT_EQ(AllocateBudget(Weights(w), total).Sum(), total);
  }
}

TEST(AssessComplexity, CountsWidgetsMenuAndFailures) {
  SimDevice dev(Fixture("manifest_like_app.json"));
  const Manifest m = ManifestFromSimSpec(dev.app().spec());
  Rng rng(1);
  std::vector<CrashEvent> crashes;
  const auto a = AssessComplexity(dev, m, rng, 100, &crashes);
  ASSERT_EQ(a.size(), 4u);
  EXPECT_EQ(a[0].component, "com.example.lab.Main");
  EXPECT_EQ(a[0].interactive_count, 5);
  EXPECT_EQ(a[0].menu_item_count, 3);
  EXPECT_FALSE(a[0].launch_failed);
  EXPECT_TRUE(a[1].launch_failed);  // not exported
  EXPECT_TRUE(a[2].launch_failed);  // crashes on launch
  EXPECT_EQ(a[3].weight(), 0);      // service
  EXPECT_FALSE(a[3].launch_failed);
  ASSERT_EQ(crashes.size(), 1u);
  EXPECT_EQ(crashes[0].stack_top_frame, "com.example.lab.Boom.onCreate");
}

TEST(AssessComplexity, ReceiversAreNotLaunched) {
  SimDevice dev(Fixture("timezone_app.json"));
  const Manifest m = ManifestFromSimSpec(dev.app().spec());
  Rng rng(1);
  const auto a = AssessComplexity(dev, m, rng, 100);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0].interactive_count, 1);
  EXPECT_EQ(a[1].weight(), 0);
  EXPECT_FALSE(a[1].launch_failed);
  EXPECT_TRUE(dev.app().received_broadcasts().empty());
}

}  // namespace
}  // namespace vlmfuzz

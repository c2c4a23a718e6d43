// Copyright 2026 The SafeTrend Authors
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


#include "safetrend/ranking.h"

#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace safetrend {
namespace {

using ::testing::ElementsAre;

TEST(RankDescendingTest, ExactScores) {
  const std::vector<double> scores = {0.1, 0.7, 0.3};
  const std::vector<std::string> kw = {"a", "b", "c"};
  EXPECT_THAT(RankDescending(scores, kw, 0.0), ElementsAre(1, 2, 0));
}

TEST(RankDescendingTest, EqualScoresOrderByKeyword) {
  const std::vector<double> scores = {0.5, 0.5, 0.9, 0.5};
  const std::vector<std::string> kw = {"rica", "costa", "z", "alpha"};
  EXPECT_THAT(RankDescending(scores, kw, 0.0), ElementsAre(2, 3, 1, 0));
}

TEST(RankDescendingTest, NearEqualScoresTieWithinTolerance) {
  const std::vector<double> scores = {0.25 + 1e-14, 0.25, 0.125};
  const std::vector<std::string> kw = {"b", "a", "c"};
  EXPECT_THAT(RankDescending(scores, kw, kDefaultTieTolerance), ElementsAre(1, 0, 2));
  EXPECT_THAT(RankDescending(scores, kw, 0.0), ElementsAre(0, 1, 2));
}

TEST(RankDescendingTest, SeparatedScoresAreNotTied) {
  const std::vector<double> scores = {0.25, 0.25 * (1 + 1e-6)};
  const std::vector<std::string> kw = {"a", "b"};
  EXPECT_THAT(RankDescending(scores, kw, kDefaultTieTolerance), ElementsAre(1, 0));
}

TEST(RankDescendingTest, ZerosTieExactly) {
  const std::vector<double> scores = {0.0, 0.0, 0.0};
  const std::vector<std::string> kw = {"c", "a", "b"};
  EXPECT_THAT(RankDescending(scores, kw, kDefaultTieTolerance), ElementsAre(1, 2, 0));
}

TEST(RankDescendingTest, IntegerCounts) {
  const std::vector<int64_t> counts = {57, 77, 57, 30};
  const std::vector<std::string> kw = {"rica", "manhattan", "costa", "xylem"};
  EXPECT_THAT(RankDescending(counts, kw), ElementsAre(1, 2, 0, 3));
}

TEST(RankDescendingTest, Empty) {
  EXPECT_TRUE(RankDescending(std::vector<double>{}, std::vector<std::string>{}, 0.0).empty());
}

}  // namespace
}  // namespace safetrend

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

#include <algorithm>
#include <cmath>
#include <numeric>

namespace safetrend {

std::vector<size_t> RankDescending(std::span<const double> scores,
                                   std::span<const std::string> keywords,
                                   double relative_tolerance) {
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return keywords[a] < keywords[b];
  });
  if (relative_tolerance <= 0.0) return order;

  auto by_keyword = [&](size_t a, size_t b) { return keywords[a] < keywords[b]; };
  size_t group_begin = 0;
  for (size_t i = 1; i <= order.size(); ++i) {
    bool extends = false;
    if (i < order.size()) {
      const double prev = scores[order[i - 1]];
      const double cur = scores[order[i]];
      const double scale = std::max(std::fabs(prev), std::fabs(cur));
      extends = prev - cur <= relative_tolerance * scale;
    }
    if (!extends) {
      if (i - group_begin > 1) {
        std::sort(order.begin() + group_begin, order.begin() + i, by_keyword);
      }
      group_begin = i;
    }
  }
  return order;
}

std::vector<size_t> RankDescending(std::span<const int64_t> counts,
                                   std::span<const std::string> keywords) {
  std::vector<size_t> order(counts.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (counts[a] != counts[b]) return counts[a] > counts[b];
    return keywords[a] < keywords[b];
  });
  return order;
}

}  // namespace safetrend

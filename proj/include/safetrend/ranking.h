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

#ifndef SAFETREND_RANKING_H_
#define SAFETREND_RANKING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace safetrend {

// Relative gap under which two real-valued scores are treated as tied.
// Federated scores carry reconstruction noise far below this, so a
// mathematical tie stays a tie after secure aggregation.
inline constexpr double kDefaultTieTolerance = 1e-9;

// Orders indices by descending score. Scores are first sorted exactly; then
// consecutive scores whose gap is at most
// `relative_tolerance * max(|a|, |b|)` are chained into one tie group, and
// each group is ordered by ascending keyword. With a tolerance of 0 only
// exactly equal scores tie.
//
// Requires scores.size() == keywords.size().
std::vector<size_t> RankDescending(std::span<const double> scores,
                                   std::span<const std::string> keywords,
                                   double relative_tolerance);

// Integer variant: exact ties only.
std::vector<size_t> RankDescending(std::span<const int64_t> counts,
                                   std::span<const std::string> keywords);

}  // namespace safetrend

#endif  // SAFETREND_RANKING_H_

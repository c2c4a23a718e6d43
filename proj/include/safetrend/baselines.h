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

// Non-private comparison rankings and the centralized oracle for the
// federated trend score.

#ifndef SAFETREND_BASELINES_H_
#define SAFETREND_BASELINES_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "safetrend/corpus.h"
#include "safetrend/trend_bayes.h"
#include "safetrend/vocabulary.h"

namespace safetrend::baselines {

enum class RankStyle {
  kOrdinal,  // 1, 2, 3, ... even across ties
  kDense,    // tied counts share a rank; the next count gets rank + 1
};

struct CountRanking {
  std::vector<std::string> keywords;
  std::vector<int64_t> counts;
  // Indices by descending count, ties by ascending keyword.
  std::vector<size_t> order;
  // ranks[j] is the 1-based rank of keywords[j].
  std::vector<size_t> ranks;

  std::optional<size_t> RankOf(absl::string_view keyword) const;
};

CountRanking RankCounts(std::vector<std::string> keywords,
                        std::vector<int64_t> counts, RankStyle style);

// Token occurrences of each vocabulary keyword over the pooled documents;
// duplicated documents count once per copy. Ordinal ranks over the whole
// vocabulary.
CountRanking RankByTotalCount(std::span<const Document> pooled,
                              const VocabularyIndex& vocab);

// Votes per reported keyword, dense ranks. Only reported keywords appear.
CountRanking RankByPooledTrend(std::span<const std::string> local_tops);

// A user's locally trending keyword: argmax of its likelihood vector, ties by
// ascending keyword. Empty when the vector is all zero.
std::optional<std::string> LocalTopKeyword(const bayes::LikelihoodVector& likelihood,
                                           const VocabularyIndex& vocab);

// Sum over users of each user's normalized primary keyword counts.
std::vector<double> PooledLikelihood(std::span<const std::vector<Document>> users,
                                     const VocabularyIndex& vocab, size_t k,
                                     double alpha0 = 0.0);

// Trend score with the users' data pooled in the clear: per-user primary
// keyword counts, per-user normalization, plain sum over users, times the
// prior. No shares, no network.
absl::StatusOr<bayes::PosteriorRanking> CentralizedOracle(
    std::span<const std::vector<Document>> users, const VocabularyIndex& vocab,
    size_t k, const bayes::PriorDistribution& prior, double alpha0 = 0.0,
    double tie_tolerance = kDefaultTieTolerance);

}  // namespace safetrend::baselines

#endif  // SAFETREND_BASELINES_H_

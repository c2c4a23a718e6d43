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

#include "safetrend/baselines.h"

#include <map>
#include <utility>

#include "safetrend/ranking.h"

namespace safetrend::baselines {

std::optional<size_t> CountRanking::RankOf(absl::string_view keyword) const {
  for (size_t j = 0; j < keywords.size(); ++j) {
    if (keywords[j] == keyword) return ranks[j];
  }
  return std::nullopt;
}

CountRanking RankCounts(std::vector<std::string> keywords,
                        std::vector<int64_t> counts, RankStyle style) {
  CountRanking ranking;
  ranking.order = RankDescending(counts, keywords);
  ranking.ranks.assign(keywords.size(), 0);
  size_t rank = 0;
  for (size_t r = 0; r < ranking.order.size(); ++r) {
    const size_t j = ranking.order[r];
    if (style == RankStyle::kOrdinal) {
      rank = r + 1;
    } else if (r == 0 || counts[ranking.order[r - 1]] != counts[j]) {
      ++rank;
    }
    ranking.ranks[j] = rank;
  }
  ranking.keywords = std::move(keywords);
  ranking.counts = std::move(counts);
  return ranking;
}

CountRanking RankByTotalCount(std::span<const Document> pooled,
                              const VocabularyIndex& vocab) {
  std::vector<int64_t> counts(vocab.size(), 0);
  for (const Document& doc : pooled) {
    for (const std::string& token : doc.tokens) {
      if (auto j = vocab.Find(token)) ++counts[*j];
    }
  }
  return RankCounts(vocab.keywords(), std::move(counts), RankStyle::kOrdinal);
}

CountRanking RankByPooledTrend(std::span<const std::string> local_tops) {
  std::map<std::string, int64_t> votes;
  for (const std::string& keyword : local_tops) ++votes[keyword];
  std::vector<std::string> keywords;
  std::vector<int64_t> counts;
  for (auto& [keyword, count] : votes) {
    keywords.push_back(keyword);
    counts.push_back(count);
  }
  return RankCounts(std::move(keywords), std::move(counts), RankStyle::kDense);
}

std::optional<std::string> LocalTopKeyword(const bayes::LikelihoodVector& likelihood,
                                           const VocabularyIndex& vocab) {
  const std::vector<double>& values = likelihood.values.values;
  std::optional<size_t> best;
  for (size_t j = 0; j < values.size(); ++j) {
    if (!(values[j] > 0.0)) continue;
    if (!best.has_value() || values[j] > values[*best] ||
        (values[j] == values[*best] && vocab.keyword(j) < vocab.keyword(*best))) {
      best = j;
    }
  }
  if (!best.has_value()) return std::nullopt;
  return vocab.keyword(*best);
}

std::vector<double> PooledLikelihood(std::span<const std::vector<Document>> users,
                                     const VocabularyIndex& vocab, size_t k,
                                     double alpha0) {
  std::vector<double> pooled(vocab.size(), 0.0);
  for (const std::vector<Document>& docs : users) {
    const std::vector<int64_t> counts = bayes::PrimaryKeywordCounts(docs, vocab, k);
    const safe::FeatureVector likelihood = bayes::LikelihoodFromCounts(counts, alpha0);
    for (size_t j = 0; j < pooled.size(); ++j) pooled[j] += likelihood.values[j];
  }
  return pooled;
}

absl::StatusOr<bayes::PosteriorRanking> CentralizedOracle(
    std::span<const std::vector<Document>> users, const VocabularyIndex& vocab,
    size_t k, const bayes::PriorDistribution& prior, double alpha0,
    double tie_tolerance) {
  return bayes::PosteriorScores(PooledLikelihood(users, vocab, k, alpha0), prior,
                                vocab, tie_tolerance);
}

}  // namespace safetrend::baselines

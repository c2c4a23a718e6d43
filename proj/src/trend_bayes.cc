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

#include "safetrend/trend_bayes.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace safetrend::bayes {

size_t PosteriorRanking::RankOf(size_t j) const {
  for (size_t r = 0; r < order.size(); ++r) {
    if (order[r] == j) return r + 1;
  }
  return 0;
}

absl::StatusOr<PriorDistribution> ComputePrior(const VocabularyIndex& vocab) {
  double total = 0.0;
  for (double w : vocab.idf()) total += w;
  if (!(total > 0.0)) {
    return absl::FailedPreconditionError(
        "degenerate prior: idf values sum to zero");
  }
  PriorDistribution prior;
  prior.probabilities.reserve(vocab.size());
  for (double w : vocab.idf()) prior.probabilities.push_back(w / total);
  return prior;
}

PriorDistribution UniformPrior(size_t dimension) {
  return PriorDistribution{
      std::vector<double>(dimension, 1.0 / static_cast<double>(dimension))};
}

std::vector<int64_t> PrimaryKeywordCounts(std::span<const Document> docs,
                                          const VocabularyIndex& vocab, size_t k) {
  std::vector<int64_t> counts(vocab.size(), 0);
  for (const Document& doc : docs) {
    for (const std::string& keyword : ComputePrimaryKeywordSet(doc, k).keywords) {
      if (auto j = vocab.Find(keyword)) ++counts[*j];
    }
  }
  return counts;
}

safe::FeatureVector LikelihoodFromCounts(std::span<const int64_t> counts,
                                         double alpha0) {
  safe::FeatureVector v;
  v.bounds = safe::kProbabilityBounds;
  v.values.assign(counts.size(), 0.0);
  int64_t observed = 0;
  for (int64_t c : counts) observed += c;
  if (observed == 0) return v;

  const double total =
      static_cast<double>(observed) + alpha0 * static_cast<double>(counts.size());
  for (size_t j = 0; j < counts.size(); ++j) {
    v.values[j] = (static_cast<double>(counts[j]) + alpha0) / total;
  }
  return v;
}

LikelihoodVector ComputeLocalLikelihood(std::string user_id,
                                        std::span<const Document> user_docs,
                                        const VocabularyIndex& vocab, size_t k,
                                        double alpha0) {
  const std::vector<int64_t> counts = PrimaryKeywordCounts(user_docs, vocab, k);
  return LikelihoodVector{std::move(user_id), LikelihoodFromCounts(counts, alpha0)};
}

absl::StatusOr<PosteriorRanking> PosteriorScores(
    std::span<const double> aggregated_likelihood, const PriorDistribution& prior,
    const VocabularyIndex& vocab, double tie_tolerance) {
  if (aggregated_likelihood.size() != prior.dimension() ||
      prior.dimension() != vocab.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "dimension mismatch: likelihood ", aggregated_likelihood.size(),
        ", prior ", prior.dimension(), ", vocabulary ", vocab.size()));
  }
  PosteriorRanking ranking;
  ranking.scores.resize(vocab.size());
  for (size_t j = 0; j < vocab.size(); ++j) {
    ranking.scores[j] = aggregated_likelihood[j] * prior.probabilities[j];
  }
  ranking.order = RankDescending(ranking.scores, vocab.keywords(), tie_tolerance);
  return ranking;
}

absl::StatusOr<PriorDistribution> UpdatePrior(const PosteriorRanking& posterior) {
  double total = 0.0;
  for (size_t j = 0; j < posterior.scores.size(); ++j) {
    const double s = posterior.scores[j];
    if (!std::isfinite(s) || s < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("posterior score ", j, " = ", s, " is not a valid weight"));
    }
    total += s;
  }
  if (!(total > 0.0)) {
    return absl::FailedPreconditionError(
        "no evidence to update on: posterior scores sum to zero");
  }
  PriorDistribution prior;
  prior.probabilities.reserve(posterior.scores.size());
  for (double s : posterior.scores) prior.probabilities.push_back(s / total);
  return prior;
}

}  // namespace safetrend::bayes

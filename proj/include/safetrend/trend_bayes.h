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

// Bayesian trend scoring over a keyword vocabulary.
//
//   posterior(t | D)  ∝  likelihood(D | t) * prior(t)
//
// The prior is the mean of a Dirichlet parametrized by IDF, so words that were
// common in the past start with little mass. Each user's likelihood is the
// mean of a Dirichlet parametrized by how many of the user's documents have
// the keyword in their primary keyword set. The marginal p(D) is never
// computed; only the ranking matters.

#ifndef SAFETREND_TREND_BAYES_H_
#define SAFETREND_TREND_BAYES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "safetrend/corpus.h"
#include "safetrend/ranking.h"
#include "safetrend/safe_protocol.h"
#include "safetrend/vocabulary.h"

namespace safetrend::bayes {

struct PriorDistribution {
  // Nonnegative, sums to 1; indexed like the vocabulary.
  std::vector<double> probabilities;

  size_t dimension() const { return probabilities.size(); }
};

struct LikelihoodVector {
  std::string user_id;
  safe::FeatureVector values;  // bounds [0, 1]
};

struct PosteriorRanking {
  // Unnormalized: aggregated likelihood times prior.
  std::vector<double> scores;
  // Keyword indices by descending score; tied scores by ascending keyword.
  std::vector<size_t> order;

  // 1-based rank of keyword j.
  size_t RankOf(size_t j) const;
};

// p[j] = idf[j] / sum(idf). Fails with "degenerate prior" when the IDF total
// is zero.
absl::StatusOr<PriorDistribution> ComputePrior(const VocabularyIndex& vocab);

PriorDistribution UniformPrior(size_t dimension);

// c[j] = number of documents whose primary keyword set (size k) contains
// vocabulary keyword j. Keywords outside the vocabulary are ignored.
std::vector<int64_t> PrimaryKeywordCounts(std::span<const Document> docs,
                                          const VocabularyIndex& vocab, size_t k);

// Dirichlet mean of (c + alpha0): (c[j] + alpha0) / sum(c + alpha0). All
// zero when the counts are all zero, whatever alpha0 is.
safe::FeatureVector LikelihoodFromCounts(std::span<const int64_t> counts,
                                         double alpha0 = 0.0);

LikelihoodVector ComputeLocalLikelihood(std::string user_id,
                                        std::span<const Document> user_docs,
                                        const VocabularyIndex& vocab, size_t k,
                                        double alpha0 = 0.0);

// scores[j] = aggregated[j] * prior[j], ranked with ties resolved by keyword.
// Fails on dimension mismatch between the three inputs.
absl::StatusOr<PosteriorRanking> PosteriorScores(
    std::span<const double> aggregated_likelihood, const PriorDistribution& prior,
    const VocabularyIndex& vocab, double tie_tolerance = kDefaultTieTolerance);

// Normalizes a posterior into the prior of the next round. Fails with "no
// evidence to update on" if the scores sum to zero, and on negative or
// non-finite scores.
absl::StatusOr<PriorDistribution> UpdatePrior(const PosteriorRanking& posterior);

}  // namespace safetrend::bayes

#endif  // SAFETREND_TREND_BAYES_H_

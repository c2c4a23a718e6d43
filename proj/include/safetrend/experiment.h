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


// End-to-end experiment: sample virtual users from a corpus, run the
// federated trend pipeline next to the two non-private baselines and the
// centralized oracle, and write the result tables.

#ifndef SAFETREND_EXPERIMENT_H_
#define SAFETREND_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "safetrend/baselines.h"
#include "safetrend/corpus.h"
#include "safetrend/netsim.h"
#include "safetrend/random.h"
#include "safetrend/trend_bayes.h"
#include "safetrend/vocabulary.h"

namespace safetrend {

enum class AggregationMode {
  kSum,   // plain sum of the users' likelihoods
  kMean,  // the sum divided by N; same ranking
};

absl::StatusOr<AggregationMode> ParseAggregationMode(absl::string_view name);
absl::string_view AggregationModeName(AggregationMode mode);

struct ExperimentConfig {
  std::filesystem::path corpus;
  CorpusFormat format = CorpusFormat::kLines;
  std::filesystem::path idf;
  // Empty path: no stopword removal.
  std::filesystem::path stopwords;
  int users = 10;
  size_t k = kDefaultPrimaryKeywords;
  double share_range = safe::kDefaultShareRange;
  uint64_t seed = 0;
  int rounds = 1;
  AggregationMode aggregation = AggregationMode::kSum;
  OovPolicy oov = OovPolicy::kDrop;
  std::filesystem::path out;
  double alpha0 = 0.0;
  netsim::Delivery delivery = netsim::Delivery::kRoundRobin;
  // Rows in the Markdown table.
  size_t table_rows = 20;
};

// InvalidArgument unless users >= 1, k >= 1, share_range > 0 and finite,
// rounds >= 1 and alpha0 >= 0.
absl::Status ValidateConfig(const ExperimentConfig& config);

// Stable text form of every field that affects results, and its 64-bit
// FNV-1a hash.
std::string CanonicalConfig(const ExperimentConfig& config);
uint64_t ConfigHash(const ExperimentConfig& config);

// User i draws m_i uniform on [1, |corpus|], then m_i documents uniformly
// with replacement. Users are drawn in id order from one stream.
absl::StatusOr<std::vector<std::vector<Document>>> SampleUserDocuments(
    std::span<const Document> corpus, int num_users, RandomSource& rng);

struct ExperimentInputs {
  std::vector<Document> corpus;  // raw, as loaded
  VocabularyIndex idf_table;
  StopwordSet stopwords;
};

absl::StatusOr<ExperimentInputs> LoadExperimentInputs(const ExperimentConfig& config);

struct RoundOutcome {
  int round = 0;
  bayes::PriorDistribution prior;
  // Range-checked, snapped and, in mean mode, divided by N.
  std::vector<double> aggregate;
  bayes::PosteriorRanking posterior;
  netsim::Transcript transcript;
  // Same round computed in the clear, with its own prior chain.
  bayes::PriorDistribution oracle_prior;
  bayes::PosteriorRanking oracle;
  // Identical order and every score within `kOracleScoreTolerance`.
  bool matches_oracle = false;
};

inline constexpr double kOracleScoreTolerance = 1e-9;

struct ExperimentResult {
  VocabularyIndex vocab;
  // Preprocessed documents per user.
  std::vector<std::vector<Document>> user_docs;
  std::vector<bayes::LikelihoodVector> likelihoods;
  std::vector<RoundOutcome> rounds;

  // IDF order of the whole vocabulary, ties by keyword.
  std::vector<size_t> idf_order;
  baselines::CountRanking total_count;
  std::vector<std::string> local_tops;
  baselines::CountRanking pooled_trend;

  const bayes::PosteriorRanking& final_posterior() const {
    return rounds.back().posterior;
  }
  bool matches_oracle() const;
};

// Stage failures keep their status code and gain a "stage: " prefix. A range
// validation failure is kOutOfRange; protocol violations are kAborted.
absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentInputs& inputs,
                                               const ExperimentConfig& config);

// Loads inputs from the paths in `config` and runs.
absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& config);

// keyword,score,rank in final posterior order.
std::string RankingsCsv(const ExperimentResult& result);
// Keyword, total count, IDF, IDF rank, count rank, pooled trend rank and
// posterior rank for the top `rows` posterior keywords.
std::string RankingsMarkdown(const ExperimentResult& result, size_t rows);
std::string MetadataJson(const ExperimentResult& result, const ExperimentConfig& config);

// rankings.csv, rankings.md, transcript.jsonl and meta.json under
// `config.out`, which is created if missing.
absl::Status WriteExperimentOutputs(const ExperimentResult& result,
                                    const ExperimentConfig& config);

}  // namespace safetrend

#endif  // SAFETREND_EXPERIMENT_H_

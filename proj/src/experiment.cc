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


#include "safetrend/experiment.h"

#include <algorithm>
#include <cmath>
#include <system_error>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "safetrend/io_util.h"
#include "safetrend/ranking.h"
#include "safetrend/safe_protocol.h"
#include "safetrend/status_macros.h"
#include "safetrend/transcript_io.h"
#include "safetrend/version.h"

namespace safetrend {
namespace {

// Stream ids for DeriveSeed. Rounds use kRoundStream + r.
constexpr uint64_t kSamplingStream = 0x73616d706c65ULL;
constexpr uint64_t kRoundStream = 0x726f756e6400ULL;

absl::Status WithContext(const absl::Status& status, absl::string_view stage) {
  return absl::Status(status.code(), absl::StrCat(stage, ": ", status.message()));
}

std::vector<double> Scaled(std::vector<double> values, AggregationMode mode,
                           int num_users) {
  if (mode == AggregationMode::kMean) {
    for (double& v : values) v /= num_users;
  }
  return values;
}

bool SameRanking(const bayes::PosteriorRanking& a, const bayes::PosteriorRanking& b) {
  if (a.order != b.order || a.scores.size() != b.scores.size()) return false;
  for (size_t j = 0; j < a.scores.size(); ++j) {
    if (!(std::abs(a.scores[j] - b.scores[j]) <= kOracleScoreTolerance)) return false;
  }
  return true;
}

std::string RankCell(const baselines::CountRanking& ranking, absl::string_view keyword) {
  std::optional<size_t> rank = ranking.RankOf(keyword);
  return rank.has_value() && *rank > 0 ? absl::StrCat(*rank) : "-";
}

}  // namespace

absl::StatusOr<AggregationMode> ParseAggregationMode(absl::string_view name) {
  if (name == "sum") return AggregationMode::kSum;
  if (name == "mean") return AggregationMode::kMean;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown aggregation mode '", name, "' (want sum or mean)"));
}

absl::string_view AggregationModeName(AggregationMode mode) {
  return mode == AggregationMode::kMean ? "mean" : "sum";
}

absl::Status ValidateConfig(const ExperimentConfig& config) {
  if (config.users < 1) return absl::InvalidArgumentError("users must be at least 1");
  if (config.k < 1) return absl::InvalidArgumentError("k must be at least 1");
  if (!(config.share_range > 0.0) || !std::isfinite(config.share_range)) {
    return absl::InvalidArgumentError("share range must be positive and finite");
  }
  if (config.rounds < 1) return absl::InvalidArgumentError("rounds must be at least 1");
  if (!(config.alpha0 >= 0.0) || !std::isfinite(config.alpha0)) {
    return absl::InvalidArgumentError("alpha0 must be nonnegative and finite");
  }
  return absl::OkStatus();
}

std::string CanonicalConfig(const ExperimentConfig& config) {
  return absl::StrCat(
      "corpus=", config.corpus.string(),
      "\nformat=", config.format == CorpusFormat::kJsonl ? "jsonl" : "lines",
      "\nidf=", config.idf.string(), "\nstopwords=", config.stopwords.string(),
      "\nusers=", config.users, "\nk=", config.k,
      "\nshare_range=", FormatDouble(config.share_range), "\nseed=", config.seed,
      "\nrounds=", config.rounds, "\nagg=", AggregationModeName(config.aggregation),
      "\noov=", config.oov == OovPolicy::kMaxIdf ? "max" : "drop",
      "\nalpha0=", FormatDouble(config.alpha0), "\ndelivery=",
      config.delivery == netsim::Delivery::kSeededShuffle ? "seeded_shuffle"
                                                          : "round_robin",
      "\n");
}

uint64_t ConfigHash(const ExperimentConfig& config) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : CanonicalConfig(config)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

absl::StatusOr<std::vector<std::vector<Document>>> SampleUserDocuments(
    std::span<const Document> corpus, int num_users, RandomSource& rng) {
  if (corpus.empty()) return absl::InvalidArgumentError("cannot sample from an empty corpus");
  if (num_users < 1) return absl::InvalidArgumentError("users must be at least 1");
  std::vector<std::vector<Document>> users(num_users);
  for (std::vector<Document>& docs : users) {
    const uint64_t m = rng.UniformInt(1, corpus.size());
    docs.reserve(m);
    for (uint64_t i = 0; i < m; ++i) {
      docs.push_back(corpus[rng.UniformInt(0, corpus.size() - 1)]);
    }
  }
  return users;
}

absl::StatusOr<ExperimentInputs> LoadExperimentInputs(const ExperimentConfig& config) {
  ExperimentInputs inputs;
  absl::StatusOr<std::vector<Document>> corpus = LoadCorpus(config.corpus, config.format);
  if (!corpus.ok()) return WithContext(corpus.status(), "corpus");
  inputs.corpus = *std::move(corpus);
  absl::StatusOr<VocabularyIndex> table = LoadIdfTable(config.idf);
  if (!table.ok()) return WithContext(table.status(), "idf table");
  inputs.idf_table = *std::move(table);
  if (!config.stopwords.empty()) {
    absl::StatusOr<StopwordSet> stopwords = LoadStopwords(config.stopwords);
    if (!stopwords.ok()) return WithContext(stopwords.status(), "stopwords");
    inputs.stopwords = *std::move(stopwords);
  }
  return inputs;
}

bool ExperimentResult::matches_oracle() const {
  return std::all_of(rounds.begin(), rounds.end(),
                     [](const RoundOutcome& r) { return r.matches_oracle; });
}

absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentInputs& inputs,
                                               const ExperimentConfig& config) {
  if (absl::Status s = ValidateConfig(config); !s.ok()) return WithContext(s, "config");
  const int n = config.users;

  PreprocessConfig preprocess;
  preprocess.stopwords = inputs.stopwords;
  std::vector<Document> corpus;
  corpus.reserve(inputs.corpus.size());
  for (const Document& doc : inputs.corpus) corpus.push_back(Preprocess(doc, preprocess));

  ExperimentResult result;
  absl::StatusOr<VocabularyIndex> vocab =
      BuildVocabulary(inputs.idf_table, corpus, config.oov);
  if (!vocab.ok()) return WithContext(vocab.status(), "vocabulary");
  result.vocab = *std::move(vocab);

  SplitMix64 sampler(DeriveSeed(config.seed, kSamplingStream));
  absl::StatusOr<std::vector<std::vector<Document>>> users =
      SampleUserDocuments(corpus, n, sampler);
  if (!users.ok()) return WithContext(users.status(), "sampling");
  result.user_docs = *std::move(users);

  std::vector<safe::FeatureVector> secrets;
  for (int i = 0; i < n; ++i) {
    result.likelihoods.push_back(bayes::ComputeLocalLikelihood(
        netsim::NodeName(i), result.user_docs[i], result.vocab, config.k,
        config.alpha0));
    secrets.push_back(result.likelihoods.back().values);
  }

  absl::StatusOr<bayes::PriorDistribution> prior = bayes::ComputePrior(result.vocab);
  if (!prior.ok()) return WithContext(prior.status(), "prior");
  bayes::PriorDistribution federated_prior = *prior;
  bayes::PriorDistribution oracle_prior = *prior;
  const std::vector<double> oracle_likelihood = Scaled(
      baselines::PooledLikelihood(result.user_docs, result.vocab, config.k, config.alpha0),
      config.aggregation, n);

  for (int r = 0; r < config.rounds; ++r) {
    const std::string stage = absl::StrCat("round ", r);
    if (r > 0) {
      absl::StatusOr<bayes::PriorDistribution> next =
          bayes::UpdatePrior(result.rounds.back().posterior);
      if (!next.ok()) return WithContext(next.status(), absl::StrCat(stage, ": prior update"));
      federated_prior = *std::move(next);
      next = bayes::UpdatePrior(result.rounds.back().oracle);
      if (!next.ok()) {
        return WithContext(next.status(), absl::StrCat(stage, ": oracle prior update"));
      }
      oracle_prior = *std::move(next);
    }

    netsim::RoundConfig round_config;
    round_config.share_range = config.share_range;
    round_config.seed = DeriveSeed(config.seed, kRoundStream + static_cast<uint64_t>(r));
    round_config.delivery = config.delivery;
    round_config.round = r;
    absl::StatusOr<netsim::RoundResult> round = netsim::RunRound(secrets, round_config);
    if (!round.ok()) return WithContext(round.status(), absl::StrCat(stage, ": SAFE round"));

    const safe::RangeValidationReport report = safe::ValidateAggregate(
        round->aggregate.values, n, safe::kProbabilityBounds);
    if (!report.accepted()) {
      const safe::RangeViolation& v = report.violations.front();
      return absl::OutOfRangeError(absl::StrFormat(
          "%s: range validation: %d coordinate(s) out of range, first '%s' = %.17g "
          "outside [%g, %g]",
          stage, report.violations.size(), result.vocab.keyword(v.coordinate), v.value,
          v.lower, v.upper));
    }

    RoundOutcome outcome;
    outcome.round = r;
    outcome.prior = federated_prior;
    outcome.aggregate = Scaled(
        safe::SnapToBounds(round->aggregate, kDefaultTieTolerance).values,
        config.aggregation, n);
    absl::StatusOr<bayes::PosteriorRanking> posterior =
        bayes::PosteriorScores(outcome.aggregate, federated_prior, result.vocab);
    if (!posterior.ok()) return WithContext(posterior.status(), absl::StrCat(stage, ": posterior"));
    outcome.posterior = *std::move(posterior);
    outcome.transcript = std::move(round->transcript);

    outcome.oracle_prior = oracle_prior;
    absl::StatusOr<bayes::PosteriorRanking> oracle =
        bayes::PosteriorScores(oracle_likelihood, oracle_prior, result.vocab);
    if (!oracle.ok()) return WithContext(oracle.status(), absl::StrCat(stage, ": oracle"));
    outcome.oracle = *std::move(oracle);
    outcome.matches_oracle = SameRanking(outcome.posterior, outcome.oracle);
    result.rounds.push_back(std::move(outcome));
  }

  result.idf_order = RankDescending(result.vocab.idf(), result.vocab.keywords(), 0.0);
  std::vector<Document> pooled;
  for (const std::vector<Document>& docs : result.user_docs) {
    pooled.insert(pooled.end(), docs.begin(), docs.end());
  }
  result.total_count = baselines::RankByTotalCount(pooled, result.vocab);
  for (const bayes::LikelihoodVector& likelihood : result.likelihoods) {
    if (auto top = baselines::LocalTopKeyword(likelihood, result.vocab)) {
      result.local_tops.push_back(*top);
    }
  }
  result.pooled_trend = baselines::RankByPooledTrend(result.local_tops);
  return result;
}

absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& config) {
  SAFETREND_ASSIGN_OR_RETURN(ExperimentInputs inputs, LoadExperimentInputs(config));
  return RunExperiment(inputs, config);
}

std::string RankingsCsv(const ExperimentResult& result) {
  const bayes::PosteriorRanking& posterior = result.final_posterior();
  std::string out = "keyword,score,rank\n";
  for (size_t r = 0; r < posterior.order.size(); ++r) {
    const size_t j = posterior.order[r];
    absl::StrAppend(&out, result.vocab.keyword(j), ",",
                    FormatDouble(posterior.scores[j]), ",", r + 1, "\n");
  }
  return out;
}

std::string RankingsMarkdown(const ExperimentResult& result, size_t rows) {
  const bayes::PosteriorRanking& posterior = result.final_posterior();
  std::vector<size_t> idf_rank(result.vocab.size());
  for (size_t r = 0; r < result.idf_order.size(); ++r) idf_rank[result.idf_order[r]] = r + 1;

  std::string out =
      "| Keyword | Total Count | IDF | IDF Rank | Count Rank | Pooled Trend Rank | "
      "Posterior Rank | Score |\n"
      "|---|---:|---:|---:|---:|---:|---:|---:|\n";
  const size_t shown = std::min(rows, posterior.order.size());
  for (size_t r = 0; r < shown; ++r) {
    const size_t j = posterior.order[r];
    const std::string& keyword = result.vocab.keyword(j);
    absl::StrAppend(&out, "| ", keyword, " | ", result.total_count.counts[j], " | ",
                    absl::StrFormat("%.6g", result.vocab.idf()[j]), " | ", idf_rank[j],
                    " | ", result.total_count.ranks[j], " | ",
                    RankCell(result.pooled_trend, keyword), " | ", r + 1, " | ",
                    absl::StrFormat("%.6g", posterior.scores[j]), " |\n");
  }
  return out;
}

std::string MetadataJson(const ExperimentResult& result, const ExperimentConfig& config) {
  nlohmann::ordered_json meta;
  meta["version"] = kVersion;
  meta["seed"] = config.seed;
  meta["config_hash"] = absl::StrFormat("%016x", ConfigHash(config));
  meta["users"] = config.users;
  meta["k"] = config.k;
  meta["share_range"] = config.share_range;
  meta["rounds"] = config.rounds;
  meta["agg"] = AggregationModeName(config.aggregation);
  meta["vocabulary_size"] = result.vocab.size();
  std::vector<size_t> docs_per_user;
  for (const auto& docs : result.user_docs) docs_per_user.push_back(docs.size());
  meta["documents_per_user"] = docs_per_user;
  meta["oracle_match"] = result.matches_oracle();
  return meta.dump(2) + "\n";
}

absl::Status WriteExperimentOutputs(const ExperimentResult& result,
                                    const ExperimentConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec) {
    return absl::InvalidArgumentError(
        absl::StrCat("cannot create output directory ", config.out.string(), ": ",
                     ec.message()));
  }
  std::vector<netsim::Transcript> transcripts;
  for (const RoundOutcome& r : result.rounds) transcripts.push_back(r.transcript);
  SAFETREND_RETURN_IF_ERROR(WriteStringToFile(config.out / "rankings.csv", RankingsCsv(result)));
  SAFETREND_RETURN_IF_ERROR(WriteStringToFile(config.out / "rankings.md",
                                              RankingsMarkdown(result, config.table_rows)));
  SAFETREND_RETURN_IF_ERROR(netsim::WriteTranscripts(config.out / "transcript.jsonl", transcripts));
  return WriteStringToFile(config.out / "meta.json", MetadataJson(result, config));
}

}  // namespace safetrend

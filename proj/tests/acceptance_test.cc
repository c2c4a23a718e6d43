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


// Acceptance checks. Prints one PASS or FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "boost/multiprecision/cpp_int.hpp"
#include "safetrend/baselines.h"
#include "safetrend/corpus.h"
#include "safetrend/experiment.h"
#include "safetrend/netsim.h"
#include "safetrend/random.h"
#include "safetrend/safe_protocol.h"
#include "safetrend/trend_bayes.h"
#include "safetrend/vocabulary.h"
#include "test_util.h"

namespace safetrend {
namespace {

using ::boost::multiprecision::cpp_int;
using ::boost::multiprecision::cpp_rational;
using ::safetrend::testing::DataPath;

struct Verdict {
  bool pass = false;
  std::string detail;
};

Verdict Fail(std::string detail) { return {false, std::move(detail)}; }

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::vector<safe::FeatureVector> RandomSecrets(int n, size_t d, RandomSource& rng) {
  std::vector<safe::FeatureVector> secrets(n);
  for (safe::FeatureVector& v : secrets) {
    for (size_t j = 0; j < d; ++j) v.values.push_back(rng.UniformUnit());
  }
  return secrets;
}

std::vector<double> DirectSum(const std::vector<safe::FeatureVector>& secrets) {
  std::vector<double> sum(secrets.front().dimension(), 0.0);
  for (const safe::FeatureVector& v : secrets) {
    for (size_t j = 0; j < sum.size(); ++j) sum[j] += v.values[j];
  }
  return sum;
}

// The exact value of a finite double.
cpp_rational ExactDouble(double x) {
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  const auto scaled = static_cast<int64_t>(std::ldexp(mantissa, 53));
  cpp_rational r(scaled);
  const int shift = exponent - 53;
  if (shift >= 0) {
    r *= cpp_int(1) << shift;
  } else {
    r /= cpp_int(1) << -shift;
  }
  return r;
}

// Pooled likelihood in exact arithmetic: sum over users of count / total.
std::vector<cpp_rational> ExactPooledLikelihood(const ExperimentResult& result,
                                                size_t k) {
  std::vector<cpp_rational> pooled(result.vocab.size(), cpp_rational(0));
  for (const std::vector<Document>& docs : result.user_docs) {
    const std::vector<int64_t> counts =
        bayes::PrimaryKeywordCounts(docs, result.vocab, k);
    const int64_t total = std::accumulate(counts.begin(), counts.end(), int64_t{0});
    if (total == 0) continue;
    for (size_t j = 0; j < counts.size(); ++j) {
      if (counts[j] != 0) pooled[j] += cpp_rational(counts[j], total);
    }
  }
  return pooled;
}

// Descending exact score, exact ties by ascending keyword.
std::vector<size_t> ExactOrder(const std::vector<cpp_rational>& scores,
                               const VocabularyIndex& vocab) {
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return vocab.keyword(a) < vocab.keyword(b);
  });
  return order;
}

ExperimentConfig AppendixConfig(uint64_t seed) {
  ExperimentConfig c;
  c.corpus = DataPath("appendix_passages.txt");
  c.idf = DataPath("idf_appendix.tsv");
  c.stopwords = DataPath("stopwords_en.txt");
  c.users = 10;
  c.k = 5;
  c.seed = seed;
  return c;
}

Verdict SafeReconstruction() {
  const auto start = std::chrono::steady_clock::now();
  const int n = 10;
  const size_t d = 1000;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    SplitMix64 rng(DeriveSeed(1000, trial));
    const auto secrets = RandomSecrets(n, d, rng);
    netsim::RoundConfig config;
    config.share_range = 100.0;
    config.seed = rng.NextU64();
    auto round = netsim::RunRound(secrets, config);
    if (!round.ok()) return Fail(round.status().ToString());
    const std::vector<double> direct = DirectSum(secrets);
    for (size_t j = 0; j < d; ++j) {
      worst = std::max(worst, std::abs(round->aggregate.values[j] - direct[j]));
    }
  }
  const double elapsed = Seconds(start);
  return {worst <= 1e-9 && elapsed < 5.0,
          absl::StrFormat("max error %.3g over 100 trials, %.2f s", worst, elapsed)};
}

Verdict OracleEquivalence() {
  const auto start = std::chrono::steady_clock::now();
  auto inputs = LoadExperimentInputs(AppendixConfig(0));
  if (!inputs.ok()) return Fail(inputs.status().ToString());
  double worst = 0.0;
  for (uint64_t seed = 1; seed <= 25; ++seed) {
    const ExperimentConfig config = AppendixConfig(seed);
    auto result = RunExperiment(*inputs, config);
    if (!result.ok()) return Fail(absl::StrCat("seed ", seed, ": ", result.status().ToString()));
    const RoundOutcome& round = result->rounds.front();
    auto oracle = baselines::CentralizedOracle(result->user_docs, result->vocab,
                                               config.k, round.prior);
    if (!oracle.ok()) return Fail(oracle.status().ToString());
    if (round.posterior.order != oracle->order) {
      return Fail(absl::StrCat("seed ", seed, ": order differs from the oracle"));
    }
    for (size_t j = 0; j < oracle->scores.size(); ++j) {
      worst = std::max(worst, std::abs(round.posterior.scores[j] - oracle->scores[j]));
    }
    // Near-equal scores must be genuine ties: the order has to agree with
    // the one computed in exact arithmetic.
    std::vector<cpp_rational> exact = ExactPooledLikelihood(*result, config.k);
    for (size_t j = 0; j < exact.size(); ++j) {
      exact[j] *= ExactDouble(round.prior.probabilities[j]);
    }
    if (ExactOrder(exact, result->vocab) != round.posterior.order) {
      return Fail(absl::StrCat("seed ", seed, ": order differs from exact arithmetic"));
    }
  }
  const double elapsed = Seconds(start);
  return {worst <= kOracleScoreTolerance && elapsed < 30.0,
          absl::StrFormat("25 seeds, max score gap %.3g, %.2f s", worst, elapsed)};
}

Verdict IdfPriorOrder() {
  auto table = LoadIdfTable(DataPath("idf_appendix.tsv"));
  if (!table.ok()) return Fail(table.status().ToString());
  auto prior = bayes::ComputePrior(*table);
  if (!prior.ok()) return Fail(prior.status().ToString());
  const std::vector<std::string> expected = {"phloem", "xylem",     "offender", "rica",
                                             "costa",  "manhattan", "project"};
  std::vector<double> p;
  for (const std::string& keyword : expected) {
    auto j = table->Find(keyword);
    if (!j.has_value()) return Fail(absl::StrCat(keyword, " missing from the table"));
    p.push_back(prior->probabilities[*j]);
  }
  for (size_t i = 1; i < p.size(); ++i) {
    if (!(p[i - 1] > p[i])) {
      return Fail(absl::StrCat(expected[i - 1], " does not precede ", expected[i]));
    }
  }
  return {true, "phloem > xylem > offender > rica > costa > manhattan > project"};
}

Verdict CountOrder() {
  // Listed out of order so the tie-break has something to do.
  const std::vector<std::pair<std::string, int>> counts = {
      {"xylem", 30}, {"rica", 57},    {"phloem", 49},   {"project", 75},
      {"costa", 57}, {"manhattan", 77}, {"offender", 48}};
  std::vector<std::string> keywords;
  std::vector<Document> docs(1);
  for (const auto& [keyword, count] : counts) {
    keywords.push_back(keyword);
    for (int c = 0; c < count; ++c) docs[0].tokens.push_back(keyword);
  }
  auto vocab = VocabularyIndex::Create(keywords, std::vector<double>(keywords.size(), 1.0));
  if (!vocab.ok()) return Fail(vocab.status().ToString());
  const baselines::CountRanking ranking = baselines::RankByTotalCount(docs, *vocab);
  std::vector<std::string> got;
  for (size_t j : ranking.order) got.push_back(ranking.keywords[j]);
  const std::vector<std::string> expected = {"manhattan", "project", "costa", "rica",
                                             "phloem",    "offender", "xylem"};
  return {got == expected, absl::StrJoin(got, ", ")};
}

Verdict ScalingInvariance() {
  SplitMix64 rng(DeriveSeed(5, 0));
  const size_t d = 40;
  const int n = 10;
  std::vector<std::string> keywords;
  for (size_t j = 0; j < d; ++j) keywords.push_back(absl::StrFormat("kw%02d", j));
  auto vocab = VocabularyIndex::Create(keywords, std::vector<double>(d, 1.0));
  if (!vocab.ok()) return Fail(vocab.status().ToString());
  for (int pair = 0; pair < 100; ++pair) {
    std::vector<std::vector<double>> users(n, std::vector<double>(d));
    for (auto& u : users) {
      for (double& x : u) x = rng.UniformUnit();
    }
    bayes::PriorDistribution prior;
    prior.probabilities.resize(d);
    for (double& x : prior.probabilities) x = rng.UniformUnit();
    // Plant exact ties so the tie-break is exercised too.
    for (auto& u : users) u[d - 1] = u[0];
    prior.probabilities[d - 1] = prior.probabilities[0];
    const double mass =
        std::accumulate(prior.probabilities.begin(), prior.probabilities.end(), 0.0);
    for (double& x : prior.probabilities) x /= mass;

    std::vector<double> sum(d, 0.0);
    for (const auto& u : users) {
      for (size_t j = 0; j < d; ++j) sum[j] += u[j];
    }
    const double c = 1e6 * (1.0 - rng.UniformUnit());
    std::vector<double> scaled(d), mean(d);
    for (size_t j = 0; j < d; ++j) {
      scaled[j] = c * sum[j];
      mean[j] = sum[j] / n;
    }
    auto base = bayes::PosteriorScores(sum, prior, *vocab);
    auto by_c = bayes::PosteriorScores(scaled, prior, *vocab);
    auto by_mean = bayes::PosteriorScores(mean, prior, *vocab);
    if (!base.ok() || !by_c.ok() || !by_mean.ok()) return Fail("scoring failed");
    if (base->order != by_c->order) {
      return Fail(absl::StrFormat("pair %d: order changes under c = %.6g", pair, c));
    }
    if (base->order != by_mean->order) {
      return Fail(absl::StrFormat("pair %d: order changes under the mean", pair));
    }
  }
  // The same through the full pipeline.
  auto inputs = LoadExperimentInputs(AppendixConfig(0));
  if (!inputs.ok()) return Fail(inputs.status().ToString());
  for (uint64_t seed : {2, 9}) {
    ExperimentConfig sum_config = AppendixConfig(seed);
    ExperimentConfig mean_config = sum_config;
    mean_config.aggregation = AggregationMode::kMean;
    auto a = RunExperiment(*inputs, sum_config);
    auto b = RunExperiment(*inputs, mean_config);
    if (!a.ok() || !b.ok()) return Fail("experiment failed");
    if (a->final_posterior().order != b->final_posterior().order) {
      return Fail(absl::StrCat("seed ", seed, ": --agg sum and mean disagree"));
    }
  }
  return {true, "100 pairs plus 2 experiment seeds, identical orders"};
}

Verdict PrivacySuite() {
  const int n = 10;
  size_t violations = 0;
  netsim::Transcript sample;
  std::vector<safe::FeatureVector> sample_secrets;
  for (int r = 0; r < 1000; ++r) {
    SplitMix64 rng(DeriveSeed(6, r));
    const auto secrets = RandomSecrets(n, 16, rng);
    netsim::RoundConfig config;
    config.seed = rng.NextU64();
    config.round = r;
    if (r % 2 == 1) config.delivery = netsim::Delivery::kSeededShuffle;
    auto round = netsim::RunRound(secrets, config);
    if (!round.ok()) return Fail(round.status().ToString());
    violations += netsim::CheckTranscriptPrivacy(round->transcript, secrets)
                      .violations.size();
    if (r == 0) {
      sample = round->transcript;
      sample_secrets = secrets;
    }
  }
  // Plant one raw vector where user-3's obfuscated vector should be.
  bool planted = false;
  for (netsim::Message& m : sample.messages) {
    if (m.kind == netsim::MessageKind::kObfuscated && m.sender == 3) {
      m.payload = sample_secrets[3].values;
      planted = true;
      break;
    }
  }
  if (!planted) return Fail("no obfuscated vector from user-3");
  const size_t leaked =
      netsim::CheckTranscriptPrivacy(sample, sample_secrets).violations.size();
  return {violations == 0 && leaked == 1,
          absl::StrCat(violations, " violation(s) in 1000 honest rounds, ", leaked,
                       " in the planted transcript")};
}

Verdict RangeDetection() {
  const int n = 10;
  const size_t d = 8;
  int flagged = 0;
  int controls_passed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    SplitMix64 rng(DeriveSeed(7, trial));
    const auto secrets = RandomSecrets(n, d, rng);
    const std::vector<double> honest = DirectSum(secrets);
    netsim::RoundConfig config;
    config.seed = rng.NextU64();
    netsim::AdversarySpec spec;
    spec.behavior = netsim::AdversaryBehavior::kInflateCoordinate;
    spec.node = static_cast<int>(rng.UniformInt(0, n - 1));
    spec.coordinate = static_cast<size_t>(rng.UniformInt(0, d - 1));
    // Beyond N * b, detectable whatever the honest sum is.
    spec.amount = n * safe::kProbabilityBounds.upper * (1.0 + rng.UniformUnit()) + 1e-3;
    auto out = netsim::InjectAdversary(secrets, config, spec);
    if (!out.ok()) return Fail(out.status().ToString());
    if (!out->validation.accepted()) ++flagged;

    // Negative control: half the residual slack goes unnoticed.
    spec.amount = 0.5 * (n * safe::kProbabilityBounds.upper - honest[spec.coordinate]);
    auto control = netsim::InjectAdversary(secrets, config, spec);
    if (!control.ok()) return Fail(control.status().ToString());
    if (control->validation.accepted()) ++controls_passed;
  }
  return {flagged == 100 && controls_passed == 100,
          absl::StrCat(flagged, "/100 inflations flagged, ", controls_passed,
                       "/100 within-slack controls accepted")};
}

Verdict MessageCount() {
  std::vector<std::string> counts;
  for (int n : {1, 2, 5, 10}) {
    for (int r = 0; r < 4; ++r) {
      SplitMix64 rng(DeriveSeed(8, n * 100 + r));
      const auto secrets = RandomSecrets(n, 3, rng);
      netsim::RoundConfig config;
      config.seed = rng.NextU64();
      config.round = r;
      if (r % 2 == 1) config.delivery = netsim::Delivery::kSeededShuffle;
      auto round = netsim::RunRound(secrets, config);
      if (!round.ok()) return Fail(round.status().ToString());
      const size_t expected = static_cast<size_t>(n * n + n);
      if (round->transcript.messages.size() != expected) {
        return Fail(absl::StrCat("N=", n, ": ", round->transcript.messages.size(),
                                 " messages, expected ", expected));
      }
    }
    counts.push_back(absl::StrCat("N=", n, ":", n * n + n));
  }
  return {true, absl::StrJoin(counts, " ")};
}

Verdict BeliefUpdate() {
  auto inputs = LoadExperimentInputs(AppendixConfig(0));
  if (!inputs.ok()) return Fail(inputs.status().ToString());
  for (uint64_t seed : {1, 4, 11}) {
    ExperimentConfig config = AppendixConfig(seed);
    config.rounds = 2;
    auto result = RunExperiment(*inputs, config);
    if (!result.ok()) return Fail(absl::StrCat("seed ", seed, ": ", result.status().ToString()));
    // Two steps of prior times likelihood, renormalized in between, rank
    // like L^2 * p0.
    const std::vector<cpp_rational> pooled = ExactPooledLikelihood(*result, config.k);
    std::vector<cpp_rational> two_step(pooled.size());
    for (size_t j = 0; j < pooled.size(); ++j) {
      two_step[j] = pooled[j] * pooled[j] *
                    ExactDouble(result->rounds.front().prior.probabilities[j]);
    }
    if (ExactOrder(two_step, result->vocab) != result->rounds.back().posterior.order) {
      return Fail(absl::StrCat("seed ", seed, ": second round differs from the oracle"));
    }
  }
  return {true, "3 seeds, second-round order equals the two-step product"};
}

}  // namespace
}  // namespace safetrend

int main() {
  using Check = std::function<safetrend::Verdict()>;
  const std::vector<std::pair<const char*, Check>> checks = {
      {"SAFE reconstruction", safetrend::SafeReconstruction},
      {"Oracle equivalence", safetrend::OracleEquivalence},
      {"IDF prior order", safetrend::IdfPriorOrder},
      {"Total count order", safetrend::CountOrder},
      {"Scaling invariance", safetrend::ScalingInvariance},
      {"Privacy transcript suite", safetrend::PrivacySuite},
      {"Range violation detection", safetrend::RangeDetection},
      {"Message count", safetrend::MessageCount},
      {"Belief update", safetrend::BeliefUpdate},
  };
  int failures = 0;
  for (const auto& [name, check] : checks) {
    const safetrend::Verdict v = check();
    if (!v.pass) ++failures;
    std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
  }
  std::printf("%zu criteria, %d failed\n", checks.size(), failures);
  return failures == 0 ? 0 : 1;
}

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


// safetrend: command-line driver.
//
//   safetrend run --corpus data/appendix_passages.txt
//       --idf data/idf_appendix.tsv --stopwords data/stopwords_en.txt
//       --seed 1 --out out/
//   safetrend aggregate --vectors users.csv --seed 1
//   safetrend rank --likelihood aggregate.csv --idf data/idf_appendix.tsv
//   safetrend check --corpus ... --idf ... --seed 1 --seeds 25
//   safetrend vocab --corpus ... --stopwords ...
//
// Exit codes: 0 success, 1 oracle mismatch (check), 2 config error, 3
// protocol violation, 4 range validation failure.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "safetrend/corpus.h"
#include "safetrend/experiment.h"
#include "safetrend/io_util.h"
#include "safetrend/netsim.h"
#include "safetrend/safe_protocol.h"
#include "safetrend/status_macros.h"
#include "safetrend/transcript_io.h"
#include "safetrend/trend_bayes.h"
#include "safetrend/version.h"
#include "safetrend/vocabulary.h"

namespace safetrend {
namespace {

constexpr int kExitMismatch = 1;
constexpr int kExitConfig = 2;
constexpr int kExitProtocol = 3;
constexpr int kExitRange = 4;

int Fail(const absl::Status& status) {
  std::cerr << "safetrend: " << status.message() << "\n";
  switch (status.code()) {
    case absl::StatusCode::kAborted:
      return kExitProtocol;
    case absl::StatusCode::kOutOfRange:
      return kExitRange;
    default:
      return kExitConfig;
  }
}

// Raw string flags, parsed after CLI11 so bad enum values map to exit 2
// with our own message.
struct ExperimentFlags {
  ExperimentConfig config;
  std::string format = "lines";
  std::string agg = "sum";
  std::string oov = "drop";
  std::string delivery = "round_robin";
};

void AddExperimentFlags(CLI::App* cmd, ExperimentFlags* f, bool require_seed) {
  ExperimentConfig& c = f->config;
  cmd->add_option("--corpus", c.corpus, "Corpus file")->required();
  cmd->add_option("--format", f->format, "lines or jsonl");
  cmd->add_option("--idf", c.idf, "IDF table (keyword<TAB>idf)")->required();
  cmd->add_option("--stopwords", c.stopwords, "Stopword list, one per line");
  cmd->add_option("--users", c.users, "Number of virtual users");
  cmd->add_option("--k", c.k, "Primary keywords per document");
  cmd->add_option("--share-range", c.share_range, "Share range D");
  auto* seed = cmd->add_option("--seed", c.seed, "Experiment seed");
  if (require_seed) seed->required();
  cmd->add_option("--rounds", c.rounds, "Rounds of belief updates");
  cmd->add_option("--agg", f->agg, "sum or mean");
  cmd->add_option("--oov", f->oov, "drop or max");
  cmd->add_option("--alpha0", c.alpha0, "Additive smoothing of user counts");
  cmd->add_option("--delivery", f->delivery, "round_robin or seeded_shuffle");
  cmd->add_option("--table-rows", c.table_rows, "Rows in rankings.md");
}

absl::Status ResolveFlags(ExperimentFlags* f) {
  SAFETREND_ASSIGN_OR_RETURN(f->config.format, ParseCorpusFormat(f->format));
  SAFETREND_ASSIGN_OR_RETURN(f->config.aggregation, ParseAggregationMode(f->agg));
  SAFETREND_ASSIGN_OR_RETURN(f->config.oov, ParseOovPolicy(f->oov));
  SAFETREND_ASSIGN_OR_RETURN(f->config.delivery, netsim::ParseDelivery(f->delivery));
  return ValidateConfig(f->config);
}

absl::Status WriteOrPrint(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
    return absl::OkStatus();
  }
  return WriteStringToFile(path, contents);
}

int RunCommand(ExperimentFlags& f) {
  if (absl::Status s = ResolveFlags(&f); !s.ok()) return Fail(s);
  if (f.config.out.empty()) return Fail(absl::InvalidArgumentError("--out is required"));
  absl::StatusOr<ExperimentResult> result = RunExperiment(f.config);
  if (!result.ok()) return Fail(result.status());
  if (absl::Status s = WriteExperimentOutputs(*result, f.config); !s.ok()) return Fail(s);
  std::cout << RankingsMarkdown(*result, f.config.table_rows);
  std::cout << "oracle match: " << (result->matches_oracle() ? "yes" : "NO") << "\n";
  return 0;
}

int CheckCommand(ExperimentFlags& f, int seeds) {
  if (absl::Status s = ResolveFlags(&f); !s.ok()) return Fail(s);
  if (seeds < 1) return Fail(absl::InvalidArgumentError("--seeds must be at least 1"));
  absl::StatusOr<ExperimentInputs> inputs = LoadExperimentInputs(f.config);
  if (!inputs.ok()) return Fail(inputs.status());
  int mismatches = 0;
  const uint64_t first = f.config.seed;
  for (int i = 0; i < seeds; ++i) {
    f.config.seed = first + static_cast<uint64_t>(i);
    absl::StatusOr<ExperimentResult> result = RunExperiment(*inputs, f.config);
    if (!result.ok()) return Fail(result.status());
    for (const RoundOutcome& round : result->rounds) {
      if (round.matches_oracle) continue;
      ++mismatches;
      std::cout << "seed " << f.config.seed << " round " << round.round
                << ": federated ranking differs from oracle\n";
    }
  }
  std::cout << seeds << " seed(s), " << mismatches << " mismatch(es)\n";
  return mismatches == 0 ? 0 : kExitMismatch;
}

absl::StatusOr<std::vector<double>> ParseNumbers(absl::string_view text,
                                                 size_t line_number) {
  std::vector<double> values;
  for (absl::string_view field :
       absl::StrSplit(text, absl::ByAnyChar(", \t"), absl::SkipEmpty())) {
    double v;
    if (!absl::SimpleAtod(field, &v)) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": bad number '", field, "'"));
    }
    values.push_back(v);
  }
  return values;
}

struct AggregateFlags {
  std::string vectors;
  double lower = 0.0;
  double upper = 1.0;
  double share_range = safe::kDefaultShareRange;
  uint64_t seed = 0;
  std::string delivery = "round_robin";
  std::string output;
  std::string transcript;
  std::string adversary = "none";
  int adversary_node = 0;
  size_t adversary_coordinate = 0;
  double adversary_amount = 0.0;
};

absl::StatusOr<netsim::AdversaryBehavior> ParseAdversary(absl::string_view name) {
  using netsim::AdversaryBehavior;
  if (name == "none") return AdversaryBehavior::kNone;
  if (name == "inflate_coordinate") return AdversaryBehavior::kInflateCoordinate;
  if (name == "out_of_range_share") return AdversaryBehavior::kOutOfRangeShare;
  if (name == "duplicate_share") return AdversaryBehavior::kDuplicateShare;
  if (name == "premature_obfuscated") return AdversaryBehavior::kPrematureObfuscated;
  return absl::InvalidArgumentError(absl::StrCat("unknown adversary '", name, "'"));
}

int AggregateCommand(const AggregateFlags& f) {
  const double lower = f.lower;
  const double upper = f.upper;
  absl::StatusOr<std::string> contents = ReadFileToString(f.vectors);
  if (!contents.ok()) return Fail(contents.status());
  std::vector<safe::FeatureVector> secrets;
  size_t line_number = 0;
  for (absl::string_view line : absl::StrSplit(*contents, '\n')) {
    ++line_number;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    absl::StatusOr<std::vector<double>> values = ParseNumbers(line, line_number);
    if (!values.ok()) return Fail(values.status());
    secrets.push_back({*std::move(values), {lower, upper}});
  }
  if (secrets.empty()) return Fail(absl::InvalidArgumentError("no vectors in input"));

  netsim::RoundConfig config;
  config.share_range = f.share_range;
  config.seed = f.seed;
  absl::StatusOr<netsim::Delivery> mode = netsim::ParseDelivery(f.delivery);
  if (!mode.ok()) return Fail(mode.status());
  config.delivery = *mode;
  absl::StatusOr<netsim::AdversaryBehavior> behavior = ParseAdversary(f.adversary);
  if (!behavior.ok()) return Fail(behavior.status());

  std::optional<netsim::AdversaryOutcome> round;
  if (*behavior == netsim::AdversaryBehavior::kNone) {
    absl::StatusOr<netsim::RoundResult> honest = netsim::RunRound(secrets, config);
    if (!honest.ok()) return Fail(honest.status());
    const int n = static_cast<int>(secrets.size());
    round = netsim::AdversaryOutcome{
        honest->aggregate, std::move(honest->transcript),
        safe::ValidateAggregate(honest->aggregate.values, n, {lower, upper})};
  } else {
    const netsim::AdversarySpec spec{*behavior, f.adversary_node, f.adversary_coordinate,
                                     f.adversary_amount};
    absl::StatusOr<netsim::AdversaryOutcome> outcome =
        netsim::InjectAdversary(secrets, config, spec);
    if (!outcome.ok()) return Fail(outcome.status());
    round = *std::move(outcome);
  }

  if (!f.transcript.empty()) {
    const netsim::Transcript* t = &round->transcript;
    if (absl::Status s = netsim::WriteTranscripts(f.transcript, {t, 1}); !s.ok()) {
      return Fail(s);
    }
  }
  const safe::RangeValidationReport& report = round->validation;
  if (!report.accepted()) {
    const safe::RangeViolation& v = report.violations.front();
    return Fail(absl::OutOfRangeError(absl::StrCat(
        "range validation: coordinate ", v.coordinate, " = ", FormatDouble(v.value),
        " outside [", FormatDouble(v.lower), ", ", FormatDouble(v.upper), "]")));
  }
  std::string line;
  for (size_t j = 0; j < round->aggregate.values.size(); ++j) {
    if (j > 0) line += ",";
    line += FormatDouble(round->aggregate.values[j]);
  }
  line += "\n";
  if (absl::Status s = WriteOrPrint(f.output, line); !s.ok()) return Fail(s);
  return 0;
}

// Each line: keyword,value[,value...]; extra columns (one per user) are
// summed in column order.
int RankCommand(const std::string& likelihood_path, const std::string& idf_path,
                bool uniform_prior, const std::string& output) {
  absl::StatusOr<std::string> contents = ReadFileToString(likelihood_path);
  if (!contents.ok()) return Fail(contents.status());
  absl::StatusOr<VocabularyIndex> table = LoadIdfTable(idf_path);
  if (!table.ok()) return Fail(table.status());

  std::vector<std::string> keywords;
  std::vector<double> idf;
  std::vector<double> likelihood;
  size_t line_number = 0;
  for (absl::string_view line : absl::StrSplit(*contents, '\n')) {
    ++line_number;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    std::pair<absl::string_view, absl::string_view> kv = absl::StrSplit(line, ',');
    absl::StatusOr<std::vector<double>> values = ParseNumbers(kv.second, line_number);
    if (!values.ok()) return Fail(values.status());
    if (values->empty()) {
      return Fail(absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": no value for '", kv.first, "'")));
    }
    std::optional<size_t> j = table->Find(kv.first);
    if (!j.has_value()) {
      return Fail(absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": '", kv.first, "' not in IDF table")));
    }
    double sum = 0.0;
    for (double v : *values) sum += v;
    keywords.emplace_back(kv.first);
    idf.push_back(table->idf()[*j]);
    likelihood.push_back(sum);
  }
  absl::StatusOr<VocabularyIndex> vocab = VocabularyIndex::Create(keywords, idf);
  if (!vocab.ok()) return Fail(vocab.status());
  absl::StatusOr<bayes::PriorDistribution> prior =
      uniform_prior ? bayes::UniformPrior(vocab->size()) : bayes::ComputePrior(*vocab);
  if (!prior.ok()) return Fail(prior.status());
  absl::StatusOr<bayes::PosteriorRanking> posterior =
      bayes::PosteriorScores(likelihood, *prior, *vocab);
  if (!posterior.ok()) return Fail(posterior.status());

  std::string out = "keyword,score,rank\n";
  for (size_t r = 0; r < posterior->order.size(); ++r) {
    const size_t j = posterior->order[r];
    absl::StrAppend(&out, vocab->keyword(j), ",", FormatDouble(posterior->scores[j]),
                    ",", r + 1, "\n");
  }
  if (absl::Status s = WriteOrPrint(output, out); !s.ok()) return Fail(s);
  return 0;
}

// Every normalized corpus token with its document frequency, ascending.
int VocabCommand(const std::string& corpus_path, const std::string& format,
                 const std::string& stopwords_path) {
  absl::StatusOr<CorpusFormat> fmt = ParseCorpusFormat(format);
  if (!fmt.ok()) return Fail(fmt.status());
  absl::StatusOr<std::vector<Document>> corpus = LoadCorpus(corpus_path, *fmt);
  if (!corpus.ok()) return Fail(corpus.status());
  PreprocessConfig preprocess;
  if (!stopwords_path.empty()) {
    absl::StatusOr<StopwordSet> stopwords = LoadStopwords(stopwords_path);
    if (!stopwords.ok()) return Fail(stopwords.status());
    preprocess.stopwords = *std::move(stopwords);
  }
  std::map<std::string, int> df;
  for (const Document& doc : *corpus) {
    std::vector<std::string> tokens = Preprocess(doc, preprocess).tokens;
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (const std::string& t : tokens) ++df[t];
  }
  for (const auto& [token, count] : df) std::cout << token << "\t" << count << "\n";
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Federated trend detection over secure aggregation"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  ExperimentFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Full experiment with baselines");
  AddExperimentFlags(run, &run_flags, /*require_seed=*/true);
  run->add_option("--out", run_flags.config.out, "Output directory")->required();

  ExperimentFlags check_flags;
  int seeds = 1;
  CLI::App* check = app.add_subcommand("check", "Federated vs. centralized oracle");
  AddExperimentFlags(check, &check_flags, /*require_seed=*/false);
  check->add_option("--seeds", seeds, "Consecutive seeds to check, from --seed");

  AggregateFlags agg;
  CLI::App* aggregate = app.add_subcommand("aggregate", "SAFE round on vector files");
  aggregate->add_option("--vectors", agg.vectors, "One user vector per line")->required();
  aggregate->add_option("--lower", agg.lower, "Per-user lower bound");
  aggregate->add_option("--upper", agg.upper, "Per-user upper bound");
  aggregate->add_option("--share-range", agg.share_range, "Share range D");
  aggregate->add_option("--seed", agg.seed, "Share seed");
  aggregate->add_option("--delivery", agg.delivery, "round_robin or seeded_shuffle");
  aggregate->add_option("--output", agg.output, "Aggregate output file (default stdout)");
  aggregate->add_option("--transcript", agg.transcript, "Write the round transcript here");
  aggregate->add_option("--adversary", agg.adversary,
                        "none, inflate_coordinate, out_of_range_share, duplicate_share "
                        "or premature_obfuscated");
  aggregate->add_option("--adversary-node", agg.adversary_node, "Misbehaving user id");
  aggregate->add_option("--adversary-coordinate", agg.adversary_coordinate,
                        "Coordinate the adversary targets");
  aggregate->add_option("--adversary-amount", agg.adversary_amount,
                        "Inflation added by inflate_coordinate");

  std::string likelihood, rank_idf, rank_output;
  bool uniform = false;
  CLI::App* rank = app.add_subcommand("rank", "Posterior ranking of likelihood files");
  rank->add_option("--likelihood", likelihood, "keyword,value[,value...] per line")
      ->required();
  rank->add_option("--idf", rank_idf, "IDF table")->required();
  rank->add_flag("--uniform-prior", uniform, "Ignore IDF, use a uniform prior");
  rank->add_option("--output", rank_output, "Output CSV (default stdout)");

  std::string vocab_corpus, vocab_format = "lines", vocab_stopwords;
  CLI::App* vocab = app.add_subcommand("vocab", "Dump normalized corpus tokens");
  vocab->add_option("--corpus", vocab_corpus, "Corpus file")->required();
  vocab->add_option("--format", vocab_format, "lines or jsonl");
  vocab->add_option("--stopwords", vocab_stopwords, "Stopword list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*run) return RunCommand(run_flags);
  if (*check) return CheckCommand(check_flags, seeds);
  if (*aggregate) return AggregateCommand(agg);
  if (*rank) return RankCommand(likelihood, rank_idf, uniform, rank_output);
  return VocabCommand(vocab_corpus, vocab_format, vocab_stopwords);
}

}  // namespace
}  // namespace safetrend

int main(int argc, char** argv) { return safetrend::Main(argc, argv); }

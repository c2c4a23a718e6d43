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

// Document loading and the text normalization pipeline that feeds keyword
// extraction: coreference hook, tokenization, punctuation removal,
// lower-casing, stopword removal and rule-based lemmatization.

#ifndef SAFETREND_CORPUS_H_
#define SAFETREND_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include "absl/strings/string_view.h"
#include <unordered_set>
#include <vector>

#include "absl/status/statusor.h"
#include "safetrend/vocabulary.h"

namespace safetrend {

struct Document {
  std::string id;
  std::string raw_text;
  // Normalized tokens in text order; empty until Preprocess() runs.
  std::vector<std::string> tokens;
};

enum class CorpusFormat {
  kLines,  // one document per line; blank lines are rejected
  kJsonl,  // {"id": string, "text": string} per line
};

absl::StatusOr<CorpusFormat> ParseCorpusFormat(absl::string_view name);

// Documents are numbered "0", "1", ... in file order. JSONL records may carry
// their own "id", which then takes precedence; ids must be unique.
absl::StatusOr<std::vector<Document>> ParseCorpus(absl::string_view contents,
                                                  CorpusFormat format);
absl::StatusOr<std::vector<Document>> LoadCorpus(const std::filesystem::path& path,
                                                 CorpusFormat format);

// Rewrites pronouns to the entities they refer to before tokenization.
class CoreferenceResolver {
 public:
  virtual ~CoreferenceResolver() = default;
  virtual std::string Resolve(absl::string_view text) const = 0;
};

class IdentityCoreference final : public CoreferenceResolver {
 public:
  std::string Resolve(absl::string_view text) const override {
    return std::string(text);
  }
};

using StopwordSet = std::unordered_set<std::string>;

// One word per line; surrounding whitespace is trimmed and words lowercased.
absl::StatusOr<StopwordSet> ParseStopwords(absl::string_view contents);
absl::StatusOr<StopwordSet> LoadStopwords(const std::filesystem::path& path);

struct PreprocessConfig {
  StopwordSet stopwords;
  bool lemmatize = true;
  // Null means identity.
  std::shared_ptr<const CoreferenceResolver> coreference;
};

// English suffix stripper: plural -s/-es/-ies, -ing and -ed, with -e
// restoration after "at", "bl", "iz" and undoubling of final consonants.
// Only applied to purely alphabetic lowercase tokens. Rules are applied until
// none fires, so Lemmatize(Lemmatize(w)) == Lemmatize(w).
std::string Lemmatize(absl::string_view token);

// Splits on Unicode whitespace, lowercases, strips leading and trailing ASCII
// punctuation, drops a possessive "'s", deletes remaining punctuation except
// internal hyphens, removes stopwords, then lemmatizes. A lemma that lands in
// the stopword list is removed as well.
Document Preprocess(const Document& doc, const PreprocessConfig& config);

std::vector<std::string> NormalizeText(absl::string_view text,
                                       const PreprocessConfig& config);

struct PrimaryKeywordSet {
  std::string doc_id;
  // At most K keywords, the most frequent tokens of the document; sorted
  // ascending for stable output.
  std::vector<std::string> keywords;
};

inline constexpr size_t kDefaultPrimaryKeywords = 5;

// Top-k tokens by term frequency, ties broken by ascending token.
PrimaryKeywordSet ComputePrimaryKeywordSet(const Document& doc, size_t k);

// Entry j counts documents whose tokens contain vocab keyword j.
std::vector<int64_t> DocumentFrequency(std::span<const Document> docs,
                                       const VocabularyIndex& vocab);

enum class OovPolicy {
  kDrop,    // tokens missing from the IDF table are ignored
  kMaxIdf,  // such tokens join the vocabulary with the table's largest IDF
};

absl::StatusOr<OovPolicy> ParseOovPolicy(absl::string_view name);

// With kDrop returns `table` unchanged. With kMaxIdf appends every corpus
// token absent from the table, in ascending order.
absl::StatusOr<VocabularyIndex> BuildVocabulary(const VocabularyIndex& table,
                                                std::span<const Document> docs,
                                                OovPolicy policy);

}  // namespace safetrend

#endif  // SAFETREND_CORPUS_H_

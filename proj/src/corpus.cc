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

#include "safetrend/corpus.h"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "safetrend/io_util.h"
#include "safetrend/status_macros.h"

namespace safetrend {
namespace {

bool IsBlank(absl::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return absl::ascii_isspace(static_cast<unsigned char>(c));
  });
}

// Byte length of the whitespace code point starting at text[i], or 0.
// Covers ASCII whitespace plus the Unicode space separators, NEL, line and
// paragraph separators.
size_t WhitespaceLength(absl::string_view text, size_t i) {
  const auto byte = [&](size_t k) {
    return k < text.size() ? static_cast<unsigned char>(text[k]) : 0u;
  };
  const unsigned char c = byte(i);
  if (absl::ascii_isspace(c)) return 1;
  if (c == 0xC2 && (byte(i + 1) == 0x85 || byte(i + 1) == 0xA0)) return 2;
  if (c == 0xE1 && byte(i + 1) == 0x9A && byte(i + 2) == 0x80) return 3;
  if (c == 0xE2 && byte(i + 1) == 0x80) {
    const unsigned char c2 = byte(i + 2);
    if ((c2 >= 0x80 && c2 <= 0x8A) || c2 == 0xA8 || c2 == 0xA9 || c2 == 0xAF) {
      return 3;
    }
  }
  if (c == 0xE2 && byte(i + 1) == 0x81 && byte(i + 2) == 0x9F) return 3;
  if (c == 0xE3 && byte(i + 1) == 0x80 && byte(i + 2) == 0x80) return 3;
  return 0;
}

std::vector<absl::string_view> SplitUnicodeWhitespace(absl::string_view text) {
  std::vector<absl::string_view> pieces;
  size_t start = 0;
  size_t i = 0;
  while (i < text.size()) {
    const size_t ws = WhitespaceLength(text, i);
    if (ws == 0) {
      ++i;
      continue;
    }
    if (i > start) pieces.push_back(text.substr(start, i - start));
    i += ws;
    start = i;
  }
  if (start < text.size()) pieces.push_back(text.substr(start));
  return pieces;
}

bool IsPunct(char c) { return absl::ascii_ispunct(static_cast<unsigned char>(c)); }

absl::string_view StripOuterPunctuation(absl::string_view token) {
  while (!token.empty() && IsPunct(token.front())) token.remove_prefix(1);
  while (!token.empty() && IsPunct(token.back())) token.remove_suffix(1);
  return token;
}

std::string CleanToken(absl::string_view raw) {
  std::string lowered = absl::AsciiStrToLower(raw);
  absl::string_view token = StripOuterPunctuation(lowered);
  if (absl::EndsWith(token, "'s")) token.remove_suffix(2);
  std::string kept;
  kept.reserve(token.size());
  for (char c : token) {
    if (!IsPunct(c) || c == '-') kept.push_back(c);
  }
  return std::string(StripOuterPunctuation(kept));
}

bool IsLowerAlpha(absl::string_view token) {
  return !token.empty() && std::all_of(token.begin(), token.end(), [](char c) {
           return c >= 'a' && c <= 'z';
         });
}

bool IsVowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool HasVowel(absl::string_view s) {
  return std::any_of(s.begin(), s.end(), IsVowel);
}

// Cleans up a stem left by removing -ing or -ed.
std::string RestoreStem(std::string stem) {
  const size_t n = stem.size();
  if (n >= 2 && stem[n - 1] == stem[n - 2] && !IsVowel(stem[n - 1]) &&
      stem[n - 1] != 'l' && stem[n - 1] != 's' && stem[n - 1] != 'z') {
    stem.pop_back();
  } else if (absl::EndsWith(stem, "at") || absl::EndsWith(stem, "bl") ||
             absl::EndsWith(stem, "iz")) {
    stem.push_back('e');
  }
  return stem;
}

// One rewrite step; returns the input unchanged when no rule applies. Every
// rule shortens the word, so iteration terminates.
std::string LemmaStep(const std::string& w) {
  const size_t n = w.size();
  auto drop = [&](size_t k) { return w.substr(0, n - k); };
  if (n >= 5 && (absl::EndsWith(w, "ies") || absl::EndsWith(w, "ied"))) {
    return drop(3) + "y";
  }
  if (absl::EndsWith(w, "sses")) return drop(2);
  if (n >= 5 && (absl::EndsWith(w, "xes") || absl::EndsWith(w, "ches") ||
                 absl::EndsWith(w, "shes") || absl::EndsWith(w, "zzes"))) {
    return drop(2);
  }
  if (absl::EndsWith(w, "s")) {
    if (n >= 4 && !absl::EndsWith(w, "ss") && !absl::EndsWith(w, "us") &&
        !absl::EndsWith(w, "is")) {
      return drop(1);
    }
    return w;
  }
  if (absl::EndsWith(w, "ing") && n >= 6 && HasVowel(w.substr(0, n - 3))) {
    return RestoreStem(drop(3));
  }
  if (absl::EndsWith(w, "ed") && !absl::EndsWith(w, "eed") && n >= 5 &&
      HasVowel(w.substr(0, n - 2))) {
    return RestoreStem(drop(2));
  }
  return w;
}

}  // namespace

absl::StatusOr<CorpusFormat> ParseCorpusFormat(absl::string_view name) {
  if (name == "lines") return CorpusFormat::kLines;
  if (name == "jsonl") return CorpusFormat::kJsonl;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown corpus format '", name, "' (want lines|jsonl)"));
}

absl::StatusOr<std::vector<Document>> ParseCorpus(absl::string_view contents,
                                                  CorpusFormat format) {
  std::vector<Document> docs;
  if (contents.empty()) return docs;
  std::vector<absl::string_view> lines = absl::StrSplit(contents, '\n');
  // A terminating newline does not open another record.
  if (lines.back().empty()) lines.pop_back();

  std::set<std::string> seen_ids;
  for (size_t i = 0; i < lines.size(); ++i) {
    absl::string_view line = lines[i];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const size_t line_number = i + 1;
    if (IsBlank(line)) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": blank document"));
    }
    Document doc;
    doc.id = std::to_string(docs.size());
    if (format == CorpusFormat::kLines) {
      doc.raw_text = std::string(line);
    } else {
      nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
      if (record.is_discarded() || !record.is_object()) {
        return absl::InvalidArgumentError(
            absl::StrCat("line ", line_number, ": malformed JSON record"));
      }
      auto text = record.find("text");
      if (text == record.end() || !text->is_string()) {
        return absl::InvalidArgumentError(
            absl::StrCat("line ", line_number, ": missing string field 'text'"));
      }
      doc.raw_text = text->get<std::string>();
      if (auto id = record.find("id"); id != record.end()) {
        if (!id->is_string()) {
          return absl::InvalidArgumentError(
              absl::StrCat("line ", line_number, ": 'id' must be a string"));
        }
        doc.id = id->get<std::string>();
      }
    }
    if (!seen_ids.insert(doc.id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": duplicate id '", doc.id, "'"));
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

absl::StatusOr<std::vector<Document>> LoadCorpus(const std::filesystem::path& path,
                                                 CorpusFormat format) {
  SAFETREND_ASSIGN_OR_RETURN(std::string contents, ReadFileToString(path));
  auto docs = ParseCorpus(contents, format);
  if (!docs.ok()) {
    return absl::Status(docs.status().code(),
                        absl::StrCat(path.string(), ": ", docs.status().message()));
  }
  return docs;
}

absl::StatusOr<StopwordSet> ParseStopwords(absl::string_view contents) {
  StopwordSet words;
  for (absl::string_view line : absl::StrSplit(contents, '\n')) {
    absl::string_view word = absl::StripAsciiWhitespace(line);
    if (word.empty()) continue;
    words.insert(absl::AsciiStrToLower(word));
  }
  return words;
}

absl::StatusOr<StopwordSet> LoadStopwords(const std::filesystem::path& path) {
  SAFETREND_ASSIGN_OR_RETURN(std::string contents, ReadFileToString(path));
  return ParseStopwords(contents);
}

std::string Lemmatize(absl::string_view token) {
  std::string word(token);
  if (!IsLowerAlpha(word)) return word;
  while (true) {
    std::string next = LemmaStep(word);
    if (next == word) return word;
    word = std::move(next);
  }
}

std::vector<std::string> NormalizeText(absl::string_view text,
                                       const PreprocessConfig& config) {
  std::vector<std::string> tokens;
  for (absl::string_view piece : SplitUnicodeWhitespace(text)) {
    std::string token = CleanToken(piece);
    if (token.empty() || config.stopwords.contains(token)) continue;
    if (config.lemmatize) {
      token = Lemmatize(token);
      if (config.stopwords.contains(token)) continue;
    }
    tokens.push_back(std::move(token));
  }
  return tokens;
}

Document Preprocess(const Document& doc, const PreprocessConfig& config) {
  Document out{.id = doc.id, .raw_text = doc.raw_text, .tokens = {}};
  if (config.coreference != nullptr) {
    out.tokens = NormalizeText(config.coreference->Resolve(doc.raw_text), config);
  } else {
    out.tokens = NormalizeText(doc.raw_text, config);
  }
  return out;
}

PrimaryKeywordSet ComputePrimaryKeywordSet(const Document& doc, size_t k) {
  std::map<absl::string_view, int64_t> counts;
  for (const std::string& token : doc.tokens) ++counts[token];
  std::vector<std::pair<absl::string_view, int64_t>> ranked(counts.begin(),
                                                           counts.end());
  // std::map iteration is already ascending, so a stable sort on count keeps
  // the lexicographic tie-break.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > k) ranked.resize(k);

  PrimaryKeywordSet pks{.doc_id = doc.id, .keywords = {}};
  pks.keywords.reserve(ranked.size());
  for (const auto& [token, count] : ranked) pks.keywords.emplace_back(token);
  std::sort(pks.keywords.begin(), pks.keywords.end());
  return pks;
}

std::vector<int64_t> DocumentFrequency(std::span<const Document> docs,
                                       const VocabularyIndex& vocab) {
  std::vector<int64_t> df(vocab.size(), 0);
  std::vector<size_t> last_doc(vocab.size(), SIZE_MAX);
  for (size_t i = 0; i < docs.size(); ++i) {
    for (const std::string& token : docs[i].tokens) {
      auto j = vocab.Find(token);
      if (!j.has_value() || last_doc[*j] == i) continue;
      last_doc[*j] = i;
      ++df[*j];
    }
  }
  return df;
}

absl::StatusOr<OovPolicy> ParseOovPolicy(absl::string_view name) {
  if (name == "drop") return OovPolicy::kDrop;
  if (name == "max") return OovPolicy::kMaxIdf;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown oov policy '", name, "' (want drop|max)"));
}

absl::StatusOr<VocabularyIndex> BuildVocabulary(const VocabularyIndex& table,
                                                std::span<const Document> docs,
                                                OovPolicy policy) {
  if (policy == OovPolicy::kDrop) return table;
  std::set<std::string> missing;
  for (const Document& doc : docs) {
    for (const std::string& token : doc.tokens) {
      if (!table.Find(token).has_value()) missing.insert(token);
    }
  }
  const double max_idf =
      table.empty() ? 0.0 : *std::max_element(table.idf().begin(), table.idf().end());
  std::vector<std::string> keywords = table.keywords();
  std::vector<double> idf = table.idf();
  for (const std::string& token : missing) {
    keywords.push_back(token);
    idf.push_back(max_idf);
  }
  return VocabularyIndex::Create(std::move(keywords), std::move(idf));
}

}  // namespace safetrend

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

#include "safetrend/vocabulary.h"

#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "safetrend/io_util.h"
#include "safetrend/status_macros.h"

namespace safetrend {

absl::StatusOr<VocabularyIndex> VocabularyIndex::Create(
    std::vector<std::string> keywords, std::vector<double> idf) {
  if (keywords.size() != idf.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("vocabulary has ", keywords.size(), " keywords but ",
                     idf.size(), " idf values"));
  }
  VocabularyIndex vocab;
  vocab.index_.reserve(keywords.size());
  for (size_t j = 0; j < keywords.size(); ++j) {
    if (keywords[j].empty()) {
      return absl::InvalidArgumentError(absl::StrCat("empty keyword at ", j));
    }
    if (!std::isfinite(idf[j]) || idf[j] < 0.0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "idf for '", keywords[j], "' must be finite and >= 0, got ", idf[j]));
    }
    if (!vocab.index_.emplace(keywords[j], j).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate keyword '", keywords[j], "'"));
    }
  }
  vocab.keywords_ = std::move(keywords);
  vocab.idf_ = std::move(idf);
  return vocab;
}

std::optional<size_t> VocabularyIndex::Find(absl::string_view keyword) const {
  auto it = index_.find(std::string(keyword));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

absl::StatusOr<VocabularyIndex> ParseIdfTable(absl::string_view contents) {
  std::vector<std::string> keywords;
  std::vector<double> idf;
  std::unordered_map<std::string, size_t> first_seen;
  size_t line_number = 0;
  for (absl::string_view line : absl::StrSplit(contents, '\n')) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<absl::string_view> fields = absl::StrSplit(line, '\t');
    if (fields.size() != 2 || fields[0].empty()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "idf table line ", line_number, ": expected term<TAB>idf"));
    }
    double value;
    if (!absl::SimpleAtod(fields[1], &value)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "idf table line ", line_number, ": bad idf '", fields[1], "'"));
    }
    std::string term(fields[0]);
    auto [it, inserted] = first_seen.emplace(term, line_number);
    if (!inserted) {
      return absl::InvalidArgumentError(
          absl::StrCat("idf table line ", line_number, ": duplicate term '",
                       term, "' (first seen on line ", it->second, ")"));
    }
    keywords.push_back(std::move(term));
    idf.push_back(value);
  }
  return VocabularyIndex::Create(std::move(keywords), std::move(idf));
}

absl::StatusOr<VocabularyIndex> LoadIdfTable(const std::filesystem::path& path) {
  SAFETREND_ASSIGN_OR_RETURN(std::string contents, ReadFileToString(path));
  auto vocab = ParseIdfTable(contents);
  if (!vocab.ok()) {
    return absl::Status(vocab.status().code(),
                        absl::StrCat(path.string(), ": ",
                                     vocab.status().message()));
  }
  return vocab;
}

}  // namespace safetrend

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

#ifndef SAFETREND_VOCABULARY_H_
#define SAFETREND_VOCABULARY_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include "absl/strings/string_view.h"
#include <unordered_map>
#include <vector>

#include "absl/status/statusor.h"

namespace safetrend {

// Ordered keyword list with per-keyword IDF. Position j of every feature
// vector, likelihood vector and score vector refers to keywords()[j].
class VocabularyIndex {
 public:
  VocabularyIndex() = default;

  // Fails on duplicate keywords, empty keywords, length mismatch, or a
  // negative or non-finite IDF.
  static absl::StatusOr<VocabularyIndex> Create(std::vector<std::string> keywords,
                                                std::vector<double> idf);

  size_t size() const { return keywords_.size(); }
  bool empty() const { return keywords_.empty(); }
  const std::vector<std::string>& keywords() const { return keywords_; }
  const std::vector<double>& idf() const { return idf_; }
  const std::string& keyword(size_t j) const { return keywords_[j]; }

  std::optional<size_t> Find(absl::string_view keyword) const;

 private:
  std::vector<std::string> keywords_;
  std::vector<double> idf_;
  std::unordered_map<std::string, size_t> index_;
};

// Parses `term<TAB>idf` lines. Blank lines are skipped; duplicate terms and
// unparsable IDF values are errors that name the offending line.
absl::StatusOr<VocabularyIndex> ParseIdfTable(absl::string_view contents);
absl::StatusOr<VocabularyIndex> LoadIdfTable(const std::filesystem::path& path);

}  // namespace safetrend

#endif  // SAFETREND_VOCABULARY_H_

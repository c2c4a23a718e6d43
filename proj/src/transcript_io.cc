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

#include "safetrend/transcript_io.h"

#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "safetrend/io_util.h"
#include "safetrend/status_macros.h"

namespace safetrend::netsim {
namespace {

absl::Status LineError(size_t line_number, absl::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat("transcript line ", line_number, ": ", what));
}

}  // namespace

std::string TranscriptHeaderLine(const TranscriptMetadata& metadata) {
  return absl::StrCat("{\"N\": ", metadata.num_users, ", \"d\": ", metadata.dimension,
                      ", \"D\": ", FormatDouble(metadata.share_range),
                      ", \"seed\": ", metadata.seed, ", \"round\": ", metadata.round,
                      "}");
}

std::string MessageLine(const Message& message) {
  std::string line = absl::StrCat(
      "{\"round\": ", message.round, ", \"from\": \"", NodeName(message.sender),
      "\", \"to\": \"", NodeName(message.receiver), "\", \"kind\": \"",
      MessageKindName(message.kind), "\", \"payload\": [");
  for (size_t j = 0; j < message.payload.size(); ++j) {
    if (j > 0) line += ", ";
    line += FormatDouble(message.payload[j]);
  }
  line += "]}";
  return line;
}

std::string SerializeTranscripts(std::span<const Transcript> transcripts) {
  std::string out;
  for (const Transcript& t : transcripts) {
    absl::StrAppend(&out, TranscriptHeaderLine(t.metadata), "\n");
    for (const Message& m : t.messages) absl::StrAppend(&out, MessageLine(m), "\n");
  }
  return out;
}

absl::StatusOr<std::vector<Transcript>> ParseTranscripts(absl::string_view jsonl) {
  std::vector<Transcript> transcripts;
  size_t line_number = 0;
  for (absl::string_view line : absl::StrSplit(jsonl, '\n')) {
    ++line_number;
    if (line.empty()) continue;
    nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      return LineError(line_number, "malformed JSON");
    }
    try {
      if (record.contains("N")) {
        Transcript t;
        t.metadata.num_users = record.at("N").get<int>();
        t.metadata.dimension = record.at("d").get<size_t>();
        t.metadata.share_range = record.at("D").get<double>();
        t.metadata.seed = record.at("seed").get<uint64_t>();
        t.metadata.round = record.value("round", 0);
        transcripts.push_back(std::move(t));
        continue;
      }
      if (transcripts.empty()) {
        return LineError(line_number, "message before any header line");
      }
      Message m;
      m.round = record.at("round").get<int>();
      SAFETREND_ASSIGN_OR_RETURN(m.sender,
                                 ParseNodeName(record.at("from").get<std::string>()));
      SAFETREND_ASSIGN_OR_RETURN(m.receiver,
                                 ParseNodeName(record.at("to").get<std::string>()));
      SAFETREND_ASSIGN_OR_RETURN(
          m.kind, ParseMessageKind(record.at("kind").get<std::string>()));
      m.payload = record.at("payload").get<std::vector<double>>();
      transcripts.back().messages.push_back(std::move(m));
    } catch (const nlohmann::json::exception& e) {
      return LineError(line_number, e.what());
    }
  }
  return transcripts;
}

absl::Status WriteTranscripts(const std::filesystem::path& path,
                              std::span<const Transcript> transcripts) {
  return WriteStringToFile(path, SerializeTranscripts(transcripts));
}

absl::StatusOr<std::vector<Transcript>> ReadTranscripts(
    const std::filesystem::path& path) {
  SAFETREND_ASSIGN_OR_RETURN(std::string contents, ReadFileToString(path));
  return ParseTranscripts(contents);
}

}  // namespace safetrend::netsim

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

// JSON Lines transcript format. Each transcript starts with a header line
//
//   {"N": 10, "d": 3, "D": 100, "seed": 7, "round": 0}
//
// followed by one line per delivered message:
//
//   {"round": 0, "from": "user-0", "to": "user-1", "kind": "Share",
//    "payload": [0.5, -12.25, ...]}
//
// Doubles are written with 17 significant digits, so parsing the file back
// reproduces every payload bit for bit. Several transcripts (one per round)
// may be concatenated in one file.

#ifndef SAFETREND_TRANSCRIPT_IO_H_
#define SAFETREND_TRANSCRIPT_IO_H_

#include <filesystem>
#include <span>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "safetrend/netsim.h"

namespace safetrend::netsim {

std::string TranscriptHeaderLine(const TranscriptMetadata& metadata);
std::string MessageLine(const Message& message);

std::string SerializeTranscripts(std::span<const Transcript> transcripts);

absl::StatusOr<std::vector<Transcript>> ParseTranscripts(absl::string_view jsonl);

absl::Status WriteTranscripts(const std::filesystem::path& path,
                              std::span<const Transcript> transcripts);
absl::StatusOr<std::vector<Transcript>> ReadTranscripts(
    const std::filesystem::path& path);

}  // namespace safetrend::netsim

#endif  // SAFETREND_TRANSCRIPT_IO_H_

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

#ifndef SAFETREND_IO_UTIL_H_
#define SAFETREND_IO_UTIL_H_

#include <filesystem>
#include <string>
#include "absl/strings/string_view.h"

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace safetrend {

absl::StatusOr<std::string> ReadFileToString(const std::filesystem::path& path);

absl::Status WriteStringToFile(const std::filesystem::path& path,
                               absl::string_view contents);

// "%.17g": enough digits for any double to round-trip exactly.
std::string FormatDouble(double value);

}  // namespace safetrend

#endif  // SAFETREND_IO_UTIL_H_

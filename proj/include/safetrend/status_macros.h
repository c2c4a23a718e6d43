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

#ifndef SAFETREND_STATUS_MACROS_H_
#define SAFETREND_STATUS_MACROS_H_

#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define SAFETREND_STATUS_CONCAT_INNER_(x, y) x##y
#define SAFETREND_STATUS_CONCAT_(x, y) SAFETREND_STATUS_CONCAT_INNER_(x, y)

#define SAFETREND_RETURN_IF_ERROR(expr)      \
  do {                                       \
    const absl::Status _status = (expr);     \
    if (!_status.ok()) return _status;       \
  } while (0)

#define SAFETREND_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                                     \
  if (!statusor.ok()) return std::move(statusor).status();     \
  lhs = std::move(statusor).value()

#define SAFETREND_ASSIGN_OR_RETURN(lhs, rexpr)                            \
  SAFETREND_ASSIGN_OR_RETURN_IMPL_(                                       \
      SAFETREND_STATUS_CONCAT_(_statusor_, __LINE__), lhs, rexpr)

#endif  // SAFETREND_STATUS_MACROS_H_

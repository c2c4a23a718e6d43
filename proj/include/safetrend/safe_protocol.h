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

// Additive secret sharing of real-valued feature vectors among N users.
//
// User i splits v_i into N shares: N-1 drawn uniformly from [-D, D]^d, one
// for each peer k, and a kept ("diagonal") share equal to v_i minus their
// sum. Every user adds its kept share to the N-1 shares it received; the
// aggregator only ever sees these obfuscated sums, and their total equals the
// total of the original vectors because every share is counted exactly once.
//
// Arithmetic is IEEE double. All multi-vector sums run in ascending user id
// so results are bit-reproducible, but cancellation of shares of magnitude D
// leaves an error of a few ulp(N * D) per coordinate.

#ifndef SAFETREND_SAFE_PROTOCOL_H_
#define SAFETREND_SAFE_PROTOCOL_H_

#include <cstddef>
#include <span>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "safetrend/random.h"

namespace safetrend::safe {

using UserId = int;

// Closed interval every coordinate of a vector is declared to lie in.
struct Bounds {
  double lower = 0.0;
  double upper = 1.0;
};

inline constexpr Bounds kProbabilityBounds{0.0, 1.0};
inline constexpr double kDefaultShareRange = 100.0;
inline constexpr double kDefaultValidationTolerance = 1e-6;

struct FeatureVector {
  std::vector<double> values;
  Bounds bounds = kProbabilityBounds;

  size_t dimension() const { return values.size(); }
};

// OK iff every value is finite and within `bounds` and the bounds are
// ordered.
absl::Status CheckFeatureVector(const FeatureVector& v);

struct ShareSet {
  UserId owner = 0;
  double share_range = kDefaultShareRange;
  // shares[k] is destined for user k; shares[owner] is the kept share.
  std::vector<std::vector<double>> shares;

  const std::vector<double>& kept() const { return shares[owner]; }
};

struct ObfuscatedVector {
  UserId owner = 0;
  std::vector<double> values;
};

// Draws the N-1 peer shares (recipients ascending, coordinates ascending) and
// sets the kept share to v minus their running sum.
//
// Fails if v has non-finite entries, owner is not in [0, num_users),
// num_users < 1, or share_range is not a positive finite number.
absl::StatusOr<ShareSet> MakeShares(const FeatureVector& v, UserId owner,
                                    int num_users, double share_range,
                                    RandomSource& rng);

// kept + sum(received). `received` must be ordered by ascending sender id;
// the sum is accumulated in that order.
absl::StatusOr<ObfuscatedVector> CombineReceived(
    UserId owner, std::span<const double> kept,
    std::span<const std::vector<double>> received);

// Coordinate-wise sum in ascending owner id. The result carries bounds
// (N * a, N * b) for per-user bounds (a, b).
absl::StatusOr<FeatureVector> Aggregate(std::span<const ObfuscatedVector> obfuscated,
                                        Bounds per_user_bounds = kProbabilityBounds);

struct RangeViolation {
  size_t coordinate = 0;
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct RangeValidationReport {
  std::vector<RangeViolation> violations;

  bool accepted() const { return violations.empty(); }
};

// Flags every coordinate outside [N*a - tolerance, N*b + tolerance]. NaN is
// always flagged. Never fails.
RangeValidationReport ValidateAggregate(std::span<const double> aggregate,
                                        int num_users, Bounds per_user_bounds,
                                        double tolerance = kDefaultValidationTolerance);

// Clamps an aggregate to its bounds and snaps coordinates within `tolerance`
// of a bound onto it, so reconstruction noise around exact zeros (keywords no
// user holds) is removed before ranking.
FeatureVector SnapToBounds(const FeatureVector& aggregate, double tolerance);

// Little-endian IEEE-754 binary64 encoding of a vector.
std::string EncodeLittleEndian(std::span<const double> values);
absl::StatusOr<std::vector<double>> DecodeLittleEndian(absl::string_view bytes);

}  // namespace safetrend::safe

#endif  // SAFETREND_SAFE_PROTOCOL_H_

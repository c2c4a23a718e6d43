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

#include "safetrend/safe_protocol.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "absl/strings/str_cat.h"

namespace safetrend::safe {

absl::Status CheckFeatureVector(const FeatureVector& v) {
  if (!(v.bounds.lower <= v.bounds.upper)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "bounds [", v.bounds.lower, ", ", v.bounds.upper, "] are not ordered"));
  }
  for (size_t j = 0; j < v.values.size(); ++j) {
    const double x = v.values[j];
    if (!std::isfinite(x)) {
      return absl::InvalidArgumentError(
          absl::StrCat("coordinate ", j, " is not finite"));
    }
    if (x < v.bounds.lower || x > v.bounds.upper) {
      return absl::OutOfRangeError(absl::StrCat("coordinate ", j, " = ", x,
                                                " outside [", v.bounds.lower,
                                                ", ", v.bounds.upper, "]"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<ShareSet> MakeShares(const FeatureVector& v, UserId owner,
                                    int num_users, double share_range,
                                    RandomSource& rng) {
  if (num_users < 1) {
    return absl::InvalidArgumentError("need at least one user");
  }
  if (owner < 0 || owner >= num_users) {
    return absl::InvalidArgumentError(
        absl::StrCat("owner ", owner, " not in [0, ", num_users, ")"));
  }
  if (!(share_range > 0.0) || !std::isfinite(share_range)) {
    return absl::InvalidArgumentError(
        absl::StrCat("share range must be positive and finite, got ", share_range));
  }
  for (size_t j = 0; j < v.values.size(); ++j) {
    if (!std::isfinite(v.values[j])) {
      return absl::InvalidArgumentError(
          absl::StrCat("feature vector coordinate ", j, " is not finite"));
    }
  }

  const size_t d = v.values.size();
  ShareSet set;
  set.owner = owner;
  set.share_range = share_range;
  set.shares.assign(static_cast<size_t>(num_users), std::vector<double>(d, 0.0));

  std::vector<double> random_sum(d, 0.0);
  for (UserId k = 0; k < num_users; ++k) {
    if (k == owner) continue;
    std::vector<double>& share = set.shares[static_cast<size_t>(k)];
    for (size_t j = 0; j < d; ++j) {
      share[j] = rng.Uniform(-share_range, share_range);
      random_sum[j] += share[j];
    }
  }
  std::vector<double>& kept = set.shares[static_cast<size_t>(owner)];
  for (size_t j = 0; j < d; ++j) kept[j] = v.values[j] - random_sum[j];
  return set;
}

absl::StatusOr<ObfuscatedVector> CombineReceived(
    UserId owner, std::span<const double> kept,
    std::span<const std::vector<double>> received) {
  ObfuscatedVector out;
  out.owner = owner;
  out.values.assign(kept.begin(), kept.end());
  for (size_t s = 0; s < received.size(); ++s) {
    if (received[s].size() != kept.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "received share ", s, " has length ", received[s].size(),
          ", expected ", kept.size()));
    }
    for (size_t j = 0; j < kept.size(); ++j) out.values[j] += received[s][j];
  }
  return out;
}

absl::StatusOr<FeatureVector> Aggregate(std::span<const ObfuscatedVector> obfuscated,
                                        Bounds per_user_bounds) {
  if (obfuscated.empty()) {
    return absl::InvalidArgumentError("aggregate of zero users");
  }
  std::vector<const ObfuscatedVector*> sorted;
  sorted.reserve(obfuscated.size());
  for (const ObfuscatedVector& o : obfuscated) sorted.push_back(&o);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto* a, const auto* b) { return a->owner < b->owner; });

  const size_t d = sorted.front()->values.size();
  const double n = static_cast<double>(obfuscated.size());
  FeatureVector sum;
  sum.values.assign(d, 0.0);
  sum.bounds = {n * per_user_bounds.lower, n * per_user_bounds.upper};
  for (const ObfuscatedVector* o : sorted) {
    if (o->values.size() != d) {
      return absl::InvalidArgumentError(
          absl::StrCat("obfuscated vector of user ", o->owner, " has length ",
                       o->values.size(), ", expected ", d));
    }
    for (size_t j = 0; j < d; ++j) sum.values[j] += o->values[j];
  }
  return sum;
}

RangeValidationReport ValidateAggregate(std::span<const double> aggregate,
                                        int num_users, Bounds per_user_bounds,
                                        double tolerance) {
  const double n = static_cast<double>(num_users);
  const double lower = n * per_user_bounds.lower - tolerance;
  const double upper = n * per_user_bounds.upper + tolerance;
  RangeValidationReport report;
  for (size_t j = 0; j < aggregate.size(); ++j) {
    const double x = aggregate[j];
    // Negated comparison so NaN is flagged too.
    if (!(x >= lower && x <= upper)) {
      report.violations.push_back({j, x, lower, upper});
    }
  }
  return report;
}

FeatureVector SnapToBounds(const FeatureVector& aggregate, double tolerance) {
  FeatureVector out = aggregate;
  const double lower = aggregate.bounds.lower;
  const double upper = aggregate.bounds.upper;
  for (double& x : out.values) {
    if (x <= lower + tolerance) {
      x = lower;
    } else if (x >= upper - tolerance) {
      x = upper;
    }
  }
  return out;
}

std::string EncodeLittleEndian(std::span<const double> values) {
  std::string bytes(values.size() * sizeof(double), '\0');
  for (size_t i = 0; i < values.size(); ++i) {
    uint64_t bits = std::bit_cast<uint64_t>(values[i]);
    for (size_t b = 0; b < 8; ++b) {
      bytes[i * 8 + b] = static_cast<char>((bits >> (8 * b)) & 0xFF);
    }
  }
  return bytes;
}

absl::StatusOr<std::vector<double>> DecodeLittleEndian(absl::string_view bytes) {
  if (bytes.size() % sizeof(double) != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("payload of ", bytes.size(), " bytes is not a double array"));
  }
  std::vector<double> values(bytes.size() / sizeof(double));
  for (size_t i = 0; i < values.size(); ++i) {
    uint64_t bits = 0;
    for (size_t b = 0; b < 8; ++b) {
      bits |= static_cast<uint64_t>(static_cast<unsigned char>(bytes[i * 8 + b]))
              << (8 * b);
    }
    values[i] = std::bit_cast<double>(bits);
  }
  return values;
}

}  // namespace safetrend::safe

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

// Deterministic in-memory simulation of one secure aggregation round.
//
// Users 0..N-1 and one aggregator exchange messages through a single pending
// queue. Every user first emits its N-1 shares; after that, messages are
// delivered one at a time in an order fixed by the RoundConfig, and each
// delivery may enqueue further messages. A complete honest round delivers
// N(N-1) Share, N Obfuscated and N Aggregate messages. Any message emitted
// out of phase aborts the round with a protocol violation naming the node.

#ifndef SAFETREND_NETSIM_H_
#define SAFETREND_NETSIM_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "safetrend/random.h"
#include "safetrend/safe_protocol.h"

namespace safetrend::netsim {

using safe::UserId;

inline constexpr UserId kAggregatorId = -1;

// "user-<i>" or "aggregator".
std::string NodeName(UserId id);
absl::StatusOr<UserId> ParseNodeName(absl::string_view name);

enum class MessageKind { kShare, kObfuscated, kAggregate };

absl::string_view MessageKindName(MessageKind kind);
absl::StatusOr<MessageKind> ParseMessageKind(absl::string_view name);

struct Message {
  int round = 0;
  UserId sender = 0;
  UserId receiver = 0;
  MessageKind kind = MessageKind::kShare;
  std::vector<double> payload;

  friend bool operator==(const Message&, const Message&) = default;
};

struct TranscriptMetadata {
  int num_users = 0;
  size_t dimension = 0;
  double share_range = 0.0;
  uint64_t seed = 0;
  int round = 0;

  friend bool operator==(const TranscriptMetadata&,
                         const TranscriptMetadata&) = default;
};

struct Transcript {
  TranscriptMetadata metadata;
  // In delivery order.
  std::vector<Message> messages;

  size_t Count(MessageKind kind) const;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

enum class Delivery {
  kRoundRobin,     // FIFO in emission order
  kSeededShuffle,  // uniformly random pending message, seeded
};

absl::StatusOr<Delivery> ParseDelivery(absl::string_view name);

enum class ShareRandomness {
  kSeeded,         // per-user SplitMix64 streams derived from the round seed
  kSystemEntropy,  // getrandom(2); not reproducible
};

struct RoundConfig {
  double share_range = safe::kDefaultShareRange;
  uint64_t seed = 0;
  Delivery delivery = Delivery::kRoundRobin;
  ShareRandomness randomness = ShareRandomness::kSeeded;
  int round = 0;
};

enum class UserPhase { kInit, kSharesSent, kObfuscated, kDone };

absl::string_view UserPhaseName(UserPhase phase);

// Scripted deviations used to exercise detection paths.
enum class AdversaryBehavior {
  kNone,
  // Adds `amount` to `coordinate` of the node's obfuscated vector.
  kInflateCoordinate,
  // Sends the next peer a share whose `coordinate` is 2D, compensating in
  // the kept share so the aggregate is unchanged.
  kOutOfRangeShare,
  // Sends its first peer the same share twice.
  kDuplicateShare,
  // Sends an obfuscated vector before any share has arrived.
  kPrematureObfuscated,
};

struct AdversarySpec {
  AdversaryBehavior behavior = AdversaryBehavior::kNone;
  UserId node = 0;
  size_t coordinate = 0;
  double amount = 0.0;
};

class UserNode {
 public:
  UserNode(UserId id, int num_users, safe::FeatureVector secret);

  void set_adversary(const AdversarySpec& spec) { adversary_ = spec; }

  // Splits the secret and returns the N-1 outgoing shares. Init ->
  // SharesSent, or straight to Obfuscated when there are no peers.
  absl::StatusOr<std::vector<Message>> Start(double share_range, RandomSource& rng,
                                             int round);

  absl::StatusOr<std::vector<Message>> Receive(const Message& message);

  UserId id() const { return id_; }
  UserPhase phase() const { return phase_; }
  const safe::FeatureVector& secret() const { return secret_; }
  const std::vector<double>& kept_share() const { return kept_; }
  size_t received_share_count() const { return received_count_; }
  // Shares from peers, indexed by sender; own slot is empty.
  const std::vector<std::optional<std::vector<double>>>& received_shares() const {
    return received_;
  }
  const std::optional<std::vector<double>>& aggregate() const { return aggregate_; }

 private:
  absl::StatusOr<std::vector<Message>> EmitObfuscated();

  UserId id_;
  int num_users_;
  safe::FeatureVector secret_;
  std::vector<double> kept_;
  std::vector<std::optional<std::vector<double>>> received_;
  size_t received_count_ = 0;
  UserPhase phase_ = UserPhase::kInit;
  std::optional<std::vector<double>> aggregate_;
  AdversarySpec adversary_;
  int round_ = 0;
};

class AggregatorNode {
 public:
  AggregatorNode(int num_users, size_t dimension, safe::Bounds per_user_bounds);

  // Buffers an obfuscated vector; once all N have arrived, aggregates and
  // returns one Aggregate message per user.
  absl::StatusOr<std::vector<Message>> Receive(const Message& message);

  size_t received_count() const { return received_count_; }
  const std::optional<safe::FeatureVector>& result() const { return result_; }

 private:
  int num_users_;
  size_t dimension_;
  safe::Bounds per_user_bounds_;
  std::vector<std::optional<safe::ObfuscatedVector>> received_;
  size_t received_count_ = 0;
  std::optional<safe::FeatureVector> result_;
};

// What each user holds once the round is over.
struct UserSnapshot {
  UserId id = 0;
  UserPhase phase = UserPhase::kInit;
  size_t received_shares = 0;
  std::vector<double> kept_share;
  std::vector<std::optional<std::vector<double>>> received;
  std::optional<std::vector<double>> aggregate;
};

struct RoundResult {
  safe::FeatureVector aggregate;
  Transcript transcript;
  std::vector<UserSnapshot> users;
};

// Runs steps 1-5 of the protocol plus the result broadcast. All secrets must
// share one dimension and one set of bounds. Protocol violations and
// undelivered messages return kAborted.
absl::StatusOr<RoundResult> RunRound(std::span<const safe::FeatureVector> secrets,
                                     const RoundConfig& config);

enum class ViolationKind {
  kAggregatorSawSecret,  // aggregator-bound payload equals some secret
  kShareOutOfRange,      // share entry outside [-D, D]
  kSecretObserved,       // a node other than its owner received a secret
};

absl::string_view ViolationKindName(ViolationKind kind);

struct PrivacyViolation {
  size_t message_index = 0;
  std::vector<ViolationKind> kinds;
};

struct PrivacyReport {
  std::vector<PrivacyViolation> violations;

  bool clean() const { return violations.empty(); }
};

// Honest-but-curious audit of a transcript against the true secrets. At most
// one entry per offending message. Aggregate broadcasts are the public
// output of the round and are not audited.
PrivacyReport CheckTranscriptPrivacy(const Transcript& transcript,
                                     std::span<const safe::FeatureVector> secrets);

struct AdversaryOutcome {
  safe::FeatureVector aggregate;
  Transcript transcript;
  safe::RangeValidationReport validation;
};

// Runs a round in which `spec.node` misbehaves and validates the aggregate
// the way the aggregator would before accepting it. Requires N >= 2.
// kDuplicateShare and kPrematureObfuscated abort with a protocol violation.
absl::StatusOr<AdversaryOutcome> InjectAdversary(
    std::span<const safe::FeatureVector> secrets, const RoundConfig& config,
    const AdversarySpec& spec,
    double validation_tolerance = safe::kDefaultValidationTolerance);

}  // namespace safetrend::netsim

#endif  // SAFETREND_NETSIM_H_

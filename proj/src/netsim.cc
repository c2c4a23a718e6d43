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

#include "safetrend/netsim.h"

#include <cmath>
#include <memory>
#include <utility>

#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/strip.h"
#include "absl/strings/str_cat.h"
#include "safetrend/status_macros.h"

namespace safetrend::netsim {
namespace {

constexpr uint64_t kDeliveryStream = 0x64656c6976657279ULL;  // "delivery"

absl::Status Violation(absl::string_view what) {
  return absl::AbortedError(absl::StrCat("protocol violation: ", what));
}

}  // namespace

std::string NodeName(UserId id) {
  return id == kAggregatorId ? std::string("aggregator") : absl::StrCat("user-", id);
}

absl::StatusOr<UserId> ParseNodeName(absl::string_view name) {
  if (name == "aggregator") return kAggregatorId;
  int id;
  if (absl::ConsumePrefix(&name, "user-") && absl::SimpleAtoi(name, &id) && id >= 0) {
    return id;
  }
  return absl::InvalidArgumentError(absl::StrCat("bad node name '", name, "'"));
}

absl::string_view MessageKindName(MessageKind kind) {
  switch (kind) {
    case MessageKind::kShare:
      return "Share";
    case MessageKind::kObfuscated:
      return "Obfuscated";
    case MessageKind::kAggregate:
      return "Aggregate";
  }
  return "?";
}

absl::StatusOr<MessageKind> ParseMessageKind(absl::string_view name) {
  if (name == "Share") return MessageKind::kShare;
  if (name == "Obfuscated") return MessageKind::kObfuscated;
  if (name == "Aggregate") return MessageKind::kAggregate;
  return absl::InvalidArgumentError(absl::StrCat("bad message kind '", name, "'"));
}

absl::string_view UserPhaseName(UserPhase phase) {
  switch (phase) {
    case UserPhase::kInit:
      return "Init";
    case UserPhase::kSharesSent:
      return "SharesSent";
    case UserPhase::kObfuscated:
      return "Obfuscated";
    case UserPhase::kDone:
      return "Done";
  }
  return "?";
}

absl::StatusOr<Delivery> ParseDelivery(absl::string_view name) {
  if (name == "round_robin") return Delivery::kRoundRobin;
  if (name == "seeded_shuffle") return Delivery::kSeededShuffle;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown delivery '", name, "' (want round_robin|seeded_shuffle)"));
}

absl::string_view ViolationKindName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kAggregatorSawSecret:
      return "aggregator_saw_secret";
    case ViolationKind::kShareOutOfRange:
      return "share_out_of_range";
    case ViolationKind::kSecretObserved:
      return "secret_observed";
  }
  return "?";
}

size_t Transcript::Count(MessageKind kind) const {
  size_t n = 0;
  for (const Message& m : messages) n += m.kind == kind ? 1 : 0;
  return n;
}

// ---------------------------------------------------------------------------
// UserNode

UserNode::UserNode(UserId id, int num_users, safe::FeatureVector secret)
    : id_(id),
      num_users_(num_users),
      secret_(std::move(secret)),
      received_(static_cast<size_t>(num_users)) {}

absl::StatusOr<std::vector<Message>> UserNode::Start(double share_range,
                                                     RandomSource& rng, int round) {
  if (phase_ != UserPhase::kInit) {
    return Violation(absl::StrCat(NodeName(id_), " started twice"));
  }
  round_ = round;
  SAFETREND_ASSIGN_OR_RETURN(
      safe::ShareSet shares,
      safe::MakeShares(secret_, id_, num_users_, share_range, rng));
  kept_ = shares.kept();

  std::vector<Message> out;
  out.reserve(static_cast<size_t>(num_users_));
  for (UserId k = 0; k < num_users_; ++k) {
    if (k == id_) continue;
    out.push_back(Message{round, id_, k, MessageKind::kShare,
                          std::move(shares.shares[static_cast<size_t>(k)])});
  }
  phase_ = UserPhase::kSharesSent;

  switch (adversary_.behavior) {
    case AdversaryBehavior::kOutOfRangeShare:
      if (!out.empty() && adversary_.coordinate < kept_.size()) {
        double& entry = out.front().payload[adversary_.coordinate];
        const double planted = 2.0 * share_range;
        kept_[adversary_.coordinate] -= planted - entry;
        entry = planted;
      }
      break;
    case AdversaryBehavior::kDuplicateShare:
      if (!out.empty()) out.push_back(out.front());
      break;
    case AdversaryBehavior::kPrematureObfuscated:
      out.push_back(Message{round, id_, kAggregatorId, MessageKind::kObfuscated,
                            kept_});
      break;
    default:
      break;
  }

  if (num_users_ == 1) {
    SAFETREND_ASSIGN_OR_RETURN(std::vector<Message> obfuscated, EmitObfuscated());
    for (Message& m : obfuscated) out.push_back(std::move(m));
  }
  return out;
}

absl::StatusOr<std::vector<Message>> UserNode::Receive(const Message& message) {
  const std::string me = NodeName(id_);
  switch (message.kind) {
    case MessageKind::kShare: {
      if (message.sender < 0 || message.sender >= num_users_ ||
          message.sender == id_) {
        return Violation(absl::StrCat(me, " got a Share from invalid node ",
                                      NodeName(message.sender)));
      }
      if (phase_ != UserPhase::kSharesSent) {
        return Violation(absl::StrCat(NodeName(message.sender), " sent a Share to ",
                                      me, " in phase ", UserPhaseName(phase_)));
      }
      auto& slot = received_[static_cast<size_t>(message.sender)];
      if (slot.has_value()) {
        return Violation(absl::StrCat(NodeName(message.sender),
                                      " sent a second Share to ", me));
      }
      if (message.payload.size() != secret_.dimension()) {
        return Violation(absl::StrCat(NodeName(message.sender), " sent ", me,
                                      " a Share of length ", message.payload.size()));
      }
      slot = message.payload;
      ++received_count_;
      if (received_count_ == static_cast<size_t>(num_users_ - 1)) {
        return EmitObfuscated();
      }
      return std::vector<Message>{};
    }
    case MessageKind::kAggregate: {
      if (message.sender != kAggregatorId) {
        return Violation(absl::StrCat(NodeName(message.sender),
                                      " sent an Aggregate to ", me));
      }
      if (phase_ != UserPhase::kObfuscated) {
        return Violation(absl::StrCat("aggregator sent ", me,
                                      " an Aggregate in phase ",
                                      UserPhaseName(phase_)));
      }
      aggregate_ = message.payload;
      phase_ = UserPhase::kDone;
      return std::vector<Message>{};
    }
    case MessageKind::kObfuscated:
      break;
  }
  return Violation(absl::StrCat(NodeName(message.sender),
                                " sent an Obfuscated vector to ", me));
}

absl::StatusOr<std::vector<Message>> UserNode::EmitObfuscated() {
  std::vector<std::vector<double>> in_sender_order;
  in_sender_order.reserve(received_count_);
  for (UserId k = 0; k < num_users_; ++k) {
    const auto& slot = received_[static_cast<size_t>(k)];
    if (slot.has_value()) in_sender_order.push_back(*slot);
  }
  SAFETREND_ASSIGN_OR_RETURN(safe::ObfuscatedVector obfuscated,
                             safe::CombineReceived(id_, kept_, in_sender_order));
  if (adversary_.behavior == AdversaryBehavior::kInflateCoordinate &&
      adversary_.coordinate < obfuscated.values.size()) {
    obfuscated.values[adversary_.coordinate] += adversary_.amount;
  }
  phase_ = UserPhase::kObfuscated;
  std::vector<Message> out;
  out.push_back(Message{round_, id_, kAggregatorId, MessageKind::kObfuscated,
                        std::move(obfuscated.values)});
  return out;
}

// ---------------------------------------------------------------------------
// AggregatorNode

AggregatorNode::AggregatorNode(int num_users, size_t dimension,
                               safe::Bounds per_user_bounds)
    : num_users_(num_users),
      dimension_(dimension),
      per_user_bounds_(per_user_bounds),
      received_(static_cast<size_t>(num_users)) {}

absl::StatusOr<std::vector<Message>> AggregatorNode::Receive(const Message& message) {
  if (message.kind != MessageKind::kObfuscated) {
    return Violation(absl::StrCat(NodeName(message.sender), " sent a ",
                                  MessageKindName(message.kind),
                                  " to the aggregator"));
  }
  if (message.sender < 0 || message.sender >= num_users_) {
    return Violation(absl::StrCat("aggregator got a vector from unknown node ",
                                  NodeName(message.sender)));
  }
  auto& slot = received_[static_cast<size_t>(message.sender)];
  if (slot.has_value() || result_.has_value()) {
    return Violation(absl::StrCat(NodeName(message.sender),
                                  " sent a second Obfuscated vector"));
  }
  if (message.payload.size() != dimension_) {
    return Violation(absl::StrCat(NodeName(message.sender),
                                  " sent an Obfuscated vector of length ",
                                  message.payload.size()));
  }
  slot = safe::ObfuscatedVector{message.sender, message.payload};
  ++received_count_;
  if (received_count_ < static_cast<size_t>(num_users_)) {
    return std::vector<Message>{};
  }

  std::vector<safe::ObfuscatedVector> all;
  all.reserve(received_.size());
  for (auto& v : received_) all.push_back(std::move(*v));
  SAFETREND_ASSIGN_OR_RETURN(safe::FeatureVector sum,
                             safe::Aggregate(all, per_user_bounds_));
  result_ = sum;

  std::vector<Message> out;
  out.reserve(static_cast<size_t>(num_users_));
  for (UserId k = 0; k < num_users_; ++k) {
    out.push_back(Message{message.round, kAggregatorId, k, MessageKind::kAggregate,
                          sum.values});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Simulation

namespace {

class Simulation {
 public:
  Simulation(std::span<const safe::FeatureVector> secrets, const RoundConfig& config,
             const AdversarySpec& adversary)
      : secrets_(secrets), config_(config), adversary_(adversary) {}

  absl::StatusOr<RoundResult> Run();

 private:
  absl::Status Validate() const;
  absl::Status CheckEmission(UserId emitter, bool during_start, const Message& m);
  absl::Status Enqueue(UserId emitter, bool during_start,
                       std::vector<Message> messages);
  Message TakeNext();

  std::span<const safe::FeatureVector> secrets_;
  RoundConfig config_;
  AdversarySpec adversary_;
  size_t dimension_ = 0;

  std::vector<UserNode> users_;
  std::optional<AggregatorNode> aggregator_;
  std::vector<bool> sent_obfuscated_;
  bool sent_aggregate_ = false;
  std::vector<Message> pending_;
  size_t pending_head_ = 0;
  std::unique_ptr<RandomSource> delivery_rng_;
};

absl::Status Simulation::Validate() const {
  if (secrets_.empty()) {
    return absl::InvalidArgumentError("a round needs at least one user");
  }
  const safe::Bounds bounds = secrets_.front().bounds;
  for (size_t i = 0; i < secrets_.size(); ++i) {
    const safe::FeatureVector& s = secrets_[i];
    if (s.dimension() != secrets_.front().dimension()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "secret of user ", i, " has dimension ", s.dimension(), ", expected ",
          secrets_.front().dimension()));
    }
    if (s.bounds.lower != bounds.lower || s.bounds.upper != bounds.upper) {
      return absl::InvalidArgumentError(
          absl::StrCat("secret of user ", i, " declares different bounds"));
    }
    if (absl::Status st = safe::CheckFeatureVector(s); !st.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("secret of user ", i, ": ", st.message()));
    }
  }
  return absl::OkStatus();
}

absl::Status Simulation::CheckEmission(UserId emitter, bool during_start,
                                       const Message& m) {
  const std::string who = NodeName(emitter);
  const int n = static_cast<int>(users_.size());
  if (m.sender != emitter) {
    return Violation(absl::StrCat(who, " emitted a message as ", NodeName(m.sender)));
  }
  if (m.payload.size() != dimension_) {
    return Violation(absl::StrCat(who, " emitted a ", MessageKindName(m.kind),
                                  " of length ", m.payload.size()));
  }
  switch (m.kind) {
    case MessageKind::kShare:
      if (emitter == kAggregatorId || !during_start) {
        return Violation(absl::StrCat(who, " emitted a Share outside share distribution"));
      }
      if (m.receiver < 0 || m.receiver >= n || m.receiver == emitter) {
        return Violation(absl::StrCat(who, " addressed a Share to ",
                                      NodeName(m.receiver)));
      }
      return absl::OkStatus();
    case MessageKind::kObfuscated: {
      if (emitter == kAggregatorId || m.receiver != kAggregatorId) {
        return Violation(absl::StrCat(who, " sent an Obfuscated vector to ",
                                      NodeName(m.receiver)));
      }
      const UserNode& node = users_[static_cast<size_t>(emitter)];
      if (node.phase() != UserPhase::kObfuscated ||
          node.received_share_count() != static_cast<size_t>(n - 1)) {
        return Violation(absl::StrCat(who, " emitted an Obfuscated vector in phase ",
                                      UserPhaseName(node.phase()), " with ",
                                      node.received_share_count(), "/", n - 1,
                                      " shares"));
      }
      if (sent_obfuscated_[static_cast<size_t>(emitter)]) {
        return Violation(absl::StrCat(who, " emitted a second Obfuscated vector"));
      }
      sent_obfuscated_[static_cast<size_t>(emitter)] = true;
      return absl::OkStatus();
    }
    case MessageKind::kAggregate:
      if (emitter != kAggregatorId || !aggregator_->result().has_value()) {
        return Violation(absl::StrCat(who, " emitted an Aggregate before the result"));
      }
      if (m.receiver < 0 || m.receiver >= n) {
        return Violation(absl::StrCat("aggregator addressed ", NodeName(m.receiver)));
      }
      return absl::OkStatus();
  }
  return Violation("unknown message kind");
}

absl::Status Simulation::Enqueue(UserId emitter, bool during_start,
                                 std::vector<Message> messages) {
  for (Message& m : messages) {
    SAFETREND_RETURN_IF_ERROR(CheckEmission(emitter, during_start, m));
    pending_.push_back(std::move(m));
  }
  return absl::OkStatus();
}

Message Simulation::TakeNext() {
  if (config_.delivery == Delivery::kRoundRobin) {
    Message m = std::move(pending_[pending_head_]);
    ++pending_head_;
    if (pending_head_ == pending_.size()) {
      pending_.clear();
      pending_head_ = 0;
    }
    return m;
  }
  const size_t live = pending_.size();
  const size_t pick = static_cast<size_t>(delivery_rng_->UniformInt(0, live - 1));
  Message m = std::move(pending_[pick]);
  pending_.erase(pending_.begin() + static_cast<std::ptrdiff_t>(pick));
  return m;
}

absl::StatusOr<RoundResult> Simulation::Run() {
  SAFETREND_RETURN_IF_ERROR(Validate());
  const int n = static_cast<int>(secrets_.size());
  dimension_ = secrets_.front().dimension();

  users_.reserve(secrets_.size());
  for (UserId i = 0; i < n; ++i) {
    users_.emplace_back(i, n, secrets_[static_cast<size_t>(i)]);
    if (adversary_.behavior != AdversaryBehavior::kNone && adversary_.node == i) {
      users_.back().set_adversary(adversary_);
    }
  }
  aggregator_.emplace(n, dimension_, secrets_.front().bounds);
  sent_obfuscated_.assign(secrets_.size(), false);
  delivery_rng_ = std::make_unique<SplitMix64>(DeriveSeed(config_.seed, kDeliveryStream));

  for (UserId i = 0; i < n; ++i) {
    std::unique_ptr<RandomSource> rng;
    if (config_.randomness == ShareRandomness::kSeeded) {
      rng = std::make_unique<SplitMix64>(
          DeriveSeed(config_.seed, static_cast<uint64_t>(i) + 1));
    } else {
      rng = std::make_unique<SystemEntropySource>();
    }
    SAFETREND_ASSIGN_OR_RETURN(
        std::vector<Message> out,
        users_[static_cast<size_t>(i)].Start(config_.share_range, *rng, config_.round));
    SAFETREND_RETURN_IF_ERROR(Enqueue(i, /*during_start=*/true, std::move(out)));
  }

  RoundResult result;
  result.transcript.metadata = TranscriptMetadata{
      n, dimension_, config_.share_range, config_.seed, config_.round};
  while (pending_.size() > pending_head_) {
    Message m = TakeNext();
    absl::StatusOr<std::vector<Message>> replies;
    UserId handler = m.receiver;
    if (m.receiver == kAggregatorId) {
      replies = aggregator_->Receive(m);
    } else if (m.receiver >= 0 && m.receiver < n) {
      replies = users_[static_cast<size_t>(m.receiver)].Receive(m);
    } else {
      return Violation(absl::StrCat(NodeName(m.sender), " addressed unknown node ",
                                    m.receiver));
    }
    result.transcript.messages.push_back(std::move(m));
    if (!replies.ok()) return replies.status();
    SAFETREND_RETURN_IF_ERROR(
        Enqueue(handler, /*during_start=*/false, std::move(replies).value()));
  }

  for (const UserNode& u : users_) {
    if (u.phase() != UserPhase::kDone) {
      return absl::AbortedError(absl::StrCat("round incomplete: ", NodeName(u.id()),
                                             " ended in phase ",
                                             UserPhaseName(u.phase())));
    }
  }
  if (!aggregator_->result().has_value()) {
    return absl::AbortedError("round incomplete: aggregator has no result");
  }

  result.aggregate = *aggregator_->result();
  result.users.reserve(users_.size());
  for (const UserNode& u : users_) {
    result.users.push_back(UserSnapshot{u.id(), u.phase(), u.received_share_count(),
                                        u.kept_share(), u.received_shares(),
                                        u.aggregate()});
  }
  return result;
}

}  // namespace

absl::StatusOr<RoundResult> RunRound(std::span<const safe::FeatureVector> secrets,
                                     const RoundConfig& config) {
  return Simulation(secrets, config, AdversarySpec{}).Run();
}

PrivacyReport CheckTranscriptPrivacy(const Transcript& transcript,
                                     std::span<const safe::FeatureVector> secrets) {
  PrivacyReport report;
  const double range = transcript.metadata.share_range;
  for (size_t i = 0; i < transcript.messages.size(); ++i) {
    const Message& m = transcript.messages[i];
    if (m.kind == MessageKind::kAggregate) continue;
    PrivacyViolation violation{i, {}};

    if (m.kind == MessageKind::kShare) {
      for (double x : m.payload) {
        if (!(std::fabs(x) <= range)) {
          violation.kinds.push_back(ViolationKind::kShareOutOfRange);
          break;
        }
      }
    }
    bool aggregator_saw = false;
    bool observed = false;
    for (size_t owner = 0; owner < secrets.size(); ++owner) {
      if (m.payload != secrets[owner].values) continue;
      if (m.receiver == kAggregatorId) aggregator_saw = true;
      if (m.receiver != static_cast<UserId>(owner)) observed = true;
    }
    if (aggregator_saw) violation.kinds.push_back(ViolationKind::kAggregatorSawSecret);
    if (observed) violation.kinds.push_back(ViolationKind::kSecretObserved);

    if (!violation.kinds.empty()) report.violations.push_back(std::move(violation));
  }
  return report;
}

absl::StatusOr<AdversaryOutcome> InjectAdversary(
    std::span<const safe::FeatureVector> secrets, const RoundConfig& config,
    const AdversarySpec& spec, double validation_tolerance) {
  if (secrets.size() < 2) {
    return absl::InvalidArgumentError("adversary injection needs at least two users");
  }
  if (spec.node < 0 || spec.node >= static_cast<int>(secrets.size())) {
    return absl::InvalidArgumentError(
        absl::StrCat("adversarial node ", spec.node, " is not a user"));
  }
  SAFETREND_ASSIGN_OR_RETURN(RoundResult round,
                             Simulation(secrets, config, spec).Run());
  AdversaryOutcome outcome;
  outcome.validation = safe::ValidateAggregate(
      round.aggregate.values, static_cast<int>(secrets.size()),
      secrets.front().bounds, validation_tolerance);
  outcome.aggregate = std::move(round.aggregate);
  outcome.transcript = std::move(round.transcript);
  return outcome;
}

}  // namespace safetrend::netsim

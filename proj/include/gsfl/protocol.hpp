// Copyright 2026 The GSFL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Simulated admin / client / server message flow.
//
// Roles are plain objects and the network is an ordered, lossless transcript:
// each helper below performs one protocol step, appends the events it causes
// and updates the parties involved. Nothing here is threaded.
//
// The server never holds member secrets. It knows the group's public
// parameters, its own envelope key pair, a directory of client envelope
// public keys (for sealed selection notices) and, after its first fetch in a
// session, the admin's signed session descriptor.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gsfl/bytes.hpp"
#include "gsfl/envelope.hpp"
#include "gsfl/fedlearn.hpp"
#include "gsfl/group_signature.hpp"
#include "gsfl/rng.hpp"

namespace gsfl::protocol {

inline constexpr std::uint8_t kDefaultTtl = 8;

/// Client-to-server update packet. Big-endian on the wire:
/// gid:16 | mid:16 | rand:128 | payload_len:32 | payload | gs_len:16 | gs | ttl:8 | ts:32
struct WireMessage {
  std::uint16_t gid = 0;
  std::uint16_t mid = 0;
  std::array<std::uint8_t, 16> rand{};
  Bytes payload;
  Bytes gs;
  std::uint8_t ttl = kDefaultTtl;
  std::uint32_t ts = 0;

  Bytes serialize() const;
  /// Throws kMalformedMessage unless `bytes` holds exactly one well-formed message.
  static WireMessage deserialize(ByteView bytes);

  friend bool operator==(const WireMessage&, const WireMessage&) = default;
};

enum class Kind {
  kGSReq,
  kGSRep,
  kAdminToServer,
  kLatestGSVerReq,
  kLatestGSVerRep,
  kSelectionNotice,
  kUpdateMsg,
  kGlobalModel,
};

std::string_view kind_name(Kind k);

/// Whether the kind is counted by the signaling model. Admin/server backhaul
/// (announcements and descriptor fetches) is not.
bool is_signal(Kind k);

inline constexpr std::string_view kAdmin = "admin";
inline constexpr std::string_view kServer = "server";
inline constexpr std::string_view kBroadcast = "*";
// Updates travel over an anonymous channel: the server cannot see which
// client posted them.
inline constexpr std::string_view kAnonymous = "anonymous";

struct Event {
  std::uint64_t step = 0;
  std::string sender;
  std::string receiver;
  Kind kind{};
  std::uint32_t session_id = 0;
  Bytes body;
};

/// Seconds-since-epoch source for the ts field.
using Clock = std::function<std::uint32_t()>;
/// Starts at `start` and advances one second per reading.
Clock stepping_clock(std::uint32_t start = 1'700'000'000);

class Network {
 public:
  explicit Network(Clock clock = stepping_clock()) : clock_(std::move(clock)) {}

  const Event& post(std::string_view sender, std::string_view receiver, Kind kind,
                    std::uint32_t session_id, Bytes body);

  std::uint32_t now() { return clock_(); }
  const std::vector<Event>& events() const { return events_; }
  std::size_t count(Kind kind) const;
  std::size_t signal_count() const;
  /// One JSON object per line: step, sender, receiver, kind, session_id, byte_size.
  std::string to_jsonl() const;

 private:
  Clock clock_;
  std::vector<Event> events_;
};

// ---------------------------------------------------------------- roles

class AdminNode {
 public:
  AdminNode(ByteView seed, std::uint16_t group_id);

  const gs::GroupParams& params() const { return params_; }
  const gs::SessionKeys& session() const { return session_; }
  const gs::AdminKeys& keys() const { return keys_; }
  gs::AdminKeys& keys() { return keys_; }

  gs::SessionDescriptor latest_descriptor();
  /// Revokes the member and posts the announcement of the rotated session.
  /// The caller hands that event to receive_announcement().
  const Event& revoke(const gs::MemberId& member_id, std::string reason, Network& net);
  /// Rotates the session without revoking anyone and posts the announcement.
  const Event& rotate(Network& net);
  /// Posts the current session's AdminToServer announcement.
  const Event& announce(Network& net);

 private:
  explicit AdminNode(std::pair<gs::GroupParams, gs::AdminKeys> state);

  gs::GroupParams params_;
  gs::AdminKeys keys_;
  gs::SessionKeys session_;
};

class ClientNode {
 public:
  ClientNode(std::string id, Rng rng);

  const std::string& id() const { return id_; }
  const algebra::GT& inbox_public_key() const { return inbox_.h_srv; }
  bool joined() const { return credential_.has_value(); }
  const std::optional<gs::MemberCredential>& credential() const { return credential_; }
  const std::optional<gs::SessionKeys>& session() const { return session_; }
  /// Session and iteration of the last selection notice this client opened.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> selection() const { return selection_; }

  /// Opens a GSRep or SelectionNotice addressed to this client, or adopts a
  /// GlobalModel. Throws kInvalidArgument for any other kind.
  void receive(const Event& event);
  void set_group_params(const gs::GroupParams& params) { params_ = params; }
  /// Adopts rotated session keys handed over by the admin out of band.
  void adopt_session(const gs::SessionKeys& sess) { session_ = sess; }
  void mark_revoked();

  fl::ModelParams model;

 private:
  friend WireMessage client_submit(ClientNode&, const algebra::GT&, ByteView, Network&);
  std::string id_;
  std::optional<gs::GroupParams> params_;
  Rng rng_;
  envelope::ServerKeys inbox_;
  std::optional<gs::MemberCredential> credential_;
  std::optional<gs::SessionKeys> session_;
  std::optional<std::pair<std::uint32_t, std::uint32_t>> selection_;
  std::uint16_t next_mid_ = 0;
};

enum class Outcome {
  kAccepted,
  kMalformedMessage,
  kWrongGroup,
  kExpired,
  kStaleSession,
  kReplay,
  kAuthFailure,
  kMalformedSignature,
  kSignatureReject,
  kBadPayload,
};

std::string_view outcome_name(Outcome o);

class ServerNode {
 public:
  ServerNode(const gs::GroupParams& params, Rng rng);

  const algebra::GT& public_key() const { return keys_.h_srv; }
  std::uint16_t group_id() const { return params_.group_id; }

  void register_client(std::string id, const algebra::GT& inbox_key);
  std::size_t directory_size() const { return directory_.size(); }

  std::uint32_t session_id() const { return announced_session_; }
  std::uint32_t iteration() const { return iteration_; }
  bool cache_populated() const { return cached_.has_value(); }
  const std::set<std::string>& selected() const { return selected_; }
  const std::map<Outcome, std::size_t>& outcomes() const { return outcomes_; }
  std::size_t rejected() const;
  std::size_t buffered() const { return buffer_.size(); }

  fl::ModelParams model;

  /// Aggregates the buffered updates into `model` (unchanged when nothing
  /// was accepted) and clears the buffer. select_clients() starts the next
  /// iteration.
  const fl::ModelParams& finish_iteration();

  /// Every piece of state the server holds, serialized; used to check that
  /// no member secret ever reaches it.
  Bytes state_bytes() const;

 private:
  friend void receive_announcement(ServerNode&, const Event&);
  friend std::vector<Event> select_clients(ServerNode&, Network&, std::size_t, Rng&);
  friend Outcome server_process(ServerNode&, AdminNode&, Network&, const Event&);

  gs::GroupParams params_;
  envelope::ServerKeys keys_;
  Rng rng_;
  std::map<std::string, algebra::GT> directory_;
  std::uint32_t announced_session_ = 0;
  std::optional<gs::SessionDescriptor> cached_;
  std::uint32_t iteration_ = 0;
  std::set<std::string> selected_;
  std::set<std::array<std::uint8_t, 16>> seen_rand_;
  std::set<Bytes> seen_challenge_;
  std::vector<fl::ClientUpdate> buffer_;
  std::map<Outcome, std::size_t> outcomes_;
};

// ---------------------------------------------------------------- steps

/// GSReq then a sealed GSRep carrying (A, x, session). Throws kRevokedClient
/// for a revoked id and kDuplicateMember for an id that already joined.
void client_join(ClientNode& client, AdminNode& admin, Network& net);

/// Server side of an AdminToServer announcement: adopts the new session id
/// and drops the cached descriptor so the next update triggers a fetch.
void receive_announcement(ServerNode& server, const Event& event);

/// Picks a uniform n-subset of the directory and seals a notice to each.
/// Starts a new iteration. Throws kInvalidCounts when n exceeds the directory.
std::vector<Event> select_clients(ServerNode& server, Network& net, std::size_t n, Rng& rng);

/// Signs `payload` and posts it to the server sealed, as an UpdateMsg.
/// Throws kNotSelected when the client holds no notice for its session and
/// kStaleSession when the notice names a newer session than its keys.
WireMessage client_submit(ClientNode& client, const algebra::GT& server_key, ByteView payload,
                          Network& net);

/// Runs the full acceptance pipeline on one UpdateMsg event. Never throws on
/// bad input: the outcome is returned and counted.
Outcome server_process(ServerNode& server, AdminNode& admin, Network& net, const Event& event);

// ---------------------------------------------------------------- whole runs

struct SessionConfig {
  std::size_t m = 20;
  std::size_t n = 10;
  std::size_t t = 5;
  std::uint64_t seed = 1;
  std::size_t d = 5;
  std::size_t samples = 50;
  double eta = 0.1;
  std::uint16_t group_id = 1;
};

struct RoleTimings {
  double admin_ms = 0;
  double clients_ms = 0;
  double server_ms = 0;
};

struct SessionResult {
  std::vector<Event> transcript;
  std::size_t signal_count = 0;
  std::vector<fl::ModelParams> models;  // global model after each iteration
  std::vector<double> losses;           // index 0 is the initial model
  std::map<Outcome, std::size_t> outcomes;
  std::string transcript_jsonl;
  Bytes server_state;
  RoleTimings timings;  // wall clock, not deterministic
};

/// m joins, initial model distribution, t rounds of select/submit/process/
/// aggregate/broadcast, and a final distribution. Throws kInvalidCounts
/// unless m >= n >= 1 and t >= 1.
SessionResult run_session(const SessionConfig& config, Clock clock = stepping_clock());

}  // namespace gsfl::protocol

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

#include "gsfl/protocol.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <numeric>

#include <fmt/format.h>
#include <json.hpp>

namespace gsfl::protocol {

using algebra::G1;
using algebra::GT;
using algebra::Scalar;

namespace {

constexpr std::size_t kMaxGsBytes = 0xffff;

// Global models travel as the update encoding with a zero sample count.
Bytes encode_model(const fl::ModelParams& model) { return fl::encode_update({model.weights, 0}); }
fl::ModelParams decode_model(ByteView bytes) { return {fl::decode_update(bytes).weights}; }

Bytes encode_session_grant(const gs::MemberCredential& cred, const gs::SessionKeys& sess) {
  ByteWriter w;
  w.raw(cred.A.encode()).raw(cred.x.encode());
  w.u32(sess.session_id).raw(sess.a.encode()).raw(sess.b.encode());
  w.raw(sess.C1.encode()).raw(sess.C2.encode());
  return std::move(w).take();
}

class StopWatch {
 public:
  explicit StopWatch(double& sink) : sink_(sink), start_(std::chrono::steady_clock::now()) {}
  ~StopWatch() {
    sink_ += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  double& sink_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

// ---------------------------------------------------------------- wire format

Bytes WireMessage::serialize() const {
  if (payload.size() > 0xffffffffu) throw Error(Errc::kInvalidArgument, "payload exceeds 32-bit length");
  if (gs.size() > kMaxGsBytes) throw Error(Errc::kInvalidArgument, "gs field exceeds 16-bit length");
  ByteWriter w(2 + 2 + 16 + 4 + payload.size() + 2 + gs.size() + 1 + 4);
  w.u16(gid).u16(mid).raw(rand);
  w.u32(static_cast<std::uint32_t>(payload.size())).raw(payload);
  w.u16(static_cast<std::uint16_t>(gs.size())).raw(gs);
  w.u8(ttl).u32(ts);
  return std::move(w).take();
}

WireMessage WireMessage::deserialize(ByteView bytes) {
  ByteReader r(bytes, Errc::kMalformedMessage);
  WireMessage m;
  m.gid = r.u16();
  m.mid = r.u16();
  auto rnd = r.raw(16);
  std::copy(rnd.begin(), rnd.end(), m.rand.begin());
  auto body = r.raw(r.u32());
  m.payload.assign(body.begin(), body.end());
  auto gs = r.raw(r.u16());
  m.gs.assign(gs.begin(), gs.end());
  m.ttl = r.u8();
  m.ts = r.u32();
  r.expect_done();
  return m;
}

// ---------------------------------------------------------------- network

std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::kGSReq: return "GSReq";
    case Kind::kGSRep: return "GSRep";
    case Kind::kAdminToServer: return "AdminToServer";
    case Kind::kLatestGSVerReq: return "LatestGSVerReq";
    case Kind::kLatestGSVerRep: return "LatestGSVerRep";
    case Kind::kSelectionNotice: return "SelectionNotice";
    case Kind::kUpdateMsg: return "UpdateMsg";
    case Kind::kGlobalModel: return "GlobalModel";
  }
  return "?";
}

bool is_signal(Kind k) {
  return k != Kind::kAdminToServer && k != Kind::kLatestGSVerReq && k != Kind::kLatestGSVerRep;
}

Clock stepping_clock(std::uint32_t start) {
  return [next = start]() mutable { return next++; };
}

const Event& Network::post(std::string_view sender, std::string_view receiver, Kind kind,
                           std::uint32_t session_id, Bytes body) {
  events_.push_back(Event{events_.size(), std::string(sender), std::string(receiver), kind, session_id,
                          std::move(body)});
  return events_.back();
}

std::size_t Network::count(Kind kind) const {
  return static_cast<std::size_t>(
      std::count_if(events_.begin(), events_.end(), [kind](const Event& e) { return e.kind == kind; }));
}

std::size_t Network::signal_count() const {
  return static_cast<std::size_t>(
      std::count_if(events_.begin(), events_.end(), [](const Event& e) { return is_signal(e.kind); }));
}

std::string Network::to_jsonl() const {
  std::string out;
  for (const auto& e : events_) {
    nlohmann::ordered_json j;
    j["step"] = e.step;
    j["sender"] = e.sender;
    j["receiver"] = e.receiver;
    j["kind"] = kind_name(e.kind);
    j["session_id"] = e.session_id;
    j["byte_size"] = e.body.size();
    out += j.dump();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------- admin

AdminNode::AdminNode(ByteView seed, std::uint16_t group_id) : AdminNode(gs::setup(seed, group_id)) {}

AdminNode::AdminNode(std::pair<gs::GroupParams, gs::AdminKeys> state)
    : params_(std::move(state.first)), keys_(std::move(state.second)) {
  session_ = gs::new_session(keys_, params_);
}

gs::SessionDescriptor AdminNode::latest_descriptor() {
  return gs::describe_session(keys_, params_, session_);
}

const Event& AdminNode::announce(Network& net) {
  return net.post(kAdmin, kServer, Kind::kAdminToServer, session_.session_id,
                  latest_descriptor().encode());
}

const Event& AdminNode::rotate(Network& net) {
  session_ = gs::new_session(keys_, params_);
  return announce(net);
}

const Event& AdminNode::revoke(const gs::MemberId& member_id, std::string reason, Network& net) {
  session_ = gs::revoke(keys_, params_, member_id, std::move(reason));
  return announce(net);
}

// ---------------------------------------------------------------- client

ClientNode::ClientNode(std::string id, Rng rng)
    : id_(std::move(id)), rng_(std::move(rng)), inbox_(envelope::server_keygen(rng_)) {}

void ClientNode::mark_revoked() {
  if (credential_) credential_->revoked = true;
}

void ClientNode::receive(const Event& event) {
  if (event.kind == Kind::kGlobalModel) {
    model = decode_model(event.body);
    return;
  }
  if (event.kind != Kind::kGSRep && event.kind != Kind::kSelectionNotice) {
    throw Error(Errc::kInvalidArgument,
                fmt::format("client cannot handle {}", kind_name(event.kind)));
  }
  const Bytes plain = envelope::open(inbox_, envelope::HybridCiphertext::decode(event.body));
  ByteReader r(plain, Errc::kMalformedMessage);
  if (event.kind == Kind::kSelectionNotice) {
    const std::uint32_t sid = r.u32();
    const std::uint32_t iter = r.u32();
    r.expect_done();
    selection_ = {sid, iter};
    return;
  }
  gs::MemberCredential cred;
  cred.member_id = id_;
  cred.A = G1::decode(r.raw(algebra::kG1Bytes));
  cred.x = Scalar::decode(r.raw(algebra::kScalarBytes));
  gs::SessionKeys sess;
  sess.session_id = r.u32();
  sess.a = Scalar::decode(r.raw(algebra::kScalarBytes));
  sess.b = Scalar::decode(r.raw(algebra::kScalarBytes));
  sess.C1 = G1::decode(r.raw(algebra::kG1Bytes));
  sess.C2 = G1::decode(r.raw(algebra::kG1Bytes));
  r.expect_done();
  credential_ = std::move(cred);
  session_ = sess;
}

// ---------------------------------------------------------------- server

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kAccepted: return "accepted";
    case Outcome::kMalformedMessage: return "malformed_message";
    case Outcome::kWrongGroup: return "wrong_group";
    case Outcome::kExpired: return "expired";
    case Outcome::kStaleSession: return "stale_session";
    case Outcome::kReplay: return "replay";
    case Outcome::kAuthFailure: return "auth_failure";
    case Outcome::kMalformedSignature: return "malformed_signature";
    case Outcome::kSignatureReject: return "signature_reject";
    case Outcome::kBadPayload: return "bad_payload";
  }
  return "?";
}

ServerNode::ServerNode(const gs::GroupParams& params, Rng rng)
    : params_(params), keys_(envelope::server_keygen(rng)), rng_(std::move(rng)) {}

void ServerNode::register_client(std::string id, const GT& inbox_key) {
  directory_.insert_or_assign(std::move(id), inbox_key);
}

std::size_t ServerNode::rejected() const {
  std::size_t n = 0;
  for (const auto& [o, c] : outcomes_) {
    if (o != Outcome::kAccepted) n += c;
  }
  return n;
}

const fl::ModelParams& ServerNode::finish_iteration() {
  if (!buffer_.empty()) model = fl::aggregate(buffer_);
  buffer_.clear();
  return model;
}

Bytes ServerNode::state_bytes() const {
  ByteWriter w;
  w.raw(params_.u.encode()).raw(params_.v.encode()).raw(params_.h1.encode()).raw(params_.w.encode());
  w.raw(params_.e_h1_w.encode()).raw(params_.e_h1_g2.encode()).u16(params_.group_id);
  w.raw(keys_.x.encode()).raw(keys_.h_srv.encode());
  for (const auto& [id, pk] : directory_) w.raw(as_bytes(id)).raw(pk.encode());
  w.u32(announced_session_).u32(iteration_);
  if (cached_) w.raw(cached_->encode());
  for (const auto& id : selected_) w.raw(as_bytes(id));
  for (const auto& r : seen_rand_) w.raw(r);
  for (const auto& c : seen_challenge_) w.raw(c);
  for (const auto& u : buffer_) w.raw(fl::encode_update(u));
  for (const auto& [o, c] : outcomes_) w.u8(static_cast<std::uint8_t>(o)).u64(c);
  w.raw(encode_model(model));
  return std::move(w).take();
}

// ---------------------------------------------------------------- steps

void client_join(ClientNode& client, AdminNode& admin, Network& net) {
  ByteWriter req;
  req.u16(static_cast<std::uint16_t>(client.id().size())).raw(as_bytes(client.id()));
  req.raw(client.inbox_public_key().encode());
  const Event& request = net.post(client.id(), kAdmin, Kind::kGSReq, admin.session().session_id,
                                  std::move(req).take());

  ByteReader r(request.body, Errc::kMalformedMessage);
  auto id_bytes = r.raw(r.u16());
  const gs::MemberId id(id_bytes.begin(), id_bytes.end());
  const GT inbox = GT::decode(r.raw(algebra::kGTBytes));

  auto& keys = admin.keys();
  if (auto it = keys.registry.find(id);
      it != keys.registry.end() && it->second.status == gs::MemberStatus::kRevoked) {
    throw Error(Errc::kRevokedClient, "client '" + id + "' was revoked");
  }
  const gs::MemberCredential cred = gs::issue(keys, admin.params(), id);
  const Bytes grant = encode_session_grant(cred, admin.session());
  const Event& reply = net.post(kAdmin, client.id(), Kind::kGSRep, admin.session().session_id,
                                envelope::seal(inbox, grant, keys.rng).encode());
  client.set_group_params(admin.params());
  client.receive(reply);
}

void receive_announcement(ServerNode& server, const Event& event) {
  if (event.kind != Kind::kAdminToServer) {
    throw Error(Errc::kInvalidArgument, "not a session announcement");
  }
  // Only the session number is taken from the push; the descriptor itself is
  // pulled from the admin on first use and checked then.
  server.announced_session_ = event.session_id;
  server.cached_.reset();
  server.selected_.clear();
}

std::vector<Event> select_clients(ServerNode& server, Network& net, std::size_t n, Rng& rng) {
  if (n > server.directory_.size()) {
    throw Error(Errc::kInvalidCounts,
                fmt::format("cannot select {} of {} clients", n, server.directory_.size()));
  }
  std::vector<const std::string*> ids;
  ids.reserve(server.directory_.size());
  for (const auto& [id, _] : server.directory_) ids.push_back(&id);
  // Partial Fisher-Yates: the first n slots end up a uniform n-subset.
  for (std::size_t i = 0; i < n; ++i) {
    std::swap(ids[i], ids[i + rng.uniform(ids.size() - i)]);
  }

  ++server.iteration_;
  server.selected_.clear();
  std::vector<Event> notices;
  notices.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& id = *ids[i];
    server.selected_.insert(id);
    ByteWriter w;
    w.u32(server.announced_session_).u32(server.iteration_);
    Bytes sealed = envelope::seal(server.directory_.at(id), w.bytes(), server.rng_).encode();
    notices.push_back(net.post(kServer, id, Kind::kSelectionNotice, server.announced_session_,
                               std::move(sealed)));
  }
  return notices;
}

WireMessage client_submit(ClientNode& client, const GT& server_key, ByteView payload, Network& net) {
  if (!client.credential_ || !client.session_ || !client.params_) {
    throw Error(Errc::kInvalidSession, "client '" + client.id_ + "' has not joined");
  }
  if (!client.selection_) {
    throw Error(Errc::kNotSelected, "client '" + client.id_ + "' holds no selection notice");
  }
  if (client.selection_->first != client.session_->session_id) {
    throw Error(Errc::kStaleSession,
                fmt::format("client '{}' holds session {} but was selected in session {}", client.id_,
                            client.session_->session_id, client.selection_->first));
  }

  const gs::Signature sig =
      gs::sign(*client.credential_, *client.session_, *client.params_, payload, client.rng_);
  WireMessage msg;
  msg.gid = client.params_->group_id;
  msg.mid = client.next_mid_++;
  client.rng_.fill(msg.rand);
  msg.payload = envelope::seal(server_key, payload, client.rng_).encode();
  msg.gs = sig.encode();
  msg.ttl = kDefaultTtl;
  msg.ts = net.now();
  client.selection_.reset();

  net.post(kAnonymous, kServer, Kind::kUpdateMsg, client.session_->session_id, msg.serialize());
  return msg;
}

Outcome server_process(ServerNode& server, AdminNode& admin, Network& net, const Event& event) {
  auto record = [&server](Outcome o) {
    ++server.outcomes_[o];
    return o;
  };
  if (event.kind != Kind::kUpdateMsg) return record(Outcome::kMalformedMessage);

  WireMessage msg;
  try {
    msg = WireMessage::deserialize(event.body);
  } catch (const Error&) {
    return record(Outcome::kMalformedMessage);
  }
  if (msg.gid != server.params_.group_id) return record(Outcome::kWrongGroup);
  // One simulated router hop.
  if (msg.ttl <= 1) return record(Outcome::kExpired);
  if (event.session_id != server.announced_session_) return record(Outcome::kStaleSession);
  if (!server.seen_rand_.insert(msg.rand).second) return record(Outcome::kReplay);

  if (!server.cached_) {
    ByteWriter req;
    req.u16(server.params_.group_id);
    net.post(kServer, kAdmin, Kind::kLatestGSVerReq, server.announced_session_, std::move(req).take());
    const Event& rep = net.post(kAdmin, kServer, Kind::kLatestGSVerRep, admin.session().session_id,
                                admin.latest_descriptor().encode());
    gs::SessionDescriptor desc = gs::SessionDescriptor::decode(rep.body);
    if (!gs::check_descriptor(server.params_, desc) ||
        desc.session.session_id != server.announced_session_) {
      throw Error(Errc::kInvalidSession, "admin returned a descriptor for a different session");
    }
    server.cached_ = std::move(desc);
  }

  Bytes plain;
  try {
    plain = envelope::open(server.keys_, envelope::HybridCiphertext::decode(msg.payload));
  } catch (const Error& e) {
    return record(e.code() == Errc::kAuthFailure ? Outcome::kAuthFailure : Outcome::kMalformedMessage);
  }

  gs::Signature sig;
  try {
    sig = gs::Signature::decode(msg.gs);
  } catch (const Error&) {
    return record(Outcome::kMalformedSignature);
  }
  if (plain.empty() || gs::verify(server.params_, server.cached_->session, plain, sig) != gs::Verdict::kAccept) {
    return record(Outcome::kSignatureReject);
  }
  if (!server.seen_challenge_.insert(sig.c.encode()).second) return record(Outcome::kReplay);

  fl::ClientUpdate update;
  try {
    update = fl::decode_update(plain);
  } catch (const Error&) {
    return record(Outcome::kBadPayload);
  }
  if (update.sample_count == 0 || update.weights.size() != server.model.weights.size()) {
    return record(Outcome::kBadPayload);
  }
  server.buffer_.push_back(std::move(update));
  return record(Outcome::kAccepted);
}

// ---------------------------------------------------------------- whole runs

SessionResult run_session(const SessionConfig& cfg, Clock clock) {
  if (cfg.n == 0 || cfg.n > cfg.m || cfg.t == 0) {
    throw Error(Errc::kInvalidCounts,
                fmt::format("need m >= n >= 1 and t >= 1, got m={} n={} t={}", cfg.m, cfg.n, cfg.t));
  }
  if (!(cfg.eta > 0.0)) throw Error(Errc::kInvalidArgument, "learning rate must be positive");

  SessionResult result;
  RoleTimings& tm = result.timings;
  Network net(std::move(clock));

  ByteWriter seed_writer;
  seed_writer.raw(as_bytes("gsfl/run")).u64(cfg.seed);
  const Bytes seed = std::move(seed_writer).take();
  const Rng root(seed);

  std::optional<AdminNode> admin_slot;
  {
    StopWatch sw(tm.admin_ms);
    admin_slot.emplace(seed, cfg.group_id);
  }
  AdminNode& admin = *admin_slot;
  ServerNode server(admin.params(), root.fork("server"));
  {
    StopWatch sw(tm.server_ms);
    receive_announcement(server, admin.announce(net));
  }

  const auto datasets = fl::make_synthetic(cfg.seed, cfg.m, cfg.d, cfg.samples);
  std::vector<ClientNode> clients;
  std::map<std::string, std::size_t> index;
  clients.reserve(cfg.m);
  for (std::size_t i = 0; i < cfg.m; ++i) {
    std::string id = fmt::format("client-{:04}", i);
    index[id] = i;
    clients.emplace_back(id, root.fork("client/" + id));
    server.register_client(id, clients.back().inbox_public_key());
  }
  for (auto& c : clients) {
    StopWatch sw(tm.admin_ms);
    client_join(c, admin, net);
  }

  server.model = fl::ModelParams{std::vector<double>(cfg.d, 0.0)};
  for (auto& c : clients) {
    c.receive(net.post(kServer, c.id(), Kind::kGlobalModel, server.session_id(), encode_model(server.model)));
  }
  result.losses.push_back(fl::global_loss(server.model, datasets));

  Rng selection_rng = root.fork("selection");
  for (std::size_t iter = 1; iter <= cfg.t; ++iter) {
    std::vector<Event> notices;
    {
      StopWatch sw(tm.server_ms);
      notices = select_clients(server, net, cfg.n, selection_rng);
    }
    for (const auto& notice : notices) {
      ClientNode& c = clients[index.at(notice.receiver)];
      {
        StopWatch sw(tm.clients_ms);
        c.receive(notice);
        const fl::ClientUpdate update = fl::local_step(c.model, datasets[index.at(c.id())], cfg.eta);
        client_submit(c, server.public_key(), fl::encode_update(update), net);
      }
      StopWatch sw(tm.server_ms);
      const Event update_event = net.events().back();
      server_process(server, admin, net, update_event);
    }
    {
      StopWatch sw(tm.server_ms);
      server.finish_iteration();
    }
    const Event& bc = net.post(kServer, kBroadcast, Kind::kGlobalModel, server.session_id(),
                               encode_model(server.model));
    for (auto& c : clients) c.receive(bc);
    result.models.push_back(server.model);
    result.losses.push_back(fl::global_loss(server.model, datasets));
  }

  for (auto& c : clients) {
    c.receive(net.post(kServer, c.id(), Kind::kGlobalModel, server.session_id(), encode_model(server.model)));
  }

  result.transcript = net.events();
  result.signal_count = net.signal_count();
  result.outcomes = server.outcomes();
  result.transcript_jsonl = net.to_jsonl();
  result.server_state = server.state_bytes();
  return result;
}

}  // namespace gsfl::protocol

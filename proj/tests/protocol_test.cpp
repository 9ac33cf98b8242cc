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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

namespace gsfl::protocol {
namespace {

Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return Errc::kInvalidArgument;
}

bool contains(ByteView haystack, ByteView needle) {
  return !needle.empty() &&
         std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) != haystack.end();
}

// Signals expected from the message flow: m requests, m replies, m initial
// models, per iteration n notices + n updates + one broadcast, m final models.
std::size_t expected_signals(std::size_t m, std::size_t n, std::size_t t) {
  return m + m + m + t * (n + n + 1) + m;
}

WireMessage random_wire(Rng& rng) {
  WireMessage m;
  m.gid = static_cast<std::uint16_t>(rng());
  m.mid = static_cast<std::uint16_t>(rng());
  rng.fill(m.rand);
  m.payload.resize(rng.uniform(2048));
  rng.fill(m.payload);
  m.gs.resize(rng.uniform(400));
  rng.fill(m.gs);
  m.ttl = static_cast<std::uint8_t>(rng());
  m.ts = static_cast<std::uint32_t>(rng());
  return m;
}

// A small joined group with an announced session.
class World : public ::testing::Test {
 protected:
  explicit World(std::size_t m = 6) : admin(as_bytes("protocol-test"), 3), server(admin.params(), Rng::from_u64(1)) {
    receive_announcement(server, admin.announce(net));
    for (std::size_t i = 0; i < m; ++i) {
      clients.emplace_back("member-node-" + std::to_string(i), Rng::from_u64(100 + i));
      server.register_client(clients.back().id(), clients.back().inbox_public_key());
    }
    for (auto& c : clients) client_join(c, admin, net);
    server.model = fl::ModelParams{{0.0, 0.0}};
  }

  ClientNode& by_id(const std::string& id) {
    return *std::find_if(clients.begin(), clients.end(), [&](const ClientNode& c) { return c.id() == id; });
  }

  // Selects everybody and delivers the notices.
  void select_all() {
    for (const auto& e : select_clients(server, net, clients.size(), rng)) by_id(e.receiver).receive(e);
  }

  Event submit(ClientNode& c, const fl::ClientUpdate& u) {
    client_submit(c, server.public_key(), fl::encode_update(u), net);
    return net.events().back();
  }

  Network net;
  AdminNode admin;
  ServerNode server;
  std::vector<ClientNode> clients;
  Rng rng = Rng::from_u64(77);
};

TEST(Wire, HandLaidOutMessage) {
  WireMessage m;
  m.gid = 0x0102;
  m.mid = 0x0304;
  for (std::size_t i = 0; i < 16; ++i) m.rand[i] = static_cast<std::uint8_t>(0xa0 + i);
  m.payload = {0xde, 0xad};
  m.gs = {0xbe};
  m.ttl = 8;
  m.ts = 0x11223344;
  EXPECT_EQ(to_hex(m.serialize()),
            "0102" "0304" "a0a1a2a3a4a5a6a7a8a9aaabacadaeaf" "00000002" "dead" "0001" "be" "08" "11223344");
}

TEST(Wire, RoundTripIsBitExact) {
  Rng rng = Rng::from_u64(3);
  for (int i = 0; i < 1000; ++i) {
    WireMessage m = random_wire(rng);
    Bytes b = m.serialize();
    WireMessage back = WireMessage::deserialize(b);
    ASSERT_EQ(back, m);
    ASSERT_EQ(back.serialize(), b);
  }
}

TEST(Wire, TruncationAndTrailingBytesAreMalformed) {
  Rng rng = Rng::from_u64(4);
  Bytes b = random_wire(rng).serialize();
  for (std::size_t cut : {std::size_t{0}, std::size_t{1}, std::size_t{20}, b.size() - 1}) {
    EXPECT_EQ(error_of([&] { WireMessage::deserialize(ByteView(b).first(cut)); }), Errc::kMalformedMessage);
  }
  b.push_back(0);
  EXPECT_EQ(error_of([&] { WireMessage::deserialize(b); }), Errc::kMalformedMessage);
}

TEST_F(World, JoinGivesUsableCredentials) {
  EXPECT_EQ(net.count(Kind::kGSReq), clients.size());
  EXPECT_EQ(net.count(Kind::kGSRep), clients.size());
  for (const auto& c : clients) {
    ASSERT_TRUE(c.joined());
    EXPECT_EQ(c.session()->session_id, admin.session().session_id);
    Bytes msg = {1, 2, 3};
    auto sig = gs::sign(*c.credential(), *c.session(), admin.params(), msg, rng);
    EXPECT_EQ(gs::verify(admin.params(), admin.session().public_view(), msg, sig), gs::Verdict::kAccept);
  }
}

TEST_F(World, JoinErrors) {
  EXPECT_EQ(error_of([&] { client_join(clients[0], admin, net); }), Errc::kDuplicateMember);
  admin.revoke(clients[1].id(), "test", net);
  ClientNode again(clients[1].id(), Rng::from_u64(9));
  EXPECT_EQ(error_of([&] { client_join(again, admin, net); }), Errc::kRevokedClient);
}

TEST_F(World, SelectionCounts) {
  auto all = select_clients(server, net, clients.size(), rng);
  EXPECT_EQ(all.size(), clients.size());
  EXPECT_EQ(server.selected().size(), clients.size());

  const std::size_t before = net.events().size();
  EXPECT_TRUE(select_clients(server, net, 0, rng).empty());
  EXPECT_EQ(net.events().size(), before);
  EXPECT_EQ(error_of([&] { select_clients(server, net, clients.size() + 1, rng); }), Errc::kInvalidCounts);
}

TEST_F(World, SelectionNoticeOnlyOpensForItsRecipient) {
  auto notices = select_clients(server, net, 2, rng);
  for (const auto& n : notices) {
    for (auto& c : clients) {
      if (c.id() == n.receiver) {
        c.receive(n);
        EXPECT_EQ(c.selection()->second, server.iteration());
      } else {
        EXPECT_EQ(error_of([&] { c.receive(n); }), Errc::kAuthFailure);
      }
    }
  }
}

TEST(Selection, ReproducibleAndRoughlyUniform) {
  auto pick = [](std::uint64_t seed, std::size_t m, std::size_t n) {
    AdminNode admin(as_bytes("sel"), 1);
    ServerNode server(admin.params(), Rng::from_u64(2));
    Network net;
    for (std::size_t i = 0; i < m; ++i) {
      server.register_client("k" + std::to_string(i), algebra::PairingContext::standard().gt);
    }
    Rng rng = Rng::from_u64(seed);
    select_clients(server, net, n, rng);
    return server.selected();
  };
  EXPECT_EQ(pick(5, 200, 100), pick(5, 200, 100));
  EXPECT_NE(pick(5, 200, 100), pick(6, 200, 100));

  // Each of 10 clients is picked with probability 3/10.
  AdminNode admin(as_bytes("sel"), 1);
  ServerNode server(admin.params(), Rng::from_u64(2));
  Network net;
  for (int i = 0; i < 10; ++i) server.register_client(std::to_string(i), algebra::PairingContext::standard().gt);
  Rng rng = Rng::from_u64(8);
  std::map<std::string, int> hits;
  const int trials = 600;
  for (int i = 0; i < trials; ++i) {
    for (const auto& e : select_clients(server, net, 3, rng)) ++hits[e.receiver];
  }
  for (const auto& [id, h] : hits) EXPECT_NEAR(h, trials * 0.3, 50) << id;
}

TEST_F(World, SubmittedUpdateIsRecoveredExactly) {
  select_all();
  fl::ClientUpdate u{{0.125, -3.5}, 40};
  Event e = submit(clients[0], u);
  EXPECT_EQ(e.sender, kAnonymous);
  EXPECT_EQ(server_process(server, admin, net, e), Outcome::kAccepted);
  EXPECT_EQ(server.finish_iteration().weights, u.weights);
}

TEST_F(World, SubmitPreconditions) {
  fl::ClientUpdate u{{1.0, 1.0}, 1};
  EXPECT_EQ(error_of([&] { submit(clients[0], u); }), Errc::kNotSelected);
  select_all();
  submit(clients[0], u);
  // A notice is consumed by the submission it authorizes.
  EXPECT_EQ(error_of([&] { submit(clients[0], u); }), Errc::kNotSelected);

  // After a rotation the server selects under the new session while the
  // client still holds the old keys.
  receive_announcement(server, admin.rotate(net));
  select_all();
  EXPECT_EQ(error_of([&] { submit(clients[1], u); }), Errc::kStaleSession);
  clients[1].adopt_session(admin.session());
  Event e = submit(clients[1], u);
  EXPECT_EQ(server_process(server, admin, net, e), Outcome::kAccepted);
}

TEST_F(World, ExactlyOneFetchPerSession) {
  for (int iter = 0; iter < 4; ++iter) {
    select_all();
    for (auto& c : clients) {
      ASSERT_EQ(server_process(server, admin, net, submit(c, {{1.0, 2.0}, 3})), Outcome::kAccepted);
    }
    server.finish_iteration();
  }
  EXPECT_EQ(net.count(Kind::kLatestGSVerReq), 1u);
  EXPECT_EQ(net.count(Kind::kLatestGSVerRep), 1u);
  EXPECT_TRUE(server.cache_populated());

  receive_announcement(server, admin.rotate(net));
  EXPECT_FALSE(server.cache_populated());
  for (auto& c : clients) c.adopt_session(admin.session());
  select_all();
  for (auto& c : clients) {
    ASSERT_EQ(server_process(server, admin, net, submit(c, {{1.0, 2.0}, 3})), Outcome::kAccepted);
  }
  EXPECT_EQ(net.count(Kind::kLatestGSVerReq), 2u);
}

TEST_F(World, HonestSubmissionsAllAccepted) {
  int accepted = 0;
  while (accepted < 100) {
    select_all();
    for (auto& c : clients) {
      if (accepted == 100) break;
      fl::ClientUpdate u{{rng.normal(), rng.normal()}, static_cast<std::uint32_t>(1 + rng.uniform(50))};
      accepted += server_process(server, admin, net, submit(c, u)) == Outcome::kAccepted;
    }
    server.finish_iteration();
  }
  EXPECT_EQ(server.outcomes().at(Outcome::kAccepted), 100u);
  EXPECT_EQ(server.rejected(), 0u);
}

TEST_F(World, BadUpdatesAreRejectedAndCounted) {
  select_all();
  const fl::ClientUpdate good{{1.0, 1.0}, 10};
  Event honest = submit(clients[0], good);
  ASSERT_EQ(server_process(server, admin, net, honest), Outcome::kAccepted);

  // Same bytes again.
  EXPECT_EQ(server_process(server, admin, net, honest), Outcome::kReplay);

  // Garbage.
  Event garbage = honest;
  garbage.body = {1, 2, 3};
  EXPECT_EQ(server_process(server, admin, net, garbage), Outcome::kMalformedMessage);

  auto rewrap = [&](auto&& edit) {
    Event e = submit(clients[1], good);
    WireMessage w = WireMessage::deserialize(e.body);
    edit(w);
    e.body = w.serialize();
    return e;
  };
  select_all();
  EXPECT_EQ(server_process(server, admin, net, rewrap([](WireMessage& w) { w.gid ^= 1; })), Outcome::kWrongGroup);
  select_all();
  EXPECT_EQ(server_process(server, admin, net, rewrap([](WireMessage& w) { w.ttl = 1; })), Outcome::kExpired);
  select_all();
  EXPECT_EQ(server_process(server, admin, net, rewrap([](WireMessage& w) { w.payload.back() ^= 1; })),
            Outcome::kAuthFailure);
  select_all();
  EXPECT_EQ(server_process(server, admin, net, rewrap([](WireMessage& w) { w.gs.resize(10); })),
            Outcome::kMalformedSignature);
  select_all();
  EXPECT_EQ(server_process(server, admin, net, rewrap([](WireMessage& w) { w.gs.back() ^= 1; })),
            Outcome::kSignatureReject);

  // A valid signature over a different payload, re-encrypted correctly.
  select_all();
  Event swapped = submit(clients[2], good);
  {
    WireMessage w = WireMessage::deserialize(swapped.body);
    Bytes other = fl::encode_update({{9.0, 9.0}, 10});
    Rng r = Rng::from_u64(5);
    w.payload = envelope::seal(server.public_key(), other, r).encode();
    swapped.body = w.serialize();
  }
  EXPECT_EQ(server_process(server, admin, net, swapped), Outcome::kSignatureReject);

  // Stale session id on the envelope of the event.
  select_all();
  Event stale = submit(clients[3], good);
  stale.session_id += 7;
  EXPECT_EQ(server_process(server, admin, net, stale), Outcome::kStaleSession);

  EXPECT_EQ(server.outcomes().at(Outcome::kAccepted), 1u);
  EXPECT_EQ(server.rejected(), 9u);
  EXPECT_EQ(server.finish_iteration().weights, good.weights);
}

TEST_F(World, AggregateIsIndependentOfWhoSentWhat) {
  std::vector<fl::ClientUpdate> grads;
  for (std::size_t i = 0; i < clients.size(); ++i) {
    grads.push_back({{rng.normal(), rng.normal()}, static_cast<std::uint32_t>(1 + i * 7)});
  }
  auto run = [&](const std::vector<std::size_t>& assignment) {
    ServerNode fresh(admin.params(), Rng::from_u64(1));
    fresh.model = server.model;
    receive_announcement(fresh, admin.announce(net));
    for (const auto& c : clients) fresh.register_client(c.id(), c.inbox_public_key());
    for (const auto& e : select_clients(fresh, net, clients.size(), rng)) by_id(e.receiver).receive(e);
    std::vector<Outcome> outcomes;
    for (std::size_t i = 0; i < clients.size(); ++i) {
      client_submit(clients[i], fresh.public_key(), fl::encode_update(grads[assignment[i]]), net);
      outcomes.push_back(server_process(fresh, admin, net, Event(net.events().back())));
    }
    return std::pair{fresh.finish_iteration(), outcomes};
  };
  std::vector<std::size_t> perm(clients.size());
  std::iota(perm.begin(), perm.end(), 0);
  auto [base, base_outcomes] = run(perm);
  for (int i = 0; i < 3; ++i) {
    std::shuffle(perm.begin(), perm.end(), rng);
    auto [other, other_outcomes] = run(perm);
    EXPECT_EQ(other, base);  // bit-identical doubles
    EXPECT_EQ(other_outcomes, base_outcomes);
  }
}

TEST(RunSession, SignalCountMatchesFlow) {
  for (auto [m, n, t] : {std::tuple{4, 2, 1}, std::tuple{5, 5, 3}, std::tuple{7, 3, 4}}) {
    SessionConfig cfg;
    cfg.m = m;
    cfg.n = n;
    cfg.t = t;
    cfg.d = 3;
    cfg.samples = 10;
    SessionResult r = run_session(cfg);
    EXPECT_EQ(r.signal_count, expected_signals(m, n, t)) << m << "/" << n << "/" << t;
    EXPECT_EQ(std::count_if(r.transcript.begin(), r.transcript.end(),
                            [](const Event& e) { return e.kind == Kind::kLatestGSVerReq; }),
              1);
    EXPECT_EQ(r.outcomes.at(Outcome::kAccepted), static_cast<std::size_t>(n * t));
    EXPECT_EQ(r.models.size(), static_cast<std::size_t>(t));
    EXPECT_EQ(r.losses.size(), static_cast<std::size_t>(t + 1));
  }
}

TEST(RunSession, TableScaleSingleIteration) {
  SessionConfig cfg;
  cfg.m = 200;
  cfg.n = 100;
  cfg.t = 1;
  cfg.d = 2;
  cfg.samples = 5;
  EXPECT_EQ(run_session(cfg).signal_count, 1001u);
}

TEST(RunSession, InvalidCounts) {
  SessionConfig cfg;
  cfg.t = 0;
  EXPECT_EQ(error_of([&] { run_session(cfg); }), Errc::kInvalidCounts);
  cfg.t = 1;
  cfg.n = cfg.m + 1;
  EXPECT_EQ(error_of([&] { run_session(cfg); }), Errc::kInvalidCounts);
  cfg.n = 0;
  EXPECT_EQ(error_of([&] { run_session(cfg); }), Errc::kInvalidCounts);
}

TEST(RunSession, DeterministicTranscript) {
  SessionConfig cfg;
  cfg.m = 6;
  cfg.n = 3;
  cfg.t = 2;
  cfg.seed = 7;
  SessionResult a = run_session(cfg), b = run_session(cfg);
  EXPECT_EQ(a.transcript_jsonl, b.transcript_jsonl);
  EXPECT_EQ(a.losses, b.losses);
  EXPECT_EQ(a.server_state, b.server_state);
  const std::string first = a.transcript_jsonl.substr(0, a.transcript_jsonl.find('\n'));
  EXPECT_EQ(first.rfind(R"({"step":0,"sender":"admin","receiver":"server","kind":"AdminToServer")", 0), 0u)
      << first;

  cfg.seed = 8;
  EXPECT_NE(run_session(cfg).transcript_jsonl, a.transcript_jsonl);
}

TEST(RunSession, RandNeverRepeatsWithinSession) {
  SessionConfig cfg;
  cfg.m = 8;
  cfg.n = 8;
  cfg.t = 6;
  std::set<std::array<std::uint8_t, 16>> rands;
  std::size_t updates = 0;
  for (const auto& e : run_session(cfg).transcript) {
    if (e.kind != Kind::kUpdateMsg) continue;
    ++updates;
    rands.insert(WireMessage::deserialize(e.body).rand);
  }
  EXPECT_EQ(updates, 48u);
  EXPECT_EQ(rands.size(), updates);
}

TEST_F(World, ServerNeverSeesMemberSecrets) {
  for (int iter = 0; iter < 2; ++iter) {
    select_all();
    for (auto& c : clients) server_process(server, admin, net, submit(c, {{1.0, 2.0}, 3}));
    server.finish_iteration();
  }
  std::vector<Bytes> secrets;
  for (const auto& c : clients) {
    secrets.push_back(c.credential()->A.encode());
    secrets.push_back(c.credential()->x.encode());
  }
  secrets.push_back(admin.session().a.encode());
  secrets.push_back(admin.session().b.encode());

  const Bytes state = server.state_bytes();
  for (const auto& s : secrets) {
    EXPECT_FALSE(contains(state, s));
    for (const auto& e : net.events()) EXPECT_FALSE(contains(e.body, s)) << kind_name(e.kind);
  }
}

TEST_F(World, NoPlaintextRosterInTranscript) {
  for (int iter = 0; iter < 3; ++iter) {
    for (const auto& e : select_clients(server, net, 3, rng)) by_id(e.receiver).receive(e);
  }
  for (const auto& e : net.events()) {
    if (e.kind == Kind::kGSReq) continue;  // a client naming itself to the admin
    for (const auto& c : clients) {
      EXPECT_FALSE(contains(e.body, as_bytes(c.id()))) << kind_name(e.kind) << " names " << c.id();
    }
  }
}

}  // namespace
}  // namespace gsfl::protocol

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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes. Values that come from a derivation are compared
// against an independent computation here, never against the library itself.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "gsfl/algebra.hpp"
#include "gsfl/costmodel.hpp"
#include "gsfl/envelope.hpp"
#include "gsfl/errors.hpp"
#include "gsfl/fedlearn.hpp"
#include "gsfl/group_signature.hpp"
#include "gsfl/harness.hpp"
#include "gsfl/protocol.hpp"
#include "gsfl/rng.hpp"
#include "reference_tables.hpp"

namespace {

using namespace gsfl;
using algebra::GT;
using algebra::Scalar;

// Records the first failed expectation of a criterion.
struct Verdict {
  std::string failure;
  std::size_t checks = 0;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failure.empty()) failure = what;
  }
};

struct Criterion {
  int number;
  std::string title;
  double budget_s;  // wall-clock limit; 0 for none
  std::function<void(Verdict&)> body;
};

bool contains(ByteView haystack, ByteView needle) {
  return !needle.empty() &&
         std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) != haystack.end();
}

Errc error_of(const std::function<void()>& fn, Errc none = Errc::kInvalidArgument) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return none;
}

// ---------------------------------------------------------------- 1-4

void gsfl_computation_totals(Verdict& v) {
  for (std::size_t i = 0; i < reference::kIterations.size(); ++i) {
    const auto t = reference::kIterations[i];
    const double want = std::stod(std::string(reference::kGsflTotalsMs[i]));
    const double got = cost::gsfl_computation(t).ms();
    v.expect(std::abs(got - want) <= 0.01, fmt::format("t={}: {} ms vs {} ms", t, got, want));
  }
}

void signaling_counts(Verdict& v) {
  using cost::Algorithm;
  v.expect(cost::signaling(Algorithm::kGsfl, 1, 200, 100) == 1001, "GSFL t=1");
  v.expect(cost::signaling(Algorithm::kGsfl, 1000, 200, 100) == 201800, "GSFL t=1000");
  v.expect(cost::signaling(Algorithm::kBonawitz, 1, 200, 100) == 10701, "Bonawitz t=1");
}

void communication_bytes(Verdict& v) {
  using cost::Algorithm;
  v.expect(cost::communication(Algorithm::kGsfl, 1) == 690, "GSFL t=1");
  v.expect(cost::communication(Algorithm::kGsfl, 1000) == 690000, "GSFL t=1000");
  for (const auto& row : reference::kRows) {
    if (row.alg == Algorithm::kGsfl) continue;
    for (std::size_t i = 0; i < reference::kIterations.size(); ++i) {
      const auto t = reference::kIterations[i];
      const auto got = cost::communication(row.alg, t);
      v.expect(got == row.communication_bytes[i],
               fmt::format("{} t={}: {} vs {}", cost::algorithm_name(row.alg), t, got, row.communication_bytes[i]));
    }
  }
}

void message_size(Verdict& v) {
  const auto table = cost::message_size_table();
  std::uint32_t sum = 0;
  for (const auto& f : table.fields) sum += f.bits;
  v.expect(sum == 2763 && table.total_bits == 2763, fmt::format("total {} bits", table.total_bits));
  v.expect(table.bytes == 345, fmt::format("{} bytes", table.bytes));
}

// ---------------------------------------------------------------- 5-7

struct Group {
  explicit Group(std::string_view seed, std::size_t members, std::size_t sessions, std::uint16_t gid = 9)
      : state(gs::setup(as_bytes(seed), gid)), rng(Rng(as_bytes(seed)).fork("group")) {
    for (std::size_t i = 0; i < members; ++i) {
      creds.push_back(gs::issue(state.second, state.first, fmt::format("accept-member-{:02}", i)));
    }
    for (std::size_t s = 0; s < sessions; ++s) sess.push_back(gs::new_session(state.second, state.first));
  }
  const gs::GroupParams& params() const { return state.first; }
  gs::AdminKeys& admin() { return state.second; }

  Bytes random_message() {
    Bytes m(1 + rng.uniform(256));
    rng.fill(m);
    return m;
  }

  std::pair<gs::GroupParams, gs::AdminKeys> state;
  std::vector<gs::MemberCredential> creds;
  std::vector<gs::SessionKeys> sess;
  Rng rng;
};

void signature_completeness(Verdict& v) {
  Group g("acceptance/completeness", 25, 8);
  std::size_t accepted = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto& cred = g.creds[g.rng.uniform(g.creds.size())];
    const auto& sess = g.sess[g.rng.uniform(g.sess.size())];
    const Bytes msg = g.random_message();
    const gs::Signature sig = gs::sign(cred, sess, g.params(), msg, g.rng);
    const gs::Signature wire = gs::Signature::decode(sig.encode());
    if (gs::verify(g.params(), sess.public_view(), msg, wire) == gs::Verdict::kAccept) ++accepted;
  }
  v.expect(accepted == 1000, fmt::format("{}/1000 accepted", accepted));
}

void tamper_soundness(Verdict& v) {
  Group g("acceptance/tamper", 5, 2);
  std::size_t rejected = 0;
  constexpr int kTrials = 500;
  for (int i = 0; i < kTrials; ++i) {
    const auto& cred = g.creds[i % g.creds.size()];
    const auto& sess = g.sess[i % g.sess.size()];
    Bytes msg = g.random_message();
    Bytes enc = gs::sign(cred, sess, g.params(), msg, g.rng).encode();
    // Target 0 is the message, 1..7 the signature components C3, c, s1..s5.
    const int target = i % 8;
    if (target == 0) {
      msg[g.rng.uniform(msg.size())] ^= static_cast<std::uint8_t>(1u << g.rng.uniform(8));
    } else {
      const std::size_t begin = target == 1 ? 0 : algebra::kG1Bytes + (target - 2) * algebra::kScalarBytes;
      const std::size_t width = target == 1 ? algebra::kG1Bytes : algebra::kScalarBytes;
      enc[begin + g.rng.uniform(width)] ^= static_cast<std::uint8_t>(1u << g.rng.uniform(8));
    }
    try {
      const gs::Signature sig = gs::Signature::decode(enc);
      if (gs::verify(g.params(), sess.public_view(), msg, sig) == gs::Verdict::kReject) ++rejected;
    } catch (const Error& e) {
      if (e.code() == Errc::kMalformedSignature) ++rejected;
    }
  }
  v.expect(rejected == kTrials, fmt::format("{}/{} rejected", rejected, kTrials));
}

void open_and_trace(Verdict& v) {
  Group g("acceptance/open", 20, 3);
  for (const auto& sess : g.sess) {
    for (const auto& cred : g.creds) {
      const gs::Signature sig = gs::sign(cred, sess, g.params(), g.random_message(), g.rng);
      const gs::Opened o = gs::open(g.admin(), g.params(), sess, sig);
      v.expect(o.member_id == cred.member_id,
               fmt::format("session {}: {} opened as {}", sess.session_id, cred.member_id, o.member_id));
    }
  }
  Group foreign("acceptance/open/foreign", 3, 1, g.params().group_id);
  for (const auto& cred : foreign.creds) {
    const gs::Signature sig = gs::sign(cred, foreign.sess[0], foreign.params(), foreign.random_message(), foreign.rng);
    for (const auto& sess : g.sess) {
      const Errc code = error_of([&] { gs::open(g.admin(), g.params(), sess, sig); });
      v.expect(code == Errc::kUnknownMember, "foreign signature did not report an unknown member");
    }
  }
}

// ---------------------------------------------------------------- 8-9

void textbook_elgamal(Verdict& v) {
  Rng rng = Rng::from_u64(8);
  for (int i = 0; i < 100; ++i) {
    const envelope::ServerKeys keys = envelope::server_keygen(rng);
    const GT m = GT::random(rng);
    const auto ct = envelope::encrypt_textbook(keys.h_srv, m, rng);
    v.expect(envelope::decrypt_textbook(keys, envelope::TextbookCiphertext::decode(ct.encode())) == m,
             "textbook round trip");
    // r - x is the additive inverse of x modulo the group order.
    v.expect(ct.c1.pow(keys.x) * ct.c1.pow(Scalar() - keys.x) == GT::identity(), "inverse identity");
  }
}

void hybrid_envelope(Verdict& v) {
  Rng rng = Rng::from_u64(9);
  const envelope::ServerKeys keys = envelope::server_keygen(rng);
  for (std::size_t size : {std::size_t{0}, std::size_t{1}, std::size_t{1024}, std::size_t{1'000'000}}) {
    Bytes payload(size);
    rng.fill(payload);
    const auto ct = envelope::seal(keys.h_srv, payload, rng);
    v.expect(envelope::open(keys, envelope::HybridCiphertext::decode(ct.encode())) == payload,
             fmt::format("round trip of {} bytes", size));
  }
  Bytes payload(512);
  rng.fill(payload);
  const auto original = envelope::seal(keys.h_srv, payload, rng);
  std::size_t auth_failures = 0;
  for (int i = 0; i < 100; ++i) {
    envelope::HybridCiphertext ct = original;
    if (i % 10 == 9) {
      ct.c1 = GT::random(rng);  // a different encapsulation
    } else {
      ct.sealed[rng.uniform(ct.sealed.size())] ^= static_cast<std::uint8_t>(1u << rng.uniform(8));
    }
    if (error_of([&] { envelope::open(keys, ct); }) == Errc::kAuthFailure) ++auth_failures;
  }
  v.expect(auth_failures == 100, fmt::format("{}/100 tampered envelopes failed authentication", auth_failures));
}

// ---------------------------------------------------------------- 10-13

void fedavg_oracle(Verdict& v) {
  Rng rng = Rng::from_u64(10);
  double worst = 0.0, worst_sum = 0.0;
  for (int set = 0; set < 100; ++set) {
    const std::size_t k = 1 + rng.uniform(30), d = 1 + rng.uniform(12);
    std::vector<fl::ClientUpdate> updates(k);
    for (auto& u : updates) {
      for (std::size_t j = 0; j < d; ++j) u.weights.push_back(rng.normal() * std::pow(10.0, rng.uniform(5)));
      u.sample_count = static_cast<std::uint32_t>(1 + rng.uniform(10'000));
    }
    long double total = 0;
    for (const auto& u : updates) total += u.sample_count;
    const fl::ModelParams got = fl::aggregate(updates);
    for (std::size_t j = 0; j < d; ++j) {
      long double want = 0, scale = 0;
      for (const auto& u : updates) {
        want += static_cast<long double>(u.sample_count) * u.weights[j] / total;
        scale += static_cast<long double>(u.sample_count) * std::fabs(u.weights[j]) / total;
      }
      worst = std::max(worst, static_cast<double>(std::fabs(got.weights[j] - want) / scale));
    }
    const auto p = fl::aggregation_weights(updates);
    worst_sum = std::max(worst_sum, std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0));
  }
  v.expect(worst <= 1e-12, fmt::format("relative error {:.3g}", worst));
  v.expect(worst_sum <= 1e-12, fmt::format("weights sum off by {:.3g}", worst_sum));
}

void caching_and_wire(Verdict& v) {
  protocol::SessionConfig cfg;
  cfg.m = 20;
  cfg.n = 10;
  cfg.t = 5;
  const auto r = protocol::run_session(cfg);
  const auto fetches = std::count_if(r.transcript.begin(), r.transcript.end(),
                                     [](const protocol::Event& e) { return e.kind == protocol::Kind::kLatestGSVerReq; });
  v.expect(fetches == 1, fmt::format("{} descriptor requests", fetches));

  Rng rng = Rng::from_u64(11);
  for (int i = 0; i < 1000; ++i) {
    protocol::WireMessage m;
    m.gid = static_cast<std::uint16_t>(rng());
    m.mid = static_cast<std::uint16_t>(rng());
    rng.fill(m.rand);
    m.payload.resize(rng.uniform(4096));
    rng.fill(m.payload);
    m.gs.resize(rng.uniform(512));
    rng.fill(m.gs);
    m.ttl = static_cast<std::uint8_t>(rng());
    m.ts = static_cast<std::uint32_t>(rng());
    const Bytes wire = m.serialize();
    v.expect(wire.size() == 2 + 2 + 16 + 4 + m.payload.size() + 2 + m.gs.size() + 1 + 4, "wire length");
    const auto back = protocol::WireMessage::deserialize(wire);
    v.expect(back == m && back.serialize() == wire, "wire round trip");
  }
}

void curious_server(Verdict& v) {
  using namespace protocol;
  Network net;
  AdminNode admin(as_bytes("acceptance/curious"), 4);
  std::vector<ClientNode> clients;
  for (int i = 0; i < 6; ++i) clients.emplace_back(fmt::format("acceptance-client-{}", i), Rng::from_u64(300 + i));
  for (auto& c : clients) client_join(c, admin, net);

  Rng rng = Rng::from_u64(12);
  std::vector<fl::ClientUpdate> grads;
  for (int i = 0; i < 6; ++i) {
    grads.push_back({{rng.normal(), rng.normal(), rng.normal()}, static_cast<std::uint32_t>(1 + rng.uniform(500))});
  }
  std::vector<Bytes> server_states;
  auto run = [&](const std::vector<std::size_t>& assignment) {
    ServerNode server(admin.params(), Rng::from_u64(13));
    server.model = fl::ModelParams{{0.0, 0.0, 0.0}};
    receive_announcement(server, admin.announce(net));
    for (const auto& c : clients) server.register_client(c.id(), c.inbox_public_key());
    for (const auto& e : select_clients(server, net, clients.size(), rng)) {
      std::find_if(clients.begin(), clients.end(), [&](const ClientNode& c) { return c.id() == e.receiver; })
          ->receive(e);
    }
    for (std::size_t i = 0; i < clients.size(); ++i) {
      client_submit(clients[i], server.public_key(), fl::encode_update(grads[assignment[i]]), net);
      const Event e = net.events().back();
      v.expect(server_process(server, admin, net, e) == Outcome::kAccepted, "honest update rejected");
    }
    const fl::ModelParams model = server.finish_iteration();
    server_states.push_back(server.state_bytes());
    return model;
  };
  std::vector<std::size_t> perm(clients.size());
  std::iota(perm.begin(), perm.end(), 0);
  const fl::ModelParams base = run(perm);
  for (int round = 0; round < 5; ++round) {
    std::shuffle(perm.begin(), perm.end(), rng);
    const fl::ModelParams other = run(perm);
    v.expect(other.weights.size() == base.weights.size() &&
                 std::memcmp(other.weights.data(), base.weights.data(), base.weights.size() * sizeof(double)) == 0,
             "aggregate is not bit-identical under permutation");
  }

  std::vector<Bytes> secrets{admin.session().a.encode(), admin.session().b.encode()};
  for (const auto& c : clients) {
    secrets.push_back(c.credential()->A.encode());
    secrets.push_back(c.credential()->x.encode());
  }
  for (const auto& s : secrets) {
    for (const auto& state : server_states) v.expect(!contains(state, s), "server state holds a member secret");
    for (const auto& e : net.events()) {
      if (e.receiver == kServer || e.receiver == kBroadcast) {
        v.expect(!contains(e.body, s), fmt::format("{} to the server holds a member secret", kind_name(e.kind)));
      }
    }
  }
}

void convergence(Verdict& v) {
  protocol::SessionConfig cfg;
  cfg.m = 20;
  cfg.n = 10;
  cfg.d = 5;
  cfg.t = 20;
  cfg.seed = 2024;
  const auto r = protocol::run_session(cfg);
  v.expect(r.losses.size() == 21, "loss history length");
  v.expect(r.losses.back() < 0.5 * r.losses.front(),
           fmt::format("final loss {:.6g} vs initial {:.6g}", r.losses.back(), r.losses.front()));
}

void attack_suite(Verdict& v) {
  for (const auto& s : harness::run_attack_scenarios(1)) {
    v.expect(s.passed, fmt::format("{}: {}", s.name, s.detail));
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "GSFL computation totals for t in {1, 50, 100, 150, 1000}", 1.0, gsfl_computation_totals},
      {2, "signaling counts (GSFL t=1 and t=1000, Bonawitz t=1)", 1.0, signaling_counts},
      {3, "communication bytes for GSFL and all baseline cells", 1.0, communication_bytes},
      {4, "message size table: 2763 bits, 345 bytes", 1.0, message_size},
      {5, "signature completeness over 1000 random triples", 60.0, signature_completeness},
      {6, "tamper soundness over 500 single-bit flips", 0.0, tamper_soundness},
      {7, "open traces 20 members over 3 sessions; foreign signatures unknown", 0.0, open_and_trace},
      {8, "textbook ElGamal round trip and inverse identity", 0.0, textbook_elgamal},
      {9, "hybrid envelope sizes and 100 tamper trials", 0.0, hybrid_envelope},
      {10, "weighted average matches brute force within 1e-12", 0.0, fedavg_oracle},
      {11, "one descriptor fetch per session; 1000 bit-exact wire round trips", 0.0, caching_and_wire},
      {12, "curious server: permutation-invariant aggregate, no member secrets", 0.0, curious_server},
      {13, "end-to-end convergence: final loss below half the initial", 30.0, convergence},
      {14, "attack scenario suite", 0.0, attack_suite},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(v);
    } catch (const std::exception& e) {
      v.failure = fmt::format("exception: {}", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (v.failure.empty() && v.checks == 0) v.failure = "no checks ran";
    if (v.failure.empty() && c.budget_s > 0 && secs > c.budget_s) {
      v.failure = fmt::format("took {:.2f} s, budget {:.0f} s", secs, c.budget_s);
    }
    const bool ok = v.failure.empty();
    failed += ok ? 0 : 1;
    fmt::print("criterion {:2}: {}  {} ({} checks, {:.3f} s){}\n", c.number, ok ? "PASS" : "FAIL", c.title,
               v.checks, secs, ok ? "" : " :: " + v.failure);
  }
  fmt::print("{}/{} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

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

#include "gsfl/harness.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <numeric>
#include <set>
#include <sstream>

#include "gsfl/algebra.hpp"
#include "gsfl/costmodel.hpp"
#include "gsfl/envelope.hpp"
#include "gsfl/errors.hpp"
#include "gsfl/fedlearn.hpp"
#include "gsfl/group_signature.hpp"
#include "gsfl/protocol.hpp"
#include "gsfl/rng.hpp"

namespace gsfl::harness {

using algebra::G1;
using algebra::Scalar;
using protocol::AdminNode;
using protocol::ClientNode;
using protocol::Event;
using protocol::Kind;
using protocol::Network;
using protocol::Outcome;
using protocol::ServerNode;
using protocol::WireMessage;

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::kSimulate: return "simulate";
    case Mode::kCosts: return "costs";
    case Mode::kAttacks: return "attacks";
  }
  return "?";
}

std::string_view format_name(Format f) {
  switch (f) {
    case Format::kCsv: return "csv";
    case Format::kJson: return "json";
    case Format::kJsonl: return "jsonl";
  }
  return "?";
}

std::string_view extension(Format f) { return format_name(f); }

Mode parse_mode(std::string_view s) {
  for (Mode m : {Mode::kSimulate, Mode::kCosts, Mode::kAttacks}) {
    if (mode_name(m) == s) return m;
  }
  throw Error(Errc::kConfigError, fmt::format("mode: unknown value '{}'", s));
}

Format parse_format(std::string_view s) {
  for (Format f : {Format::kCsv, Format::kJson, Format::kJsonl}) {
    if (format_name(f) == s) return f;
  }
  throw Error(Errc::kConfigError, fmt::format("format: unknown value '{}'", s));
}

void validate(const RunConfig& c) {
  auto fail = [](std::string_view field, const std::string& why) {
    throw Error(Errc::kConfigError, fmt::format("{}: {}", field, why));
  };
  if (c.n == 0) fail("n", "must be at least 1");
  if (c.m < c.n) fail("m", fmt::format("must be at least n ({}), got {}", c.n, c.m));
  if (c.t == 0) fail("t", "must be at least 1");
  if (c.d == 0) fail("d", "must be at least 1");
  if (c.samples == 0) fail("samples", "must be at least 1");
  if (!std::isfinite(c.eta) || c.eta <= 0.0) fail("eta", fmt::format("must be positive, got {}", c.eta));
  if (c.out.empty()) fail("out", "must name a directory");
}

void check_curve_profile(std::optional<std::string_view> value) {
  if (!value || *value == algebra::kCurveProfile) return;
  throw Error(Errc::kConfigError, fmt::format("{}: unsupported curve profile '{}' (only '{}')",
                                              kCurveProfileEnv, *value, algebra::kCurveProfile));
}

// ---------------------------------------------------------------- scenarios

namespace {

bool contains(ByteView haystack, ByteView needle) {
  return !needle.empty() &&
         std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) != haystack.end();
}

// Collects assertions; the first failure becomes the scenario's detail.
class Checker {
 public:
  explicit Checker(std::string name) { result_.name = std::move(name); }

  void expect(bool ok, std::string_view what) {
    ++result_.checks;
    if (!ok && first_failure_.empty()) first_failure_ = what;
  }

  ScenarioResult finish() && {
    result_.passed = first_failure_.empty() && result_.checks > 0;
    result_.detail = result_.passed ? fmt::format("{} checks passed", result_.checks)
                                    : (first_failure_.empty() ? "no checks ran" : first_failure_);
    return std::move(result_);
  }

 private:
  ScenarioResult result_;
  std::string first_failure_;
};

ScenarioResult guarded(std::string name, const std::function<void(Checker&)>& body) {
  Checker check(name);
  try {
    body(check);
  } catch (const std::exception& e) {
    ScenarioResult r{std::move(name), false, 0, fmt::format("unexpected exception: {}", e.what())};
    return r;
  }
  return std::move(check).finish();
}

Bytes scenario_seed(std::string_view label, std::uint64_t seed) {
  ByteWriter w;
  w.raw(as_bytes("gsfl/attack/")).raw(as_bytes(label)).u64(seed);
  return std::move(w).take();
}

// A joined group of m clients with an announced session and a model of
// dimension `dim` on the server.
struct Arena {
  Arena(std::string_view label, std::uint64_t seed, std::size_t m, std::size_t dim = 3,
        std::uint16_t group_id = 1)
      : root(scenario_seed(label, seed)),
        admin(scenario_seed(label, seed), group_id),
        server(admin.params(), root.fork("server")),
        rng(root.fork("selection")) {
    receive_announcement(server, admin.announce(net));
    for (std::size_t i = 0; i < m; ++i) {
      clients.emplace_back(fmt::format("arena-client-{:03}", i), root.fork(fmt::format("client/{}", i)));
      server.register_client(clients.back().id(), clients.back().inbox_public_key());
    }
    for (auto& c : clients) client_join(c, admin, net);
    server.model = fl::ModelParams{std::vector<double>(dim, 0.0)};
  }

  ClientNode& by_id(const std::string& id) {
    return *std::find_if(clients.begin(), clients.end(), [&](const ClientNode& c) { return c.id() == id; });
  }

  std::vector<Event> select(std::size_t n) {
    std::vector<Event> notices = select_clients(server, net, n, rng);
    for (const auto& e : notices) by_id(e.receiver).receive(e);
    return notices;
  }

  Event submit(ClientNode& c, const fl::ClientUpdate& u) {
    client_submit(c, server.public_key(), fl::encode_update(u), net);
    return net.events().back();
  }

  Outcome process(const Event& e) { return server_process(server, admin, net, e); }

  // Rotates the session and hands the new keys to the server and every client.
  void rotate() {
    receive_announcement(server, admin.rotate(net));
    for (auto& c : clients) c.adopt_session(admin.session());
  }

  fl::ClientUpdate random_update(std::size_t dim) {
    fl::ClientUpdate u;
    for (std::size_t k = 0; k < dim; ++k) u.weights.push_back(rng.normal());
    u.sample_count = static_cast<std::uint32_t>(1 + rng.uniform(100));
    return u;
  }

  Rng root;
  Network net;
  AdminNode admin;
  ServerNode server;
  std::vector<ClientNode> clients;
  Rng rng;
};

// Posts an update built outside client_submit, as an intruder would.
Event forge_update(Arena& a, const gs::MemberCredential& cred, const gs::SessionKeys& sess,
                   const gs::GroupParams& params, ByteView payload, Rng& rng) {
  WireMessage w;
  w.gid = a.server.group_id();
  w.mid = static_cast<std::uint16_t>(rng());
  rng.fill(w.rand);
  w.payload = envelope::seal(a.server.public_key(), payload, rng).encode();
  w.gs = gs::sign(cred, sess, params, payload, rng).encode();
  w.ts = a.net.now();
  return a.net.post(protocol::kAnonymous, protocol::kServer, Kind::kUpdateMsg, a.server.session_id(),
                    w.serialize());
}

}  // namespace

ScenarioResult curious_server_scenario(std::uint64_t seed) {
  return guarded("curious-server", [seed](Checker& check) {
    Arena a("curious-server", seed, 6);
    std::vector<Bytes> secrets;
    for (int session = 0; session < 2; ++session) {
      if (session > 0) a.rotate();
      secrets.push_back(a.admin.session().a.encode());
      secrets.push_back(a.admin.session().b.encode());
      for (int iter = 0; iter < 2; ++iter) {
        a.select(a.clients.size());
        for (auto& c : a.clients) {
          check.expect(a.process(a.submit(c, a.random_update(3))) == Outcome::kAccepted,
                       "honest update rejected");
        }
        a.server.finish_iteration();
      }
    }
    for (const auto& c : a.clients) {
      secrets.push_back(c.credential()->A.encode());
      secrets.push_back(c.credential()->x.encode());
    }
    secrets.push_back(a.admin.keys().gamma.encode());

    const Bytes state = a.server.state_bytes();
    for (const auto& s : secrets) {
      check.expect(!contains(state, s), "server state holds a member or session secret");
    }
    for (const auto& e : a.net.events()) {
      if (e.receiver != protocol::kServer && e.receiver != protocol::kBroadcast) continue;
      for (const auto& s : secrets) {
        check.expect(!contains(e.body, s),
                     fmt::format("{} reaching the server carries a secret", kind_name(e.kind)));
      }
    }
  });
}

ScenarioResult inference_link_scenario(std::uint64_t seed) {
  return guarded("inference-link", [seed](Checker& check) {
    Arena a("inference-link", seed, 5);
    std::vector<fl::ClientUpdate> updates;
    for (std::size_t i = 0; i < a.clients.size(); ++i) updates.push_back(a.random_update(3));

    // The server's view must not depend on which member sent which update.
    auto run = [&](const std::vector<std::size_t>& assignment) {
      ServerNode fresh(a.admin.params(), a.root.fork("fresh-server"));
      fresh.model = a.server.model;
      receive_announcement(fresh, a.admin.announce(a.net));
      for (const auto& c : a.clients) fresh.register_client(c.id(), c.inbox_public_key());
      for (const auto& e : select_clients(fresh, a.net, a.clients.size(), a.rng)) a.by_id(e.receiver).receive(e);
      std::vector<Outcome> outcomes;
      for (std::size_t i = 0; i < a.clients.size(); ++i) {
        client_submit(a.clients[i], fresh.public_key(), fl::encode_update(updates[assignment[i]]), a.net);
        const Event e = a.net.events().back();
        check.expect(e.sender == protocol::kAnonymous, "update names its sender");
        outcomes.push_back(server_process(fresh, a.admin, a.net, e));
      }
      return std::pair{fresh.finish_iteration(), outcomes};
    };
    std::vector<std::size_t> perm(a.clients.size());
    std::iota(perm.begin(), perm.end(), 0);
    const auto [base, base_outcomes] = run(perm);
    check.expect(std::all_of(base_outcomes.begin(), base_outcomes.end(),
                             [](Outcome o) { return o == Outcome::kAccepted; }),
                 "honest update rejected");
    for (int round = 0; round < 3; ++round) {
      std::shuffle(perm.begin(), perm.end(), a.rng);
      const auto [other, other_outcomes] = run(perm);
      check.expect(other == base, "aggregate depends on member-to-update assignment");
      check.expect(other_outcomes == base_outcomes, "outcomes depend on member-to-update assignment");
    }

    // Nothing in an update packet identifies its member.
    a.select(a.clients.size());
    std::vector<Bytes> c3_before;
    for (auto& c : a.clients) {
      const Event e = a.submit(c, a.random_update(3));
      const WireMessage w = WireMessage::deserialize(e.body);
      check.expect(!contains(e.body, as_bytes(c.id())), "update carries the member id");
      check.expect(!contains(e.body, c.inbox_public_key().encode()), "update carries the inbox key");
      check.expect(!contains(e.body, c.credential()->A.encode()), "update carries the credential");
      c3_before.push_back(gs::Signature::decode(w.gs).C3.encode());
    }
    // After a rotation the same members produce unrelated tracing values.
    a.rotate();
    a.select(a.clients.size());
    for (std::size_t i = 0; i < a.clients.size(); ++i) {
      const Event e = a.submit(a.clients[i], a.random_update(3));
      const Bytes c3 = gs::Signature::decode(WireMessage::deserialize(e.body).gs).C3.encode();
      check.expect(std::find(c3_before.begin(), c3_before.end(), c3) == c3_before.end(),
                   "tracing value repeats across sessions");
    }
  });
}

ScenarioResult selected_client_secrecy_scenario(std::uint64_t seed) {
  return guarded("selected-client-secrecy", [seed](Checker& check) {
    Arena a("selected-client-secrecy", seed, 8);
    std::optional<std::size_t> notice_size;
    for (int iter = 0; iter < 5; ++iter) {
      const std::vector<Event> notices = a.select(3);
      check.expect(a.server.selected().size() == 3, "wrong selection size");
      for (const auto& notice : notices) {
        if (!notice_size) notice_size = notice.body.size();
        check.expect(notice.body.size() == *notice_size, "notice length varies");
        for (const auto& c : a.clients) {
          check.expect(!contains(notice.body, as_bytes(c.id())), "notice body names a client");
        }
        // Every other client fails to open it.
        for (auto& c : a.clients) {
          if (c.id() == notice.receiver) {
            check.expect(c.selection().has_value() && c.selection()->second == a.server.iteration(),
                         "recipient could not read its notice");
            continue;
          }
          Errc got = Errc::kInvalidArgument;
          bool threw = false;
          try {
            c.receive(notice);
          } catch (const Error& e) {
            threw = true;
            got = e.code();
          }
          check.expect(threw && got == Errc::kAuthFailure, "notice opened by a non-recipient");
        }
      }
      // The selected members submit; nothing they send names them.
      for (const auto& id : a.server.selected()) {
        const Event e = a.submit(a.by_id(id), a.random_update(3));
        check.expect(a.process(e) == Outcome::kAccepted, "selected member rejected");
        for (const auto& c : a.clients) {
          check.expect(!contains(e.body, as_bytes(c.id())), "update names a client");
        }
      }
      a.server.finish_iteration();
    }
    // Unselected members hold no notice and cannot submit.
    a.select(3);
    for (auto& c : a.clients) {
      if (a.server.selected().count(c.id())) continue;
      bool refused = false;
      try {
        a.submit(c, a.random_update(3));
      } catch (const Error& e) {
        refused = e.code() == Errc::kNotSelected;
      }
      check.expect(refused, "unselected member submitted");
    }
  });
}

ScenarioResult sybil_scenario(std::uint64_t seed) {
  return guarded("sybil", [seed](Checker& check) {
    Arena a("sybil", seed, 3);
    ClientNode& attacker = a.clients[0];
    const gs::MemberCredential& cred = *attacker.credential();
    Rng rng = a.root.fork("sybil");

    // One credential, three concurrent identities.
    std::set<Bytes> c3s;
    for (int identity = 0; identity < 3; ++identity) {
      const Bytes payload = fl::encode_update(a.random_update(3));
      const Event& e = forge_update(a, cred, *attacker.session(), a.admin.params(), payload, rng);
      const WireMessage w = WireMessage::deserialize(e.body);
      const gs::Signature sig = gs::Signature::decode(w.gs);
      check.expect(gs::verify(a.admin.params(), a.admin.session().public_view(), payload, sig) ==
                       gs::Verdict::kAccept,
                   "sybil signature does not verify");
      const gs::Opened opened = gs::open(a.admin.keys(), a.admin.params(), a.admin.session(), sig);
      check.expect(opened.member_id == attacker.id(), "open maps a sybil identity to another member");
      c3s.insert(sig.C3.encode());
    }
    // Within a session the three identities share one tracing value.
    check.expect(c3s.size() == 1, "sybil identities carry distinct tracing values");

    // A second registration under the same id is refused.
    bool refused = false;
    try {
      ClientNode twin(attacker.id(), a.root.fork("twin"));
      client_join(twin, a.admin, a.net);
    } catch (const Error& e) {
      refused = e.code() == Errc::kDuplicateMember;
    }
    check.expect(refused, "duplicate registration accepted");
  });
}

ScenarioResult dos_reject_scenario(std::uint64_t seed) {
  return guarded("dos-reject", [seed](Checker& check) {
    Arena a("dos-reject", seed, 4);
    Rng rng = a.root.fork("flood");
    a.select(a.clients.size());
    const Event honest = a.submit(a.clients[0], a.random_update(3));
    check.expect(a.process(honest) == Outcome::kAccepted, "honest update rejected");
    const WireMessage base = WireMessage::deserialize(honest.body);

    auto variant = [&](auto&& edit) {
      WireMessage w = base;
      rng.fill(w.rand);
      edit(w);
      Event e = honest;
      e.body = w.serialize();
      return e;
    };

    constexpr int kPerKind = 25;
    std::map<Outcome, std::size_t> expected{{Outcome::kAccepted, 1}};
    auto flood = [&](Outcome want, auto&& make) {
      for (int i = 0; i < kPerKind; ++i) {
        check.expect(a.process(make()) == want, fmt::format("flood item not {}", outcome_name(want)));
      }
      expected[want] += kPerKind;
    };
    flood(Outcome::kMalformedMessage, [&] {
      Event e = honest;
      e.body.resize(rng.uniform(200));
      rng.fill(e.body);
      return e;
    });
    flood(Outcome::kWrongGroup, [&] { return variant([](WireMessage& w) { w.gid ^= 0x8000; }); });
    flood(Outcome::kExpired, [&] { return variant([](WireMessage& w) { w.ttl = 1; }); });
    flood(Outcome::kStaleSession, [&] {
      Event e = variant([](WireMessage&) {});
      e.session_id += 1;
      return e;
    });
    flood(Outcome::kReplay, [&] { return honest; });
    flood(Outcome::kAuthFailure, [&] {
      // Flip a bit inside the sealed part, past encode(c1) and its length.
      constexpr std::size_t kHeader = algebra::kGTBytes + 4;
      return variant([&](WireMessage& w) { w.payload[kHeader + rng.uniform(w.payload.size() - kHeader)] ^= 0x01; });
    });
    flood(Outcome::kSignatureReject, [&] {
      return variant([&](WireMessage& w) { w.gs.back() ^= 0x01; });
    });

    check.expect(a.server.outcomes() == expected, "outcome counts differ from the flood");
    check.expect(a.server.buffered() == 1, "flood reached the aggregation buffer");
    check.expect(a.net.count(Kind::kLatestGSVerReq) == 1, "flood triggered extra descriptor fetches");

    // Honest members are still served after the flood.
    for (std::size_t i = 1; i < a.clients.size(); ++i) {
      check.expect(a.process(a.submit(a.clients[i], a.random_update(3))) == Outcome::kAccepted,
                   "honest update rejected after flood");
    }
    check.expect(a.server.buffered() == a.clients.size(), "honest updates lost");
  });
}

ScenarioResult intruder_channel_scenario(std::uint64_t seed) {
  return guarded("intruder-channel", [seed](Checker& check) {
    Arena a("intruder-channel", seed, 3);
    Rng rng = a.root.fork("intruder");
    const gs::GroupParams& params = a.admin.params();
    auto payload = [&] { return fl::encode_update(a.random_update(3)); };

    // A credential the admin never issued, with made-up session exponents.
    gs::MemberCredential fake;
    fake.member_id = "intruder";
    fake.x = Scalar::random_nonzero(rng);
    fake.A = G1::generator().pow(Scalar::random_nonzero(rng));
    gs::SessionKeys guessed;
    guessed.session_id = a.admin.session().session_id;
    guessed.a = Scalar::random_nonzero(rng);
    guessed.b = Scalar::random_nonzero(rng);
    guessed.C1 = params.u.pow(guessed.a);
    guessed.C2 = params.v.pow(guessed.b);
    for (int i = 0; i < 5; ++i) {
      check.expect(a.process(forge_update(a, fake, guessed, params, payload(), rng)) == Outcome::kSignatureReject,
                   "random credential accepted");
    }
    // Even with the real session exponents a made-up credential fails.
    for (int i = 0; i < 5; ++i) {
      check.expect(a.process(forge_update(a, fake, a.admin.session(), params, payload(), rng)) ==
                       Outcome::kSignatureReject,
                   "random credential with leaked session keys accepted");
    }

    // A genuine member of another group using the same group id.
    AdminNode foreign(scenario_seed("intruder-channel/foreign", seed), a.server.group_id());
    ClientNode outsider("outsider", rng.fork("outsider"));
    Network foreign_net;
    client_join(outsider, foreign, foreign_net);
    for (int i = 0; i < 5; ++i) {
      const Event& e = forge_update(a, *outsider.credential(), *outsider.session(), foreign.params(), payload(), rng);
      check.expect(a.process(e) == Outcome::kSignatureReject, "foreign-group signature accepted");
      const gs::Signature sig = gs::Signature::decode(WireMessage::deserialize(e.body).gs);
      bool unknown = false;
      try {
        gs::open(a.admin.keys(), params, a.admin.session(), sig);
      } catch (const Error& err) {
        unknown = err.code() == Errc::kUnknownMember;
      }
      check.expect(unknown, "foreign signature opened to a member");
    }

    // A captured signature glued to the intruder's own payload.
    a.select(1);
    const std::string victim = *a.server.selected().begin();
    const Event captured = a.submit(a.by_id(victim), a.random_update(3));
    {
      WireMessage w = WireMessage::deserialize(captured.body);
      rng.fill(w.rand);
      w.payload = envelope::seal(a.server.public_key(), payload(), rng).encode();
      Event e = captured;
      e.body = w.serialize();
      check.expect(a.process(e) == Outcome::kSignatureReject, "transplanted signature accepted");
    }
    check.expect(a.process(captured) == Outcome::kAccepted, "honest update rejected");

    // The intruder cannot read credential grants or notices off the wire.
    const envelope::ServerKeys eavesdropper = envelope::server_keygen(rng);
    for (const auto& e : a.net.events()) {
      if (e.kind != Kind::kGSRep && e.kind != Kind::kSelectionNotice) continue;
      bool rejected = false;
      try {
        envelope::open(eavesdropper, envelope::HybridCiphertext::decode(e.body));
      } catch (const Error& err) {
        rejected = err.code() == Errc::kAuthFailure;
      }
      check.expect(rejected, "intruder opened a sealed grant or notice");
    }
    check.expect(a.server.buffered() == 1, "intruder traffic reached the aggregation buffer");
  });
}

std::vector<ScenarioResult> run_attack_scenarios(std::uint64_t seed) {
  return {curious_server_scenario(seed),           inference_link_scenario(seed),
          selected_client_secrecy_scenario(seed), sybil_scenario(seed),
          dos_reject_scenario(seed),              intruder_channel_scenario(seed)};
}

// ---------------------------------------------------------------- reports

namespace {

void write_file(const std::filesystem::path& path, std::string_view contents, RunReport& report) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIoError, fmt::format("cannot open '{}' for writing", path.string()));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw Error(Errc::kIoError, fmt::format("failed writing '{}'", path.string()));
  report.files.push_back(path);
}

// Rows of flat objects rendered in the requested format.
std::string render(const nlohmann::ordered_json& rows, Format format) {
  switch (format) {
    case Format::kJson: return rows.dump(2) + "\n";
    case Format::kJsonl: {
      std::string out;
      for (const auto& row : rows) out += row.dump() + "\n";
      return out;
    }
    case Format::kCsv: break;
  }
  std::string out;
  if (rows.empty()) return out;
  bool first = true;
  for (const auto& [key, _] : rows.front().items()) {
    out += (first ? "" : ",") + key;
    first = false;
  }
  out += "\n";
  for (const auto& row : rows) {
    first = true;
    for (const auto& [_, value] : row.items()) {
      out += first ? "" : ",";
      out += value.is_string() ? value.get<std::string>() : value.dump();
      first = false;
    }
    out += "\n";
  }
  return out;
}

void run_simulate(const RunConfig& c, RunReport& report) {
  protocol::SessionConfig sc;
  sc.m = c.m;
  sc.n = c.n;
  sc.t = c.t;
  sc.seed = c.seed;
  sc.d = c.d;
  sc.samples = c.samples;
  sc.eta = c.eta;
  const protocol::SessionResult r = protocol::run_session(sc);

  write_file(c.out / "transcript.jsonl", r.transcript_jsonl, report);
  std::ostringstream losses;
  fl::write_loss_csv(losses, r.losses);
  write_file(c.out / "losses.csv", losses.str(), report);

  // Wall clock per role: measured on this machine, never compared with the
  // analytic model.
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& [role, ms] : {std::pair{"admin", r.timings.admin_ms}, std::pair{"clients", r.timings.clients_ms},
                                 std::pair{"server", r.timings.server_ms}}) {
    nlohmann::ordered_json row;
    row["role"] = role;
    row["wall_ms"] = ms;
    rows.push_back(row);
  }
  write_file(c.out / fmt::format("timings.{}", extension(c.format)), render(rows, c.format), report);
}

void run_costs(const RunConfig& c, RunReport& report) {
  const auto rows = cost::compare_all(c.t, c.m, c.n);
  std::string text;
  switch (c.format) {
    case Format::kCsv: text = cost::to_csv(rows); break;
    case Format::kJson: text = cost::to_json(rows); break;
    case Format::kJsonl: text = render(nlohmann::ordered_json::parse(cost::to_json(rows)), Format::kJsonl); break;
  }
  write_file(c.out / fmt::format("costs.{}", extension(c.format)), text, report);
}

void run_attacks(const RunConfig& c, RunReport& report) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& s : run_attack_scenarios(c.seed)) {
    nlohmann::ordered_json row;
    row["scenario"] = s.name;
    row["passed"] = s.passed;
    row["checks"] = s.checks;
    // Keep CSV cells free of separators.
    std::string detail = s.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    row["detail"] = detail;
    rows.push_back(row);
    if (!s.passed) report.failures.push_back(s.name);
  }
  write_file(c.out / fmt::format("attacks.{}", extension(c.format)), render(rows, c.format), report);
  if (!report.failures.empty()) report.exit_code = kExitAcceptanceFailure;
}

}  // namespace

RunReport run(const RunConfig& config) {
  validate(config);
  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec || !std::filesystem::is_directory(config.out)) {
    throw Error(Errc::kIoError, fmt::format("cannot create output directory '{}'", config.out.string()));
  }
  RunReport report;
  switch (config.mode) {
    case Mode::kSimulate: run_simulate(config, report); break;
    case Mode::kCosts: run_costs(config, report); break;
    case Mode::kAttacks: run_attacks(config, report); break;
  }
  return report;
}

}  // namespace gsfl::harness

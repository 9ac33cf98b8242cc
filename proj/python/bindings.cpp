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

// Python module `gsfl._gsfl`: the cost model, whole-session simulation, the
// attack suite and thin object wrappers over the signature and envelope
// layers. Bytes cross the boundary as `bytes`; errors surface as GsflError
// whose first argument is the error kind.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <string>

#include "gsfl/costmodel.hpp"
#include "gsfl/envelope.hpp"
#include "gsfl/errors.hpp"
#include "gsfl/fedlearn.hpp"
#include "gsfl/group_signature.hpp"
#include "gsfl/harness.hpp"
#include "gsfl/protocol.hpp"

namespace py = pybind11;

namespace {

using gsfl::Bytes;
using gsfl::ByteView;

ByteView view(const py::bytes& b) {
  const std::string_view s = b;
  return gsfl::as_bytes(s);
}

py::bytes to_py(const Bytes& b) { return {reinterpret_cast<const char*>(b.data()), b.size()}; }

// A group with its admin and issued credentials in one object, which is the
// shape Python callers want for experiments.
class Group {
 public:
  Group(const py::bytes& seed, std::uint16_t group_id)
      : state_(gsfl::gs::setup(view(seed), group_id)),
        rng_(gsfl::Rng(view(seed)).fork("python")),
        session_(gsfl::gs::new_session(state_.second, state_.first)) {}

  void add_member(const std::string& id) { creds_.emplace(id, gsfl::gs::issue(state_.second, state_.first, id)); }

  std::uint32_t new_session() {
    session_ = gsfl::gs::new_session(state_.second, state_.first);
    return session_.session_id;
  }

  std::uint32_t revoke(const std::string& id, std::string reason) {
    session_ = gsfl::gs::revoke(state_.second, state_.first, id, std::move(reason));
    creds_.at(id).revoked = true;
    return session_.session_id;
  }

  py::bytes sign(const std::string& id, const py::bytes& message) {
    auto it = creds_.find(id);
    if (it == creds_.end()) throw gsfl::Error(gsfl::Errc::kUnknownMember, "no credential for '" + id + "'");
    return to_py(gsfl::gs::sign(it->second, session_, state_.first, view(message), rng_).encode());
  }

  bool verify(const py::bytes& message, const py::bytes& signature) const {
    const auto sig = gsfl::gs::Signature::decode(view(signature));
    return gsfl::gs::verify(state_.first, session_.public_view(), view(message), sig) == gsfl::gs::Verdict::kAccept;
  }

  std::string open(const py::bytes& signature) const {
    const auto sig = gsfl::gs::Signature::decode(view(signature));
    return gsfl::gs::open(state_.second, state_.first, session_, sig).member_id;
  }

  std::uint32_t session_id() const { return session_.session_id; }
  std::string revocation_table() const { return gsfl::gs::export_revocation_table(state_.second); }

 private:
  std::pair<gsfl::gs::GroupParams, gsfl::gs::AdminKeys> state_;
  gsfl::Rng rng_;
  gsfl::gs::SessionKeys session_;
  std::map<std::string, gsfl::gs::MemberCredential> creds_;
};

class EnvelopeKeys {
 public:
  explicit EnvelopeKeys(std::uint64_t seed) : rng_(gsfl::Rng::from_u64(seed)), keys_(gsfl::envelope::server_keygen(rng_)) {}

  py::bytes public_key() const { return to_py(keys_.h_srv.encode()); }

  py::bytes seal(const py::bytes& payload) {
    return to_py(gsfl::envelope::seal(keys_.h_srv, view(payload), rng_).encode());
  }

  py::bytes open(const py::bytes& ciphertext) const {
    return to_py(gsfl::envelope::open(keys_, gsfl::envelope::HybridCiphertext::decode(view(ciphertext))));
  }

 private:
  gsfl::Rng rng_;
  gsfl::envelope::ServerKeys keys_;
};

py::dict report_dict(const gsfl::cost::CostReport& r) {
  py::dict d;
  d["algorithm"] = r.algorithm;
  d["t"] = r.t;
  d["m"] = r.m;
  d["n"] = r.n;
  d["computation_ms"] = r.computation.ms();
  d["communication_bytes"] = r.communication_bytes;
  d["signaling_count"] = r.signaling_count;
  return d;
}

}  // namespace

PYBIND11_MODULE(_gsfl, m) {
  m.doc() = "Group-signature federated learning core";

  static py::exception<gsfl::Error> error(m, "GsflError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const gsfl::Error& e) {
      PyErr_SetObject(error.ptr(), py::make_tuple(std::string(gsfl::errc_name(e.code())), e.what()).ptr());
    }
  });

  m.attr("CURVE_PROFILE") = std::string(gsfl::algebra::kCurveProfile);

  // ---- cost model
  py::enum_<gsfl::cost::Algorithm>(m, "Algorithm")
      .value("RunhuaXu", gsfl::cost::Algorithm::kRunhuaXu)
      .value("Chai", gsfl::cost::Algorithm::kChai)
      .value("Bonawitz", gsfl::cost::Algorithm::kBonawitz)
      .value("Sun", gsfl::cost::Algorithm::kSun)
      .value("Xu", gsfl::cost::Algorithm::kXu)
      .value("GSFL", gsfl::cost::Algorithm::kGsfl);

  m.def("gsfl_computation_ms", [](std::uint64_t t) { return gsfl::cost::gsfl_computation(t).ms(); }, py::arg("t"));
  m.def(
      "computation_ms",
      [](gsfl::cost::Algorithm a, std::uint64_t t, std::uint64_t n) { return gsfl::cost::computation(a, t, n).ms(); },
      py::arg("algorithm"), py::arg("t"), py::arg("n") = 100);
  m.def("communication_bytes", &gsfl::cost::communication, py::arg("algorithm"), py::arg("t"));
  m.def("signaling_count", &gsfl::cost::signaling, py::arg("algorithm"), py::arg("t"), py::arg("m") = 200,
        py::arg("n") = 100);
  m.def("message_size_table", [] {
    const auto t = gsfl::cost::message_size_table();
    py::dict fields;
    for (const auto& f : t.fields) fields[py::str(std::string(f.name))] = f.bits;
    py::dict d;
    d["fields"] = fields;
    d["total_bits"] = t.total_bits;
    d["bytes"] = t.bytes;
    return d;
  });
  m.def(
      "compare_all",
      [](std::uint64_t t, std::uint64_t mm, std::uint64_t n) {
        py::list rows;
        for (const auto& r : gsfl::cost::compare_all(t, mm, n)) rows.append(report_dict(r));
        return rows;
      },
      py::arg("t"), py::arg("m") = 200, py::arg("n") = 100);

  // ---- learning
  m.def(
      "aggregate",
      [](const std::vector<std::pair<std::vector<double>, std::uint32_t>>& updates) {
        std::vector<gsfl::fl::ClientUpdate> u;
        for (const auto& [w, count] : updates) u.push_back({w, count});
        return gsfl::fl::aggregate(u).weights;
      },
      py::arg("updates"), "Sample-weighted mean of (weights, sample_count) pairs.");

  // ---- whole sessions
  m.def(
      "run_session",
      [](std::size_t mm, std::size_t n, std::size_t t, std::uint64_t seed, std::size_t d, std::size_t samples,
         double eta) {
        gsfl::protocol::SessionConfig cfg;
        cfg.m = mm;
        cfg.n = n;
        cfg.t = t;
        cfg.seed = seed;
        cfg.d = d;
        cfg.samples = samples;
        cfg.eta = eta;
        gsfl::protocol::SessionResult r;
        {
          py::gil_scoped_release release;
          r = gsfl::protocol::run_session(cfg);
        }
        py::dict outcomes;
        for (const auto& [o, count] : r.outcomes) outcomes[py::str(std::string(gsfl::protocol::outcome_name(o)))] = count;
        py::list models;
        for (const auto& model : r.models) models.append(model.weights);
        py::dict out;
        out["signal_count"] = r.signal_count;
        out["losses"] = r.losses;
        out["models"] = models;
        out["outcomes"] = outcomes;
        out["transcript_jsonl"] = r.transcript_jsonl;
        out["wall_ms"] = py::dict(py::arg("admin") = r.timings.admin_ms, py::arg("clients") = r.timings.clients_ms,
                                  py::arg("server") = r.timings.server_ms);
        return out;
      },
      py::arg("m") = 20, py::arg("n") = 10, py::arg("t") = 5, py::arg("seed") = 1, py::arg("d") = 5,
      py::arg("samples") = 50, py::arg("eta") = 0.1);

  m.def(
      "run_attack_scenarios",
      [](std::uint64_t seed) {
        py::list rows;
        for (const auto& s : gsfl::harness::run_attack_scenarios(seed)) {
          rows.append(py::dict(py::arg("name") = s.name, py::arg("passed") = s.passed, py::arg("checks") = s.checks,
                               py::arg("detail") = s.detail));
        }
        return rows;
      },
      py::arg("seed") = 1);

  m.def(
      "run",
      [](const std::string& mode, std::size_t mm, std::size_t n, std::size_t t, std::uint64_t seed, std::size_t d,
         std::size_t samples, double eta, const std::filesystem::path& out, const std::string& format) {
        gsfl::harness::RunConfig cfg;
        cfg.mode = gsfl::harness::parse_mode(mode);
        cfg.format = gsfl::harness::parse_format(format);
        cfg.m = mm;
        cfg.n = n;
        cfg.t = t;
        cfg.seed = seed;
        cfg.d = d;
        cfg.samples = samples;
        cfg.eta = eta;
        cfg.out = out;
        const auto report = gsfl::harness::run(cfg);
        py::list files;
        for (const auto& f : report.files) files.append(f.string());
        return py::dict(py::arg("exit_code") = report.exit_code, py::arg("files") = files,
                        py::arg("failures") = report.failures);
      },
      py::arg("mode"), py::arg("m") = 20, py::arg("n") = 10, py::arg("t") = 5, py::arg("seed") = 1, py::arg("d") = 5,
      py::arg("samples") = 50, py::arg("eta") = 0.1, py::arg("out") = "gsfl-out", py::arg("format") = "csv");

  // ---- primitives
  py::class_<Group>(m, "Group")
      .def(py::init<const py::bytes&, std::uint16_t>(), py::arg("seed"), py::arg("group_id") = 1)
      .def("add_member", &Group::add_member, py::arg("member_id"))
      .def("new_session", &Group::new_session)
      .def("revoke", &Group::revoke, py::arg("member_id"), py::arg("reason"))
      .def("sign", &Group::sign, py::arg("member_id"), py::arg("message"))
      .def("verify", &Group::verify, py::arg("message"), py::arg("signature"))
      .def("open", &Group::open, py::arg("signature"))
      .def_property_readonly("session_id", &Group::session_id)
      .def("revocation_table", &Group::revocation_table);

  py::class_<EnvelopeKeys>(m, "EnvelopeKeys")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def_property_readonly("public_key", &EnvelopeKeys::public_key)
      .def("seal", &EnvelopeKeys::seal, py::arg("payload"))
      .def("open", &EnvelopeKeys::open, py::arg("ciphertext"));
}

# Copyright 2026 The GSFL Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import os
import subprocess

import pytest

import gsfl


def test_reference_cost_figures():
    assert gsfl.gsfl_computation_ms(1000) == pytest.approx(46605.029, abs=1e-9)
    assert gsfl.communication_bytes(gsfl.Algorithm.GSFL, 1000) == 690000
    assert gsfl.signaling_count(gsfl.Algorithm.GSFL, 1000, 200, 100) == 201800
    table = gsfl.message_size_table()
    assert table["total_bits"] == sum(table["fields"].values()) == 2763
    rows = gsfl.compare_all(1000)
    assert [r["algorithm"] for r in rows] == ["RunhuaXu", "Chai", "Bonawitz", "Sun", "Xu", "GSFL"]


def test_group_signature_round_trip():
    g = gsfl.Group(b"python-smoke", group_id=4)
    for name in ("alice", "bob"):
        g.add_member(name)
    sig = g.sign("bob", b"update")
    assert len(sig) == 48 + 6 * 32
    assert g.verify(b"update", sig)
    assert not g.verify(b"other", sig)
    assert g.open(sig) == "bob"
    old = g.session_id
    assert g.revoke("alice", "left") > old
    with pytest.raises(gsfl.GsflError) as err:
        g.sign("alice", b"x")
    assert err.value.args[0] == "RevokedCredential"
    assert "alice\trevoked\tleft" in g.revocation_table()


def test_envelope_and_tamper():
    keys = gsfl.EnvelopeKeys(seed=3)
    ct = keys.seal(b"payload" * 100)
    assert keys.open(ct) == b"payload" * 100
    bad = bytearray(ct)
    bad[-1] ^= 1
    with pytest.raises(gsfl.GsflError) as err:
        keys.open(bytes(bad))
    assert err.value.args[0] == "AuthFailure"


def test_aggregate_weights_by_samples():
    assert gsfl.aggregate([([1.0, 0.0], 1), ([4.0, 3.0], 2)]) == pytest.approx([3.0, 2.0])


def test_session_is_deterministic_and_learns():
    a = gsfl.run_session(m=10, n=5, t=8, seed=11)
    b = gsfl.run_session(m=10, n=5, t=8, seed=11)
    assert a["transcript_jsonl"] == b["transcript_jsonl"]
    assert a["signal_count"] == 4 * 10 + 8 * (2 * 5 + 1)
    assert a["outcomes"] == {"accepted": 40}
    assert a["losses"][-1] < a["losses"][0]
    first = json.loads(a["transcript_jsonl"].splitlines()[0])
    assert set(first) == {"step", "sender", "receiver", "kind", "session_id", "byte_size"}


def test_attack_scenarios_pass():
    results = gsfl.run_attack_scenarios(seed=4)
    assert len(results) == 6
    assert all(r["passed"] for r in results), results


def test_run_writes_reports(tmp_path):
    report = gsfl.run("costs", t=50, m=200, n=100, out=tmp_path, format="json")
    assert report["exit_code"] == 0
    rows = json.loads((tmp_path / "costs.json").read_text())
    assert rows[-1]["signaling_count"] == 10850
    with pytest.raises(gsfl.GsflError) as err:
        gsfl.run("costs", m=1, n=2, out=tmp_path)
    assert err.value.args[0] == "ConfigError"


CLI = os.environ.get("GSFL_CLI")


@pytest.mark.skipif(not CLI, reason="GSFL_CLI not set")
@pytest.mark.parametrize(
    "args, env, code",
    [
        (["--mode", "costs", "--t", "1000"], {}, 0),
        (["--mode", "costs", "--m", "2", "--n", "3"], {}, 2),
        (["--mode", "costs", "--format", "xml"], {}, 2),
        (["--mode", "costs"], {"GSFL_CURVE_PROFILE": "bn254"}, 2),
        (["--mode", "costs"], {"GSFL_CURVE_PROFILE": "bls12-381"}, 0),
    ],
)
def test_cli_exit_codes(tmp_path, args, env, code):
    proc = subprocess.run([CLI, *args, "--out", str(tmp_path)], env={**os.environ, **env}, capture_output=True)
    assert proc.returncode == code, proc.stderr
    if code == 0:
        text = (tmp_path / "costs.csv").read_text()
        assert text.startswith("algorithm,t,m,n,computation_ms,communication_bytes,signaling_count\n")


@pytest.mark.skipif(not CLI, reason="GSFL_CLI not set")
def test_cli_io_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    proc = subprocess.run([CLI, "--mode", "costs", "--out", str(blocker / "sub")], capture_output=True)
    assert proc.returncode == 1


@pytest.mark.skipif(not CLI, reason="GSFL_CLI not set")
def test_cli_simulate_is_byte_identical(tmp_path):
    outs = []
    for name in ("a", "b"):
        subprocess.run([CLI, "--mode", "simulate", "--m", "20", "--n", "10", "--t", "5", "--seed", "7",
                        "--out", str(tmp_path / name)], check=True, capture_output=True)
        outs.append((tmp_path / name / "transcript.jsonl").read_bytes())
    assert outs[0] == outs[1]

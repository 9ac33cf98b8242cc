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

"""Group-signature federated learning: cost model, simulation and primitives."""

from ._gsfl import (
    CURVE_PROFILE,
    Algorithm,
    EnvelopeKeys,
    Group,
    GsflError,
    aggregate,
    communication_bytes,
    compare_all,
    computation_ms,
    gsfl_computation_ms,
    message_size_table,
    run,
    run_attack_scenarios,
    run_session,
    signaling_count,
)

__all__ = [
    "CURVE_PROFILE",
    "Algorithm",
    "EnvelopeKeys",
    "Group",
    "GsflError",
    "aggregate",
    "communication_bytes",
    "compare_all",
    "computation_ms",
    "gsfl_computation_ms",
    "message_size_table",
    "run",
    "run_attack_scenarios",
    "run_session",
    "signaling_count",
]

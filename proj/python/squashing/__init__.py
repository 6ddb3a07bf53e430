# Copyright 2026 The squash Authors
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
"""Squashing-model existence checks for multi-photon measurements."""

from ._squash import (
    FormatError,
    NotHermitianError,
    PovmError,
    __version__,
    bb84_odd_closed_form,
    check_povms,
    check_protocol,
    extract_kraus,
    extremal_state,
    full_povm,
    hermitian_eig,
    normalized_scale,
    povm_json,
    run_cli,
    six_state_choi,
    target_povm,
    target_span_dimension,
    theta_minus,
)

__all__ = [
    "FormatError",
    "NotHermitianError",
    "PovmError",
    "__version__",
    "bb84_odd_closed_form",
    "check_povms",
    "check_protocol",
    "extract_kraus",
    "extremal_state",
    "full_povm",
    "hermitian_eig",
    "normalized_scale",
    "povm_json",
    "run_cli",
    "six_state_choi",
    "target_povm",
    "target_span_dimension",
    "theta_minus",
]

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

import json

import numpy as np
import pytest

import squashing as sq


def test_full_povm_is_complete():
    for protocol in ("bb84", "six-state"):
        for n in range(0, 5):
            elements = sq.full_povm(protocol, n)
            total = sum(m for _, m in elements)
            np.testing.assert_allclose(total, np.eye(n + 1), atol=1e-12)


def test_extremal_state_x_matches_numpy():
    n = 4
    v = sq.extremal_state("x", n, "second")
    binom = np.array([1, 4, 6, 4, 1], dtype=float)
    expected = 2 ** (-n / 2) * np.sqrt(binom) * (-1.0) ** np.arange(n + 1)
    np.testing.assert_allclose(v, expected, atol=1e-14)


def test_six_state_witness_value():
    tau = sq.six_state_choi(3)
    w = sq.theta_minus(3)
    value = np.vdot(w, tau @ w).real
    assert sq.normalized_scale(value) == pytest.approx(-0.125, abs=1e-12)


def test_eigensolver_agrees_with_numpy():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    h = a + a.conj().T
    vals, vecs = sq.hermitian_eig(h)
    np.testing.assert_allclose(vals, np.linalg.eigvalsh(h), atol=1e-12)
    np.testing.assert_allclose(h @ vecs, vecs * vals, atol=1e-11)


def test_bb84_closed_form_kraus_complete():
    tau = sq.bb84_odd_closed_form(5)
    ops = sq.extract_kraus(tau, 4, 2)
    total = sum(a @ a.conj().T for a in ops)
    np.testing.assert_allclose(total, np.eye(4), atol=1e-10)


def test_protocol_verdicts():
    assert sq.check_protocol("bb84", 5)["status"] == "EXISTS"
    six = sq.check_protocol("six-state", 3)
    assert six["status"] == "NOT_EXISTS"
    assert six["blocks"][3]["witness"]["expectation_normalized"] < -0.124


def test_check_povms_json_roundtrip():
    full = sq.povm_json("bb84", 1)
    assert json.loads(full)["dim"] == 2
    assert sq.check_povms(full, full)["status"] == "EXISTS"


def test_span_dimensions():
    assert sq.target_span_dimension("bb84") == 3
    assert sq.target_span_dimension("six-state") == 4


def test_cli_usage_error():
    code, _, err = sq.run_cli(["verify", "--protocol", "nonsense"])
    assert code == 64
    assert "nonsense" in err


def test_invalid_povm_json_raises():
    with pytest.raises(sq.FormatError):
        sq.check_povms("{", "{")

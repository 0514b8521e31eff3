"""Wire-format round trips for states, state sets, and unitaries."""

import json

import numpy as np
import pytest

from qcert.core import PureState, haar_random_unitary, random_state
from qcert.serialize import (
    complex_to_pair,
    matrix_to_payload,
    pair_to_complex,
    payload_to_matrix,
    payload_to_vector,
    state_from_payload,
    state_set_from_payload,
    state_set_to_payload,
    state_to_payload,
    unitary_from_payload,
    unitary_to_payload,
    vector_to_payload,
)


def test_complex_pair_round_trip():
    rng = np.random.default_rng(2)
    for _ in range(1000):
        z = complex(rng.standard_normal(), rng.standard_normal())
        assert pair_to_complex(complex_to_pair(z)) == z


def test_pair_rejects_wrong_arity():
    with pytest.raises(ValueError):
        pair_to_complex([1.0])
    with pytest.raises(ValueError):
        pair_to_complex([1.0, 2.0, 3.0])


def test_vector_round_trip():
    rng = np.random.default_rng(3)
    for _ in range(200):
        vec = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        assert np.array_equal(payload_to_vector(vector_to_payload(vec)), vec)


def test_matrix_round_trip_survives_json():
    rng = np.random.default_rng(5)
    for _ in range(100):
        mat = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        payload = json.loads(json.dumps(matrix_to_payload(mat)))
        assert np.array_equal(payload_to_matrix(payload), mat)


def test_state_round_trip():
    rng = np.random.default_rng(7)
    for _ in range(300):
        state = random_state(int(rng.integers(2, 7)), rng)
        back = state_from_payload(json.loads(json.dumps(state_to_payload(state))))
        assert np.array_equal(back.amplitudes, state.amplitudes)


def test_state_payload_keys():
    payload = state_to_payload(PureState(np.array([1.0, 0.0])))
    assert set(payload) == {"dimension", "state"}
    assert payload["dimension"] == 2


def test_state_rejects_dimension_mismatch():
    payload = state_to_payload(PureState(np.array([1.0, 0.0])))
    payload["dimension"] = 3
    with pytest.raises(ValueError):
        state_from_payload(payload)


def test_state_set_round_trip():
    rng = np.random.default_rng(11)
    for _ in range(100):
        d = int(rng.integers(2, 5))
        states = [random_state(d, rng) for _ in range(int(rng.integers(1, 6)))]
        payload = json.loads(json.dumps(state_set_to_payload(states)))
        back = state_set_from_payload(payload)
        assert len(back) == len(states)
        for a, b in zip(back, states):
            assert np.array_equal(a.amplitudes, b.amplitudes)


def test_state_set_payload_shape():
    states = [PureState(np.array([1.0, 0.0])), PureState(np.array([0.0, 1.0]))]
    payload = state_set_to_payload(states)
    assert payload["dimension"] == 2
    assert len(payload["states"]) == 2


def test_empty_state_set_rejected():
    with pytest.raises(ValueError):
        state_set_to_payload([])


def test_state_set_rejects_mixed_dimensions():
    payload = {
        "dimension": 2,
        "states": [[[1.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]],
    }
    with pytest.raises(ValueError):
        state_set_from_payload(payload)


def test_unitary_round_trip():
    for seed in range(100):
        u = haar_random_unitary(3, seed)
        back = unitary_from_payload(json.loads(json.dumps(unitary_to_payload(u))))
        assert np.array_equal(back.matrix, u.matrix)


def test_unitary_payload_keys():
    payload = unitary_to_payload(haar_random_unitary(2, 0))
    assert set(payload) == {"dimension", "matrix"}


def test_unitary_rejects_dimension_mismatch():
    payload = unitary_to_payload(haar_random_unitary(2, 1))
    payload["dimension"] = 4
    with pytest.raises(ValueError):
        unitary_from_payload(payload)


def test_unitary_rejects_corrupted_matrix():
    payload = unitary_to_payload(haar_random_unitary(2, 2))
    payload["matrix"][0][0] = [5.0, 0.0]
    with pytest.raises(ValueError):
        unitary_from_payload(payload)

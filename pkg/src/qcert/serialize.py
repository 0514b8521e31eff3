"""JSON wire formats shared by the CLI, the service, and instance files.

Complex numbers serialize as two-element arrays [re, im], matrices as
row-major nested lists, states as flat lists of [re, im] pairs:

    state set   {"dimension": d, "states": [[[re, im], ...], ...]}
    unitary     {"dimension": d, "matrix": [[[re, im], ...], ...]}
"""

from __future__ import annotations

import numpy as np

from .core import PureState, UnitaryMatrix


def complex_to_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def pair_to_complex(pair) -> complex:
    if len(pair) != 2:
        raise ValueError("complex entries must be [re, im] pairs")
    return complex(float(pair[0]), float(pair[1]))


def vector_to_payload(vec: np.ndarray) -> list[list[float]]:
    return [complex_to_pair(z) for z in np.asarray(vec, dtype=complex)]


def payload_to_vector(payload) -> np.ndarray:
    return np.array([pair_to_complex(p) for p in payload], dtype=complex)


def matrix_to_payload(mat: np.ndarray) -> list[list[list[float]]]:
    return [[complex_to_pair(z) for z in row] for row in np.asarray(mat, dtype=complex)]


def payload_to_matrix(payload) -> np.ndarray:
    return np.array([[pair_to_complex(z) for z in row] for row in payload], dtype=complex)


def state_to_payload(state: PureState) -> dict:
    return {"dimension": state.dimension, "state": vector_to_payload(state.amplitudes)}


def state_from_payload(payload: dict) -> PureState:
    state = PureState(payload_to_vector(payload["state"]))
    if state.dimension != int(payload["dimension"]):
        raise ValueError("state length disagrees with declared dimension")
    return state


def state_set_to_payload(states: list[PureState]) -> dict:
    if not states:
        raise ValueError("state set must be non-empty")
    return {
        "dimension": states[0].dimension,
        "states": [vector_to_payload(s.amplitudes) for s in states],
    }


def state_set_from_payload(payload: dict) -> list[PureState]:
    d = int(payload["dimension"])
    states = [PureState(payload_to_vector(entry)) for entry in payload["states"]]
    if any(s.dimension != d for s in states):
        raise ValueError("state length disagrees with declared dimension")
    return states


def unitary_to_payload(u: UnitaryMatrix) -> dict:
    return {"dimension": u.dimension, "matrix": matrix_to_payload(u.matrix)}


def unitary_from_payload(payload: dict) -> UnitaryMatrix:
    u = UnitaryMatrix(payload_to_matrix(payload["matrix"]))
    if u.dimension != int(payload["dimension"]):
        raise ValueError("matrix size disagrees with declared dimension")
    return u

"""Pure states, unitary matrices, and the randomness they are sampled with.

Distances follow the usual conventions for pure states and unitary channels:

    D(psi, phi)  = sqrt(1 - |<phi|psi>|^2)
    dist(U, V)   = sqrt(1 - |tr(U^dag V) / d|^2)

Both are invariant under global phases.  All random sampling takes an
explicit ``numpy.random.Generator`` or an integer seed, never hidden
global state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

# Admission tolerances for the domain types.
STATE_NORM_TOL = 1e-12
UNITARY_TOL = 1e-10
# Eigenvalues of a matrix passed to eigenphases may drift off the unit
# circle by at most this much before the input is rejected as non-unitary.
EIGENVALUE_MODULUS_TOL = 1e-8

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector in C^d, d >= 2.  Norm must hold within 1e-12."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size < 2:
            raise ValueError("amplitudes must be a 1-d vector of dimension >= 2")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > STATE_NORM_TOL:
            raise ValueError(f"state norm {norm!r} deviates from 1 beyond {STATE_NORM_TOL}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dimension(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True, eq=False)
class UnitaryMatrix:
    """d x d complex matrix admitted only if max|U^dag U - I| <= 1e-10."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 2:
            raise ValueError("matrix must be square with dimension >= 2")
        defect = np.max(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])))
        if defect > UNITARY_TOL:
            raise ValueError(f"unitarity defect {float(defect):.3e} exceeds {UNITARY_TOL}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class EigenphaseList:
    """Phases in [0, 2*pi), one per eigenvalue, ascending."""

    phases: np.ndarray

    def __post_init__(self):
        ph = np.asarray(self.phases, dtype=float)
        if ph.ndim != 1 or ph.size < 1:
            raise ValueError("phases must be a non-empty 1-d vector")
        if np.any(ph < 0.0) or np.any(ph >= TWO_PI):
            raise ValueError("phases must lie in [0, 2*pi)")
        if np.any(np.diff(ph) < 0.0):
            raise ValueError("phases must be sorted ascending")
        ph.setflags(write=False)
        object.__setattr__(self, "phases", ph)

    def __len__(self) -> int:
        return self.phases.size


def _as_state_vector(psi) -> np.ndarray:
    if isinstance(psi, PureState):
        return psi.amplitudes
    return np.asarray(psi, dtype=complex)


def _as_matrix(u) -> np.ndarray:
    if isinstance(u, UnitaryMatrix):
        return u.matrix
    return np.asarray(u, dtype=complex)


def overlap(psi, phi) -> float:
    """Squared fidelity |<phi|psi>|^2, clamped into [0, 1]."""
    a = _as_state_vector(psi)
    b = _as_state_vector(phi)
    if a.shape != b.shape:
        raise ValueError("states live in different dimensions")
    val = abs(np.vdot(b, a)) ** 2
    return min(1.0, float(val))


def trace_distance_pure(psi, phi) -> float:
    """Trace distance sqrt(1 - |<phi|psi>|^2) between two pure states."""
    return math.sqrt(max(0.0, 1.0 - overlap(psi, phi)))


def unitary_distance(u, v) -> float:
    """Phase-invariant channel distance sqrt(1 - |tr(U^dag V)/d|^2)."""
    mu = _as_matrix(u)
    mv = _as_matrix(v)
    if mu.shape != mv.shape:
        raise ValueError("unitaries have different dimensions")
    d = mu.shape[0]
    t = min(1.0, abs(np.trace(mu.conj().T @ mv)) / d)
    return math.sqrt(max(0.0, 1.0 - t * t))


def eigenphases(u) -> EigenphaseList:
    """Eigenphases of a unitary, ascending in [0, 2*pi).

    Uses a complex Schur reduction, which is exact for normal matrices up
    to roundoff.  Raises if any eigenvalue modulus strays from 1 by more
    than 1e-8; accepted eigenvalues are renormalized onto the unit circle.
    """
    mat = _as_matrix(u)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("matrix must be square")
    t, _ = scipy.linalg.schur(mat, output="complex")
    eigvals = np.diag(t)
    moduli = np.abs(eigvals)
    worst = float(np.max(np.abs(moduli - 1.0)))
    if worst > EIGENVALUE_MODULUS_TOL:
        raise ValueError(f"eigenvalue modulus deviates from 1 by {worst:.3e}; input is not unitary")
    phases = np.mod(np.angle(eigvals / moduli), TWO_PI)
    # x % (2*pi) can round up to exactly 2*pi for tiny negative angles.
    phases[phases >= TWO_PI] = 0.0
    return EigenphaseList(np.sort(phases))


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed d x d unitary from a QR factorization.

    QR of a complex Ginibre matrix, with the R diagonal's phases folded
    into Q so the distribution is exactly Haar rather than QR-biased.
    """
    if d < 2:
        raise ValueError("dimension must be >= 2")
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def haar_random_unitary(d: int, seed) -> UnitaryMatrix:
    """Seeded Haar-random unitary; identical seed gives identical output."""
    rng = np.random.default_rng(seed)
    return UnitaryMatrix(haar_unitary(d, rng))


def random_state(d: int, rng: np.random.Generator) -> PureState:
    """Haar-random pure state: normalized complex Gaussian vector."""
    if d < 2:
        raise ValueError("dimension must be >= 2")
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(z / np.linalg.norm(z))


def pair_at_distance(d: int, eps: float, seed: int) -> tuple[UnitaryMatrix, UnitaryMatrix]:
    """Random pair (U, V) with dist(U, V) = eps to within 1e-9.

    V = U W where W has a prescribed spectrum: the phase deviation sits in
    conjugate eigenvalue pairs exp(+-i*delta/2) with the remaining
    eigenvalues at 1, then W is conjugated by a Haar unitary so the pair
    carries no preferred basis.  One conjugate pair suffices for d <= 4;
    larger d may need more pairs to reach large eps.
    """
    if d < 2:
        raise ValueError("dimension must be >= 2")
    if not 0.0 < eps <= 1.0:
        raise ValueError("eps must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    u = haar_unitary(d, rng)
    basis = haar_unitary(d, rng)

    target = d * math.sqrt(max(0.0, 1.0 - eps * eps))
    pairs = max(1, math.ceil((d - target) / 4.0))
    pairs = min(pairs, d // 2)
    c = (target - d + 2.0 * pairs) / (2.0 * pairs)
    half = math.acos(min(1.0, max(-1.0, c)))
    spectrum = np.zeros(d)
    spectrum[:pairs] = half
    spectrum[pairs:2 * pairs] = -half
    w = (basis * np.exp(1j * spectrum)) @ basis.conj().T
    return UnitaryMatrix(u), UnitaryMatrix(u @ w)


def swap_test_accept_prob(state_overlap: float) -> float:
    """Acceptance probability (1 + overlap) / 2 of a swap test.

    The argument is the squared fidelity of the two pure states compared,
    so it must lie in [0, 1].
    """
    if not 0.0 <= state_overlap <= 1.0:
        raise ValueError("overlap must lie in [0, 1]")
    return 0.5 * (1.0 + state_overlap)

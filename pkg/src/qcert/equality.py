"""Equality testing of unitaries through irrep character ratios.

Applying U^(x n) to a maximally entangled state on one irreducible block
and comparing against the V-image reduces equality testing to the
normalized character c = chi_lam(U^dag V) / dim H_lam:

    known reference   accept with probability |c|^2
    swap comparison   two swap tests, each accepting w.p. (1 + |c|^2)/2

Qubit testers use the two-row hook shape (n-1, 1), whose character ratio
is a sine quotient sin((n-1)D/2) / ((n-1) sin(D/2)) in the eigenphase gap
D.  For d >= 3 the staircase shape keeps every spectral pair in play and
the ratio factors over pairs.  Planners pick the smallest copy budget
whose worst-case ratio stays below 1/3 at the target distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import EigenphaseList, eigenphases, _as_matrix
from .irreps import (
    Partition,
    StaircasePlan,
    dim_symmetric_irrep,
    dim_unitary_irrep,
    power_difference_ratio,
    weyl_character,
)
from .membership import Decision, Verdict

# Character-ratio moduli within this distance of 1 are collapsed to exact
# equality so that identical unitaries accept with certainty.
EXACT_EQUALITY_TOL = 1e-12


class TesterMode(Enum):
    QUBIT_KNOWN = "qubit-known"
    QUBIT_SWAP = "qubit-swap"
    QUDIT_KNOWN = "qudit-known"
    QUDIT_SWAP = "qudit-swap"

    @property
    def is_swap(self) -> bool:
        return self in (TesterMode.QUBIT_SWAP, TesterMode.QUDIT_SWAP)


def _is_hook_two_row(parts: tuple[int, ...], d: int) -> bool:
    return d == 2 and len(parts) == 2 and parts[1] == 1 and parts[0] >= 2


def _staircase_multiple(parts: tuple[int, ...], d: int) -> int | None:
    """Return s with parts = (s-1) * (d-1, d-2, ..., 0), else None."""
    if len(parts) != d or parts[-1] != 0:
        return None
    step = parts[0] // (d - 1) if d > 1 else 0
    if step < 1:
        return None
    if all(parts[i] == (d - 1 - i) * step for i in range(d)):
        return step + 1
    return None


@dataclass(frozen=True)
class UnitaryTestPlan:
    """Copy budget and shape for one equality test.

    Qubit modes carry lam = (n-1, 1) on d = 2; qudit modes carry the
    staircase shape with odd order s and n = (s-1) * C(d, 2) on d >= 3.
    repetitions is the number of independent accept/reject draws: 1 for
    known-reference testers, 2 for swap testers.
    """

    mode: TesterMode
    dimension: int
    epsilon: float
    n: int
    partition: Partition
    s: int | None
    repetitions: int

    def __post_init__(self):
        if not 0.0 < self.epsilon <= 1.0:
            raise ValueError("epsilon must lie in (0, 1]")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        parts = self.partition.padded()
        if self.mode in (TesterMode.QUBIT_KNOWN, TesterMode.QUBIT_SWAP):
            if self.dimension != 2:
                raise ValueError("qubit modes require dimension 2")
            if self.n < 3 or parts != (self.n - 1, 1):
                raise ValueError("qubit modes require the hook shape (n-1, 1) with n >= 3")
            if self.s is not None:
                raise ValueError("qubit modes carry no staircase order")
        else:
            if self.dimension < 3:
                raise ValueError("qudit modes require dimension >= 3")
            if self.s is None or self.s < 3 or self.s % 2 == 0:
                raise ValueError("qudit modes require an odd staircase order s >= 3")
            plan = StaircasePlan(self.dimension, self.s)
            if self.n != plan.n or parts != plan.partition.padded():
                raise ValueError("qudit modes require the staircase shape for (d, s)")

    @property
    def ancilla_dimension(self) -> int:
        """ceil(dim H / dim K): extra register needed when H outgrows K."""
        h = dim_unitary_irrep(self.partition)
        k = dim_symmetric_irrep(self.partition)
        return -(-h // k)

    @property
    def soundness_cap(self) -> float:
        return soundness_certificate(self, self.epsilon)


@dataclass(frozen=True)
class AcceptanceAnalysis:
    """Exact acceptance statistics of a plan on one concrete pair."""

    character_ratio: complex
    per_test_accept_prob: float
    accept_prob: float
    soundness_cap: float
    big_gap_pairs: int


def qubit_known_copies(epsilon: float) -> float:
    """Un-rounded qubit copy budget sqrt(3)/eps + 1 for a known reference."""
    if not 0.0 < epsilon <= 1.0:
        raise ValueError("epsilon must lie in (0, 1]")
    return math.sqrt(3.0) / epsilon + 1.0


def qubit_swap_copies(epsilon: float) -> float:
    """Un-rounded qubit copy budget 3/eps + 1 for the swap variant."""
    if not 0.0 < epsilon <= 1.0:
        raise ValueError("epsilon must lie in (0, 1]")
    return 3.0 / epsilon + 1.0


def plan_qubit_known(epsilon: float) -> UnitaryTestPlan:
    """n = ceil(sqrt(3)/eps + 1), at least 3; cap 1/((n-1)^2 eps^2) <= 1/3."""
    n = max(3, math.ceil(qubit_known_copies(epsilon)))
    return UnitaryTestPlan(
        mode=TesterMode.QUBIT_KNOWN,
        dimension=2,
        epsilon=epsilon,
        n=n,
        partition=Partition((n - 1, 1), 2),
        s=None,
        repetitions=1,
    )


def plan_qubit_swap(epsilon: float) -> UnitaryTestPlan:
    """n = ceil(3/eps + 1); two swap tests, accept only if both pass."""
    n = max(3, math.ceil(qubit_swap_copies(epsilon)))
    return UnitaryTestPlan(
        mode=TesterMode.QUBIT_SWAP,
        dimension=2,
        epsilon=epsilon,
        n=n,
        partition=Partition((n - 1, 1), 2),
        s=None,
        repetitions=2,
    )


def staircase_order(epsilon: float) -> int:
    """Smallest odd s strictly above 6/eps."""
    if not 0.0 < epsilon <= 1.0:
        raise ValueError("epsilon must lie in (0, 1]")
    s = math.floor(6.0 / epsilon) + 1
    while s <= 6.0 / epsilon or s % 2 == 0:
        s += 1
    return s


def plan_qudit(d: int, epsilon: float, known_reference: bool) -> UnitaryTestPlan:
    """Staircase plan for d >= 3 with n = (s-1) * C(d, 2) copies."""
    if d < 3:
        raise ValueError("qudit planning requires dimension >= 3; use a qubit mode for d = 2")
    s = staircase_order(epsilon)
    stair = StaircasePlan(d, s)
    return UnitaryTestPlan(
        mode=TesterMode.QUDIT_KNOWN if known_reference else TesterMode.QUDIT_SWAP,
        dimension=d,
        epsilon=epsilon,
        n=stair.n,
        partition=stair.partition,
        s=s,
        repetitions=1 if known_reference else 2,
    )


def plan_for_mode(mode: TesterMode, dimension: int, epsilon: float) -> UnitaryTestPlan:
    if mode is TesterMode.QUBIT_KNOWN:
        return plan_qubit_known(epsilon)
    if mode is TesterMode.QUBIT_SWAP:
        return plan_qubit_swap(epsilon)
    return plan_qudit(dimension, epsilon, known_reference=mode is TesterMode.QUDIT_KNOWN)


def character_ratio(partition: Partition, phases) -> complex:
    """chi_lam at the given spectrum divided by dim H_lam.

    Hook shapes on d = 2 and staircase multiples evaluate through their
    closed pair-factor forms; anything else falls back to the bialternant.
    """
    theta = phases.phases if isinstance(phases, EigenphaseList) else np.asarray(phases, float)
    parts = partition.padded()
    d = partition.d
    if theta.size != d:
        raise ValueError(f"expected {d} phases, got {theta.size}")
    if _is_hook_two_row(parts, d):
        m = parts[0]
        xy = complex(math.cos(theta[0] + theta[1]), math.sin(theta[0] + theta[1]))
        return xy * power_difference_ratio(theta[0], theta[1], m) / m
    s = _staircase_multiple(parts, d)
    if s is not None:
        value = 1 + 0j
        for j in range(d):
            for k in range(j + 1, d):
                value *= power_difference_ratio(theta[j], theta[k], s)
        return value / s ** math.comb(d, 2)
    return weyl_character(partition, theta) / dim_unitary_irrep(partition)


def big_gap_pair_count(phases, epsilon: float, d: int) -> int:
    """Pairs with sin^2(D/2) >= d(2 eps^2 - eps^4) / (2(d-1)).

    Diagnostic only: every such pair contributes a factor at most
    2/(s*eps) to the staircase ratio.
    """
    theta = phases.phases if isinstance(phases, EigenphaseList) else np.asarray(phases, float)
    cut = d * (2.0 * epsilon**2 - epsilon**4) / (2.0 * (d - 1))
    count = 0
    for j in range(theta.size):
        for k in range(j + 1, theta.size):
            if math.sin(0.5 * (theta[k] - theta[j])) ** 2 >= cut:
                count += 1
    return count


def analyze(u, v, plan: UnitaryTestPlan) -> AcceptanceAnalysis:
    """Exact acceptance probability of the plan on the pair (u, v).

    Works entirely from the spectrum of U^dag V.  A ratio modulus within
    1e-12 of 1 is collapsed to exact equality, keeping completeness
    perfect for pairs that agree up to a global phase.
    """
    mu = _as_matrix(u)
    mv = _as_matrix(v)
    if mu.shape != mv.shape or mu.shape[0] != plan.dimension:
        raise ValueError("pair dimensions do not match the plan")
    phases = eigenphases(mu.conj().T @ mv)
    c = character_ratio(plan.partition, phases)
    weight = abs(c) ** 2
    if weight >= 1.0 - EXACT_EQUALITY_TOL:
        weight = 1.0
    weight = min(1.0, weight)
    per_test = 0.5 * (1.0 + weight) if plan.mode.is_swap else weight
    return AcceptanceAnalysis(
        character_ratio=c,
        per_test_accept_prob=per_test,
        accept_prob=per_test**plan.repetitions,
        soundness_cap=plan.soundness_cap,
        big_gap_pairs=big_gap_pair_count(phases, plan.epsilon, plan.dimension),
    )


def sample_verdict(analysis: AcceptanceAnalysis, plan: UnitaryTestPlan, rng: np.random.Generator) -> Verdict:
    """Draw the plan's repetitions as Bernoulli trials; accept iff all pass."""
    draws = rng.random(plan.repetitions)
    successes = int(np.count_nonzero(draws < analysis.per_test_accept_prob))
    decision = Decision.MEMBER if successes == plan.repetitions else Decision.FAR
    return Verdict(decision=decision, statistic=successes / plan.repetitions)


def run_unitary_test(u, v, plan: UnitaryTestPlan, rng: np.random.Generator) -> Verdict:
    """One simulated run; Member means equal up to a global phase."""
    return sample_verdict(analyze(u, v, plan), plan, rng)


def soundness_certificate(plan: UnitaryTestPlan, epsilon: float) -> float:
    """Worst-case acceptance at distance >= epsilon, clamped into [0, 1].

    Known modes:  base^2 with base = 1/((n-1) eps) for qubits and
    2/(s eps) for qudits.  Swap modes: ((1 + base^2)/2)^2.
    """
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    if plan.mode in (TesterMode.QUBIT_KNOWN, TesterMode.QUBIT_SWAP):
        base = 1.0 / ((plan.n - 1) * epsilon)
    else:
        base = 2.0 / (plan.s * epsilon)
    weight_cap = min(1.0, base * base)
    if plan.mode.is_swap:
        return (0.5 * (1.0 + weight_cap)) ** 2
    return weight_cap


def eigenphase_gap_to_distance(alpha: float, beta: float) -> float:
    """|sin((alpha - beta)/2)|: channel distance of diag phases on d = 2."""
    return abs(math.sin(0.5 * (alpha - beta)))

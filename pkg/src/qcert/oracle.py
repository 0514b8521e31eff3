"""Brute-force cross-checks on small tensor powers.

Everything here works on the full d^n-dimensional product space with
dense matrices: permutation operators, isotypic projectors assembled
from symmetric-group characters, and exact acceptance statistics.  The
point is independence: none of it reuses the closed forms under test,
so agreement is evidence rather than tautology.

Hard caps keep the cost sane: d^n <= 4096 and n <= 7 (the symmetric
group is enumerated element by element).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import PureState, _as_matrix
from .irreps import (
    Partition,
    dim_symmetric_irrep,
    dim_unitary_irrep,
    partitions_of,
    symmetric_group_character,
)

DIMENSION_CAP = 4096
GROUP_ORDER_CAP = 7
PROJECTOR_TOL = 1e-12


def _check_caps(d: int, n: int):
    if d**n > DIMENSION_CAP:
        raise ValueError(f"product dimension {d**n} exceeds cap {DIMENSION_CAP}")
    if n > GROUP_ORDER_CAP:
        raise ValueError(f"group order {n}! exceeds enumeration cap {GROUP_ORDER_CAP}!")


def _digit_table(d: int, n: int) -> np.ndarray:
    """Row k holds digit k of every basis index: shape (n, d^n)."""
    return np.array(np.unravel_index(np.arange(d**n), (d,) * n))


def type_projector(d: int, n: int, counts: tuple[int, ...]) -> np.ndarray:
    """Diagonal projector onto basis strings with the given letter counts."""
    _check_caps(d, n)
    counts = tuple(int(c) for c in counts)
    if len(counts) != d or sum(counts) != n:
        raise ValueError("counts must list occurrences of each of the d letters, summing to n")
    digits = _digit_table(d, n)
    mask = np.ones(d**n, dtype=bool)
    for letter, c in enumerate(counts):
        mask &= np.count_nonzero(digits == letter, axis=0) == c
    return np.diag(mask.astype(float))


def permutation_operator(sigma: tuple[int, ...], d: int) -> np.ndarray:
    """P(sigma) moving letter k of the input word to position sigma(k).

    With that convention P(sigma) P(tau) = P(sigma tau) for the
    composition (sigma tau)(k) = sigma(tau(k)).
    """
    n = len(sigma)
    _check_caps(d, n)
    size = d**n
    digits = _digit_table(d, n)
    image = np.empty_like(digits)
    image[np.asarray(sigma)] = digits
    targets = np.ravel_multi_index(tuple(image), (d,) * n)
    op = np.zeros((size, size))
    op[targets, np.arange(size)] = 1.0
    return op


def cycle_type(sigma: tuple[int, ...]) -> tuple[int, ...]:
    """Cycle lengths of sigma, non-increasing."""
    n = len(sigma)
    seen = [False] * n
    lengths = []
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = sigma[k]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def isotypic_projector(partition: Partition, d: int, n: int) -> np.ndarray:
    """Projector onto the lam-isotypic block of the n-fold product space.

    Group-averaged from symmetric-group characters:
        P_lam = (dim K_lam / n!) sum_sigma chi_lam(sigma) P(sigma).
    One Newton-Schulz sweep absorbs the float accumulation when n! terms
    leave P^2 visibly off P.
    """
    _check_caps(d, n)
    if partition.n != n:
        raise ValueError("partition size must equal the number of factors")
    size = d**n
    acc = np.zeros((size, size))
    for sigma in itertools.permutations(range(n)):
        chi = symmetric_group_character(partition, Partition(cycle_type(sigma), n))
        if chi:
            acc += chi * permutation_operator(sigma, d)
    proj = acc * (dim_symmetric_irrep(partition) / math.factorial(n))
    if np.max(np.abs(proj @ proj - proj)) > PROJECTOR_TOL:
        proj = 3.0 * (proj @ proj) - 2.0 * (proj @ proj @ proj)
    return proj


def tensor_power(matrix, n: int) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    base = _as_matrix(matrix)
    for _ in range(n):
        out = np.kron(out, base)
    return out


def tensor_state(state: PureState, n: int) -> np.ndarray:
    out = np.array([1.0 + 0j])
    for _ in range(n):
        out = np.kron(out, state.amplitudes)
    return out


def character_via_tensor(partition: Partition, matrix, n: int) -> complex:
    """chi_lam(W) on the unitary side: tr(W^(x n) P_lam) / dim K_lam."""
    w = _as_matrix(matrix)
    proj = isotypic_projector(partition, w.shape[0], n)
    value = complex(np.einsum("ij,ji->", tensor_power(w, n), proj))
    return value / dim_symmetric_irrep(partition)


def observable_moments(state: PureState, reference: PureState, n: int, k: int) -> float:
    """k-th moment of M = (1/n) sum_i (|ref><ref|)_i on state^(x n), k in {1, 2}.

    Applies M by iterating over positions rather than materializing the
    d^n x d^n matrix; cost n * d^n per application.
    """
    if k not in (1, 2):
        raise ValueError("only first and second moments are supported")
    d = state.dimension
    _check_caps(d, n)
    if reference.dimension != d:
        raise ValueError("reference dimension mismatch")
    psi = tensor_state(state, n).reshape((d,) * n)
    rho = np.outer(reference.amplitudes, reference.amplitudes.conj())

    def apply_mean(vec: np.ndarray) -> np.ndarray:
        out = np.zeros_like(vec)
        for i in range(n):
            out += np.moveaxis(np.tensordot(rho, vec, axes=([1], [i])), 0, i)
        return out / n

    m_psi = apply_mean(psi)
    if k == 1:
        return float(np.real(np.vdot(psi, m_psi)))
    return float(np.real(np.vdot(m_psi, m_psi)))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    discrepancy: float
    detail: str = ""


def _result(name: str, discrepancy: float, tol: float, detail: str = "") -> CheckResult:
    return CheckResult(name, bool(discrepancy <= tol), float(discrepancy), detail)


def verification_suite(seed: int = 7) -> list[CheckResult]:
    """Independent dense-matrix checks of the closed forms.

    Every check recomputes its target quantity from permutation
    operators and explicit tensor products on spaces small enough to
    enumerate, then compares against the library's formulas.
    """
    from . import equality, membership
    from .core import haar_random_unitary, overlap, random_state
    from .irreps import StaircasePlan, schur_weyl_dimension_sum, staircase_character, weyl_character

    rng = np.random.default_rng(seed)
    checks: list[CheckResult] = []

    # Type projectors resolve the identity and their traces count words.
    d, n = 3, 4
    total = np.zeros((d**n, d**n))
    trace_gap = 0.0
    for counts in itertools.product(range(n + 1), repeat=d):
        if sum(counts) != n:
            continue
        proj = type_projector(d, n, counts)
        total += proj
        expected = math.factorial(n)
        for c in counts:
            expected //= math.factorial(c)
        trace_gap = max(trace_gap, abs(np.trace(proj) - expected))
    checks.append(_result("type-projectors-resolve-identity", np.max(np.abs(total - np.eye(d**n))), 0.0))
    checks.append(_result("type-projector-trace-is-multinomial", trace_gap, 0.0))

    # Permutation operators represent the group and trace to d^cycles.
    rep_gap = 0.0
    trace_gap = 0.0
    d, n = 2, 4
    perms = list(itertools.permutations(range(n)))
    for _ in range(12):
        sigma = perms[rng.integers(len(perms))]
        tau = perms[rng.integers(len(perms))]
        composed = tuple(sigma[tau[k]] for k in range(n))
        gap = np.max(
            np.abs(
                permutation_operator(sigma, d) @ permutation_operator(tau, d)
                - permutation_operator(composed, d)
            )
        )
        rep_gap = max(rep_gap, gap)
        trace_gap = max(
            trace_gap,
            abs(np.trace(permutation_operator(sigma, d)) - d ** len(cycle_type(sigma))),
        )
    checks.append(_result("permutation-operators-compose", rep_gap, 0.0))
    checks.append(_result("permutation-trace-counts-cycles", trace_gap, 0.0))

    # Isotypic projectors: idempotent, mutually orthogonal, complete,
    # correct rank, and commuting with W^(x n).
    d, n = 2, 4
    shapes = [Partition(p, d) for p in partitions_of(n, d)]
    projs = {p: isotypic_projector(p, d, n) for p in shapes}
    idem = max(np.max(np.abs(pr @ pr - pr)) for pr in projs.values())
    ortho = 0.0
    for a, b in itertools.combinations(shapes, 2):
        ortho = max(ortho, np.max(np.abs(projs[a] @ projs[b])))
    complete = np.max(np.abs(sum(projs.values()) - np.eye(d**n)))
    rank_gap = max(
        abs(np.trace(projs[p]).real - dim_symmetric_irrep(p) * dim_unitary_irrep(p))
        for p in shapes
    )
    w = haar_random_unitary(d, rng)
    wn = tensor_power(w.matrix, n)
    commute = max(np.max(np.abs(pr @ wn - wn @ pr)) for pr in projs.values())
    checks.append(_result("isotypic-idempotent", idem, 1e-10))
    checks.append(_result("isotypic-orthogonal", ortho, 1e-10))
    checks.append(_result("isotypic-complete", complete, 1e-10))
    checks.append(_result("isotypic-rank-product", rank_gap, 1e-8))
    checks.append(_result("isotypic-commutes-with-tensor-power", commute, 1e-10))

    # Weyl bialternant against the dense trace, random shape and unitary.
    d, n = 2, 5
    shape = Partition((3, 2), d)
    w = haar_random_unitary(d, rng)
    theta = np.sort(np.angle(np.linalg.eigvals(w.matrix)) % (2 * math.pi))
    gap = abs(weyl_character(shape, theta) - character_via_tensor(shape, w.matrix, n))
    checks.append(_result("weyl-character-matches-tensor-trace", gap, 1e-8))

    # Staircase-shaped ratios against the dense trace: the even order
    # goes through the pair-factor dispatch, the odd one additionally
    # through the plan-level character.
    for d, s in ((3, 2), (3, 3)):
        shape = Partition(tuple((d - 1 - i) * (s - 1) for i in range(d)), d)
        n = shape.n
        w = haar_random_unitary(d, rng)
        theta = np.sort(np.angle(np.linalg.eigvals(w.matrix)) % (2 * math.pi))
        ratio = equality.character_ratio(shape, theta)
        dense = character_via_tensor(shape, w.matrix, n) / dim_unitary_irrep(shape)
        checks.append(_result(f"staircase-ratio-matches-tensor-trace-s{s}", abs(ratio - dense), 1e-8))
        if s % 2:
            plan = StaircasePlan(d, s)
            gap = abs(staircase_character(plan, theta) - character_via_tensor(shape, w.matrix, n))
            checks.append(_result(f"staircase-character-matches-tensor-trace-s{s}", gap, 1e-7))

    # Qubit hook ratio in sine form against the dense trace.
    d, n = 2, 4
    shape = Partition((n - 1, 1), d)
    w = haar_random_unitary(d, rng)
    theta = np.sort(np.angle(np.linalg.eigvals(w.matrix)) % (2 * math.pi))
    ratio = equality.character_ratio(shape, theta)
    dense = character_via_tensor(shape, w.matrix, n) / dim_unitary_irrep(shape)
    checks.append(_result("qubit-hook-ratio-matches-tensor-trace", abs(ratio - dense), 1e-8))

    # Observable moments against the binomial law of the type statistic.
    d, n = 2, 6
    psi = random_state(d, rng)
    phi = random_state(d, rng)
    x1 = overlap(phi, psi)
    m1 = observable_moments(psi, phi, n, 1)
    m2 = observable_moments(psi, phi, n, 2)
    gap1 = abs(m1 - x1)
    gap2 = abs(m2 - (x1 * (1 - x1) / n + x1**2))
    checks.append(_result("mean-observable-first-moment", gap1, 1e-10))
    checks.append(_result("mean-observable-second-moment", gap2, 1e-10))

    # Two-copy symmetric projector expectation is (1 + overlap)/2.
    sym = isotypic_projector(Partition((2,), d), d, 2)
    pair = np.kron(phi.amplitudes, psi.amplitudes)
    swap_prob = float(np.real(np.vdot(pair, sym @ pair)))
    gap = abs(swap_prob - 0.5 * (1.0 + x1))
    checks.append(_result("symmetric-projector-swap-accept", gap, 1e-10))

    # Dimension bookkeeping: sum over shapes of dim K * dim H = d^n.
    gap = 0.0
    for d, n in ((2, 6), (3, 5), (4, 4)):
        gap = max(gap, abs(schur_weyl_dimension_sum(n, d) - d**n))
    checks.append(_result("dimension-sum-matches-product-space", gap, 0.0))

    # Sampled type statistic against the exact binomial, coarse TV check.
    d, n = 2, 5
    psi = random_state(d, rng)
    phi = random_state(d, rng)
    x1 = overlap(phi, psi)
    trials = 4000
    counts = np.bincount(
        [membership._sample_type_count(x1, n, rng) for _ in range(trials)], minlength=n + 1
    )
    from scipy.stats import binom

    tv = 0.5 * float(np.sum(np.abs(counts / trials - binom.pmf(np.arange(n + 1), n, x1))))
    checks.append(_result("sampled-type-statistic-near-binomial", tv, 0.05, f"tv={tv:.4f}"))

    return checks

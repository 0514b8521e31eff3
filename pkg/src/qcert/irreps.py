"""Partitions, irreducible dimensions, and characters.

The tensor power (C^d)^(x n) decomposes under the commuting actions of
U(d) and the symmetric group S_n into blocks H_lam (x) K_lam indexed by
partitions lam of n with at most d rows.  Everything here is exact where
exactness is possible: dimensions and symmetric group characters use
Python big integers, while characters at generic unitary spectra use
floating point determinants.

Glossary:

    dim K_lam   n! / (b_1! ... b_d!) * prod_{i<j} (b_i - b_j)
                with b_i = lam_i + d - i (the shifted first-column beta set)
    dim H_lam   prod_{i<j} (lam_i - lam_j + j - i) / (j - i)
    chi_lam     det(x_i^(lam_j + d - j)) / det(x_i^(d - j)) on unitary
                spectra x = exp(i*theta); semistandard tableau sum on
                degenerate spectra where the determinants vanish
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from .core import EigenphaseList

# Two complex spectrum points closer than this count as coincident, which
# switches characters onto their confluent (degenerate-limit) evaluation.
DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class Partition:
    """Non-increasing parts summing to n, at most d rows.

    Trailing zero parts are stripped on construction; ``padded()`` gives
    the canonical length-d form back.
    """

    parts: tuple[int, ...]
    d: int

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p < 0 for p in parts):
            raise ValueError("parts must be non-negative")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError("parts must be non-increasing")
        if self.d < 1:
            raise ValueError("ambient row count d must be >= 1")
        if len(parts) > self.d:
            raise ValueError(f"partition has {len(parts)} rows, more than d = {self.d}")
        object.__setattr__(self, "parts", parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    def padded(self) -> tuple[int, ...]:
        return self.parts + (0,) * (self.d - len(self.parts))

    def shifted(self) -> tuple[int, ...]:
        """Strictly decreasing shifted parts lam_i + d - i over the padded shape."""
        return tuple(p + self.d - 1 - i for i, p in enumerate(self.padded()))

    def normalized(self) -> tuple[float, ...]:
        """Row fractions lam_i / n; the empty shape maps to all zeros."""
        if self.n == 0:
            return (0.0,) * self.d
        return tuple(p / self.n for p in self.padded())

    def __str__(self) -> str:
        return f"({', '.join(str(p) for p in self.padded())})"


@dataclass(frozen=True)
class TypeVector:
    """Occupation counts of the d symbols in a length-n word."""

    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if len(counts) < 1 or any(c < 0 for c in counts):
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "counts", counts)

    @property
    def n(self) -> int:
        return sum(self.counts)

    @property
    def d(self) -> int:
        return len(self.counts)


@dataclass(frozen=True)
class StaircasePlan:
    """Rectangular-free staircase shape lam_i = (d - i) * (s - 1).

    Requires d >= 3 and odd s >= 3.  The shape has n = (s - 1) * C(d, 2)
    boxes and its unitary irrep dimension is exactly s^C(d, 2).
    """

    d: int
    s: int

    def __post_init__(self):
        if self.d < 3:
            raise ValueError("staircase shapes need d >= 3")
        if self.s < 3 or self.s % 2 == 0:
            raise ValueError("staircase order s must be odd and >= 3")

    @property
    def n(self) -> int:
        return (self.s - 1) * math.comb(self.d, 2)

    @property
    def partition(self) -> Partition:
        return Partition(tuple((self.d - i) * (self.s - 1) for i in range(1, self.d + 1)), self.d)


def multinomial(t) -> int:
    """Exact multinomial coefficient n! / (t_1! ... t_d!)."""
    counts = t.counts if isinstance(t, TypeVector) else tuple(int(c) for c in t)
    if any(c < 0 for c in counts):
        raise ValueError("counts must be non-negative")
    num = math.factorial(sum(counts))
    den = math.prod(math.factorial(c) for c in counts)
    return num // den


def dim_symmetric_irrep(lam: Partition) -> int:
    """Dimension of the S_n irrep K_lam, exact.

    Evaluates n! * prod_{i<j}(b_i - b_j) / prod_i b_i! on the shifted
    parts b_i = lam_i + d - i.  The value does not depend on how far the
    partition is padded with zeros.
    """
    d = lam.d
    beta = lam.shifted()
    num = math.factorial(lam.n)
    for i in range(d):
        for j in range(i + 1, d):
            num *= beta[i] - beta[j]
    den = math.prod(math.factorial(b) for b in beta)
    if num % den:
        raise ArithmeticError("dimension formula did not divide exactly")
    return num // den


def dim_unitary_irrep(lam: Partition) -> int:
    """Dimension of the U(d) irrep H_lam, exact.

    Product formula prod_{i<j} (lam_i - lam_j + j - i) / (j - i).
    """
    parts = lam.padded()
    d = lam.d
    num = 1
    den = 1
    for i in range(d):
        for j in range(i + 1, d):
            num *= parts[i] - parts[j] + j - i
            den *= j - i
    if num % den:
        raise ArithmeticError("dimension formula did not divide exactly")
    return num // den


def dim_bounds_check(lam: Partition) -> tuple[float, float]:
    """Entropy sandwich for dim K_lam.

    Returns (exp(n*H(lam/n)) * (n+d)^(-d(d+1)/2), exp(n*H(lam/n))) where H
    is the Shannon entropy of the normalized row lengths in nats.
    """
    n = lam.n
    d = lam.d
    if n == 0:
        return (n + d) ** (-d * (d + 1) / 2.0), 1.0
    entropy = 0.0
    for p in lam.parts:
        if p > 0:
            frac = p / n
            entropy -= frac * math.log(frac)
    upper = math.exp(n * entropy)
    lower = upper * (n + d) ** (-d * (d + 1) / 2.0)
    return lower, upper


def _phases_array(phases) -> np.ndarray:
    if isinstance(phases, EigenphaseList):
        return phases.phases
    return np.asarray(phases, dtype=float)


def power_difference_ratio(theta_j: float, theta_k: float, m: int) -> complex:
    """(x_k^m - x_j^m) / (x_k - x_j) on unit-circle points x = exp(i*theta).

    Evaluated through the sine form
        exp(i*(m-1)*(theta_j + theta_k)/2) * sin(m*D/2) / sin(D/2),
    D = theta_k - theta_j, which has no cancellation for small gaps.  When
    the two points coincide within 1e-12 the confluent limit m * x_j^(m-1)
    is returned instead.
    """
    xj = complex(math.cos(theta_j), math.sin(theta_j))
    xk = complex(math.cos(theta_k), math.sin(theta_k))
    if abs(xk - xj) <= DEGENERACY_TOL:
        return m * xj ** (m - 1)
    half = 0.5 * (theta_k - theta_j)
    mid = 0.5 * (m - 1) * (theta_j + theta_k)
    ratio = math.sin(m * half) / math.sin(half)
    return complex(math.cos(mid), math.sin(mid)) * ratio


def sine_ratio(s: int, x: float) -> float:
    """sin(s*x) / sin(x) with its limit value at the zeros of sin(x).

    For odd s the limit at every multiple of pi equals s, and the modulus
    is bounded by s everywhere.
    """
    sx = math.sin(x)
    if abs(sx) <= 1e-12:
        return s * math.cos(s * x) / math.cos(x)
    return math.sin(s * x) / sx


def _ssyt_weight_sum(shape: tuple[int, ...], xs: np.ndarray) -> complex:
    """Schur polynomial as a sum over semistandard tableaux.

    Exact at degenerate spectra where the bialternant is 0/0.  Cost grows
    with the number of tableaux, so this path is reserved for the
    degenerate locus.
    """
    rows = [r for r in shape if r > 0]
    d = len(xs)
    if len(rows) > d:
        return 0j
    if not rows:
        return 1 + 0j

    total = 0j

    def fill_row(r: int, prev: tuple[int, ...] | None, acc: complex):
        nonlocal total
        length = rows[r]
        row = [0] * length

        def place(c: int, lo: int, prod: complex):
            nonlocal total
            if c == length:
                if r + 1 == len(rows):
                    total += prod
                else:
                    fill_row(r + 1, tuple(row), prod)
                return
            floor = max(lo, prev[c] + 1 if prev is not None else 1)
            for v in range(floor, d + 1):
                row[c] = v
                place(c + 1, v, prod * xs[v - 1])

        place(0, 1, acc)

    fill_row(0, None, 1 + 0j)
    return total


def weyl_character(lam: Partition, phases) -> complex:
    """Character of the U(d) irrep H_lam at spectrum exp(i*theta).

    Generic spectra go through the bialternant determinant ratio; spectra
    with coincident points fall back to the semistandard tableau sum,
    which needs no limits.
    """
    theta = _phases_array(phases)
    d = lam.d
    if theta.size != d:
        raise ValueError(f"expected {d} phases, got {theta.size}")
    xs = np.exp(1j * theta)
    if d > 1:
        gaps = np.abs(xs[:, None] - xs[None, :])
        if np.min(gaps[np.triu_indices(d, k=1)]) <= DEGENERACY_TOL:
            return complex(_ssyt_weight_sum(lam.padded(), xs))
    parts = lam.padded()
    exponents = np.array([parts[j] + d - 1 - j for j in range(d)])
    numer = np.linalg.det(xs[:, None] ** exponents[None, :])
    denom = np.linalg.det(xs[:, None] ** np.arange(d - 1, -1, -1)[None, :])
    return complex(numer / denom)


def staircase_character(plan: StaircasePlan, phases) -> complex:
    """Character of the staircase irrep divided into its pair factors.

    chi(x) = prod_{j<k} (x_k^s - x_j^s) / (x_k - x_j), each factor taken
    in its confluent limit s * x^(s-1) when the two spectrum points
    coincide within 1e-12.  The modulus never exceeds s^C(d,2).
    """
    theta = _phases_array(phases)
    if theta.size != plan.d:
        raise ValueError(f"expected {plan.d} phases, got {theta.size}")
    value = 1 + 0j
    for j in range(plan.d):
        for k in range(j + 1, plan.d):
            value *= power_difference_ratio(theta[j], theta[k], plan.s)
    return value


def _beta_to_partition(beta: tuple[int, ...]) -> tuple[int, ...]:
    length = len(beta)
    parts = tuple(beta[i] - (length - 1 - i) for i in range(length))
    while parts and parts[-1] == 0:
        parts = parts[:-1]
    return parts


@lru_cache(maxsize=None)
def _mn_recurse(lam: tuple[int, ...], mu: tuple[int, ...]) -> int:
    if not mu:
        return 1
    k = mu[0]
    length = len(lam)
    beta = tuple(lam[i] + length - 1 - i for i in range(length))
    beta_set = set(beta)
    total = 0
    for b in beta:
        if b < k or (b - k) in beta_set:
            continue
        crossed = sum(1 for c in beta if b - k < c < b)
        sign = -1 if crossed % 2 else 1
        moved = sorted((beta_set - {b}) | {b - k}, reverse=True)
        total += sign * _mn_recurse(_beta_to_partition(tuple(moved)), mu[1:])
    return total


def symmetric_group_character(lam: Partition, cycle_type: Partition) -> int:
    """Exact S_n character chi_lam on a conjugacy class.

    Murnaghan-Nakayama recursion over border strip removals, carried out
    on the first-column beta set: removing a strip of length k moves one
    bead b to b - k, with sign (-1)^(beads strictly in between).
    """
    if lam.n != cycle_type.n:
        raise ValueError("partition and cycle type must have equal weight")
    return _mn_recurse(lam.parts, cycle_type.parts)


def partitions_of(n: int, max_parts: int):
    """Yield all partitions of n with at most max_parts parts, as tuples."""
    def rec(remaining: int, cap: int, rows_left: int, prefix: tuple[int, ...]):
        if remaining == 0:
            yield prefix
            return
        if rows_left == 0:
            return
        for first in range(min(cap, remaining), 0, -1):
            yield from rec(remaining - first, first, rows_left - 1, prefix + (first,))

    yield from rec(n, n, max_parts, ())


def schur_weyl_dimension_sum(n: int, d: int) -> int:
    """Exact sum over lam of dim H_lam * dim K_lam; always equals d^n."""
    return reduce(
        lambda acc, parts: acc
        + dim_unitary_irrep(Partition(parts, d)) * dim_symmetric_irrep(Partition(parts, d)),
        partitions_of(n, d),
        0,
    )

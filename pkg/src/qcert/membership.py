"""State set membership testing from the type statistic of n copies.

Measuring n copies of psi with the occupation-count observable adapted to
a reference state phi yields T1/n with T1 ~ Binomial(n, x1), where
x1 = |<phi|psi>|^2.  A state at trace distance >= eps from every element
of the candidate set has every x1 <= 1 - eps^2, so thresholding the
statistic at 1 - eps^2/2 separates members from far states.  Members pass
with certainty; the copy budget n is chosen from exact binomial tails so
that all far states are rejected with probability at least 2/3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.stats import binom as _binom

from .core import PureState, overlap, trace_distance_pure

# Overlaps this close to 1 are indistinguishable from exact membership at
# the admission precision of PureState, and are treated as exact so that
# completeness stays perfect under floating point.
EXACT_MEMBERSHIP_TOL = 1e-12

_SOUNDNESS_TARGET = 2.0 / 3.0


class Decision(Enum):
    MEMBER = "member"
    FAR = "far"


@dataclass(frozen=True)
class Verdict:
    """Outcome of one test run: the decision and the realized statistic."""

    decision: Decision
    statistic: float


@dataclass(frozen=True, eq=False, init=False)
class StateSet:
    """Non-empty tuple of equal-dimension pure states.

    The minimum pairwise trace distance is recomputed on construction and
    is +inf for singletons.
    """

    states: tuple[PureState, ...]
    min_pairwise_distance: float

    def __init__(self, states):
        states = tuple(states)
        if not states:
            raise ValueError("state set must be non-empty")
        d = states[0].dimension
        if any(s.dimension != d for s in states):
            raise ValueError("states must share one dimension")
        delta = math.inf
        for i in range(len(states)):
            for j in range(i + 1, len(states)):
                delta = min(delta, trace_distance_pure(states[i], states[j]))
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "min_pairwise_distance", delta)

    @property
    def dimension(self) -> int:
        return self.states[0].dimension

    def __len__(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class MembershipPlan:
    """Copy budget and threshold for one membership test.

    n copies are measured per candidate element, so a physical run against
    the whole set consumes n * set_size copies; both numbers are exposed.
    chernoff_s records the exponential-moment scale 2*n*eps^2 used by the
    tail-bound diagnostics.
    """

    epsilon: float
    set_size: int
    n: int
    threshold: float
    chernoff_s: float

    @property
    def copies_per_observable(self) -> int:
        return self.n

    @property
    def total_copies(self) -> int:
        return self.n * self.set_size

    @property
    def threshold_count(self) -> int:
        return strict_exceed_count(self.n, self.threshold)


def strict_exceed_count(n: int, threshold: float) -> int:
    """Smallest integer t with t/n strictly above the threshold.

    Integer comparison avoids float ties between t/n and the threshold;
    products within 1e-9 of an integer are treated as exact.
    """
    scaled = n * threshold
    nearest = round(scaled)
    if abs(scaled - nearest) <= 1e-9:
        return int(nearest) + 1
    return math.floor(scaled) + 1


def _sample_type_count(x1: float, n: int, rng: np.random.Generator) -> int:
    if x1 >= 1.0:
        return n
    if x1 <= 0.0:
        return 0
    return int(rng.binomial(n, x1))


def sample_type_statistic(x1: float, n: int, rng: np.random.Generator) -> float:
    """One draw of T1/n with T1 ~ Binomial(n, x1); exactly 1 when x1 = 1."""
    if not 0.0 <= x1 <= 1.0:
        raise ValueError("x1 must lie in [0, 1]")
    if n < 1:
        raise ValueError("n must be >= 1")
    return _sample_type_count(x1, n, rng) / n


def mgf_type_statistic(x1: float, n: int, s: float) -> float:
    """Exact moment generating function (1 + (e^(s/n) - 1) * x1)^n."""
    if not 0.0 <= x1 <= 1.0:
        raise ValueError("x1 must lie in [0, 1]")
    if n < 1:
        raise ValueError("n must be >= 1")
    return (1.0 + (math.exp(s / n) - 1.0) * x1) ** n


def tail_exceed_prob(x1: float, n: int, threshold: float) -> float:
    """Exact Pr(Binomial(n, x1)/n > threshold) with a strict inequality."""
    k = strict_exceed_count(n, threshold)
    if k > n:
        return 0.0
    if x1 >= 1.0:
        return 1.0
    if x1 <= 0.0:
        return 0.0
    return float(_binom.sf(k - 1, n, x1))


def plan_membership(epsilon: float, set_size: int) -> MembershipPlan:
    """Smallest copy budget that rejects all far states w.p. >= 2/3.

    n is the least integer with (1 - q(n))^set_size >= 2/3, where q(n) is
    the exact binomial tail Pr(Binomial(n, 1 - eps^2)/n > 1 - eps^2/2).
    Exact tails rather than the large-deviation expansion: they are
    strictly sharper and leave no ambiguity about dropped terms.
    """
    if not 0.0 < epsilon <= 1.0:
        raise ValueError("epsilon must lie in (0, 1]")
    if set_size < 1:
        raise ValueError("set_size must be >= 1")
    p = 1.0 - epsilon * epsilon
    threshold = 1.0 - epsilon * epsilon / 2.0

    def sound(q: np.ndarray | float) -> np.ndarray | float:
        return (1.0 - q) ** set_size >= _SOUNDNESS_TARGET

    hi = 1
    while not sound(tail_exceed_prob(p, hi, threshold)):
        hi *= 2
        if hi > 10**8:
            raise RuntimeError("copy budget search failed to terminate")

    ns = np.arange(1, hi + 1)
    scaled = ns * threshold
    nearest = np.rint(scaled)
    kmin = np.where(np.abs(scaled - nearest) <= 1e-9, nearest, np.floor(scaled)) + 1
    q = np.where(kmin > ns, 0.0, _binom.sf(kmin - 1, ns, p))
    n = int(ns[np.argmax(sound(q))])
    return MembershipPlan(
        epsilon=epsilon,
        set_size=set_size,
        n=n,
        threshold=threshold,
        chernoff_s=2.0 * n * epsilon * epsilon,
    )


def chernoff_plan_size(epsilon: float, set_size: int) -> int:
    """Closed-form copy budget from the quartic tail-rate expansion.

    ceil(ln(1 - (2/3)^(1/set_size)) / ln(1 - 2*eps^4 + eps^5)), the
    pessimistic budget implied by bounding the tail with the exponential
    moment at s = 2*n*eps^2 and expanding the per-copy rate to quartic
    order with a quintic slack term.  Scales as eps^-4 * ln(set_size).
    Only meaningful where the dropped higher-order terms are small; the
    argument range is restricted to eps <= 0.7 to stay in that regime.
    """
    if not 0.0 < epsilon <= 0.7:
        raise ValueError("epsilon must lie in (0, 0.7] for the quartic expansion")
    if set_size < 1:
        raise ValueError("set_size must be >= 1")
    rate = 1.0 - 2.0 * epsilon**4 + epsilon**5
    return math.ceil(math.log(1.0 - _SOUNDNESS_TARGET ** (1.0 / set_size)) / math.log(rate))


def membership_accept_prob(overlaps, plan: MembershipPlan) -> float:
    """Exact acceptance probability 1 - prod_phi (1 - q_phi).

    q_phi is the exact tail of the statistic against element phi at
    overlap x1(phi).  Overlaps within 1e-12 of 1 count as exact
    membership and force acceptance.
    """
    reject = 1.0
    for x1 in overlaps:
        x1 = min(1.0, float(x1))
        if x1 >= 1.0 - EXACT_MEMBERSHIP_TOL:
            return 1.0
        reject *= 1.0 - tail_exceed_prob(x1, plan.n, plan.threshold)
    return 1.0 - reject


def run_membership_test(
    psi: PureState, state_set: StateSet, plan: MembershipPlan, rng: np.random.Generator
) -> Verdict:
    """One simulated run: draw the statistic against every element.

    Member iff some statistic strictly exceeds the threshold.  A psi that
    equals a set element (within admission precision) always comes back
    Member: its statistic is exactly 1.
    """
    if psi.dimension != state_set.dimension:
        raise ValueError("test state dimension does not match the set")
    if len(state_set) != plan.set_size:
        raise ValueError("plan was made for a different set size")
    kmin = plan.threshold_count
    best = 0
    for phi in state_set.states:
        x1 = overlap(psi, phi)
        if x1 >= 1.0 - EXACT_MEMBERSHIP_TOL:
            x1 = 1.0
        best = max(best, _sample_type_count(x1, plan.n, rng))
    decision = Decision.MEMBER if best >= kmin else Decision.FAR
    return Verdict(decision=decision, statistic=best / plan.n)


def chebyshev_single_bounds(mean: float, variance: float, gamma: float, theta: float) -> tuple[float, float]:
    """Two-sided Chebyshev guarantee 1 - Var/(gamma*theta)^2, clamped.

    Completeness and soundness both collapse onto the same expression once
    the mean margin is rounded to gamma*theta, so the pair is returned
    with equal entries.
    """
    if not 0.0 < gamma < 0.5:
        raise ValueError("gamma must lie in (0, 1/2)")
    if theta <= 0.0:
        raise ValueError("theta must be positive")
    if variance < 0.0:
        raise ValueError("variance must be non-negative")
    bound = max(0.0, min(1.0, 1.0 - variance / (gamma * theta) ** 2))
    return bound, bound


def min_tester_bounds(means, variances, gamma: float, theta: float) -> tuple[float, float]:
    """Guarantees for thresholding the minimum of several statistics.

    accept_lb bounds detection of one low mean through its own variance;
    reject_lb is the product bound requiring every mean above (1-gamma) *
    theta, and raises when that premise fails.
    """
    means = [float(m) for m in means]
    variances = [float(v) for v in variances]
    if not means or len(means) != len(variances):
        raise ValueError("means and variances must be equal-length and non-empty")
    if not 0.0 < gamma < 0.5:
        raise ValueError("gamma must lie in (0, 1/2)")
    if theta <= 0.0:
        raise ValueError("theta must be positive")
    if any(v < 0.0 for v in variances):
        raise ValueError("variances must be non-negative")

    k = min(range(len(means)), key=lambda i: means[i])
    accept_lb = max(0.0, min(1.0, 1.0 - variances[k] / (gamma * theta) ** 2))

    floor = (1.0 - gamma) * theta
    if any(m <= floor for m in means):
        raise ValueError("reject bound needs every mean above (1 - gamma) * theta")
    reject_lb = 1.0
    for m, v in zip(means, variances):
        reject_lb *= max(0.0, min(1.0, 1.0 - v / (m - floor) ** 2))
    return accept_lb, reject_lb


def plan_l2_membership(epsilon: float, set_size: int, c: float) -> int:
    """Copy budget for the Euclidean-distance variant.

    Smallest n with (1 - v(n))^set_size >= 2/3 for the per-element error
    v(n) = c * eps^-4 * (1/n^2 + eps^2/n); v decreases in n so the
    condition is monotone.  Scales as c * eps^-2 * set_size.
    """
    if not 0.0 < epsilon <= 1.0:
        raise ValueError("epsilon must lie in (0, 1]")
    if set_size < 1:
        raise ValueError("set_size must be >= 1")
    if c <= 0.0:
        raise ValueError("c must be positive")

    def ok(n: int) -> bool:
        v = c * epsilon**-4 * (1.0 / n**2 + epsilon * epsilon / n)
        return v < 1.0 and (1.0 - v) ** set_size >= _SOUNDNESS_TARGET

    hi = 1
    while not ok(hi):
        hi *= 2
        if hi > 10**12:
            raise RuntimeError("copy budget search failed to terminate")
    lo = hi // 2 + 1 if hi > 1 else 1
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid + 1
    return hi


def chernoff_bounds(mgf_value: float, s: float, gamma: float, theta: float) -> float:
    """Exponential-moment tail guarantee 1 - MGF / e^(s(1-gamma)theta)."""
    if mgf_value <= 0.0:
        raise ValueError("mgf_value must be positive")
    if s < 0.0:
        raise ValueError("s must be non-negative")
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0, 1)")
    if theta <= 0.0:
        raise ValueError("theta must be positive")
    return max(0.0, min(1.0, 1.0 - mgf_value / math.exp(s * (1.0 - gamma) * theta)))


def log_mgf_type_statistic(x1: float, n: int, s: float) -> float:
    """Natural log of mgf_type_statistic; usable where the MGF itself overflows."""
    if not 0.0 <= x1 <= 1.0:
        raise ValueError("x1 must lie in [0, 1]")
    if n < 1:
        raise ValueError("n must be >= 1")
    return n * math.log1p(math.expm1(s / n) * x1)


def chernoff_reject_bound(x1: float, n: int, epsilon: float) -> float:
    """Rejection guarantee for one far overlap at the quartic-rate tuning.

    Evaluates 1 - MGF/e^(s(1-gamma)) at s = 2n eps^2, gamma = eps^2/2,
    theta = 1, entirely in log space so that copy budgets of 10^5 and
    beyond do not overflow the intermediate MGF.
    """
    if not 0.0 < epsilon <= 1.0:
        raise ValueError("epsilon must lie in (0, 1]")
    s = 2.0 * n * epsilon * epsilon
    log_ratio = log_mgf_type_statistic(x1, n, s) - s * (1.0 - 0.5 * epsilon * epsilon)
    if log_ratio >= 0.0:
        return 0.0
    return min(1.0, -math.expm1(log_ratio))

"""Unitary equality testers: planning, character ratios, soundness caps."""

import math

import numpy as np
import pytest

from qcert.core import (
    eigenphases,
    haar_random_unitary,
    haar_unitary,
    pair_at_distance,
    unitary_distance,
)
from qcert.equality import (
    AcceptanceAnalysis,
    UnitaryTestPlan,
    analyze,
    big_gap_pair_count,
    character_ratio,
    eigenphase_gap_to_distance,
    plan_for_mode,
    plan_qubit_known,
    plan_qubit_swap,
    plan_qudit,
    qubit_known_copies,
    qubit_swap_copies,
    run_unitary_test,
    sample_verdict,
    soundness_certificate,
    staircase_order,
)
from qcert.equality import TesterMode as Mode
from qcert.irreps import Partition, dim_unitary_irrep, weyl_character
from qcert.membership import Decision


def _qubit_plan(mode: Mode, n: int, epsilon: float = 1.0) -> UnitaryTestPlan:
    return UnitaryTestPlan(
        mode=mode,
        dimension=2,
        epsilon=epsilon,
        n=n,
        partition=Partition((n - 1, 1), 2),
        s=None,
        repetitions=2 if mode.is_swap else 1,
    )


class TestQubitPlanners:
    def test_loose_epsilon_minimum(self):
        plan = plan_qubit_known(1.0)
        assert plan.n == 3
        assert plan.partition.padded() == (2, 1)
        assert plan.repetitions == 1
        assert plan.soundness_cap == pytest.approx(0.25)

    def test_tight_epsilon(self):
        assert plan_qubit_known(0.1).n == 19

    def test_unrounded_budgets(self):
        assert qubit_known_copies(0.3) == pytest.approx(math.sqrt(3.0) / 0.3 + 1.0)
        assert qubit_swap_copies(0.3) == pytest.approx(11.0)

    def test_soundness_margin_on_grid(self):
        """Rounding up keeps ((n-1) eps)^2 >= 3, hence the cap at most 1/3."""
        for eps in np.linspace(0.01, 1.0, 200):
            plan = plan_qubit_known(float(eps))
            assert ((plan.n - 1) * eps) ** 2 >= 3.0 - 1e-9
            assert plan.soundness_cap <= 1.0 / 3.0 + 1e-12

    def test_swap_plan_values(self):
        plan = plan_qubit_swap(1.0)
        assert plan.n == 4
        assert plan.repetitions == 2
        assert plan.soundness_cap == pytest.approx(25.0 / 81.0)
        assert plan_qubit_swap(0.5).n == 7

    def test_swap_cap_below_third(self):
        for eps in np.linspace(0.01, 1.0, 200):
            assert plan_qubit_swap(float(eps)).soundness_cap < 1.0 / 3.0

    def test_epsilon_validation(self):
        for bad in (0.0, -0.5, 1.5):
            with pytest.raises(ValueError):
                plan_qubit_known(bad)
            with pytest.raises(ValueError):
                plan_qubit_swap(bad)


class TestQuditPlanners:
    def test_order_examples(self):
        assert staircase_order(0.3) == 21
        assert staircase_order(1.0) == 7

    def test_order_is_smallest_odd_above_threshold(self):
        for eps in np.linspace(0.05, 1.0, 300):
            s = staircase_order(float(eps))
            assert s % 2 == 1
            assert s > 6.0 / eps
            assert s - 2 <= 6.0 / eps or (s - 2) % 2 == 0

    def test_plan_values(self):
        plan = plan_qudit(3, 0.5, known_reference=True)
        assert plan.s == 13
        assert plan.n == 36
        assert plan.partition.padded() == (24, 12, 0)
        assert dim_unitary_irrep(plan.partition) == 2197
        assert plan.repetitions == 1
        assert plan_qudit(3, 1.0, known_reference=False).n == 18

    def test_copy_budget_bound(self):
        for d in (3, 4, 5):
            for eps in np.linspace(0.05, 1.0, 50):
                plan = plan_qudit(d, float(eps), known_reference=True)
                assert plan.n <= math.comb(d, 2) * (6.0 / eps + 1.0)

    def test_rejects_qubit_dimension(self):
        with pytest.raises(ValueError):
            plan_qudit(2, 0.5, known_reference=True)

    def test_ancilla_dimension(self):
        # hook shapes have dim H = dim K = n - 1
        assert plan_qubit_known(0.2).ancilla_dimension == 1
        # (4, 2, 0): dim H = 27, dim K = 9
        small = UnitaryTestPlan(
            mode=Mode.QUDIT_KNOWN,
            dimension=3,
            epsilon=1.0,
            n=6,
            partition=Partition((4, 2), 3),
            s=3,
            repetitions=1,
        )
        assert small.ancilla_dimension == 3
        assert plan_qudit(3, 0.3, known_reference=True).ancilla_dimension == 1

    def test_mode_dispatch(self):
        assert plan_for_mode(Mode.QUBIT_KNOWN, 2, 0.5).mode is Mode.QUBIT_KNOWN
        assert plan_for_mode(Mode.QUBIT_SWAP, 2, 0.5).mode is Mode.QUBIT_SWAP
        assert plan_for_mode(Mode.QUDIT_KNOWN, 4, 0.5).mode is Mode.QUDIT_KNOWN
        assert plan_for_mode(Mode.QUDIT_SWAP, 3, 0.5).mode is Mode.QUDIT_SWAP


class TestPlanValidation:
    def test_qubit_shape_enforced(self):
        with pytest.raises(ValueError):
            UnitaryTestPlan(Mode.QUBIT_KNOWN, 2, 0.5, 4, Partition((2, 2), 2), None, 1)
        with pytest.raises(ValueError):
            UnitaryTestPlan(Mode.QUBIT_KNOWN, 3, 0.5, 4, Partition((3, 1), 2), None, 1)
        with pytest.raises(ValueError):
            UnitaryTestPlan(Mode.QUBIT_KNOWN, 2, 0.5, 2, Partition((1, 1), 2), None, 1)

    def test_qubit_rejects_staircase_order(self):
        with pytest.raises(ValueError):
            UnitaryTestPlan(Mode.QUBIT_KNOWN, 2, 0.5, 4, Partition((3, 1), 2), 3, 1)

    def test_qudit_shape_enforced(self):
        with pytest.raises(ValueError):
            UnitaryTestPlan(Mode.QUDIT_KNOWN, 3, 0.5, 6, Partition((4, 2), 3), 4, 1)
        with pytest.raises(ValueError):
            UnitaryTestPlan(Mode.QUDIT_KNOWN, 3, 0.5, 7, Partition((4, 2), 3), 3, 1)
        with pytest.raises(ValueError):
            UnitaryTestPlan(Mode.QUDIT_KNOWN, 2, 0.5, 6, Partition((4, 2), 3), 3, 1)

    def test_epsilon_and_repetitions(self):
        with pytest.raises(ValueError):
            _qubit_plan(Mode.QUBIT_KNOWN, 3, epsilon=0.0)
        with pytest.raises(ValueError):
            UnitaryTestPlan(Mode.QUBIT_KNOWN, 2, 0.5, 3, Partition((2, 1), 2), None, 0)


class TestCharacterRatio:
    def test_hook_matches_bialternant(self):
        rng = np.random.default_rng(7)
        for n in range(3, 9):
            lam = Partition((n - 1, 1), 2)
            dim = dim_unitary_irrep(lam)
            for _ in range(100):
                phases = rng.uniform(0, 2 * np.pi, size=2)
                expected = weyl_character(lam, phases) / dim
                assert character_ratio(lam, phases) == pytest.approx(expected, abs=1e-9)

    def test_hook_zero_at_opposite_phases(self):
        # sin((n-1) pi / 2) / ((n-1) sin(pi/2)) at n = 3 vanishes
        assert abs(character_ratio(Partition((2, 1), 2), (0.0, np.pi))) <= 1e-12

    def test_staircase_multiple_matches_bialternant(self):
        rng = np.random.default_rng(11)
        for lam in (Partition((2, 1), 3), Partition((4, 2), 3), Partition((6, 4, 2), 4)):
            dim = dim_unitary_irrep(lam)
            for _ in range(100):
                phases = rng.uniform(0, 2 * np.pi, size=lam.d)
                expected = weyl_character(lam, phases) / dim
                assert character_ratio(lam, phases) == pytest.approx(expected, abs=1e-9)

    def test_generic_shape_falls_back(self):
        rng = np.random.default_rng(13)
        lam = Partition((3, 1), 3)
        dim = dim_unitary_irrep(lam)
        for _ in range(100):
            phases = rng.uniform(0, 2 * np.pi, size=3)
            expected = weyl_character(lam, phases) / dim
            assert character_ratio(lam, phases) == pytest.approx(expected, abs=1e-9)

    def test_modulus_bounded_by_one(self):
        rng = np.random.default_rng(17)
        shapes = [
            Partition((2, 1), 2),
            Partition((5, 1), 2),
            Partition((4, 2), 3),
            Partition((3, 1), 3),
            Partition((3, 3, 2), 4),
        ]
        for _ in range(1000):
            lam = shapes[int(rng.integers(len(shapes)))]
            phases = rng.uniform(0, 2 * np.pi, size=lam.d)
            assert abs(character_ratio(lam, phases)) <= 1.0 + 1e-9

    def test_identity_phases_give_one(self):
        for lam in (Partition((7, 1), 2), Partition((4, 2), 3)):
            assert character_ratio(lam, np.zeros(lam.d)) == pytest.approx(1.0, abs=1e-12)

    def test_wrong_phase_count(self):
        with pytest.raises(ValueError):
            character_ratio(Partition((2, 1), 2), (0.0, 1.0, 2.0))


class TestBigGapPairs:
    def test_opposite_phases_counted(self):
        assert big_gap_pair_count((0.0, np.pi), 1.0, 2) == 1
        assert big_gap_pair_count((0.0, 0.1), 1.0, 2) == 0

    def test_small_epsilon_counts_everything_spread(self):
        phases = (0.0, np.pi / 2, np.pi)
        assert big_gap_pair_count(phases, 0.05, 3) == 3


class TestAnalyze:
    def test_perfect_completeness_identical(self):
        rng = np.random.default_rng(19)
        for mode in Mode:
            d = 2 if mode.value.startswith("qubit") else 3
            plan = plan_for_mode(mode, d, 0.4)
            u = haar_random_unitary(d, int(rng.integers(1 << 30)))
            result = analyze(u, u, plan)
            assert result.character_ratio == pytest.approx(1.0, abs=1e-9)
            assert result.accept_prob == 1.0

    def test_perfect_completeness_global_phase(self):
        rng = np.random.default_rng(23)
        for mode in Mode:
            d = 2 if mode.value.startswith("qubit") else 3
            plan = plan_for_mode(mode, d, 0.4)
            for _ in range(50):
                u = haar_random_unitary(d, int(rng.integers(1 << 30)))
                gamma = rng.uniform(0, 2 * np.pi)
                v = np.exp(1j * gamma) * u.matrix
                result = analyze(u, v, plan)
                assert abs(result.character_ratio) == pytest.approx(1.0, abs=1e-9)
                assert result.accept_prob == 1.0

    def test_opposite_phase_qubit_example(self):
        u = np.eye(2)
        v = np.diag([1.0, -1.0])
        known = analyze(u, v, _qubit_plan(Mode.QUBIT_KNOWN, 3))
        assert known.accept_prob == pytest.approx(0.0, abs=1e-12)
        swap = analyze(u, v, _qubit_plan(Mode.QUBIT_SWAP, 3))
        assert swap.per_test_accept_prob == pytest.approx(0.5, abs=1e-12)
        assert swap.accept_prob == pytest.approx(0.25, abs=1e-12)

    def test_phase_invariance(self):
        rng = np.random.default_rng(29)
        plan = plan_qubit_known(0.3)
        for _ in range(200):
            u = haar_unitary(2, rng)
            v = haar_unitary(2, rng)
            gamma = rng.uniform(0, 2 * np.pi)
            base = analyze(u, v, plan)
            shifted = analyze(u, np.exp(1j * gamma) * v, plan)
            assert abs(shifted.character_ratio) == pytest.approx(
                abs(base.character_ratio), abs=1e-12
            )
            assert shifted.accept_prob == pytest.approx(base.accept_prob, abs=1e-12)

    def test_conjugation_invariance(self):
        rng = np.random.default_rng(31)
        for mode, d in ((Mode.QUBIT_KNOWN, 2), (Mode.QUDIT_SWAP, 3)):
            plan = plan_for_mode(mode, d, 0.4)
            for _ in range(100):
                u = haar_unitary(d, rng)
                v = haar_unitary(d, rng)
                w = haar_unitary(d, rng)
                base = analyze(u, v, plan)
                conj = analyze(w @ u @ w.conj().T, w @ v @ w.conj().T, plan)
                assert conj.accept_prob == pytest.approx(base.accept_prob, abs=1e-12)

    def test_dimension_mismatch(self):
        plan = plan_qubit_known(0.5)
        with pytest.raises(ValueError):
            analyze(np.eye(3), np.eye(3), plan)


class TestSoundness:
    def test_certificate_boundary_value(self):
        # (n - 1) eps = sqrt(3) exactly gives the cap 1/3
        eps = math.sqrt(3.0) / 5.0
        plan = _qubit_plan(Mode.QUBIT_KNOWN, 6, epsilon=eps)
        assert soundness_certificate(plan, eps) == pytest.approx(1.0 / 3.0)

    def test_qudit_known_below_ninth(self):
        for eps in np.linspace(0.05, 1.0, 100):
            plan = plan_qudit(3, float(eps), known_reference=True)
            cap = soundness_certificate(plan, float(eps))
            assert cap == pytest.approx((2.0 / (plan.s * eps)) ** 2)
            assert cap < 1.0 / 9.0

    def test_qudit_swap_cap(self):
        for eps in np.linspace(0.05, 1.0, 100):
            plan = plan_qudit(4, float(eps), known_reference=False)
            cap = soundness_certificate(plan, float(eps))
            assert cap <= 25.0 / 81.0 + 1e-12
            assert cap < 1.0 / 3.0

    def test_planned_caps_always_below_third(self):
        for mode in Mode:
            d = 2 if mode.value.startswith("qubit") else 3
            for eps in np.linspace(0.02, 1.0, 100):
                plan = plan_for_mode(mode, d, float(eps))
                assert plan.soundness_cap <= 1.0 / 3.0 + 1e-12

    def test_accept_prob_respects_cap_at_distance(self):
        """Pairs at distance exactly eps never beat the certificate."""
        count = 0
        for mode in Mode:
            d = 2 if mode.value.startswith("qubit") else 3
            for eps in (0.2, 0.4, 0.7, 1.0):
                plan = plan_for_mode(mode, d, eps)
                for k in range(70):
                    u, v = pair_at_distance(d, eps, (97, count, k))
                    result = analyze(u, v, plan)
                    assert result.accept_prob <= plan.soundness_cap + 1e-9
                    count += 1
        assert count >= 1000

    def test_cap_monotone_reasonable(self):
        with pytest.raises(ValueError):
            soundness_certificate(plan_qubit_known(0.5), 0.0)


class TestVerdictSampling:
    def test_identical_pair_always_member(self):
        plan = plan_qubit_swap(0.5)
        u = haar_random_unitary(2, 3)
        rng = np.random.default_rng(37)
        for _ in range(1000):
            verdict = run_unitary_test(u, u, plan, rng)
            assert verdict.decision is Decision.MEMBER
            assert verdict.statistic == 1.0

    def test_zero_acceptance_always_far(self):
        plan = _qubit_plan(Mode.QUBIT_KNOWN, 3)
        rng = np.random.default_rng(41)
        for _ in range(1000):
            verdict = run_unitary_test(np.eye(2), np.diag([1.0, -1.0]), plan, rng)
            assert verdict.decision is Decision.FAR

    def test_monte_carlo_matches_analysis_qubit(self):
        eps = 0.25
        plan = plan_qubit_known(eps)
        u, v = pair_at_distance(2, eps, 55)
        result = analyze(u, v, plan)
        rng = np.random.default_rng(57)
        hits = sum(
            sample_verdict(result, plan, rng).decision is Decision.MEMBER for _ in range(10_000)
        )
        rate = hits / 10_000
        sigma = math.sqrt(max(result.accept_prob * (1 - result.accept_prob), 1e-12) / 10_000)
        assert abs(rate - result.accept_prob) <= 4 * sigma + 1e-6
        assert rate <= 1.0 / 3.0 + 3 * sigma + 0.01

    def test_monte_carlo_matches_analysis_qudit(self):
        eps = 1.0
        plan = plan_qudit(3, eps, known_reference=True)
        u, v = pair_at_distance(3, eps, 58)
        result = analyze(u, v, plan)
        assert result.accept_prob <= (2.0 / (plan.s * eps)) ** 2 + 1e-9
        rng = np.random.default_rng(59)
        hits = sum(
            sample_verdict(result, plan, rng).decision is Decision.MEMBER for _ in range(10_000)
        )
        sigma = math.sqrt(max(result.accept_prob * (1 - result.accept_prob), 1e-12) / 10_000)
        assert abs(hits / 10_000 - result.accept_prob) <= 4 * sigma + 1e-6

    def test_swap_statistic_counts_partial_success(self):
        plan = _qubit_plan(Mode.QUBIT_SWAP, 3)
        analysis = AcceptanceAnalysis(
            character_ratio=0.0,
            per_test_accept_prob=0.5,
            accept_prob=0.25,
            soundness_cap=plan.soundness_cap,
            big_gap_pairs=0,
        )
        rng = np.random.default_rng(43)
        seen = {sample_verdict(analysis, plan, rng).statistic for _ in range(500)}
        assert seen == {0.0, 0.5, 1.0}


class TestEigenphaseGap:
    def test_extremes(self):
        assert eigenphase_gap_to_distance(0.0, 0.0) == 0.0
        assert eigenphase_gap_to_distance(0.0, math.pi) == pytest.approx(1.0)

    def test_matches_channel_distance(self):
        rng = np.random.default_rng(47)
        for _ in range(1000):
            a, b = rng.uniform(0, 2 * np.pi, size=2)
            direct = unitary_distance(np.eye(2), np.diag(np.exp(1j * np.array([a, b]))))
            assert eigenphase_gap_to_distance(float(a), float(b)) == pytest.approx(
                direct, abs=1e-12
            )

    def test_agrees_with_eigenphase_extraction(self):
        rng = np.random.default_rng(53)
        for _ in range(100):
            u = haar_unitary(2, rng)
            v = haar_unitary(2, rng)
            ph = eigenphases(u.conj().T @ v).phases
            gap = eigenphase_gap_to_distance(float(ph[0]), float(ph[1]))
            assert gap == pytest.approx(unitary_distance(u, v), abs=1e-9)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from independent import envelope
from prevbounds.consistency import (
    CredalPolytope,
    check_2coherence,
    check_asl,
    check_coherence,
    credal_optimize,
    natural_extension,
    sublinear_upper_sum,
    two_coherence_pair,
    upper_extension,
)
from prevbounds.core import Assessment, Entry, Partition
from prevbounds.errors import EmptyCredalSet
from prevbounds.oracle import random_assessment, random_coherent_assessment

seeds = st.integers(0, 2**32 - 1)


def crossing_bounds():
    """lpr(X) = 0.8 and upr(X) = 0.2 on a two-atom indicator."""
    part = Partition.of_size(2)
    x = part.gamble([0, 1])
    return Assessment(part, [Entry("X", x, 0.8), Entry("-X", -x, -0.2)])


class TestAvoidingSureLoss:
    def test_moment_example_passes(self, a43):
        rep = check_asl(a43)
        assert rep.passed and rep.verdict == "pass"
        assert a43.gamble("X").values @ rep.witness >= 0.75 - 1e-9

    def test_lower_above_sup(self):
        part = Partition.of_size(2)
        assert not check_asl(Assessment(part, [Entry("X", part.gamble([0, 1]), 2)])).passed

    def test_empty_assessment(self, part3):
        assert check_asl(Assessment(part3)).passed


class TestCoherence:
    def test_single_internal_entry(self, a43):
        assert check_coherence(a43).passed

    def test_crossing_bounds(self):
        rep = check_coherence(crossing_bounds())
        assert not rep.passed

    def test_union_of_atoms(self, part3):
        a = Assessment(part3, [
            Entry("A", part3.event([0]).indicator, 0.3),
            Entry("B", part3.event([1]).indicator, 0.3),
            Entry("AorB", part3.event([0, 1]).indicator, 0.7),
        ])
        # each lower value is attained somewhere on the credal set
        for e in a:
            assert envelope([(x.gamble.values, x.lower) for x in a], e.gamble.values, 3) == pytest.approx(e.lower)
        assert check_coherence(a).passed

    def test_loose_entry_fails(self, part3):
        # lpr(A or B) = 0.5 is below what the atom bounds already imply (0.6)
        a = Assessment(part3, [
            Entry("A", part3.event([0]).indicator, 0.3),
            Entry("B", part3.event([1]).indicator, 0.3),
            Entry("AorB", part3.event([0, 1]).indicator, 0.5),
        ])
        rep = check_coherence(a)
        assert not rep.passed
        assert rep.gaps["AorB"] == pytest.approx(-0.1)


class TestTwoCoherence:
    def test_crossing_bounds_fail_on_the_pair(self):
        a = crossing_bounds()
        rep = check_2coherence(a)
        assert not rep.passed
        assert set(rep.failing_pair) == {"X", "-X"}
        sol = rep.pair_solution
        assert sol["t"] < 0
        # the witness stakes give a uniformly negative gain
        e0, e1 = a.entry(rep.failing_pair[0]), a.entry(rep.failing_pair[1])
        gain = sol["s1"] * (e1.gamble.values - e1.lower) - sol["s0"] * (e0.gamble.values - e0.lower)
        assert np.all(gain <= sol["t"] + 1e-9)

    def test_hand_stakes(self):
        # s0 = s1 = 1/2 on (X, -X): gain = (X - 0.8)/2 + (-X + 0.2)/2 = -0.3 everywhere
        sol = two_coherence_pair(crossing_bounds(), "-X", "X")
        assert sol["t"] == pytest.approx(-0.3)

    def test_vacuous_entry(self, part3, x43):
        assert check_2coherence(Assessment(part3, [Entry("X", x43, x43.inf)])).passed

    def test_disjoint_events_pass_pairwise_but_incur_sure_loss(self, part3):
        a = Assessment(part3, [Entry(f"A{i}", part3.event([i]).indicator, 0.4) for i in range(3)])
        assert check_2coherence(a).passed
        assert not check_asl(a).passed

    @settings(max_examples=60)
    @given(seeds)
    def test_coherent_implies_two_coherent(self, seed):
        a = random_coherent_assessment(np.random.default_rng(seed))
        assert check_coherence(a).passed
        assert check_2coherence(a).passed


class TestPairProgramReference:
    @settings(max_examples=60)
    @given(seeds)
    def test_pair_optimum_matches_reference_solver(self, seed):
        from scipy.optimize import linprog

        a = random_assessment(np.random.default_rng(seed))
        for e0 in a:
            for e1 in a:
                d0 = e0.gamble.values - e0.lower
                d1 = e1.gamble.values - e1.lower
                A = np.column_stack([d1, -d0, d0, -np.ones(len(d0))])
                ref = linprog([0, 0, 0, 1], A_ub=A, b_ub=np.zeros(len(d0)), A_eq=[[1, 1, 1, 0]], b_eq=[1],
                              bounds=[(0, None)] * 3 + [(None, None)], method="highs")
                assert two_coherence_pair(a, e0.name, e1.name)["t"] == pytest.approx(ref.fun, abs=1e-9)


class TestHierarchy:
    @settings(max_examples=200)
    @given(seeds)
    def test_coherence_implies_two_coherence_and_asl(self, seed):
        a = random_assessment(np.random.default_rng(seed))
        coh, two, asl = check_coherence(a).passed, check_2coherence(a).passed, check_asl(a).passed
        if coh:
            assert two and asl


class TestNaturalExtension:
    def test_square_of_moment_example(self, a43, x43):
        assert natural_extension(a43, x43**2) == pytest.approx(1.0, abs=1e-12)

    def test_constant(self, a43, part3):
        poly = CredalPolytope(a43)
        assert credal_optimize(poly, part3.constant(2.5), "min") == pytest.approx(2.5)
        assert credal_optimize(poly, part3.constant(2.5), "max") == pytest.approx(2.5)

    def test_mean_constraint_outside_range(self, a43, x43):
        poly = CredalPolytope(a43).with_mean(x43, 3.0)
        assert poly.is_empty()
        with pytest.raises(EmptyCredalSet):
            credal_optimize(poly, x43, "min")

    def test_negated_gamble(self, a43, x43):
        assert natural_extension(a43, -x43) == pytest.approx(-2.0)
        assert upper_extension(a43, x43) == pytest.approx(2.0)

    @settings(max_examples=60)
    @given(seeds)
    def test_coherent_fixpoint(self, seed):
        a = random_coherent_assessment(np.random.default_rng(seed))
        for e in a:
            assert natural_extension(a, e.gamble) == pytest.approx(e.lower, abs=1e-8)

    @settings(max_examples=60)
    @given(seeds, st.floats(-3, 3), st.floats(0, 4))
    def test_axioms(self, seed, c, lam):
        rng = np.random.default_rng(seed)
        a = random_coherent_assessment(rng)
        y = a.partition.gamble(np.round(rng.uniform(-4, 4, a.partition.n), 2))
        lo, hi = natural_extension(a, y), upper_extension(a, y)
        assert y.inf - 1e-9 <= lo <= hi + 1e-9 <= y.sup + 2e-9
        assert natural_extension(a, y + c) == pytest.approx(lo + c, abs=1e-8)
        assert natural_extension(a, lam * y) == pytest.approx(lam * lo, abs=1e-8)
        assert natural_extension(a, -lam * y) <= -lam * lo + 1e-8

    @settings(max_examples=60)
    @given(seeds)
    def test_two_point_domain_dual(self, seed):
        # with a single assessed gamble, max_{lam >= 0} min_w [y - lam (X - l)] is the LP value
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 6))
        part = Partition.of_size(n)
        x = np.round(rng.uniform(-3, 3, n), 2)
        l = float(rng.uniform(x.min(), x.max()))
        y = np.round(rng.uniform(-3, 3, n), 2)
        a = Assessment(part, [Entry("X", part.gamble(x), l)])
        lams = np.concatenate([np.linspace(0, 50, 20001), [1e3, 1e4]])
        # the breakpoints of the piecewise-linear dual are where two atoms tie
        d = x - l
        for i in range(n):
            for j in range(n):
                if d[i] != d[j]:
                    lam = (y[i] - y[j]) / (d[i] - d[j])
                    if lam >= 0:
                        lams = np.append(lams, lam)
        dual = max(np.min(y - lam * d) for lam in lams)
        assert natural_extension(a, part.gamble(y)) == pytest.approx(dual, abs=1e-7)


class TestSublinearSum:
    def test_three_summands(self):
        s = sublinear_upper_sum([60, 50, 10])
        assert s.value == 120 and s.consistency_required == "coherence"

    def test_single_and_zero(self):
        assert sublinear_upper_sum([7.5]).value == 7.5
        assert sublinear_upper_sum([0, 0, 0]).value == 0

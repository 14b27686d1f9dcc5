import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from independent import brute_vertices, envelope
from prevbounds import lp
from prevbounds.errors import MalformedProgram, UnboundedRegion, VertexBudgetExceeded


def _sorted(vs):
    return sorted(tuple(np.round(v, 9)) for v in vs)


class TestSolve:
    def test_moment_program(self):
        prog = lp.LinearProgram([1, 1, 4], [([-1, 1, 2], 0.75)], simplex_constraint=True)
        res = lp.solve(prog)
        assert res.status is lp.Status.OPTIMAL
        assert res.value == pytest.approx(1.0, abs=1e-12)

    def test_zero_objective(self):
        res = lp.solve(lp.LinearProgram([0, 0, 0], simplex_constraint=True))
        assert res.optimal and res.value == 0.0

    def test_infeasible(self):
        res = lp.solve(lp.LinearProgram([0, 0, 0], [([1, 1, 1], 2)], simplex_constraint=True))
        assert res.status is lp.Status.INFEASIBLE

    def test_unbounded_free_variables(self):
        res = lp.solve(lp.LinearProgram([1.0], [([1.0], -5)]))
        assert res.optimal and res.value == pytest.approx(-5)
        res = lp.solve(lp.LinearProgram([-1.0], [([1.0], -5)]))
        assert res.status is lp.Status.UNBOUNDED

    def test_equality_rows(self):
        # min x + y s.t. x - y == 1, x >= 0, y >= 0
        res = lp.solve(lp.LinearProgram([1, 1], [([1, 0], 0), ([0, 1], 0)], [([1, -1], 1)]))
        assert res.value == pytest.approx(1.0)
        np.testing.assert_allclose(res.solution, [1, 0], atol=1e-12)

    def test_malformed(self):
        with pytest.raises(MalformedProgram):
            lp.LinearProgram([1, 2], [([1, 2, 3], 0)])
        with pytest.raises(MalformedProgram):
            lp.LinearProgram([np.inf])

    def test_degenerate_cycling_instance(self):
        # Beale's classic cycling example; Bland's rule must terminate
        c = [-0.75, 150, -0.02, 6]
        ge = [([-0.25, 60, 0.04, -9], 0), ([-0.5, 90, 0.02, -3], 0), ([0, 0, -1, 0], -1)]
        ge += [([1 if i == j else 0 for j in range(4)], 0) for i in range(4)]
        res = lp.solve(lp.LinearProgram(c, ge))
        assert res.value == pytest.approx(-0.05)


def random_programs():
    @st.composite
    def build(draw):
        n = draw(st.integers(2, 6))
        m = draw(st.integers(0, 6))
        rows = [
            (draw(st.lists(st.integers(-5, 5), min_size=n, max_size=n)), draw(st.integers(-4, 3)) / 2)
            for _ in range(m)
        ]
        c = draw(st.lists(st.integers(-5, 5), min_size=n, max_size=n))
        return n, rows, c

    return build()


class TestSolveProperties:
    @settings(max_examples=150)
    @given(random_programs())
    def test_matches_reference_solver(self, prog):
        n, rows, c = prog
        res = lp.solve(lp.LinearProgram(c, rows, simplex_constraint=True))
        ref = envelope(rows, c, n)
        if ref is None:
            assert res.status is lp.Status.INFEASIBLE
        else:
            assert res.optimal
            assert res.value == pytest.approx(ref, abs=1e-8)

    @settings(max_examples=150)
    @given(random_programs())
    def test_solution_is_feasible_and_value_consistent(self, prog):
        n, rows, c = prog
        p = lp.LinearProgram(c, rows, simplex_constraint=True)
        res = lp.solve(p)
        if res.optimal:
            assert p.max_violation(res.solution) <= 1e-9
            assert res.value == pytest.approx(float(np.dot(c, res.solution)), abs=1e-9)

    @settings(max_examples=100)
    @given(random_programs())
    def test_lp_equals_vertex_minimum(self, prog):
        n, rows, c = prog
        verts = lp.enumerate_vertices(rows, simplex_constraint=True, n=n)
        res = lp.solve(lp.LinearProgram(c, rows, simplex_constraint=True))
        if not verts:
            assert not res.optimal
            return
        assert res.value == pytest.approx(min(float(np.dot(c, v)) for v in verts), abs=1e-8)

    @settings(max_examples=100)
    @given(random_programs(), st.data())
    def test_min_and_max_bracket_feasible_points(self, prog, data):
        n, rows, c = prog
        p = lp.LinearProgram(c, rows, simplex_constraint=True)
        lo = lp.solve(p)
        if not lo.optimal:
            return
        hi = lp.solve(p.with_objective(-np.asarray(c, dtype=float)))
        verts = lp.enumerate_vertices(rows, simplex_constraint=True, n=n)
        w = np.array(data.draw(st.lists(st.floats(0.01, 1), min_size=len(verts), max_size=len(verts))))
        x = (w / w.sum()) @ np.array(verts)
        v = float(np.dot(c, x))
        assert lo.value - 1e-9 <= v <= -hi.value + 1e-9


class TestEnumerateVertices:
    def test_simplex(self):
        got = lp.enumerate_vertices(simplex_constraint=True, n=3)
        assert _sorted(got) == _sorted(np.eye(3))

    def test_moment_credal_set(self):
        got = lp.enumerate_vertices([([-1, 1, 2], 0.75)], simplex_constraint=True)
        want = [(0, 1, 0), (0, 0, 1), (0.125, 0.875, 0), (5 / 12, 0, 7 / 12)]
        assert _sorted(got) == _sorted(np.array(want))

    def test_infeasible_is_empty(self):
        assert lp.enumerate_vertices([([1, 1, 1], 2)], simplex_constraint=True) == []

    def test_unbounded_region(self):
        with pytest.raises(UnboundedRegion):
            lp.enumerate_vertices([([1, 0], 0), ([0, 1], 0)])

    def test_bounded_box_without_simplex(self):
        rows = [([1, 0], 0), ([0, 1], 0), ([-1, 0], -1), ([0, -1], -2)]
        assert _sorted(lp.enumerate_vertices(rows)) == _sorted(np.array([(0, 0), (1, 0), (0, 2), (1, 2)]))

    def test_dimension_budget(self):
        with pytest.raises(VertexBudgetExceeded):
            lp.enumerate_vertices(simplex_constraint=True, n=13)

    @settings(max_examples=100)
    @given(random_programs())
    def test_matches_subset_enumeration(self, prog):
        n, rows, _ = prog
        got = lp.enumerate_vertices(rows, simplex_constraint=True, n=n)
        want = brute_vertices(rows, n)
        assert _sorted(got) == _sorted(want)

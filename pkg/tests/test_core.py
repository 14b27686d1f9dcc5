import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from prevbounds import functions as fns
from prevbounds.core import (
    Assessment,
    Entry,
    Partition,
    apply_function,
    bounds_of,
    conjugate_entry,
    hole_bracket,
    restrict,
)
from prevbounds.errors import DomainMismatch, EmptyConditioningEvent, InputError, OutOfRange

values = st.lists(st.floats(-50, 50, allow_nan=False), min_size=1, max_size=7)


class TestPartitionAndGamble:
    def test_partition_rejects_duplicates_and_empty(self):
        with pytest.raises(InputError):
            Partition(["a", "a"])
        with pytest.raises(InputError):
            Partition([])

    def test_gamble_length_must_match(self, part3):
        with pytest.raises(DomainMismatch):
            part3.gamble([1, 2])

    def test_gamble_values_are_read_only(self, x43):
        with pytest.raises(ValueError):
            x43.values[0] = 5.0

    def test_arithmetic(self, x43):
        assert list((x43 - 0.75) ** 2) == [3.0625, 0.0625, 1.5625]
        assert list(abs(-x43)) == [1, 1, 2]
        assert list(2 * x43 + 1) == [-1, 3, 5]

    def test_mixing_partitions_is_an_error(self, x43):
        other = Partition(["a", "b", "c"]).gamble([0, 0, 0])
        with pytest.raises(DomainMismatch):
            x43 + other

    def test_events(self, x43):
        assert x43.ge(1.5).members == frozenset({2})
        assert list(x43.le(1).indicator) == [1, 1, 0]
        assert x43.gt(5).is_empty()
        assert x43.lt(0).complement().members == frozenset({1, 2})


class TestBoundsOf:
    def test_example_gamble(self, x43):
        assert bounds_of(x43) == (-1.0, 2.0)

    def test_constant(self, part3):
        assert bounds_of(part3.constant(4.5)) == (4.5, 4.5)

    def test_indicator(self, part3):
        assert bounds_of(part3.event([1]).indicator) == (0.0, 1.0)


class TestRestrict:
    def test_image_on_subset(self, x43, part3):
        assert restrict(x43, part3.event([1, 2])).image() == [1.0, 2.0]

    def test_constant(self, part3):
        assert restrict(part3.constant(5), part3.event([0])).image() == [5.0]

    def test_empty_condition(self, x43, part3):
        with pytest.raises(EmptyConditioningEvent):
            restrict(x43, part3.event([]))


class TestConjugateEntry:
    def test_sign_flip(self, x43):
        e = conjugate_entry("X", x43, 2.0)
        assert e.name == "-X"
        assert list(e.gamble) == [1, -1, -2]
        assert e.lower == -2.0

    def test_constant_is_self_conjugate(self, part3):
        e = conjugate_entry("c", part3.constant(3.0), 3.0)
        assert list(e.gamble) == [-3, -3, -3] and e.lower == -3.0

    @given(values, st.floats(-100, 100, allow_nan=False))
    def test_involution(self, vals, u):
        part = Partition.of_size(len(vals))
        g = part.gamble(vals)
        once = conjugate_entry("G", g, u)
        twice = conjugate_entry(once.name, once.gamble, once.lower)
        assert twice.name == "G"
        assert twice.gamble == g
        assert twice.lower == u


class TestHoleBracket:
    def test_strict_gap(self, x43):
        hb = hole_bracket(x43, 0.75)
        assert (hb.lower, hb.upper, hb.strict) == (-1.0, 1.0, True)

    def test_point_of_image(self, x43):
        hb = hole_bracket(x43, 1)
        assert (hb.lower, hb.upper, hb.strict) == (1.0, 1.0, False)

    def test_out_of_range(self, x43):
        with pytest.raises(OutOfRange):
            hole_bracket(x43, 3)

    @given(values, st.floats(0, 1))
    def test_bracket_contains_k(self, vals, w):
        g = Partition.of_size(len(vals)).gamble(vals)
        k = g.inf + w * (g.sup - g.inf)
        hb = hole_bracket(g, k)
        assert hb.lower <= k + 1e-12 and k - 1e-12 <= hb.upper
        in_image = any(abs(v - k) <= 1e-12 for v in g.image())
        assert (not hb.strict) == in_image
        assert hb.lower in g.image() and hb.upper in g.image()


class TestApplyFunction:
    def test_square(self, x43):
        assert list(apply_function(x43, fns.square())) == [1, 1, 4]

    def test_identity(self, x43):
        assert apply_function(x43, fns.identity()) == x43

    def test_domain_mismatch(self, x43):
        f = fns.custom(lambda v: v * v, "convex", domain=(0.0, 3.0))
        with pytest.raises(DomainMismatch):
            apply_function(x43, f)

    @given(values, st.data())
    def test_commutes_with_restriction(self, vals, data):
        part = Partition.of_size(len(vals))
        g = part.gamble(vals)
        members = data.draw(st.sets(st.integers(0, part.n - 1), min_size=1))
        b = part.event(members)
        f = fns.exponential()
        lhs = sorted(restrict(apply_function(g, f), b).values())
        rhs = sorted(f(v) for v in restrict(g, b).values())
        assert lhs == rhs

    @given(values)
    def test_square_is_nonnegative(self, vals):
        g = Partition.of_size(len(vals)).gamble(vals)
        assert bounds_of(apply_function(g, fns.square()))[0] >= 0


class TestAssessment:
    def test_duplicate_names_rejected(self, part3, x43):
        with pytest.raises(InputError):
            Assessment(part3, [Entry("X", x43, 0), Entry("X", x43, 1)])

    def test_precise_pins_every_atom(self, part3):
        a = Assessment.precise(part3, [0.2, 0.3, 0.5])
        assert len(a) == 6
        assert a.entry("-I2").lower == -0.5

    def test_with_upper_adds_conjugate(self, a43, x43):
        b = a43.with_upper("X", x43, 2.0)
        assert b.names() == ["X", "-X"]
        np.testing.assert_array_equal(b.gamble("-X").values, [1, -1, -2])

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tycat.errors import ParseError
from tycat.phase import Phase

phases = st.builds(Phase, st.integers(-1000, 1000), st.integers(1, 60))


def test_reduced_representation():
    p = Phase(6, 8)
    assert (p.numerator, p.denominator) == (3, 4)
    assert Phase(5, 4) == Phase(1, 4)
    assert Phase(-1, 4) == Phase(3, 4)
    assert Phase(4, 4) == Phase(0, 1)


def test_parse_and_str():
    assert str(Phase(1, 2)) == "1/2"
    assert Phase.parse("3/4") == Phase(3, 4)
    assert Phase.parse("2") == Phase(0, 1)
    for bad in ("x", "1/0", "1/2/3"):
        with pytest.raises(ParseError):
            Phase.parse(bad)


@given(phases)
def test_invariants(p):
    assert 0 <= p.numerator < p.denominator
    assert Fraction(p.numerator, p.denominator).denominator == p.denominator
    assert abs(abs(p.to_complex()) - 1) < 1e-15
    assert Phase.parse(str(p)) == p


@given(phases, phases, phases)
def test_addition_is_mod_one(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p + q == q + p
    assert p - p == Phase()
    assert (p + (-p)).is_zero()
    assert abs((p + q).to_complex() - p.to_complex() * q.to_complex()) < 1e-12


@given(phases, st.integers(-20, 20))
def test_integer_multiples(p, k):
    assert (p * k).as_fraction() == (p.as_fraction() * k) % 1
    assert k * p == p * k

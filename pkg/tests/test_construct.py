from __future__ import annotations

import itertools
import json
import math
from collections import Counter

import numpy as np
import pytest

from tycat.bicharacter import Bicharacter, enumerate_symmetric_nondegenerate
from tycat.construct import TAU, Sign, construct_standard, from_json, fusion_product, parity_matrix, to_json
from tycat.errors import InvariantError, ParseError
from tycat.groups import GroupElement, GroupSpec, enumerate_elements

E = GroupElement


def standard(orders, M, s):
    spec = GroupSpec(orders)
    return construct_standard(spec, Bicharacter(spec, M), s)


def test_fusion_examples():
    z4 = GroupSpec((4,))
    assert fusion_product(z4, E((1,)), E((3,))) == Counter([E((0,))])
    assert fusion_product(z4, TAU, E((2,))) == Counter([TAU])
    assert fusion_product(z4, E((2,)), TAU) == Counter([TAU])
    z2 = GroupSpec((2,))
    assert fusion_product(z2, TAU, TAU) == Counter([E((0,)), E((1,))])


def _times(spec, u: Counter, v: Counter) -> Counter:
    out: Counter = Counter()
    for (s, m), (t, n) in itertools.product(u.items(), v.items()):
        for r, k in fusion_product(spec, s, t).items():
            out[r] += m * n * k
    return out


@pytest.mark.parametrize("orders", [(), (2,), (3,), (2, 2), (4,), (6,), (2, 4), (2, 2, 2), (8,)])
def test_fusion_ring_axioms(orders):
    spec = GroupSpec(orders)
    simples = enumerate_elements(spec) + [TAU]
    for s, t in itertools.product(simples, repeat=2):
        assert fusion_product(spec, s, t) == fusion_product(spec, t, s)
    for s, t, r in itertools.product(simples, repeat=3):
        left = _times(spec, _times(spec, Counter([s]), Counter([t])), Counter([r]))
        right = _times(spec, Counter([s]), _times(spec, Counter([t]), Counter([r])))
        assert left == right
    dims = {**{x: 1 for x in enumerate_elements(spec)}, TAU: math.sqrt(spec.order)}
    assert math.isclose(sum(dims[r] * k for r, k in fusion_product(spec, TAU, TAU).items()), dims[TAU] ** 2)


def test_standard_ising():
    d = standard((2,), ((1,),), Sign.PLUS)
    assert np.allclose(d.gamma, np.array([[1, 1], [1, -1]]) / math.sqrt(2), atol=1e-15)
    assert not (d.a.any() or d.a1.any() or d.a3.any() or d.b1.any() or d.b3.any())
    assert d.a2.tolist() == [[0, 0], [0, 1]] and d.den == 2
    assert np.array_equal(d.b2, d.a2)


def test_standard_trivial_group():
    d = construct_standard(GroupSpec(()), Bicharacter(GroupSpec(()), ()), Sign.MINUS)
    assert d.gamma.shape == (1, 1) and d.gamma[0, 0] == -1


def test_standard_z3_entry():
    d = standard((3,), ((1,),), 1)
    assert abs(d.gamma[1, 2] - np.exp(-2j * np.pi * 2 / 3) / math.sqrt(3)) < 1e-15


def test_standard_rejects_bad_forms():
    with pytest.raises(InvariantError):
        standard((4,), ((2,),), 1)
    with pytest.raises(InvariantError):
        standard((2, 2), ((0, 1), (0, 0)), 1)
    with pytest.raises(InvariantError):
        standard((2,), ((1,),), 2)


@pytest.mark.parametrize("orders", [(), (2,), (3,), (4,), (2, 2), (5,), (6,), (2, 4), (8,), (3, 3), (2, 6), (12,)])
def test_gamma_squares_to_parity(orders):
    spec = GroupSpec(orders)
    P = parity_matrix(spec)
    for b in enumerate_symmetric_nondegenerate(spec):
        for s in Sign:
            d = construct_standard(spec, b, s)
            assert d.unitarity_deviation() < 1e-12
            assert np.max(np.abs(d.gamma @ d.gamma - P)) < 1e-12
            assert not d.a2[0].any() and not d.a2[:, 0].any()


def test_phase_lookup():
    d = standard((4,), ((1,),), 1)
    assert str(d.phase("a2", E((1,)), E((3,)))) == "3/4"


def test_json_round_trip():
    d = standard((2,), ((1,),), 1)
    text = to_json(d)
    doc = json.loads(text)
    assert doc["a2"] == ["0/1", "0/1", "0/1", "1/2"]
    assert len(doc["gamma"]) == 4 and len(doc["a"]) == 8
    assert from_json(text) == d
    e = standard((2, 4), ((1, 0), (0, 3)), -1)
    assert from_json(e.to_json()) == e


def test_json_errors():
    text = standard((2,), ((1,),), 1).to_json()
    with pytest.raises(ParseError):
        from_json(text[: len(text) // 2])
    doc = json.loads(text)
    del doc["b3"]
    with pytest.raises(ParseError):
        from_json(json.dumps(doc))
    doc = json.loads(text)
    doc["a1"] = ["0/1", "x", "0/1", "0/1"]
    with pytest.raises(ParseError):
        from_json(json.dumps(doc))
    doc = json.loads(text)
    doc["gamma"] = [[1, 0], [1, 0], [1, 0], [1, 0]]
    with pytest.raises(InvariantError):
        from_json(json.dumps(doc))
    assert from_json(json.dumps(doc), strict=False).unitarity_deviation() > 0.5


def test_canonical_denominator():
    d = standard((2,), ((1,),), 1)
    scaled = d.replace(den=6, a2=d.a2 * 3, b2=d.b2 * 3)
    assert scaled == d and scaled.den == 2


def test_tables_are_read_only():
    d = standard((2,), ((1,),), 1)
    with pytest.raises(ValueError):
        d.a2[1, 1] = 0
    with pytest.raises(ValueError):
        d.gamma[0, 0] = 0

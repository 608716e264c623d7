from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import add, automorphism_perms, elements, neg
from tycat.errors import InputError, ParseError, SizeError
from tycat.groups import (
    GroupElement,
    GroupSpec,
    automorphism_group,
    canonical_pairing,
    elem_inv,
    elem_op,
    enumerate_elements,
    group_order,
    identity,
)
from tycat.phase import Phase

E = GroupElement
small_orders = st.lists(st.integers(2, 5), min_size=0, max_size=3).map(tuple)


def test_group_order():
    assert group_order(GroupSpec(())) == 1
    assert group_order(GroupSpec((2,))) == 2
    assert group_order(GroupSpec((2, 4))) == 8


def test_invalid_orders():
    for bad in [(1,), (0, 2), (-3,)]:
        with pytest.raises(InputError):
            GroupSpec(bad)


def test_elem_examples():
    z4 = GroupSpec((4,))
    assert elem_op(z4, E((3,)), E((2,))) == E((1,))
    k4 = GroupSpec((2, 2))
    assert elem_inv(k4, E((1, 1))) == E((1, 1))
    assert identity(k4) == E((0, 0))
    with pytest.raises(InputError):
        elem_op(k4, E((1,)), E((0, 1)))
    with pytest.raises(InputError):
        elem_inv(z4, E((4,)))


def test_enumeration_order():
    assert enumerate_elements(GroupSpec((2,))) == [E((0,)), E((1,))]
    assert enumerate_elements(GroupSpec((2, 2))) == [E((0, 0)), E((0, 1)), E((1, 0)), E((1, 1))]
    assert enumerate_elements(GroupSpec(())) == [E(())]


@given(small_orders)
def test_tables_match_tuple_arithmetic(orders):
    spec = GroupSpec(orders)
    els = elements(orders)
    assert [x.residues for x in enumerate_elements(spec)] == els
    for i, x in enumerate(els):
        assert spec.index(E(x)) == i
        assert els[spec.inv_table[i]] == neg(orders, x)
        for j, y in enumerate(els):
            assert els[spec.mul_table[i, j]] == add(orders, x, y)


@given(small_orders, st.data())
def test_group_laws(orders, data):
    spec = GroupSpec(orders)
    pick = st.sampled_from(enumerate_elements(spec))
    x, y, z = data.draw(pick), data.draw(pick), data.draw(pick)
    assert elem_op(spec, elem_op(spec, x, y), z) == elem_op(spec, x, elem_op(spec, y, z))
    assert elem_op(spec, x, y) == elem_op(spec, y, x)
    assert elem_op(spec, x, elem_inv(spec, x)) == identity(spec)
    assert elem_op(spec, x, identity(spec)) == x


def test_pairing_examples():
    z2, z4 = GroupSpec((2,)), GroupSpec((4,))
    assert canonical_pairing(z2, E((1,)), E((1,))) == Phase(1, 2)
    assert canonical_pairing(z4, E((1,)), E((3,))) == Phase(3, 4)
    for eta in enumerate_elements(z4):
        assert canonical_pairing(z4, identity(z4), eta) == Phase()


@pytest.mark.parametrize("orders", [(2,), (4,), (2, 2), (2, 4), (3, 5), (4, 4), (2, 2, 2, 2), (16,)])
def test_pairing_biadditive_exhaustive(orders):
    spec = GroupSpec(orders)
    els = enumerate_elements(spec)
    for x, x2, eta in itertools.product(els, repeat=3):
        lhs = canonical_pairing(spec, elem_op(spec, x, x2), eta)
        assert lhs == canonical_pairing(spec, x, eta) + canonical_pairing(spec, x2, eta)


@pytest.mark.parametrize("orders, count", [((2,), 1), ((3,), 2), ((2, 2), 6), ((4,), 2), ((2, 3), 2), ((6,), 2)])
def test_automorphism_counts(orders, count):
    auts = automorphism_group(GroupSpec(orders))
    assert len(auts) == count
    assert all(phi.is_bijective() for phi in auts)


@pytest.mark.parametrize("orders", [(), (2,), (3,), (4,), (2, 2), (5,), (6,), (2, 3), (7,), (2, 4)])
def test_automorphisms_match_permutation_scan(orders):
    spec = GroupSpec(orders)
    els = elements(orders)
    found = {tuple(phi.perm.tolist()) for phi in automorphism_group(spec)}
    expected = {tuple(els.index(phi[x]) for x in els) for phi in automorphism_perms(orders)}
    assert found == expected


@pytest.mark.parametrize("orders", [(2, 2), (2, 4), (3, 3), (2, 2, 2)])
def test_automorphisms_closed(orders):
    spec = GroupSpec(orders)
    auts = automorphism_group(spec)
    perms = {phi.perm.tobytes() for phi in auts}
    for phi in auts:
        assert phi.inverse().perm.tobytes() in perms
        assert np.array_equal(phi.compose(phi.inverse()).perm, np.arange(spec.order))
        for psi in auts:
            assert phi.compose(psi).perm.tobytes() in perms


def test_automorphism_bound():
    with pytest.raises(SizeError):
        automorphism_group(GroupSpec((5, 5)), bound=16)


def test_json_round_trip():
    spec = GroupSpec((2, 4))
    assert spec.to_json() == "[2, 4]"
    assert GroupSpec.from_json(spec.to_json()) == spec
    for bad in ("[2,", '{"a": 1}', '["2"]'):
        with pytest.raises(ParseError):
            GroupSpec.from_json(bad)

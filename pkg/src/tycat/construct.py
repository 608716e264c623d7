"""Tambara-Yamagami fusion rules and associator data.

:class:`TYData` carries one coefficient per associator component of a TY
category over ``G``. For simple objects ``x, y, z`` in ``G``, ``W`` a
summand of ``tau (x) tau`` and ``E`` an intermediate channel:

==========  ===========================  ==================================
table       associator                   index convention
==========  ===========================  ==================================
``a``       ``(xy)z -> x(yz)``           ``a[x, y, z]``
``a1``      ``(tau x)y -> tau(xy)``      ``a1[x, y]``
``a2``      ``(x tau)y -> x(tau y)``     ``a2[x, y]``
``a3``      ``(xy)tau -> x(y tau)``      ``a3[x, y]``
``b1``      ``(x tau)tau -> x(tau tau)`` ``b1[x, W]``, ``W`` the total
``b2``      ``(tau x)tau -> tau(x tau)`` ``b2[x, W]``, ``W`` the total
``b3``      ``(tau tau)x -> tau(tau x)`` ``b3[x, E]``, ``E`` in tau(x)tau
``gamma``   ``(tau tau)tau -> ...``      ``gamma[out, in]``, both channels
==========  ===========================  ==================================

Phase tables are exact: integer numerators over the shared denominator
``den``. ``gamma`` is complex because ``1/sqrt|G|`` is irrational.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import IntEnum
from functools import reduce
from typing import Union

import numpy as np

from .bicharacter import Bicharacter, is_nondegenerate, is_symmetric
from .errors import InvariantError, ParseError
from .groups import GroupElement, GroupSpec
from .phase import Phase

UNITARITY_TOL = 1e-10

PHASE_TABLES = ("a", "a1", "a2", "a3", "b1", "b2", "b3")


class Sign(IntEnum):
    PLUS = 1
    MINUS = -1

    @classmethod
    def parse(cls, value: int | str) -> Sign:
        try:
            return cls(int(value))
        except ValueError as exc:
            raise InvariantError(f"sign must be +1 or -1, got {value!r}") from exc


class _Tau:
    """The unique non-invertible simple object."""

    _instance = None

    def __new__(cls) -> _Tau:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "TAU"

    def __reduce__(self):
        return (_Tau, ())


TAU = _Tau()
SimpleObject = Union[GroupElement, _Tau]


def fusion_product(spec: GroupSpec, s: SimpleObject, t: SimpleObject) -> Counter:
    """``g*h = gh``, ``g*tau = tau*g = tau``, ``tau*tau = sum of all g``."""
    if s is TAU and t is TAU:
        return Counter(spec.element(i) for i in range(spec.order))
    if s is TAU or t is TAU:
        other = t if s is TAU else s
        spec.check(other)
        return Counter([TAU])
    i, j = spec.index(s), spec.index(t)
    return Counter([spec.element(spec.mul_table[i, j])])


def _phase_shape(name: str, n: int) -> tuple[int, ...]:
    return (n, n, n) if name == "a" else (n, n)


@dataclass(frozen=True, eq=False)
class TYData:
    spec: GroupSpec
    den: int
    a: np.ndarray
    a1: np.ndarray
    a2: np.ndarray
    a3: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    b3: np.ndarray
    gamma: np.ndarray
    strict: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        n = self.spec.order
        if int(self.den) < 1:
            raise InvariantError("den must be a positive integer")
        den = int(self.den)
        tables = {}
        for name in PHASE_TABLES:
            arr = np.asarray(getattr(self, name))
            if arr.shape != _phase_shape(name, n):
                raise InvariantError(f"table {name} has shape {arr.shape}, expected {_phase_shape(name, n)}")
            if not np.issubdtype(arr.dtype, np.integer):
                raise InvariantError(f"table {name} must hold integer numerators")
            tables[name] = np.mod(arr.astype(np.int64), den)
        # shrink to the smallest common denominator so equal data compares equal
        g = reduce(math.gcd, (int(np.gcd.reduce(t.ravel())) if t.size else 0 for t in tables.values()), den)
        for name, t in tables.items():
            t = t // g
            t.setflags(write=False)
            object.__setattr__(self, name, t)
        object.__setattr__(self, "den", den // g)
        gamma = np.array(self.gamma, dtype=np.complex128)
        if gamma.shape != (n, n):
            raise InvariantError(f"gamma has shape {gamma.shape}, expected {(n, n)}")
        gamma.setflags(write=False)
        object.__setattr__(self, "gamma", gamma)
        if self.strict:
            dev = self.unitarity_deviation()
            if not dev < UNITARITY_TOL:
                raise InvariantError(f"gamma is not unitary (deviation {dev:.3g})")

    def unitarity_deviation(self) -> float:
        n = self.spec.order
        return float(np.max(np.abs(self.gamma @ self.gamma.conj().T - np.eye(n))))

    def phase(self, name: str, *elements: GroupElement) -> Phase:
        idx = tuple(self.spec.index(x) for x in elements)
        return Phase(int(getattr(self, name)[idx]), self.den)

    def unit_table(self, name: str) -> np.ndarray:
        """``exp(2 pi i table / den)`` as a complex array."""
        return np.exp(2j * np.pi * getattr(self, name) / self.den)

    def replace(self, **changes) -> TYData:
        fields = {name: getattr(self, name) for name in ("spec", "den", *PHASE_TABLES, "gamma", "strict")}
        fields.update(changes)
        return TYData(**fields)

    def same_phases(self, other: TYData) -> bool:
        """Exact equality of the seven phase tables, ignoring ``gamma``."""
        return (
            self.spec == other.spec
            and self.den == other.den
            and all(np.array_equal(getattr(self, t), getattr(other, t)) for t in PHASE_TABLES)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TYData):
            return NotImplemented
        return self.same_phases(other) and np.array_equal(self.gamma, other.gamma)

    __hash__ = None  # type: ignore[assignment]

    def to_json(self) -> str:
        return to_json(self)


def construct_standard(spec: GroupSpec, B: Bicharacter, s: Sign | int) -> TYData:
    """The data of C(G, chi, xi) with ``xi = s / sqrt|G|``.

    Everything is trivial except ``a2 = b2 = chi`` and
    ``gamma[x, y] = xi * chi(x, y)^-1``.
    """
    if B.spec != spec:
        raise InvariantError("bicharacter is defined on a different group")
    if not is_symmetric(B):
        raise InvariantError(f"bicharacter M={list(map(list, B.M))} is not symmetric")
    if not is_nondegenerate(B):
        raise InvariantError(f"bicharacter M={list(map(list, B.M))} is degenerate")
    sign = Sign.parse(s)
    n = spec.order
    zero2 = np.zeros((n, n), dtype=np.int64)
    chi = B.table
    gamma = int(sign) / math.sqrt(n) * np.exp(-2j * np.pi * chi / B.den)
    return TYData(
        spec=spec,
        den=B.den,
        a=np.zeros((n, n, n), dtype=np.int64),
        a1=zero2,
        a2=chi,
        a3=zero2,
        b1=zero2,
        b2=chi,
        b3=zero2,
        gamma=gamma,
    )


def parity_matrix(spec: GroupSpec) -> np.ndarray:
    """Permutation matrix of ``x -> x^-1``."""
    n = spec.order
    P = np.zeros((n, n))
    P[spec.inv_table, np.arange(n)] = 1.0
    return P


def _phase_strings(table: np.ndarray, den: int) -> list[str]:
    return [str(Phase(int(v), den)) for v in table.ravel()]


def to_json(data: TYData) -> str:
    doc = {"orders": list(data.spec.orders)}
    for name in PHASE_TABLES:
        doc[name] = _phase_strings(getattr(data, name), data.den)
    doc["gamma"] = [[float(z.real), float(z.imag)] for z in data.gamma.ravel()]
    return json.dumps(doc)


def _parse_table(values: object, name: str, shape: tuple[int, ...]) -> list[Phase]:
    if not isinstance(values, list) or len(values) != math.prod(shape):
        raise ParseError(f"table {name} must be a list of {math.prod(shape)} phases")
    if not all(isinstance(v, str) for v in values):
        raise ParseError(f"table {name} must hold 'num/den' strings")
    return [Phase.parse(v) for v in values]


def from_json(text: str, strict: bool = True) -> TYData:
    """Parse :func:`to_json` output. ``strict=False`` admits a non-unitary ``gamma``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("TY data must be a JSON object")
    missing = [k for k in ("orders", *PHASE_TABLES, "gamma") if k not in doc]
    if missing:
        raise ParseError(f"missing keys: {missing}")
    orders = doc["orders"]
    if not isinstance(orders, list) or not all(isinstance(o, int) for o in orders):
        raise ParseError("orders must be a list of integers")
    try:
        spec = GroupSpec(tuple(orders))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    n = spec.order
    parsed = {name: _parse_table(doc[name], name, _phase_shape(name, n)) for name in PHASE_TABLES}
    den = reduce(math.lcm, (p.denominator for ps in parsed.values() for p in ps), 1)
    tables = {
        name: np.array([p.numerator * (den // p.denominator) for p in ps], dtype=np.int64).reshape(
            _phase_shape(name, n)
        )
        for name, ps in parsed.items()
    }
    gamma = doc["gamma"]
    if (
        not isinstance(gamma, list)
        or len(gamma) != n * n
        or not all(isinstance(p, list) and len(p) == 2 for p in gamma)
    ):
        raise ParseError(f"gamma must be a list of {n * n} [re, im] pairs")
    try:
        g = np.array([complex(float(re), float(im)) for re, im in gamma]).reshape(n, n)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"gamma entries must be numbers: {exc}") from exc
    return TYData(spec=spec, den=den, gamma=g, strict=strict, **tables)

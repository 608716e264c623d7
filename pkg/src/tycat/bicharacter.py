"""Symmetric nondegenerate bicharacters on finite abelian groups.

A bicharacter is stored as an integer matrix ``M`` with ``M[i][j]`` taken
modulo ``g_ij = gcd(orders[i], orders[j])``; it evaluates to
``sum_ij M[i][j] * x[i] * y[j] / g_ij`` mod 1. Two bicharacters are the same
exactly when their evaluation tables agree.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InputError, InvariantError, ParseError, SizeError
from .groups import DEFAULT_BOUND, Automorphism, GroupElement, GroupSpec, automorphism_group
from .phase import Phase


def _gcd_matrix(spec: GroupSpec) -> np.ndarray:
    o = spec.orders
    return np.array([[math.gcd(a, b) for b in o] for a in o], dtype=np.int64).reshape(spec.rank, spec.rank)


@dataclass(frozen=True)
class Bicharacter:
    spec: GroupSpec
    M: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        k = self.spec.rank
        try:
            rows = tuple(tuple(int(v) for v in row) for row in self.M)
        except TypeError as exc:
            raise InputError("M must be a square integer matrix") from exc
        if len(rows) != k or any(len(r) != k for r in rows):
            raise InputError(f"M must be {k}x{k} for orders {list(self.spec.orders)}")
        g = _gcd_matrix(self.spec)
        rows = tuple(tuple(v % int(g[i, j]) for j, v in enumerate(r)) for i, r in enumerate(rows))
        object.__setattr__(self, "M", rows)

    @property
    def den(self) -> int:
        """Common denominator of every table entry."""
        return self.spec.exponent

    @cached_property
    def table(self) -> np.ndarray:
        """``table[x, y]`` is the numerator of ``eval(x, y)`` over :attr:`den`."""
        k = self.spec.rank
        n = self.spec.order
        if k == 0:
            out = np.zeros((n, n), dtype=np.int64)
        else:
            g = _gcd_matrix(self.spec)
            weights = np.array(self.M, dtype=np.int64) * (self.den // g)
            r = self.spec.residues
            out = np.mod(np.einsum("xi,ij,yj->xy", r, weights, r), self.den)
        out.setflags(write=False)
        return out

    @cached_property
    def key(self) -> bytes:
        return self.table.tobytes()

    def to_json(self) -> str:
        return json.dumps({"orders": list(self.spec.orders), "M": [list(r) for r in self.M]})

    @classmethod
    def from_json(cls, text: str) -> Bicharacter:
        try:
            value = json.loads(text)
            return cls(GroupSpec(tuple(value["orders"])), tuple(tuple(r) for r in value["M"]))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ParseError(f"invalid bicharacter JSON: {exc}") from exc


def bichar_eval(B: Bicharacter, x: GroupElement, y: GroupElement) -> Phase:
    i, j = B.spec.index(x), B.spec.index(y)
    return Phase(int(B.table[i, j]), B.den)


def is_symmetric(B: Bicharacter) -> bool:
    return bool(np.array_equal(B.table, B.table.T))


def is_nondegenerate(B: Bicharacter) -> bool:
    kernel = np.all(B.table == 0, axis=1)
    return int(kernel.sum()) == 1


def table_is_nondegenerate(table: np.ndarray) -> bool:
    """Kernel check on a raw numerator table (the identity row is always zero)."""
    return int(np.all(table == 0, axis=1).sum()) == 1


def _unit_index(spec: GroupSpec, i: int) -> int:
    unit = np.zeros(spec.rank, dtype=np.int64)
    unit[i] = 1
    return int(spec.index_of_residues(unit))


def _matrix_from_values(spec: GroupSpec, value, den: int) -> tuple[tuple[int, ...], ...] | None:
    """Read ``M[i][j] = g_ij * value(e_i, e_j)``; ``None`` if a value is not a g_ij-th root."""
    g = _gcd_matrix(spec)
    units = [_unit_index(spec, i) for i in range(spec.rank)]
    M = []
    for i, ui in enumerate(units):
        row = []
        for j, uj in enumerate(units):
            scaled = int(value(ui, uj)) * int(g[i, j])
            if scaled % den:
                return None
            row.append(scaled // den)
        M.append(tuple(row))
    return tuple(M)


def from_table(spec: GroupSpec, table: np.ndarray, den: int) -> Bicharacter | None:
    """The bicharacter whose evaluation table is ``table / den``, if there is one."""
    M = _matrix_from_values(spec, lambda i, j: table[i, j], den)
    if M is None:
        return None
    B = Bicharacter(spec, M)
    # entries of both tables lie in [0, 1), so fraction equality is exact cross-multiplication
    same = np.array_equal(np.asarray(table, dtype=np.int64) * B.den, B.table * den)
    return B if same else None


def enumerate_symmetric_nondegenerate(spec: GroupSpec, bound: int = DEFAULT_BOUND) -> list[Bicharacter]:
    """All symmetric nondegenerate bicharacters, one per evaluation table.

    Only matrices with ``M[i][j] == M[j][i]`` are generated; an asymmetric
    matrix never has a symmetric table because ``eval(e_i, e_j) = M[i][j]/g_ij``.
    """
    if spec.order > bound:
        raise SizeError(f"group order {spec.order} exceeds bound {bound}")
    k = spec.rank
    g = _gcd_matrix(spec)
    upper = [(i, j) for i in range(k) for j in range(i, k)]
    seen: set[bytes] = set()
    out: list[Bicharacter] = []
    for values in itertools.product(*[range(int(g[i, j])) for i, j in upper]):
        M = [[0] * k for _ in range(k)]
        for (i, j), v in zip(upper, values):
            M[i][j] = M[j][i] = v
        B = Bicharacter(spec, tuple(tuple(r) for r in M))
        if not (is_symmetric(B) and is_nondegenerate(B)):
            continue
        if B.key not in seen:
            seen.add(B.key)
            out.append(B)
    return out


def bichar_pullback(B: Bicharacter, phi: Automorphism) -> Bicharacter:
    """``(x, y) -> B(phi(x), phi(y))``."""
    if phi.spec != B.spec:
        raise InputError("automorphism and bicharacter live on different groups")
    M = _matrix_from_values(B.spec, lambda i, j: B.table[phi.perm[i], phi.perm[j]], B.den)
    if M is None:
        raise InvariantError("pulled-back value is not a g_ij-th root of unity")
    return Bicharacter(B.spec, M)


def pullback_table(table: np.ndarray, phi: Automorphism) -> np.ndarray:
    return table[np.ix_(phi.perm, phi.perm)]


def orbit_classify(spec: GroupSpec, bound: int = DEFAULT_BOUND) -> list[tuple[Bicharacter, int]]:
    """Aut(G)-orbits of the enumerated bicharacters as ``(representative, orbit size)``.

    The representative is the first orbit member in enumeration order.
    """
    forms = enumerate_symmetric_nondegenerate(spec, bound)
    auts = automorphism_group(spec, bound)
    index = {B.key: i for i, B in enumerate(forms)}
    assigned = [False] * len(forms)
    out = []
    for i, B in enumerate(forms):
        if assigned[i]:
            continue
        orbit = {pullback_table(B.table, phi).tobytes() for phi in auts}
        for key in orbit:
            assigned[index[key]] = True
        out.append((B, len(orbit)))
    return out

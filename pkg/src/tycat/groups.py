"""Finite abelian groups presented as products of cyclic groups.

Elements are residue vectors. The lexicographic order of residue vectors
fixes the integer index of every element, and every table or matrix in the
package is indexed that way (index 0 is the identity).
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, ParseError, SizeError
from .phase import Phase

DEFAULT_BOUND = 64


@dataclass(frozen=True)
class GroupElement:
    residues: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "residues", tuple(int(r) for r in self.residues))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.residues)) + ")"


@dataclass(frozen=True)
class GroupSpec:
    """``Z/orders[0] x Z/orders[1] x ...``; the empty tuple is the trivial group.

    Isomorphic presentations (``[6]`` and ``[2, 3]``) are distinct specs.
    """

    orders: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        try:
            orders = tuple(int(o) for o in self.orders)
        except (TypeError, ValueError) as exc:
            raise InputError(f"orders must be integers, got {self.orders!r}") from exc
        if any(o < 2 for o in orders):
            raise InputError(f"every cyclic order must be >= 2, got {list(orders)}")
        object.__setattr__(self, "orders", orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    @cached_property
    def exponent(self) -> int:
        return reduce(math.lcm, self.orders, 1)

    @cached_property
    def residues(self) -> np.ndarray:
        """``(order, rank)`` array of residue vectors in lexicographic order."""
        if not self.orders:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.meshgrid(*[np.arange(o) for o in self.orders], indexing="ij")
        out = np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)
        out.setflags(write=False)
        return out

    @cached_property
    def _strides(self) -> np.ndarray:
        strides = [1] * self.rank
        for i in range(self.rank - 2, -1, -1):
            strides[i] = strides[i + 1] * self.orders[i + 1]
        return np.array(strides, dtype=np.int64)

    def index_of_residues(self, residues: np.ndarray) -> np.ndarray:
        """Vectorized inverse of :attr:`residues` for arrays ending in a rank axis."""
        residues = np.mod(residues, np.array(self.orders, dtype=np.int64)) if self.rank else residues
        return (residues * self._strides).sum(axis=-1).astype(np.int64)

    @cached_property
    def mul_table(self) -> np.ndarray:
        r = self.residues
        out = self.index_of_residues(r[:, None, :] + r[None, :, :])
        out.setflags(write=False)
        return out

    @cached_property
    def inv_table(self) -> np.ndarray:
        out = self.index_of_residues(-self.residues)
        out.setflags(write=False)
        return out

    def check(self, x: GroupElement) -> None:
        if len(x.residues) != self.rank:
            raise InputError(f"element {x} has length {len(x.residues)}, group rank is {self.rank}")
        for r, o in zip(x.residues, self.orders):
            if not 0 <= r < o:
                raise InputError(f"element {x} is not reduced modulo {list(self.orders)}")

    def index(self, x: GroupElement) -> int:
        self.check(x)
        return int(self.index_of_residues(np.array(x.residues, dtype=np.int64)))

    def element(self, i: int) -> GroupElement:
        return GroupElement(tuple(self.residues[int(i)]))

    def to_json(self) -> str:
        return json.dumps(list(self.orders))

    @classmethod
    def from_json(cls, text: str) -> GroupSpec:
        try:
            value = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid group JSON: {exc}") from exc
        if not isinstance(value, list) or not all(isinstance(v, int) for v in value):
            raise ParseError("a group is a JSON array of integers")
        return cls(tuple(value))


def group_order(spec: GroupSpec) -> int:
    return spec.order


def identity(spec: GroupSpec) -> GroupElement:
    return GroupElement((0,) * spec.rank)


def elem_op(spec: GroupSpec, x: GroupElement, y: GroupElement) -> GroupElement:
    spec.check(x)
    spec.check(y)
    return GroupElement(tuple((a + b) % o for a, b, o in zip(x.residues, y.residues, spec.orders)))


def elem_inv(spec: GroupSpec, x: GroupElement) -> GroupElement:
    spec.check(x)
    return GroupElement(tuple((-a) % o for a, o in zip(x.residues, spec.orders)))


def enumerate_elements(spec: GroupSpec) -> list[GroupElement]:
    return [GroupElement(tuple(r)) for r in spec.residues]


def canonical_pairing(spec: GroupSpec, x: GroupElement, eta: GroupElement) -> Phase:
    """``sum_i x[i]*eta[i]/orders[i]`` mod 1, the standard identification of G with its dual."""
    spec.check(x)
    spec.check(eta)
    total = sum((Fraction(a * b, o) for a, b, o in zip(x.residues, eta.residues, spec.orders)), Fraction(0))
    return Phase.from_fraction(total)


def element_order(spec: GroupSpec, residues: Sequence[int]) -> int:
    return reduce(math.lcm, (o // math.gcd(r, o) for r, o in zip(residues, spec.orders)), 1)


@dataclass(frozen=True)
class Automorphism:
    """A group automorphism as an integer matrix acting on residue vectors.

    Column ``j`` holds the image of the ``j``-th cyclic generator, so
    ``phi(x)[i] = sum_j matrix[i][j] * x[j] mod orders[i]``.
    """

    spec: GroupSpec
    matrix: tuple[tuple[int, ...], ...]

    @cached_property
    def perm(self) -> np.ndarray:
        """``perm[i]`` is the index of the image of element ``i``."""
        A = np.array(self.matrix, dtype=np.int64).reshape(self.spec.rank, self.spec.rank)
        out = self.spec.index_of_residues(self.spec.residues @ A.T)
        out.setflags(write=False)
        return out

    def __call__(self, x: GroupElement) -> GroupElement:
        return self.spec.element(self.perm[self.spec.index(x)])

    def is_bijective(self) -> bool:
        return len(set(self.perm.tolist())) == self.spec.order

    def compose(self, other: Automorphism) -> Automorphism:
        """``self o other``."""
        return _from_perm(self.spec, self.perm[other.perm])

    def inverse(self) -> Automorphism:
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(self.spec.order)
        return _from_perm(self.spec, inv)


def _from_perm(spec: GroupSpec, perm: np.ndarray) -> Automorphism:
    k = spec.rank
    cols = []
    for j in range(k):
        unit = np.zeros(k, dtype=np.int64)
        unit[j] = 1
        cols.append(spec.residues[perm[spec.index_of_residues(unit)]])
    matrix = tuple(tuple(int(cols[j][i]) for j in range(k)) for i in range(k))
    return Automorphism(spec, matrix)


def _subgroup_indices(spec: GroupSpec, prefix: int) -> Iterable[tuple[int, ...]]:
    return itertools.product(*[range(o) for o in spec.orders[:prefix]])


def automorphism_group(spec: GroupSpec, bound: int = DEFAULT_BOUND) -> list[Automorphism]:
    """Every automorphism, found by backtracking over generator images.

    The image of generator ``j`` must have order ``orders[j]``, and the map
    restricted to the first ``j + 1`` cyclic factors must already be
    injective. The output size grows like ``|GL(r, p)|`` for elementary
    abelian groups, so ranks above four get slow well before the bound.
    """
    if spec.order > bound:
        raise SizeError(f"group order {spec.order} exceeds bound {bound}")
    k = spec.rank
    orders = np.array(spec.orders, dtype=np.int64)
    candidates = [
        [tuple(int(v) for v in r) for r in spec.residues if element_order(spec, r) == spec.orders[j]]
        for j in range(k)
    ]
    found: list[Automorphism] = []

    def extend(images: list[tuple[int, ...]]) -> None:
        j = len(images)
        if j == k:
            matrix = tuple(tuple(images[c][i] for c in range(k)) for i in range(k))
            phi = Automorphism(spec, matrix)
            if phi.is_bijective():
                found.append(phi)
            return
        for img in candidates[j]:
            trial = images + [img]
            imgs = np.array(trial, dtype=np.int64)
            coeffs = np.array(list(_subgroup_indices(spec, j + 1)), dtype=np.int64)
            mapped = np.mod(coeffs @ imgs, orders)
            if len({tuple(row) for row in mapped.tolist()}) == len(coeffs):
                extend(trial)

    extend([])
    return found

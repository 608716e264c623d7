"""Pentagon verification for TY associator data.

Two independent routes:

* component equations: the pentagon split by which of the four objects is
  ``tau``. Families without ``tau`` in three or more slots are scalar phase
  identities (exact on :class:`TYData`); the rest are matrix identities
  involving ``gamma`` and are compared in floating point.
* composition: every associator move is realized as a matrix between the
  bases of the two bracketings, and both pentagon paths are composed and
  compared for every quadruple of simple objects and every total summand.

Violations are reported, never raised.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .construct import PHASE_TABLES, TYData
from .errors import InputError
from .groups import GroupSpec

DEFAULT_TOL = 1e-10

# families whose every tuple ranges over G^3 (P0 ranges over G^4)
SCALAR_FAMILIES = (
    "P0", "P{4}", "P{1}", "P{2}", "P{3}",
    "P{3,4}", "P{1,2}", "P{2,4}", "P{1,3}", "P{2,3}", "P{1,4}",
)
GAMMA_FAMILIES = ("Mixed-1", "Mixed-2", "Mixed-3", "Mixed-4", "Final")


@dataclass
class FamilyResult:
    family: str
    violations: int
    max_deviation: float
    sample: list | None = None
    checked: int = 0

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "violations": self.violations,
            "max_deviation": self.max_deviation,
            "checked": self.checked,
            "sample": self.sample,
        }


@dataclass
class PentagonReport:
    families: list[FamilyResult] = field(default_factory=list)
    tolerance: float = DEFAULT_TOL

    @property
    def passed(self) -> bool:
        return all(f.passed for f in self.families)

    def family(self, name: str) -> FamilyResult:
        for f in self.families:
            if f.family == name:
                return f
        raise KeyError(name)

    def failing(self) -> list[str]:
        return [f.family for f in self.families if not f.passed]

    def merge(self, other: PentagonReport) -> PentagonReport:
        return PentagonReport(self.families + other.families, max(self.tolerance, other.tolerance))

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "tolerance": self.tolerance,
            "families": [f.to_dict() for f in self.families],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


@dataclass(frozen=True)
class TableView:
    """Array-level view of TY data over an abstract finite abelian group.

    ``den`` is an integer for exact numerator tables and ``None`` for float
    phases in units of full turns. ``label`` renders an index for reports.
    """

    mul: np.ndarray
    inv: np.ndarray
    e: int
    a: np.ndarray
    a1: np.ndarray
    a2: np.ndarray
    a3: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    b3: np.ndarray
    gamma: np.ndarray
    den: int | None
    label: Callable[[int], object] = str

    @property
    def n(self) -> int:
        return len(self.inv)

    def unit(self, name: str) -> np.ndarray:
        t = getattr(self, name)
        scale = self.den if self.den is not None else 1
        return np.exp(2j * np.pi * t / scale)


def view_of(data: TYData, exact: bool = True) -> TableView:
    spec = data.spec
    tables = {name: getattr(data, name) for name in PHASE_TABLES}
    den: int | None = data.den
    if not exact:
        tables = {name: t / data.den for name, t in tables.items()}
        den = None
    return TableView(
        mul=spec.mul_table,
        inv=spec.inv_table,
        e=0,
        gamma=data.gamma,
        den=den,
        label=lambda i: list(spec.element(i).residues),
        **tables,
    )


def _deviation(diff: np.ndarray, den: int | None) -> np.ndarray:
    """Chord distance ``|exp(2 pi i diff) - 1|`` of a phase difference."""
    if den is not None:
        d = np.mod(diff, den)
        return np.where(d == 0, 0.0, 2.0 * np.abs(np.sin(np.pi * d / den)))
    d = diff - np.round(diff)
    return 2.0 * np.abs(np.sin(np.pi * d))


def _scalar_terms(v: TableView, name: str, x: np.ndarray, n: int):
    """``(lhs, rhs)`` of one scalar family on the chunk ``x`` of first arguments."""
    mul, inv = v.mul, v.inv
    a, a1, a2, a3, b1, b2, b3 = v.a, v.a1, v.a2, v.a3, v.b1, v.b2, v.b3
    g = np.arange(n)
    if name == "P0":
        X, Y, Z, W = x[:, None, None, None], g[None, :, None, None], g[None, None, :, None], g[None, None, None, :]
        lhs = a[Y, Z, W] + a[X, mul[Y, Z], W] + a[X, Y, Z]
        rhs = a[X, Y, mul[Z, W]] + a[mul[X, Y], Z, W]
        return lhs, rhs
    X, Y, Z = x[:, None, None], g[None, :, None], g[None, None, :]
    XY, YZ = mul[X, Y], mul[Y, Z]
    if name == "P{4}":
        return a3[Y, Z] + a3[X, YZ] + a[X, Y, Z], a3[X, Y] + a3[XY, Z]
    if name == "P{1}":
        return a[X, Y, Z] + a1[XY, Z] + a1[X, Y], a1[X, YZ] + a1[Y, Z]
    if name == "P{2}":
        return a2[X, Z] + a2[X, Y], a2[X, YZ]
    if name == "P{3}":
        return a2[Y, Z] + a2[X, Z], a2[XY, Z]
    if name == "P{3,4}":
        xinv_z = mul[inv[X], Z]
        return (
            b1[Y, xinv_z] + b1[X, Z] + a3[X, Y],
            a[X, Y, mul[inv[Y], xinv_z]] + b1[XY, Z],
        )
    if name == "P{1,2}":
        return a1[X, Y] + b3[Y, mul[X, Z]] + b3[X, Z], b3[XY, Z] + a[Z, X, Y]
    if name == "P{2,4}":
        return b2[Y, Z] + a2[X, Y], b2[Y, mul[X, Z]]
    if name == "P{1,3}":
        return a2[X, Y] + b2[X, mul[Z, inv[Y]]], b2[X, Z]
    if name == "P{2,3}":
        xinv_z = mul[inv[X], Z]
        return (
            b3[Y, xinv_z] + a[X, xinv_z, Y] + b1[X, Z],
            b1[X, mul[Z, Y]] + b3[Y, Z],
        )
    if name == "P{1,4}":
        return a3[X, Y] + b2[XY, Z] + a1[X, Y], b2[X, Z] + b2[Y, Z]
    raise KeyError(name)


_FAMILY_TABLES = {
    "P0": ("a",),
    "P{4}": ("a", "a3"),
    "P{1}": ("a", "a1"),
    "P{2}": ("a2",),
    "P{3}": ("a2",),
    "P{3,4}": ("a", "a3", "b1"),
    "P{1,2}": ("a", "a1", "b3"),
    "P{2,4}": ("a2", "b2"),
    "P{1,3}": ("a2", "b2"),
    "P{2,3}": ("a", "b1", "b3"),
    "P{1,4}": ("a1", "a3", "b2"),
}

# elements per vectorized chunk; bounds memory for large grids
_CHUNK = 1 << 21


def scalar_family(v: TableView, name: str, tol: float = DEFAULT_TOL) -> FamilyResult:
    n = v.n
    arity = 4 if name == "P0" else 3
    checked = n**arity
    if all(not np.any(getattr(v, t)) for t in _FAMILY_TABLES[name]):
        # every term vanishes identically, so both sides are zero
        return FamilyResult(name, 0, 0.0, None, checked)
    per_x = n ** (arity - 1)
    step = max(1, _CHUNK // per_x)
    violations = 0
    worst = 0.0
    sample = None
    for start in range(0, n, step):
        x = np.arange(start, min(n, start + step))
        lhs, rhs = _scalar_terms(v, name, x, n)
        # distance to the nearest integer (in turns); the chord is monotone in it
        if v.den is None:
            diff = lhs - rhs
            r = np.abs(diff - np.rint(diff))
            bad = r >= math.asin(min(tol / 2, 1.0)) / math.pi
            r_max = float(r.max())
        else:
            d = np.mod(lhs - rhs, v.den)
            bad = d != 0
            r_max = float(np.minimum(d, v.den - d).max()) / v.den
        count = int(bad.sum())
        worst = max(worst, 2.0 * math.sin(math.pi * r_max))
        if count and sample is None:
            pos = np.unravel_index(int(np.argmax(bad)), bad.shape)
            sample = [v.label(int(x[pos[0]]))] + [v.label(int(p)) for p in pos[1:]]
        violations += count
    return FamilyResult(name, violations, worst, sample, checked)


def _gamma_residuals(v: TableView, name: str, units: dict, xs: np.ndarray) -> np.ndarray:
    """Stacked ``lhs - rhs`` of one operator identity for the block indices ``xs``.

    Operators act on functions on G with ``(gamma f)(out) = sum gamma[out, in] f(in)``.
    The result has shape ``(len(xs), n, n)``.
    """
    n = v.n
    mul, inv = v.mul, v.inv
    G = v.gamma
    g = np.arange(n)
    X = xs[:, None, None]
    Out = g[None, :, None]
    In = g[None, None, :]
    if name == "Mixed-1":
        # gamma[ y -> a3(x,y) b1(x,yx) f(yx) ] = a2(x,.) gamma(f)
        y = mul[In, inv[X]]
        lhs = G[Out, y] * units["a3"][X, y] * units["b1"][X, In]
        return lhs - units["a2"][X, Out] * G[Out, In]
    if name == "Mixed-2":
        # b1(x, yx) gamma(b2(x,.) f)(yx) = a1(x,y) gamma(f)(y)
        yx = mul[Out, X]
        lhs = units["b1"][X, yx] * G[yx, In] * units["b2"][X, In]
        return lhs - units["a1"][X, Out] * G[Out, In]
    if name == "Mixed-3":
        # b2(x,y) gamma( b3(x, .x^-1) f(.x^-1) )(y) = gamma( a3(.,x) f )(y)
        lhs = units["b2"][X, Out] * G[Out, mul[In, X]] * units["b3"][X, In]
        return lhs - G[Out, In] * units["a3"][In, X]
    if name == "Mixed-4":
        # b3(x, yx^-1) a1(yx^-1, x) gamma(f)(yx^-1) = gamma( a2(.,x) f )(y)
        yxi = mul[Out, inv[X]]
        lhs = units["b3"][X, yxi] * units["a1"][yxi, X] * G[yxi, In]
        return lhs - G[Out, In] * units["a2"][In, X]
    if name == "Final":
        # on functions of (x, y): (gamma (x) id) M[b2(x,y)] (gamma (x) id) f
        #   = b3(x, x^-1 y) b1(x^-1 y, y) f(x^-1 y, y); one block per second coordinate y
        lhs = (G[None, :, :] * units["b2"].T[xs][:, None, :]) @ G
        Y = xs[:, None]
        Xo = g[None, :]
        src = mul[inv[Xo], Y]
        rhs = np.zeros((len(xs), n, n), dtype=complex)
        rhs[np.arange(len(xs))[:, None], Xo, src] = units["b3"][Xo, src] * units["b1"][src, Y]
        return lhs - rhs
    raise KeyError(name)


def gamma_family(v: TableView, name: str, tol: float = DEFAULT_TOL) -> FamilyResult:
    n = v.n
    units = {t: v.unit(t) for t in PHASE_TABLES if t != "a"}
    step = max(1, _CHUNK // (n * n))
    per_block = np.empty(n)
    for start in range(0, n, step):
        xs = np.arange(start, min(n, start + step))
        diff = np.abs(_gamma_residuals(v, name, units, xs))
        per_block[xs] = diff.reshape(len(xs), -1).max(axis=1)
    bad = per_block >= tol
    sample = [v.label(int(np.argmax(bad)))] if bad.any() else None
    return FamilyResult(name, int(bad.sum()), float(per_block.max()), sample, n)


def verify_view(v: TableView, tol: float = DEFAULT_TOL) -> PentagonReport:
    fams = [scalar_family(v, name, tol) for name in SCALAR_FAMILIES]
    fams += [gamma_family(v, name, tol) for name in GAMMA_FAMILIES]
    return PentagonReport(fams, tol)


def verify_scalar(data: TYData, mode: str = "exact", tolerance: float = DEFAULT_TOL) -> PentagonReport:
    if mode not in ("exact", "float"):
        raise InputError(f"mode must be 'exact' or 'float', got {mode!r}")
    v = view_of(data, exact=(mode == "exact"))
    return PentagonReport([scalar_family(v, name, tolerance) for name in SCALAR_FAMILIES], tolerance)


def verify_gamma(data: TYData, tolerance: float = DEFAULT_TOL) -> PentagonReport:
    v = view_of(data, exact=False)
    return PentagonReport([gamma_family(v, name, tolerance) for name in GAMMA_FAMILIES], tolerance)


# ---------------------------------------------------------------------------
# composition oracle

class _Oracle:
    """Precomputed pentagon structure for one group.

    Labels are ``0..n-1`` for group elements and ``n`` for tau. An F-symbol
    ``F[a, b, c, d, e, f]`` maps the basis vector ``(ab -> e, ec -> d)`` of
    ``(ab)c`` to ``(bc -> f, af -> d)`` of ``a(bc)``. Every admissible
    F-symbol gets a slot in one flat value vector.
    """

    def __init__(self, spec: GroupSpec):
        n = spec.order
        self.n = n
        self.spec = spec
        mul = spec.mul_table
        tau = n
        labels = list(range(n + 1))

        def fuse(p: int, q: int) -> list[int]:
            if p == tau and q == tau:
                return list(range(n))
            if p == tau or q == tau:
                return [tau]
            return [int(mul[p, q])]

        self.fuse = fuse
        slots: dict[tuple, int] = {}
        source: list[tuple[str, tuple]] = []
        inv = spec.inv_table
        for a in labels:
            for b in labels:
                for c in labels:
                    for e in fuse(a, b):
                        for d in fuse(e, c):
                            for f in fuse(b, c):
                                if d not in fuse(a, f):
                                    continue
                                slots[(a, b, c, d, e, f)] = len(source)
                                source.append(self._table_entry(a, b, c, d, e, f, tau, inv))
        self.slots = slots
        self.source = source
        self._build_instances(labels, fuse)

    @staticmethod
    def _table_entry(a, b, c, d, e, f, tau, inv) -> tuple[str, tuple]:
        taus = (a == tau, b == tau, c == tau)
        if taus == (False, False, False):
            return "a", (a, b, c)
        if taus == (False, False, True):
            return "a3", (a, b)
        if taus == (True, False, False):
            return "a1", (b, c)
        if taus == (False, True, False):
            return "a2", (a, c)
        if taus == (False, True, True):
            return "b1", (a, d)
        if taus == (True, False, True):
            return "b2", (b, d)
        if taus == (True, True, False):
            return "b3", (c, e)
        return "gamma", (f, e)

    def _build_instances(self, labels, fuse) -> None:
        slot = self.slots
        batches: dict[tuple, list] = {}
        for a in labels:
            for b in labels:
                for c in labels:
                    for d in labels:
                        totals = sorted({t for f in fuse(a, b) for g in fuse(f, c) for t in fuse(g, d)})
                        for t in totals:
                            L = [(f, g) for f in fuse(a, b) for g in fuse(f, c) if t in fuse(g, d)]
                            P = [(f, l) for f in fuse(a, b) for l in fuse(c, d) if t in fuse(f, l)]
                            R = [(k, l) for l in fuse(c, d) for k in fuse(b, l) if t in fuse(a, k)]
                            Q1 = [(h, g) for h in fuse(b, c) for g in fuse(a, h) if t in fuse(g, d)]
                            Q2 = [(h, k) for h in fuse(b, c) for k in fuse(h, d) if t in fuse(a, k)]
                            # path 1: ((ab)c)d -> (ab)(cd) -> a(b(cd))
                            A = [[slot.get((f, c, d, t, g, l), -1) if f == f2 else -1 for (f2, g) in L] for (f, l) in P]
                            B = [[slot.get((a, b, l, t, f, k), -1) if l == l2 else -1 for (f, l2) in P] for (k, l) in R]
                            # path 2: ((ab)c)d -> (a(bc))d -> a((bc)d) -> a(b(cd))
                            C = [[slot.get((a, b, c, g, f, h), -1) if g == g2 else -1 for (f, g2) in L] for (h, g) in Q1]
                            D = [[slot.get((a, h, d, t, g, k), -1) if h == h2 else -1 for (h2, g) in Q1] for (h, k) in Q2]
                            E = [[slot.get((b, c, d, k, h, l), -1) if k == k2 else -1 for (h, k2) in Q2] for (k, l) in R]
                            shape = (len(L), len(P), len(R), len(Q1), len(Q2))
                            batches.setdefault(shape, []).append(((a, b, c, d, t), A, B, C, D, E))
        self.batches = []
        for shape, items in batches.items():
            keys = [it[0] for it in items]
            mats = [np.array([it[i] for it in items], dtype=np.int64).reshape(len(items), -1) for i in range(1, 6)]
            dims = [(shape[1], shape[0]), (shape[2], shape[1]), (shape[3], shape[0]), (shape[4], shape[3]), (shape[2], shape[4])]
            mats = [m.reshape(len(items), *dim) for m, dim in zip(mats, dims)]
            self.batches.append((keys, mats))

    def values(self, data: TYData) -> np.ndarray:
        units = {name: data.unit_table(name) for name in PHASE_TABLES}
        units["gamma"] = data.gamma
        out = np.empty(len(self.source) + 1, dtype=complex)
        for i, (name, idx) in enumerate(self.source):
            out[i] = units[name][idx]
        out[-1] = 0.0  # structural zeros index -1
        return out

    def check(self, data: TYData, tol: float) -> FamilyResult:
        vals = self.values(data)
        violations = 0
        worst = 0.0
        sample = None
        checked = 0
        for keys, (A, B, C, D, E) in self.batches:
            lhs = vals[B] @ vals[A]
            rhs = vals[E] @ vals[D] @ vals[C]
            dev = np.abs(lhs - rhs).reshape(len(keys), -1).max(axis=1)
            bad = dev >= tol
            checked += len(keys)
            violations += int(bad.sum())
            worst = max(worst, float(dev.max()))
            if bad.any() and sample is None:
                sample = [self._render(lbl) for lbl in keys[int(np.argmax(bad))]]
        return FamilyResult("Composition", violations, worst, sample, checked)

    def _render(self, label: int):
        return "tau" if label == self.n else list(self.spec.element(label).residues)


@lru_cache(maxsize=32)
def _oracle(spec: GroupSpec) -> _Oracle:
    return _Oracle(spec)


def verify_by_composition(data: TYData, tolerance: float = DEFAULT_TOL) -> PentagonReport:
    return PentagonReport([_oracle(data.spec).check(data, tolerance)], tolerance)


def unit_checks(data: TYData, tolerance: float = DEFAULT_TOL) -> PentagonReport:
    """Normalization at the unit object, plus unitarity of gamma.

    With identity unitors, every associator coefficient with the unit in
    one of its group slots must be trivial.
    """
    e = 0
    entries = [
        data.a[e, :, :], data.a[:, e, :], data.a[:, :, e],
        data.a1[e, :], data.a1[:, e], data.a2[e, :], data.a2[:, e],
        data.a3[e, :], data.a3[:, e],
        data.b1[e, :], data.b2[e, :], data.b3[e, :],
    ]
    nonzero = sum(int(np.count_nonzero(t)) for t in entries)
    worst = max(float(_deviation(t, data.den).max()) for t in entries)
    unit = FamilyResult("Unit", nonzero, worst, None, sum(t.size for t in entries))
    dev = data.unitarity_deviation()
    unitary = FamilyResult("Unitarity", int(not dev < tolerance), dev, None, 1)
    return PentagonReport([unit, unitary], tolerance)


def verify_all(data: TYData, tolerance: float = DEFAULT_TOL, composition: bool = True) -> PentagonReport:
    """Exact scalar families, gamma families, unit checks and (optionally) the composition oracle."""
    report = verify_scalar(data, "exact", tolerance).merge(verify_gamma(data, tolerance))
    report = report.merge(unit_checks(data, tolerance))
    if composition:
        report = report.merge(verify_by_composition(data, tolerance))
    return report


def pentagon_holds(report: PentagonReport) -> bool:
    """Verdict of the component route only (scalar and gamma families)."""
    names = set(SCALAR_FAMILIES) | set(GAMMA_FAMILIES)
    return all(f.passed for f in report.families if f.family in names)


# ---------------------------------------------------------------------------
# negative tests

MUTATION_DEN = 12


def mutate(data: TYData, seed: int, count: int = 1, include_gamma: bool = True) -> TYData:
    """Multiply ``count`` distinct entries by nontrivial phases, reproducibly from ``seed``.

    Phase-table entries get ``k/12`` added for a random ``k`` in ``1..11``;
    a gamma entry is multiplied by ``exp(2 pi i k/12)``, which breaks
    unitarity, so the result is built with ``strict=False``.
    """
    if count < 1:
        raise InputError("count must be >= 1")
    names = list(PHASE_TABLES) + (["gamma"] if include_gamma else [])
    sizes = [getattr(data, name).size for name in names]
    total = sum(sizes)
    if count > total:
        raise InputError(f"count {count} exceeds the {total} available entries")
    rng = np.random.default_rng(seed)
    picks = rng.choice(total, size=count, replace=False)
    shifts = rng.integers(1, MUTATION_DEN, size=count)
    den = math.lcm(data.den, MUTATION_DEN)
    tables = {name: getattr(data, name) * (den // data.den) for name in PHASE_TABLES}
    tables = {name: t.copy() for name, t in tables.items()}
    gamma = data.gamma.copy()
    offsets = np.cumsum([0] + sizes)
    for pick, k in zip(picks, shifts):
        which = int(np.searchsorted(offsets, pick, side="right") - 1)
        name = names[which]
        flat = int(pick - offsets[which])
        if name == "gamma":
            gamma.flat[flat] *= np.exp(2j * np.pi * k / MUTATION_DEN)
        else:
            tables[name].flat[flat] += int(k) * (den // MUTATION_DEN)
    return TYData(spec=data.spec, den=den, gamma=gamma, strict=False, **tables)

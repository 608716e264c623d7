"""TY data for the real line, sampled on a chirp-matched periodic grid.

With ``delta = sqrt(2 pi / (|a| N))`` the points ``x_j = (j - N/2) delta``
satisfy ``a x_j x_k / 2 pi = +-(j - N/2)(k - N/2) / N``, so adding grid
points (indices mod N, identity at ``N/2``) keeps every phase exact. The
grid is then a finite TY structure and the pentagon holds to rounding
error; the Gaussian test checks genuine behaviour on the line.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .construct import Sign
from .errors import InputError
from .pentagon import DEFAULT_TOL, TableView, verify_view

KERNEL_TOL = 1e-12
GAUSSIAN_TOL = 1e-6
TAIL_BOUND = 1e-12


@dataclass(frozen=True)
class ContinuumGrid:
    N: int
    a: float

    def __post_init__(self) -> None:
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 4 or self.N % 2:
            raise InputError(f"grid size must be an even integer >= 4, got {self.N}")
        a = float(self.a)
        if a == 0.0 or not math.isfinite(a):
            raise InputError(f"bicharacter parameter must be a nonzero real, got {self.a}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "a", a)

    @property
    def delta(self) -> float:
        return math.sqrt(2 * math.pi / (abs(self.a) * self.N))

    @property
    def points(self) -> np.ndarray:
        return (np.arange(self.N) - self.N // 2) * self.delta

    @property
    def origin(self) -> int:
        return self.N // 2

    def matching_defect(self) -> float:
        return abs(abs(self.a) * self.delta**2 * self.N - 2 * math.pi)

    def periodicity_defect(self) -> float:
        """Distance of ``a N delta x_k / 2 pi`` from the integers, maximized over k."""
        q = self.a * self.N * self.delta * self.points / (2 * math.pi)
        return float(np.max(np.abs(q - np.round(q))))

    def mul_table(self) -> np.ndarray:
        j = np.arange(self.N)
        return (j[:, None] + j[None, :] - self.N // 2) % self.N

    def inv_table(self) -> np.ndarray:
        return (self.N - np.arange(self.N)) % self.N


def make_grid(N: int, a: float) -> ContinuumGrid:
    return ContinuumGrid(N, a)


def chi_turns(grid: ContinuumGrid) -> np.ndarray:
    """``a x_j x_k / 2 pi`` mod 1."""
    x = grid.points
    t = grid.a * np.outer(x, x) / (2 * math.pi)
    return t - np.floor(t)


def gamma_kernel(grid: ContinuumGrid, s: Sign | int) -> np.ndarray:
    """``s N^-1/2 exp(-i a x_j x_k)``; for ``a < 0`` this is the conjugate of the ``|a|`` kernel."""
    sign = int(Sign.parse(s))
    x = grid.points
    return sign / math.sqrt(grid.N) * np.exp(-1j * grid.a * np.outer(x, x))


def parity_permutation(N: int) -> np.ndarray:
    P = np.zeros((N, N))
    P[np.arange(N), (N - np.arange(N)) % N] = 1.0
    return P


def kernel_residuals(K: np.ndarray) -> tuple[float, float]:
    """``(||K K* - I||, ||K^2 - parity||)`` in the max-entry norm."""
    N = len(K)
    unitarity = float(np.max(np.abs(K @ K.conj().T - np.eye(N))))
    parity = float(np.max(np.abs(K @ K - parity_permutation(N))))
    return unitarity, parity


def grid_associators(grid: ContinuumGrid, s: Sign | int) -> TableView:
    """Float phase tables (in turns) over grid indices; only ``a2 = b2 = chi`` are nontrivial."""
    N = grid.N
    chi = chi_turns(grid)
    zero2 = np.zeros((N, N))
    x = grid.points
    return TableView(
        mul=grid.mul_table(),
        inv=grid.inv_table(),
        e=grid.origin,
        a=np.zeros((N, N, N)),
        a1=zero2,
        a2=chi,
        a3=zero2,
        b1=zero2,
        b2=chi.copy(),
        b3=zero2,
        gamma=gamma_kernel(grid, s),
        den=None,
        label=lambda j: float(x[j]),
    )


@dataclass
class ResidualReport:
    N: int
    a: float
    sign: int
    families: dict[str, float] = field(default_factory=dict)
    unitarity: float = 0.0
    parity: float = 0.0
    tolerance: float = DEFAULT_TOL
    kernel_tolerance: float = KERNEL_TOL

    @property
    def max_family_residual(self) -> float:
        return max(self.families.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return (
            all(r < self.tolerance for r in self.families.values())
            and self.unitarity < self.kernel_tolerance
            and self.parity < self.kernel_tolerance
        )

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "a": self.a,
            "sign": self.sign,
            "pass": self.passed,
            "tolerance": self.tolerance,
            "kernel_tolerance": self.kernel_tolerance,
            "unitarity": self.unitarity,
            "parity": self.parity,
            "families": self.families,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def verify_tables(
    grid: ContinuumGrid, tables: TableView, sign: Sign | int, tolerance: float = DEFAULT_TOL
) -> ResidualReport:
    """Run every pentagon family on (possibly modified) grid tables."""
    report = verify_view(tables, tolerance)
    unitarity, parity = kernel_residuals(tables.gamma)
    return ResidualReport(
        N=grid.N,
        a=grid.a,
        sign=int(Sign.parse(sign)),
        families={f.family: f.max_deviation for f in report.families},
        unitarity=unitarity,
        parity=parity,
        tolerance=tolerance,
    )


def verify_continuum(grid: ContinuumGrid, s: Sign | int, tolerance: float = DEFAULT_TOL) -> ResidualReport:
    return verify_tables(grid, grid_associators(grid, s), s, tolerance)


def gaussian_fixed_point(grid: ContinuumGrid, s: Sign | int) -> float:
    """``||K v - s v|| / ||v||`` for ``v = exp(-a x^2 / 2)``.

    On the line, ``sqrt(a / 2 pi) * int exp(-i a x y) exp(-a y^2 / 2) dy = exp(-a x^2 / 2)``,
    so ``v`` is an eigenvector with eigenvalue ``s`` up to truncation.
    """
    if grid.a <= 0:
        raise InputError("the Gaussian test needs a > 0")
    x = grid.points
    if math.exp(-grid.a * x[0] ** 2 / 2) >= TAIL_BOUND:
        raise InputError(f"grid too narrow: the Gaussian is not below {TAIL_BOUND} at the endpoints")
    sign = int(Sign.parse(s))
    v = np.exp(-grid.a * x**2 / 2)
    Kv = gamma_kernel(grid, s) @ v
    return float(np.linalg.norm(Kv - sign * v) / np.linalg.norm(v))


def shift_matrix(N: int, m: int) -> np.ndarray:
    """``(T_m f)_j = f_{j - m}`` with indices mod N."""
    T = np.zeros((N, N))
    T[np.arange(N), (np.arange(N) - m) % N] = 1.0
    return T


def shift_modulation_check(grid: ContinuumGrid, m: int | None = None) -> float:
    """Max residual of ``K T_m = M[e^{-i a x mdelta}] K`` and ``K M[e^{i a mdelta x}] = T_m K``.

    ``m = None`` checks every shift ``0..N-1``.
    """
    K = gamma_kernel(grid, Sign.PLUS)
    x = grid.points
    shifts = range(grid.N) if m is None else [m]
    worst = 0.0
    for k in shifts:
        T = shift_matrix(grid.N, k)
        mod = np.exp(-1j * grid.a * x * k * grid.delta)
        first = np.max(np.abs(K @ T - mod[:, None] * K))
        second = np.max(np.abs(K * mod.conj()[None, :] - T @ K))
        worst = max(worst, float(first), float(second))
    return worst

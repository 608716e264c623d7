"""Gauge transformations and the normal-form pipeline.

A gauge is a choice of new identifications of tensor products with their
normal forms: ``theta(x, y)`` on ``x (x) y``, ``phi(x)`` on ``x (x) tau``,
``psi(x)`` on ``tau (x) x`` and ``omega(z)`` on the ``z`` summand of
``tau (x) tau``. All four are stored as integer numerators over ``den``.

Normalization runs three gauge steps, each pivoting at the identity, and
then reads off the bicharacter (``a2``) and the sign (from ``gamma[e][e]``).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bicharacter import Bicharacter, from_table, orbit_classify, pullback_table, table_is_nondegenerate
from .construct import PHASE_TABLES, Sign, TYData
from .errors import InconsistencyError, InputError, InvariantError, ParseError, PreconditionError, SizeError
from .groups import DEFAULT_BOUND, GroupSpec, automorphism_group
from .pentagon import DEFAULT_TOL, verify_all
from .phase import Phase

SIGN_TOL = 1e-6
HEISENBERG_BOUND = 32


@dataclass(frozen=True, eq=False)
class GaugeTransform:
    spec: GroupSpec
    den: int
    theta: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    omega: np.ndarray

    def __post_init__(self) -> None:
        n = self.spec.order
        if int(self.den) < 1:
            raise InputError("gauge denominator must be positive")
        object.__setattr__(self, "den", int(self.den))
        for name, shape in (("theta", (n, n)), ("phi", (n,)), ("psi", (n,)), ("omega", (n,))):
            arr = np.asarray(getattr(self, name))
            if arr.shape != shape or not np.issubdtype(arr.dtype, np.integer):
                raise InputError(f"gauge {name} must be an integer array of shape {shape}")
            arr = np.mod(arr.astype(np.int64), self.den)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def identity(cls, spec: GroupSpec) -> GaugeTransform:
        n = spec.order
        z = np.zeros(n, dtype=np.int64)
        return cls(spec, 1, np.zeros((n, n), dtype=np.int64), z, z, z)

    def is_unit_normalized(self) -> bool:
        return not (self.theta[0, :].any() or self.theta[:, 0].any() or self.phi[0] or self.psi[0])

    def rescaled(self, den: int) -> GaugeTransform:
        if den % self.den:
            raise InputError(f"cannot express a gauge over {self.den} with denominator {den}")
        k = den // self.den
        return GaugeTransform(self.spec, den, self.theta * k, self.phi * k, self.psi * k, self.omega * k)

    def __add__(self, other: GaugeTransform) -> GaugeTransform:
        """Composite of two gauges (they act additively on every coefficient)."""
        if other.spec != self.spec:
            raise InputError("gauges live on different groups")
        den = math.lcm(self.den, other.den)
        p, q = self.rescaled(den), other.rescaled(den)
        return GaugeTransform(self.spec, den, p.theta + q.theta, p.phi + q.phi, p.psi + q.psi, p.omega + q.omega)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GaugeTransform):
            return NotImplemented
        if self.spec != other.spec:
            return False
        den = math.lcm(self.den, other.den)
        p, q = self.rescaled(den), other.rescaled(den)
        return all(np.array_equal(getattr(p, k), getattr(q, k)) for k in ("theta", "phi", "psi", "omega"))

    __hash__ = None  # type: ignore[assignment]

    def to_dict(self) -> dict:
        doc: dict = {"orders": list(self.spec.orders)}
        for name in ("theta", "phi", "psi", "omega"):
            doc[name] = [str(Phase(int(v), self.den)) for v in getattr(self, name).ravel()]
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, doc: object) -> GaugeTransform:
        if not isinstance(doc, dict):
            raise ParseError("a gauge must be a JSON object")
        try:
            spec = GroupSpec(tuple(doc["orders"]))
            n = spec.order
            parsed = {}
            for name, size in (("theta", n * n), ("phi", n), ("psi", n), ("omega", n)):
                values = doc[name]
                if not isinstance(values, list) or len(values) != size:
                    raise ParseError(f"gauge {name} must list {size} phases")
                parsed[name] = [Phase.parse(v) for v in values]
        except (KeyError, TypeError, InputError) as exc:
            raise ParseError(f"invalid gauge: {exc}") from exc
        den = math.lcm(1, *(p.denominator for ps in parsed.values() for p in ps))
        arrays = {k: np.array([p.numerator * (den // p.denominator) for p in ps], dtype=np.int64) for k, ps in parsed.items()}
        arrays["theta"] = arrays["theta"].reshape(n, n)
        return cls(spec, den, **arrays)

    @classmethod
    def from_json(cls, text: str) -> GaugeTransform:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid gauge JSON: {exc}") from exc
        return cls.from_dict(doc)


def random_gauge(spec: GroupSpec, seed: int, den: int = 12) -> GaugeTransform:
    """A reproducible unit-normalized gauge with values in ``(1/den) Z / Z``."""
    rng = np.random.default_rng(seed)
    n = spec.order
    theta = rng.integers(0, den, size=(n, n))
    theta[0, :] = 0
    theta[:, 0] = 0
    phi = rng.integers(0, den, size=n)
    psi = rng.integers(0, den, size=n)
    phi[0] = psi[0] = 0
    omega = rng.integers(0, den, size=n)
    return GaugeTransform(spec, den, theta, phi, psi, omega)


def apply_gauge(data: TYData, g: GaugeTransform, check: bool = False) -> TYData:
    """Transport ``data`` along ``g``. ``a2`` is gauge invariant.

    With ``check=True`` the output is re-verified and a failure raises
    :class:`InvariantError`.
    """
    if g.spec != data.spec:
        raise InputError("gauge and data live on different groups")
    if not g.is_unit_normalized():
        raise InvariantError("gauge is not unit-normalized: theta(e,.), theta(.,e), phi(e), psi(e) must vanish")
    spec = data.spec
    den = math.lcm(data.den, g.den)
    g = g.rescaled(den)
    k = den // data.den
    t = {name: getattr(data, name) * k for name in PHASE_TABLES}
    th, ph, ps, om = g.theta, g.phi, g.psi, g.omega
    mul, inv = spec.mul_table, spec.inv_table
    n = spec.order
    X, Y = np.arange(n)[:, None], np.arange(n)[None, :]
    Z = np.arange(n)[None, None, :]
    X3, Y3 = np.arange(n)[:, None, None], np.arange(n)[None, :, None]
    a = t["a"] + th[Y3, Z] + th[X3, mul[Y3, Z]] - th[X3, Y3] - th[mul[X3, Y3], Z]
    a1 = t["a1"] + th + ps[mul] - ps[X] - ps[Y]
    a3 = t["a3"] + ph[X] + ph[Y] - th - ph[mul]
    # second index of b1/b2 is the total W, of b3 the channel E
    xinv_w = mul[inv[X], Y]
    b1 = t["b1"] + om[xinv_w] + th[X, xinv_w] - ph[X] - om[Y]
    b2 = t["b2"] + ph[X] - ps[X]
    b3 = t["b3"] + ps[X] + om[mul[Y, X]] - om[Y] - th[Y, X]
    # gamma[F][E] picks up psi(F) + omega(F) on the output and -phi(E) - omega(E) on the input
    out_phase = (ps + om)[:, None] - (ph + om)[None, :]
    gamma = data.gamma * np.exp(2j * np.pi * out_phase / den)
    out = TYData(
        spec=spec, den=den, a=a, a1=a1, a2=t["a2"], a3=a3, b1=b1, b2=b2, b3=b3, gamma=gamma, strict=data.strict
    )
    if check:
        report = verify_all(out, composition=False)
        if not report.passed:
            raise InvariantError(f"gauged data fails the pentagon: {report.failing()}")
    return out


def _require_valid(data: TYData, tolerance: float) -> None:
    report = verify_all(data, tolerance, composition=False)
    if not report.passed:
        raise PreconditionError(f"input fails verification: {report.failing()}")


def _check_unit(g: GaugeTransform, step: str) -> None:
    # pentagon-valid data has trivial unit rows, so the step gauges are unit-normalized
    # without rescaling; reaching this means the input was not valid TY data
    if not g.is_unit_normalized():
        raise InconsistencyError(f"{step}: derived gauge is not unit-normalized")


def step1_trivialize_a(data: TYData, tolerance: float = DEFAULT_TOL, verify: bool = True) -> tuple[TYData, GaugeTransform]:
    """theta := a3; afterwards ``a`` and ``a3`` vanish."""
    if verify:
        _require_valid(data, tolerance)
    n = data.spec.order
    z = np.zeros(n, dtype=np.int64)
    g = GaugeTransform(data.spec, data.den, data.a3.copy(), z, z, z)
    _check_unit(g, "step 1")
    out = apply_gauge(data, g)
    if out.a.any() or out.a3.any():
        raise InconsistencyError("step 1: a or a3 is not trivial after the gauge")
    return out, g


def step2_shift_b1(data: TYData) -> tuple[TYData, GaugeTransform]:
    """omega(z) := -b1(z^-1, e); afterwards ``b1`` vanishes."""
    if data.a.any() or data.a3.any():
        raise PreconditionError("step 2 needs a and a3 trivial (run step 1 first)")
    spec = data.spec
    n = spec.order
    z = np.zeros(n, dtype=np.int64)
    omega = -data.b1[spec.inv_table, 0]
    g = GaugeTransform(spec, data.den, np.zeros((n, n), dtype=np.int64), z, z, omega)
    out = apply_gauge(data, g)
    if out.b1.any():
        raise InconsistencyError("step 2: b1 does not satisfy its cocycle relation")
    return out, g


def step3_symmetrize(data: TYData) -> tuple[TYData, GaugeTransform]:
    """psi(x) := b2(x, e); afterwards ``b2 = a2^T`` and ``a1``, ``b3`` vanish."""
    if data.a.any() or data.a3.any() or data.b1.any():
        raise PreconditionError("step 3 needs a, a3 and b1 trivial (run steps 1 and 2 first)")
    spec = data.spec
    n = spec.order
    z = np.zeros(n, dtype=np.int64)
    g = GaugeTransform(spec, data.den, np.zeros((n, n), dtype=np.int64), z, data.b2[:, 0].copy(), z)
    _check_unit(g, "step 3")
    out = apply_gauge(data, g)
    if not np.array_equal(out.b2, out.a2.T):
        raise InconsistencyError("step 3: b2 is not the transpose of a2")
    if out.a1.any() or out.b3.any():
        raise InconsistencyError("step 3: a1 or b3 is not trivial")
    return out, g


@dataclass(eq=False)
class ClassificationResult:
    spec: GroupSpec
    chi: np.ndarray
    den: int
    sign: Sign
    gauge: GaugeTransform
    residual: float
    sign_deviation: float = 0.0
    bichar: Bicharacter | None = field(default=None)

    def same_invariants(self, other: ClassificationResult) -> bool:
        """Equal chi tables (as phases) and equal signs."""
        return (
            self.spec == other.spec
            and self.sign == other.sign
            and np.array_equal(self.chi * other.den, other.chi * self.den)
        )

    def to_dict(self) -> dict:
        return {
            "orders": list(self.spec.orders),
            "chi": [str(Phase(int(v), self.den)) for v in self.chi.ravel()],
            "M": None if self.bichar is None else [list(r) for r in self.bichar.M],
            "sign": int(self.sign),
            "sign_deviation": self.sign_deviation,
            "residual": self.residual,
            "gauge": self.gauge.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> ClassificationResult:
        try:
            doc = json.loads(text)
            spec = GroupSpec(tuple(doc["orders"]))
            phases = [Phase.parse(v) for v in doc["chi"]]
            den = math.lcm(1, *(p.denominator for p in phases))
            chi = np.array([p.numerator * (den // p.denominator) for p in phases], dtype=np.int64)
            chi = chi.reshape(spec.order, spec.order)
            bichar = None if doc["M"] is None else Bicharacter(spec, tuple(tuple(r) for r in doc["M"]))
            return cls(
                spec, chi, den, Sign.parse(doc["sign"]), GaugeTransform.from_dict(doc["gauge"]),
                float(doc["residual"]), float(doc["sign_deviation"]), bichar,
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"invalid classification JSON: {exc}") from exc


def fourier_matrix(spec: GroupSpec, chi: np.ndarray, den: int) -> np.ndarray:
    """``|G|^-1/2 exp(-2 pi i chi(x, y))``."""
    return np.exp(-2j * np.pi * chi / den) / math.sqrt(spec.order)


def extract_invariants(data: TYData, tolerance: float = DEFAULT_TOL) -> ClassificationResult:
    """Read (chi, sign) off normalized data, asserting the normal form of ``gamma``."""
    spec = data.spec
    chi = data.a2
    if not np.array_equal(chi, chi.T):
        raise InconsistencyError("a2 is not symmetric")
    if not table_is_nondegenerate(chi):
        raise InconsistencyError("a2 is degenerate")
    scaled = math.sqrt(spec.order) * data.gamma[0, 0].real
    sign = 1 if scaled >= 0 else -1
    sign_dev = abs(scaled - sign)
    if not sign_dev < SIGN_TOL:
        raise InconsistencyError(f"sqrt|G| * gamma[e][e] = {scaled:.6g} is not +-1")
    residual = float(np.max(np.abs(data.gamma - sign * fourier_matrix(spec, chi, data.den))))
    if not residual < tolerance:
        raise InconsistencyError(f"gamma differs from the normal form by {residual:.3g}")
    chi = chi.copy()
    chi.setflags(write=False)
    return ClassificationResult(
        spec=spec,
        chi=chi,
        den=data.den,
        sign=Sign(sign),
        gauge=GaugeTransform.identity(spec),
        residual=residual,
        sign_deviation=float(sign_dev),
        bichar=from_table(spec, chi, data.den),
    )


def normal_form(data: TYData, tolerance: float = DEFAULT_TOL, verify: bool = True) -> tuple[TYData, GaugeTransform]:
    """Run the three gauge steps; returns the normalized data and the composite gauge."""
    d1, g1 = step1_trivialize_a(data, tolerance, verify)
    d2, g2 = step2_shift_b1(d1)
    d3, g3 = step3_symmetrize(d2)
    return d3, g1 + g2 + g3


def normalize(data: TYData, tolerance: float = DEFAULT_TOL, verify: bool = True) -> ClassificationResult:
    normalized, gauge = normal_form(data, tolerance, verify)
    result = extract_invariants(normalized, tolerance)
    result.gauge = gauge
    return result


def heisenberg_commutant_dim(spec: GroupSpec, B: Bicharacter, bound: int = HEISENBERG_BOUND) -> int:
    """Dimension of the joint commutant of the shifts and the chi-modulations on functions on G.

    Generators suffice: the shifts by the cyclic generators and the
    modulations by ``chi(g, .)`` for those generators generate the whole
    Heisenberg group.
    """
    if B.spec != spec:
        raise InputError("bicharacter is defined on a different group")
    n = spec.order
    if n > bound:
        raise SizeError(f"group order {n} exceeds bound {bound}")
    gens = [int(spec.index_of_residues(np.eye(spec.rank, dtype=np.int64)[i])) for i in range(spec.rank)]
    ops = []
    for g in gens:
        shift = np.zeros((n, n), dtype=complex)
        shift[np.arange(n), spec.mul_table[:, g]] = 1.0  # (sigma f)(x) = f(xg)
        ops.append(shift)
        ops.append(np.diag(np.exp(2j * np.pi * B.table[g] / B.den)))
    if not ops:
        return 1
    eye = np.eye(n)
    # T A = A T  <=>  (A^T (x) I - I (x) A) vec(T) = 0 for column-stacked vec
    system = np.vstack([np.kron(A.T, eye) - np.kron(eye, A) for A in ops])
    sv = np.linalg.svd(system, compute_uv=False)
    rank = int(np.sum(sv > 1e-9 * max(1.0, sv[0])))
    return n * n - rank


def equivalent(spec: GroupSpec, r1: ClassificationResult, r2: ClassificationResult, bound: int = DEFAULT_BOUND) -> bool:
    """Same sign and chi tables in one Aut(G)-orbit."""
    if r1.spec != spec or r2.spec != spec:
        raise InputError("classification results live on different groups")
    if r1.sign != r2.sign:
        return False
    target = r2.chi * r1.den
    return any(np.array_equal(pullback_table(r1.chi, phi) * r2.den, target) for phi in automorphism_group(spec, bound))


@dataclass(frozen=True)
class EquivalenceClass:
    bichar: Bicharacter
    sign: Sign
    orbit_size: int

    def to_dict(self) -> dict:
        return {"M": [list(r) for r in self.bichar.M], "sign": int(self.sign), "orbit_size": self.orbit_size}


def classify_all(spec: GroupSpec, bound: int = DEFAULT_BOUND) -> list[EquivalenceClass]:
    """One representative per equivalence class: bicharacter orbits times both signs."""
    return [
        EquivalenceClass(B, sign, size)
        for B, size in orbit_classify(spec, bound)
        for sign in (Sign.PLUS, Sign.MINUS)
    ]


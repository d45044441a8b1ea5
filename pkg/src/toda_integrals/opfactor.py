"""Ordinary differential operators with differential-polynomial coefficients,
and the characteristic integrals read off a factorized product
``(d - beta_1(u)) (d - beta_2(u)) ... (d - beta_m(u))``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from .diffring import DiffPoly, DiffRing, DiffRingError, sum_polys
from .liedata import AlgebraSpec, LieDataError, weight_diagram, _spec


class DiffOpError(ValueError):
    pass


class DiffOp:
    """``sum_k coeffs[k] * d^k``; composition follows ``d f = f d + f_x``."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: DiffRing, coeffs: Mapping[int, DiffPoly] | None = None):
        clean = {}
        for k, p in (coeffs or {}).items():
            if k < 0:
                raise DiffOpError("negative operator order")
            if not isinstance(p, DiffPoly):
                p = ring.const(p)
            ring = ring.combine(p.ring)
            if p:
                clean[int(k)] = p
        self.ring = ring
        self.coeffs = clean

    @classmethod
    def d(cls, ring: DiffRing, order: int = 1) -> DiffOp:
        return cls(ring, {order: ring.one()})

    @classmethod
    def first_order(cls, ring: DiffRing, a: DiffPoly) -> DiffOp:
        """``d - a``."""
        return cls(ring, {1: ring.one(), 0: -a})

    @property
    def order(self) -> int:
        return max(self.coeffs, default=-1)

    def __getitem__(self, k: int) -> DiffPoly:
        return self.coeffs.get(k) or self.ring.zero()

    def __add__(self, other: DiffOp) -> DiffOp:
        ring = self.ring.combine(other.ring)
        out = dict(self.coeffs)
        for k, p in other.coeffs.items():
            out[k] = out[k] + p if k in out else p
        return DiffOp(ring, out)

    def __neg__(self):
        return DiffOp(self.ring, {k: -p for k, p in self.coeffs.items()})

    def __sub__(self, other: DiffOp) -> DiffOp:
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __matmul__(self, other: DiffOp) -> DiffOp:
        return compose(self, other)

    def __repr__(self):
        from .diffring import to_text
        parts = [f"({to_text(p)})*d^{k}" for k, p in sorted(self.coeffs.items(), reverse=True)]
        return "DiffOp(" + " + ".join(parts) + ")"

    def to_json(self) -> dict:
        return {"degree_coeffs": {str(k): p.to_json() for k, p in sorted(self.coeffs.items(), reverse=True)}}

    @classmethod
    def from_json(cls, data: Mapping, ring: DiffRing) -> DiffOp:
        return cls(ring, {int(k): DiffPoly.from_json(p, ring) for k, p in data["degree_coeffs"].items()})


def compose(L: DiffOp, M: DiffOp) -> DiffOp:
    """Operator product ``L o M``.

    ``d^i o b = sum_k C(i, k) b^{(k)} d^{i-k}``.
    """
    ring = L.ring.combine(M.ring)
    top = max(L.coeffs, default=0)
    derivs: dict[int, list[DiffPoly]] = {}
    for j, b in M.coeffs.items():
        ds = [b]
        for _ in range(top):
            ds.append(ds[-1].dx())
        derivs[j] = ds
    acc: dict[int, dict] = {}
    for i, a in L.coeffs.items():
        for j, ds in derivs.items():
            for k in range(i + 1):
                if not ds[k]:
                    continue
                term = a * ds[k] * comb(i, k)
                deg = i - k + j
                acc.setdefault(deg, []).append(term)
    return DiffOp(ring, {deg: sum_polys(terms, ring) for deg, terms in acc.items()})


def factorized_product(spec) -> DiffOp:
    """Left-to-right product of ``d - beta_k(u)`` along the weight chain."""
    spec = _spec(spec)
    diagram = weight_diagram(spec)
    ring = spec.ring()
    op = DiffOp.d(ring, 0)
    for beta in diagram.polys(ring):
        op = compose(op, DiffOp.first_order(ring, beta))
    return op


@dataclass(frozen=True)
class Integral:
    label: str
    poly: DiffPoly
    degree: int
    position: int | None = None   # power of d for the factorized method


@dataclass
class IntegralSet:
    """Primitive integrals plus leftover coefficients, with provenance."""

    spec: AlgebraSpec
    method: str                     # "quick" or "ds"
    integrals: list[Integral]
    residuals: list[Integral] = field(default_factory=list)
    slice: str | None = None

    def polys(self) -> list[DiffPoly]:
        return [i.poly for i in self.integrals]

    def declared_degrees(self) -> list[int]:
        return [i.degree for i in self.integrals]

    def to_json(self) -> dict:
        def enc(i: Integral):
            d = {"label": i.label, "degree": i.degree, "poly": i.poly.to_json()}
            if i.position is not None:
                d["position"] = i.position
            return d
        return {
            "spec": str(self.spec),
            "method": self.method,
            "slice": self.slice,
            "integrals": [enc(i) for i in self.integrals],
            "residuals": [enc(i) for i in self.residuals],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> IntegralSet:
        spec = AlgebraSpec.parse(data["spec"])
        ring = spec.ring()

        def dec(d):
            return Integral(d["label"], DiffPoly.from_json(d["poly"], ring), int(d["degree"]), d.get("position"))
        return cls(
            spec,
            data.get("method", "quick"),
            [dec(d) for d in data["integrals"]],
            [dec(d) for d in data.get("residuals", [])],
            data.get("slice"),
        )


def integral_positions(spec) -> tuple[list[int], list[int]]:
    """Powers of ``d`` carrying the ``I_j`` and the ``J_j`` in the expansion."""
    spec = _spec(spec)
    n = spec.rank
    if spec.family == "A":
        return [n - j for j in range(1, n + 1)], []
    if spec.family == "C":
        return [2 * n - 2 * j for j in range(1, n + 1)], [2 * n - 2 * j - 1 for j in range(1, n)]
    if spec.family == "B":
        return [2 * n - 2 * j + 1 for j in range(1, n + 1)], [2 * n - 2 * j for j in range(1, n + 1)]
    if spec.family == "G2":
        return [5, 1], [4, 3, 2, 0]
    raise LieDataError("representation branches")


def extract_integrals(L: DiffOp, spec) -> IntegralSet:
    spec = _spec(spec)
    i_pos, j_pos = integral_positions(spec)
    m = len(weight_diagram(spec).forms)
    if L.order != m or L[m] != 1:
        raise DiffOpError(f"expected a monic operator of order {m}")
    stray = set(L.coeffs) - set(i_pos) - set(j_pos) - {m}
    if stray:
        raise DiffOpError(f"unexpected coefficients at d^{sorted(stray)}")
    integrals = [Integral(f"I_{j}", L[p], m - p, p) for j, p in enumerate(i_pos, start=1)]
    residuals = [Integral(f"J_{j}", L[p], m - p, p) for j, p in enumerate(j_pos, start=1)]
    return IntegralSet(spec, "quick", integrals, residuals)


def quick_integrals(spec) -> IntegralSet:
    spec = _spec(spec)
    return extract_integrals(factorized_product(spec), spec)


def g2_j_relations(I: Sequence[DiffPoly]) -> list[DiffPoly]:
    """The J's predicted from ``I_1, I_2`` for g2."""
    I1, I2 = I
    h = Fraction(1, 2)
    d1, d2, d3 = I1.dx(), I1.dx_n(2), I1.dx_n(3)
    return [
        d1 * Fraction(5, 2),
        d2 * 3 + I1 * I1 * Fraction(1, 4),
        d3 * 2 + I1 * d1 * Fraction(3, 4),
        I2.dx() * h - I1.dx_n(5) * Fraction(1, 4) - d1 * d2 * Fraction(3, 8) - I1 * d3 * Fraction(1, 8),
    ]


def check_j_relations_g2(I, J: Sequence[DiffPoly], report: list | None = None) -> bool:
    """Compare ``J`` against the g2 relations; mismatches go to ``report``."""
    polys = I.polys() if isinstance(I, IntegralSet) else list(I)
    if len(polys) != 2 or len(J) != 4:
        raise DiffOpError("g2 has two integrals and four residual coefficients")
    ok = True
    for j, (got, want) in enumerate(zip(J, g2_j_relations(polys)), start=1):
        diff = got - want
        if diff:
            ok = False
            if report is not None:
                report.append((f"J_{j}", diff))
    return ok


__all__ = [
    "DiffOp", "DiffOpError", "compose", "factorized_product", "Integral",
    "IntegralSet", "extract_integrals", "quick_integrals", "integral_positions",
    "check_j_relations_g2", "g2_j_relations", "DiffRingError",
]

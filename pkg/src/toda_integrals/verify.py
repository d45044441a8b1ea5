"""Independent checks on computed integrals and on the zero-curvature data."""
from __future__ import annotations

from collections import Counter

from .diffring import DiffPoly, DiffRingError, to_text
from .liedata import _spec, connection_parts
from .opfactor import IntegralSet
from .polymatrix import PolyMatrix


def _in_spec_ring(I: DiffPoly, spec) -> DiffPoly:
    ring = spec.ring()
    if I.ring.rank != ring.rank:
        raise DiffRingError("rank mismatch")
    return DiffPoly(ring, I.terms)


def characteristic_report(I: DiffPoly, spec, limit: int = 5) -> dict:
    """``{"ok", "residual_terms", "first_failing_monomials"}`` for ``d_y I = 0``."""
    spec = _spec(spec)
    if I.has_exp():
        raise DiffRingError("characteristic integrals are exponential-free")
    r = _in_spec_ring(I, spec).dy()
    return {"ok": r.is_zero(), "residual_terms": len(r), "first_failing_monomials": first_monomials(r, limit)}


def first_monomials(p: DiffPoly, limit: int = 5) -> list[str]:
    return [to_text(DiffPoly(p.ring, {m: c})) for m, c in p.sorted_terms()[:limit]]


def is_characteristic_integral(I: DiffPoly, spec) -> bool:
    return characteristic_report(I, spec)["ok"]


def zero_curvature_residual(spec, Y: PolyMatrix | None = None) -> PolyMatrix:
    """``-Y_x + [epsilon + u, Y] - d_y(u)``; zero iff the Toda system is encoded."""
    spec = _spec(spec)
    u, eps, Y0 = connection_parts(spec)
    Y = Y0 if Y is None else Y
    lax = PolyMatrix.constant(u.ring, eps) + u
    return -Y.dx() + lax.bracket(Y) - u.dy()


def degree_audit(S: IntegralSet, spec=None) -> bool:
    spec = _spec(spec) if spec is not None else S.spec
    degrees = []
    for item in S.integrals:
        p = item.poly
        if p.is_zero() or not p.is_homogeneous():
            return False
        (d,) = p.degrees()
        if d != item.degree:
            return False
        degrees.append(d)
    return Counter(degrees) == Counter(spec.degrees())


def closure_check(a: DiffPoly, b: DiffPoly, spec) -> bool:
    """Sums, products and x-derivatives of integrals stay integrals."""
    spec = _spec(spec)
    a, b = _in_spec_ring(a, spec), _in_spec_ring(b, spec)
    return all(is_characteristic_integral(p, spec) for p in (a + b, a * b, a.dx(), b.dx()))

"""Drinfeld-Sokolov gauge: bring ``-d_x + epsilon + u`` to ``-d_x + epsilon + sum_j I_j s_j``.

The gauge element is built one grade at a time as ``g = exp(z_1) ... exp(z_p)``
with ``z_k`` homogeneous of height ``k``.  Conjugating by ``exp(z_k)`` changes
the grade ``k-1`` part of the connection by ``[epsilon, z_k]`` and leaves lower
grades alone, so each step is a constant-coefficient linear solve against the
splitting ``g_{k-1} = s_{k-1} ⊕ [epsilon, g_k]``.

All matrices here are in the Borel-ordered basis of the representation
(see :meth:`toda_integrals.liedata.MatrixRep.in_borel_order`).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .diffring import DiffPoly, DiffRingError, sum_polys
from .liedata import AlgebraSpec, LieDataError, SliceBasis, _spec, algebra, connection_parts, kostant_slice
from .linalg import Matrix
from .opfactor import Integral, IntegralSet
from .polymatrix import PolyMatrix


class GaugeError(RuntimeError):
    pass


@dataclass
class GaugeStep:
    grade: int                 # height of z
    z: PolyMatrix
    slice_part: dict[int, DiffPoly]   # slice index -> coefficient fixed at grade-1


@dataclass
class GaugeResult:
    spec: AlgebraSpec
    g: PolyMatrix
    integrals: IntegralSet
    slice: SliceBasis
    transcript: list[GaugeStep] = field(default_factory=list)
    connection: PolyMatrix | None = None   # final q = sum_j I_j s_j

    def to_json(self) -> dict:
        return {
            "g": self.g.to_json(),
            "integrals": self.integrals.to_json(),
            "transcript": [
                {"grade": s.grade, "z": s.z.to_json()} for s in self.transcript
            ],
        }


def gauge_by_exp(connection: PolyMatrix, z: PolyMatrix, epsilon: Matrix) -> PolyMatrix:
    """New ``q'`` with ``-d + eps + q' = exp(-z) (-d + eps + q) exp(z)``.

    ``connection`` is ``q`` (the part without ``epsilon``).
    """
    if not z.is_nilpotent_upper():
        raise GaugeError("z must be strictly upper triangular (nilpotent)")
    ring = connection.ring.combine(z.ring)
    eps = PolyMatrix.constant(ring, epsilon)
    ez = z.exp_nilpotent()
    emz = (-z).exp_nilpotent()
    return emz @ (eps + connection) @ ez - eps - emz @ ez.dx()


def _element(ring, basis_matrix: Matrix, coeff: DiffPoly) -> PolyMatrix:
    return PolyMatrix.constant(ring, basis_matrix).scale(coeff)


def _combine(ring, dim: int, mats: list[Matrix], coeffs: list[DiffPoly]) -> PolyMatrix:
    """``sum_a coeffs[a] * mats[a]`` computed entrywise."""
    cells: dict[tuple[int, int], list[DiffPoly]] = {}
    for m, c in zip(mats, coeffs):
        if not c:
            continue
        for a, row in enumerate(m):
            for b, v in enumerate(row):
                if v:
                    cells.setdefault((a, b), []).append(c * v)
    return PolyMatrix(ring, dim, {k: sum_polys(v, ring) for k, v in cells.items()})


def reduce_to_slice(spec, slice: SliceBasis | str = "canonical") -> GaugeResult:
    spec = _spec(spec)
    alg = algebra(spec)
    rep = alg.borel_rep
    ring = alg.ring
    basis = alg.graded
    if isinstance(slice, str):
        slice = kostant_slice(spec, slice)
    u, eps, _ = connection_parts(spec, rep)
    q = u
    dim = rep.dim
    transcript = []
    for k in range(1, basis.top + 1):
        w = slice.witnesses[k - 1]
        coords = _solve(w, q, ring)
        n_s = len(w.slice_indices)
        sigma, alpha = coords[:n_s], coords[n_s:]
        # grade k-1 must equal sigma.s + [eps, sum alpha_b X_b] exactly
        rebuilt = _combine(ring, dim, w.columns, coords)
        current = q.restrict(basis.positions(k - 1))
        if rebuilt != current:
            raise GaugeError(f"grade {k - 1}: component is not decomposable along slice ⊕ [epsilon, g]")
        z = _combine(ring, dim, [basis.elements[b] for b in w.source_indices], [-a for a in alpha])
        q = gauge_by_exp(q, z, eps)
        residual = q.restrict(basis.positions(k - 1)) - _combine(
            ring, dim, [w.columns[i] for i in range(n_s)], sigma)
        if not residual.is_zero():
            raise GaugeError(f"grade {k - 1}: off-slice residual survived the gauge step")
        transcript.append(GaugeStep(k, z, dict(zip(w.slice_indices, sigma))))
    # top grade lies entirely in the slice
    w = slice.witnesses[basis.top]
    coords = _solve(w, q, ring)
    if _combine(ring, dim, w.columns, coords) != q.restrict(basis.positions(basis.top)):
        raise GaugeError(f"grade {basis.top}: component outside the slice")
    coeff = {}
    for step in transcript:
        coeff.update(step.slice_part)
    coeff.update(zip(w.slice_indices, coords[: len(w.slice_indices)]))
    final = _combine(ring, dim, slice.elements, [coeff[j] for j in range(len(slice))])
    if final != q:
        raise GaugeError("gauged connection is not in the slice")
    g = PolyMatrix.identity(ring, dim)
    for step in transcript:
        g = g @ step.z.exp_nilpotent()
    order = sorted(range(len(slice)), key=lambda j: slice.heights[j])
    integrals = [
        Integral(f"I_{n}", coeff[j], slice.heights[j] + 1, j)
        for n, j in enumerate(order, start=1)
    ]
    iset = IntegralSet(spec, "ds", integrals, [], slice.style)
    return GaugeResult(spec, g, iset, slice, transcript, q)


def _solve(w, q: PolyMatrix, ring) -> list[DiffPoly]:
    rhs = [q[pos] for pos in w.positions]
    out = []
    for row in w.inverse:
        out.append(sum_polys((p * c for c, p in zip(row, rhs) if c and p), ring))
    return out


def leading_terms(I: DiffPoly, count: int | None = None) -> DiffPoly:
    """Linear-in-jets part of ``I``; with ``count``, only the highest-order terms."""
    lin = I.filter(lambda m: m.algebraic_degree == 1 and not any(m.exp))
    if count is None:
        return lin
    keep = sorted(lin.terms, key=lambda m: (-m.degree, m.jets))[:count]
    return lin.filter(lambda m: m in keep)


def ds_integrals(spec, slice: str = "canonical") -> IntegralSet:
    return reduce_to_slice(spec, slice).integrals


def replay(spec, transcript: list[GaugeStep]) -> PolyMatrix:
    """Apply the recorded gauge steps to ``u`` again."""
    spec = _spec(spec)
    rep = algebra(spec).borel_rep
    u, eps, _ = connection_parts(spec, rep)
    q = u
    for step in transcript:
        q = gauge_by_exp(q, step.z, eps)
    return q


__all__ = [
    "GaugeError", "GaugeResult", "GaugeStep", "gauge_by_exp", "reduce_to_slice",
    "leading_terms", "ds_integrals", "replay", "LieDataError", "DiffRingError", "Fraction",
]

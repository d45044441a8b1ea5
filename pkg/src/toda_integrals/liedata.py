"""Representation data for the simple Lie algebras A_n, B_n, C_n, D_n and g2.

Conventions
-----------
* A_n acts on C^{n+1} with ``e_{-alpha_i} = E_{i+1,i}``.
* B_n, C_n and g2 use the Fulton-Harris ordering of the basis
  (``L_1..L_n, -L_1..-L_n`` and a final zero weight for the odd orthogonal
  case), so the Cartan elements are the familiar diagonal matrices.  In this
  ordering the positive root vectors are not upper triangular; every
  :class:`MatrixRep` therefore carries ``borel_order``, the permutation of the
  basis along the weight chain, and :meth:`MatrixRep.in_borel_order` gives the
  reordered representation used by the gauge reduction.
* D_n acts on C^{2n} in the order ``L_1..L_n, -L_n..-L_1`` and preserves the
  anti-diagonal form, which is already a Borel order.
* g2 sits inside so(7) = B_3 with ``alpha_1 = L_1 - L_2`` and
  ``alpha_2 = L_2 - L_3`` restricted to its Cartan subalgebra.

Root vectors are normalised so that ``epsilon = sum_i e_{-alpha_i}`` has
entries in ``{0, 1, -1}``; the factor 2 needed for ``[e, f] = H`` on short
roots sits on the positive root vector.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from . import linalg as la
from .diffring import DiffPoly, DiffRing
from .linalg import Matrix
from .polymatrix import PolyMatrix


class LieDataError(ValueError):
    pass


FAMILIES = ("A", "B", "C", "D", "G2")


@dataclass(frozen=True)
class AlgebraSpec:
    family: str
    rank: int

    def __post_init__(self):
        fam, n = self.family, self.rank
        if fam not in FAMILIES:
            raise LieDataError(f"unknown family {fam!r}")
        ok = {
            "A": n >= 1,
            "B": n >= 2,
            "C": n >= 2,
            "D": n >= 3,
            "G2": n == 2,
        }[fam]
        if not ok:
            raise LieDataError(f"invalid rank {n} for family {fam}")

    @classmethod
    def parse(cls, text: str) -> AlgebraSpec:
        t = text.strip().upper()
        if t == "G2":
            return cls("G2", 2)
        m = re.fullmatch(r"([ABCD])\s*_?\s*(\d+)", t)
        if not m:
            raise LieDataError(f"cannot parse algebra {text!r}")
        return cls(m.group(1), int(m.group(2)))

    def __str__(self):
        return "G2" if self.family == "G2" else f"{self.family}{self.rank}"

    @property
    def branching(self) -> bool:
        return self.family == "D"

    @property
    def names(self) -> tuple[str, ...] | None:
        if self.family == "G2":
            return ("u", "v")
        if self.family == "D" and self.rank == 4:
            return ("u", "v", "w", "z")
        return None

    def degrees(self) -> list[int]:
        n = self.rank
        if self.family == "A":
            return list(range(2, n + 2))
        if self.family in ("B", "C"):
            return list(range(2, 2 * n + 1, 2))
        if self.family == "D":
            return sorted(list(range(2, 2 * n - 1, 2)) + [n])
        return [2, 6]

    def ring(self) -> DiffRing:
        return DiffRing(self.rank, tuple(map(tuple, cartan_matrix(self))), self.names)


def _spec(spec) -> AlgebraSpec:
    return AlgebraSpec.parse(spec) if isinstance(spec, str) else spec


def cartan_matrix(spec) -> list[list[int]]:
    spec = _spec(spec)
    n = spec.rank
    if spec.family == "G2":
        return [[2, -1], [-3, 2]]
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
    chain = n - 1 if spec.family == "D" else n
    for i in range(chain - 1):
        a[i][i + 1] = a[i + 1][i] = -1
    if spec.family == "B":
        a[n - 2][n - 1] = -2
    elif spec.family == "C":
        a[n - 1][n - 2] = -2
    elif spec.family == "D":
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
    return a


@dataclass(frozen=True)
class MatrixRep:
    dim: int
    H: tuple
    E_plus: tuple
    E_minus: tuple
    form: Matrix | None = None
    borel_order: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.borel_order:
            object.__setattr__(self, "borel_order", tuple(range(self.dim)))

    @property
    def epsilon(self) -> Matrix:
        out = la.zeros(self.dim)
        for f in self.E_minus:
            out = la.add(out, f)
        return out

    def in_borel_order(self) -> MatrixRep:
        p = self.borel_order
        if p == tuple(range(self.dim)):
            return self

        def perm(x):
            return [[x[p[a]][p[b]] for b in range(self.dim)] for a in range(self.dim)]

        return MatrixRep(
            self.dim,
            tuple(perm(h) for h in self.H),
            tuple(perm(e) for e in self.E_plus),
            tuple(perm(f) for f in self.E_minus),
            perm(self.form) if self.form is not None else None,
        )

    def basis_matrices(self) -> list[Matrix]:
        return [*self.H, *self.E_plus, *self.E_minus]


def _rep(dim, minus, plus, form=None, borel=None) -> MatrixRep:
    H = tuple(la.bracket(e, f) for e, f in zip(plus, minus))
    return MatrixRep(dim, H, tuple(plus), tuple(minus), form, tuple(borel or ()))


def first_fundamental_rep(spec) -> MatrixRep:
    spec = _spec(spec)
    n = spec.rank
    E = la.unit
    if spec.family == "A":
        m = n + 1
        minus = [E(m, i + 1, i) for i in range(1, n + 1)]
        return _rep(m, minus, [la.transpose(f) for f in minus])
    if spec.family == "C":
        m = 2 * n
        minus = [la.sub(E(m, i + 1, i), E(m, n + i, n + i + 1)) for i in range(1, n)]
        minus.append(E(m, 2 * n, n))
        plus = [la.transpose(f) for f in minus]
        form = la.zeros(m)
        for i in range(n):
            form[i][n + i] = Fraction(1)
            form[n + i][i] = Fraction(-1)
        borel = list(range(n)) + list(range(2 * n - 1, n - 1, -1))
        return _rep(m, minus, plus, form, borel)
    if spec.family == "B":
        m = 2 * n + 1
        minus = [la.sub(E(m, i + 1, i), E(m, n + i, n + i + 1)) for i in range(1, n)]
        minus.append(la.sub(E(m, m, n), E(m, 2 * n, m)))
        plus = [la.transpose(f) for f in minus[:-1]]
        plus.append(la.sub(E(m, n, m, 2), E(m, m, 2 * n, 2)))
        form = _fh_orthogonal_form(n)
        borel = list(range(n)) + [2 * n] + list(range(2 * n - 1, n - 1, -1))
        return _rep(m, minus, plus, form, borel)
    if spec.family == "D":
        m = 2 * n
        minus = [la.sub(E(m, i + 1, i), E(m, m + 1 - i, m - i)) for i in range(1, n)]
        minus.append(la.sub(E(m, n + 1, n - 1), E(m, n + 2, n)))
        plus = [la.transpose(f) for f in minus]
        form = la.zeros(m)
        for i in range(m):
            form[i][m - 1 - i] = Fraction(1)
        return _rep(m, minus, plus, form)
    # g2 inside so(7): alpha_1 = (L1 - L2) + L3, alpha_2 = L2 - L3 as B3 root vectors
    m = 7
    f1 = la.add(la.sub(E(m, 2, 1), E(m, 4, 5)), la.sub(E(m, 7, 3), E(m, 6, 7)))
    e1 = la.add(la.sub(E(m, 1, 2), E(m, 5, 4)), la.sub(E(m, 3, 7, 2), E(m, 7, 6, 2)))
    f2 = la.sub(E(m, 3, 2), E(m, 5, 6))
    e2 = la.sub(E(m, 2, 3), E(m, 6, 5))
    borel = [0, 1, 2, 6, 5, 4, 3]
    return _rep(m, [f1, f2], [e1, e2], _fh_orthogonal_form(3), borel)


def _fh_orthogonal_form(n: int) -> Matrix:
    m = 2 * n + 1
    form = la.zeros(m)
    for i in range(n):
        form[i][n + i] = form[n + i][i] = Fraction(1)
    form[m - 1][m - 1] = Fraction(1)
    return form


# -- weight diagrams -------------------------------------------------------

@dataclass(frozen=True)
class WeightDiagram:
    """Weights ``beta_1..beta_m`` as integer linear forms in ``u^j_x``.

    ``forms[k][j]`` is the coefficient of ``u^{j+1}_x`` in ``beta_{k+1}(u)``;
    ``edges[k]`` is the 1-based simple root ``i`` with
    ``beta_{k+2} = beta_{k+1} - alpha_i``.
    """

    forms: tuple[tuple[int, ...], ...]
    edges: tuple[int, ...]

    def polys(self, ring: DiffRing) -> list[DiffPoly]:
        return [ring.linear_form(f) for f in self.forms]


def weight_diagram(spec) -> WeightDiagram:
    spec = _spec(spec)
    if spec.branching:
        raise LieDataError("representation branches")
    rep = first_fundamental_rep(spec).in_borel_order()
    m = rep.dim
    forms = []
    for k in range(m):
        c = [rep.H[j][k][k] for j in range(spec.rank)]
        if any(x.denominator != 1 for x in c):
            raise LieDataError("non-integral weight")
        forms.append(tuple(int(x) for x in c))
    edges = []
    for k in range(m - 1):
        hits = [i + 1 for i, f in enumerate(rep.E_minus) if f[k + 1][k] != 0]
        others = [
            (a, i) for i, f in enumerate(rep.E_minus) for a in range(m)
            if a != k + 1 and f[a][k] != 0
        ]
        if len(hits) != 1 or others:
            raise LieDataError("representation branches")
        edges.append(hits[0])
    if any(e[a][0] != 0 for e in rep.E_plus for a in range(m)):
        raise LieDataError("first basis vector is not a highest weight vector")
    return WeightDiagram(tuple(forms), tuple(edges))


# -- connection ------------------------------------------------------------

def connection_parts(spec, rep: MatrixRep | None = None) -> tuple[PolyMatrix, Matrix, PolyMatrix]:
    """``(u, epsilon, Y)`` with ``u = sum u^i_x H_i`` and ``Y = sum e^{rho_i} e_{alpha_i}``."""
    spec = _spec(spec)
    rep = rep or first_fundamental_rep(spec)
    ring = spec.ring()
    u = PolyMatrix(ring, rep.dim)
    for i, h in enumerate(rep.H, start=1):
        u = u + PolyMatrix.constant(ring, h).scale(ring.jet(i, 1))
    Y = PolyMatrix(ring, rep.dim)
    for i, e in enumerate(rep.E_plus, start=1):
        Y = Y + PolyMatrix.constant(ring, e).scale(ring.exp_rho(i))
    return u, rep.epsilon, Y


# -- principal gradation ---------------------------------------------------

@dataclass
class GradedBasis:
    """Basis of the algebra, homogeneous for the height grading.

    ``entry_grade`` records the grade of every matrix position touched by the
    algebra; for the representations here each position has a single grade.
    """

    elements: list[Matrix]
    grades: list[int]
    entry_grade: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.elements)

    @property
    def top(self) -> int:
        return max(self.grades)

    def indices(self, grade: int) -> list[int]:
        return [a for a, g in enumerate(self.grades) if g == grade]

    def of_grade(self, grade: int) -> list[Matrix]:
        return [self.elements[a] for a in self.indices(grade)]

    def positions(self, grade: int) -> list[tuple[int, int]]:
        return sorted(k for k, g in self.entry_grade.items() if g == grade)


def _build_graded_basis(rep: MatrixRep) -> GradedBasis:
    width = rep.dim * rep.dim
    layers: dict[int, list[Matrix]] = {0: [], 1: [], -1: []}
    b0 = la.IncrementalBasis(width)
    for h in rep.H:
        if b0.add(la.flatten(h)):
            layers[0].append(h)
    for sign, gens in ((1, rep.E_plus), (-1, rep.E_minus)):
        first = la.IncrementalBasis(width)
        for e in gens:
            if first.add(la.flatten(e)):
                layers[sign].append(e)
        k = 1
        while layers[sign * k]:
            nxt = []
            basis = la.IncrementalBasis(width)
            for e in gens:
                for x in layers[sign * k]:
                    y = la.bracket(e, x)
                    if basis.add(la.flatten(y)):
                        nxt.append(y)
            k += 1
            layers[sign * k] = nxt
    elements, grades = [], []
    for g in sorted(layers):
        for x in layers[g]:
            elements.append(x)
            grades.append(g)
    if la.rank([la.flatten(x) for x in elements]) != len(elements):
        raise LieDataError("graded basis is not linearly independent")
    entry_grade: dict[tuple[int, int], int] = {}
    for x, g in zip(elements, grades):
        for a, row in enumerate(x):
            for b, v in enumerate(row):
                if v != 0:
                    if entry_grade.setdefault((a, b), g) != g:
                        raise LieDataError(f"matrix position {(a, b)} is not homogeneous")
    return GradedBasis(elements, grades, entry_grade)


def graded_basis(spec_or_rep) -> GradedBasis:
    if isinstance(spec_or_rep, MatrixRep):
        return _build_graded_basis(spec_or_rep)
    return algebra(_spec(spec_or_rep)).graded


# -- Kostant slice ---------------------------------------------------------

@dataclass
class GradeWitness:
    """Exact splitting ``g_k = (slice ∩ g_k) ⊕ [epsilon, g_{k+1}]``.

    ``columns`` are the slice elements of grade ``k`` followed by
    ``[epsilon, X_b]`` for the grade ``k+1`` basis; ``positions`` are matrix
    entries on which they are independent and ``inverse`` maps those entries
    to coordinates along ``columns``.
    """

    grade: int
    slice_indices: list[int]
    source_indices: list[int]
    columns: list[Matrix]
    positions: list[tuple[int, int]]
    inverse: Matrix


@dataclass
class SliceBasis:
    elements: list[Matrix]
    heights: list[int]
    style: str
    witnesses: dict[int, GradeWitness] = field(default_factory=dict)

    def __len__(self):
        return len(self.elements)


# positions (1-based) of the reference D4 slice: I_j s_j with s_j = E_ab - E_cd
_PAPER_D4_SLICE = (
    ((3, 5), (4, 6)),
    ((1, 5), (4, 8)),
    ((2, 6), (3, 7)),
    ((1, 7), (2, 8)),
)


def kostant_slice(spec, style: str = "canonical") -> SliceBasis:
    """Graded complement of ``[epsilon, g]`` in the Borel-ordered representation.

    ``canonical`` walks each grade's basis in construction order and keeps
    every element not already spanned by ``[epsilon, g_{k+1}]`` and the
    elements kept before it.  ``paper_d4`` returns the D4 slice with entries
    at the positions of the reference ``epsilon + I`` matrix.
    """
    spec = _spec(spec)
    alg = algebra(spec)
    basis = alg.graded
    eps = alg.borel_rep.epsilon
    width = alg.borel_rep.dim ** 2
    if style == "paper_d4":
        if (spec.family, spec.rank) != ("D", 4):
            raise LieDataError("paper_d4 slice is only defined for D4")
        elements = [la.sub(la.unit(8, *p), la.unit(8, *q)) for p, q in _PAPER_D4_SLICE]
        heights = [_grade_of(basis, s) for s in elements]
    elif style == "canonical":
        elements, heights = [], []
        for k in range(1, basis.top + 1):
            span = la.IncrementalBasis(width)
            for x in basis.of_grade(k + 1):
                span.add(la.flatten(la.bracket(eps, x)))
            for x in basis.of_grade(k):
                if span.add(la.flatten(x)):
                    elements.append(x)
                    heights.append(k)
    else:
        raise LieDataError(f"unknown slice style {style!r}")
    sl = SliceBasis(elements, heights, style)
    sl.witnesses = _witnesses(sl, basis, eps)
    if len(sl) != spec.rank:
        raise LieDataError(f"slice has dimension {len(sl)}, expected rank {spec.rank}")
    return sl


def _grade_of(basis: GradedBasis, x: Matrix) -> int:
    grades = {basis.entry_grade.get((a, b)) for a, row in enumerate(x) for b, v in enumerate(row) if v != 0}
    if len(grades) != 1 or None in grades:
        raise LieDataError("slice element is not homogeneous")
    return grades.pop()


def _witnesses(sl: SliceBasis, basis: GradedBasis, eps: Matrix) -> dict[int, GradeWitness]:
    out = {}
    for k in range(0, basis.top + 1):
        g_k = basis.indices(k)
        s_idx = [j for j, h in enumerate(sl.heights) if h == k]
        src = basis.indices(k + 1)
        cols = [sl.elements[j] for j in s_idx] + [la.bracket(eps, basis.elements[b]) for b in src]
        if len(cols) != len(g_k):
            raise LieDataError(f"grade {k}: slice part plus image has size {len(cols)}, expected {len(g_k)}")
        positions = basis.positions(k)
        vecs = [[c[a][b] for a, b in positions] for c in cols]
        try:
            rows, inv = la.independent_columns(vecs)
        except la.SingularMatrixError:
            raise LieDataError(f"grade {k}: slice is not a complement of [epsilon, g]") from None
        # the columns must lie in g_k itself
        span = la.IncrementalBasis(len(positions))
        for x in basis.of_grade(k):
            span.add([x[a][b] for a, b in positions])
        if not all(span.contains(v) for v in vecs):
            raise LieDataError(f"grade {k}: slice element outside the algebra")
        out[k] = GradeWitness(k, s_idx, src, cols, [positions[r] for r in rows], inv)
    return out


def ad_epsilon_kernel(spec) -> list[list[Fraction]]:
    """Kernel of ``ad_epsilon`` on the Cartan plus positive part, in basis coordinates."""
    alg = algebra(_spec(spec))
    basis = alg.graded
    eps = alg.borel_rep.epsilon
    idx = [a for a, g in enumerate(basis.grades) if g >= 0]
    images = [la.flatten(la.bracket(eps, basis.elements[a])) for a in idx]
    # columns are images; kernel of the (entries x idx) matrix
    return la.nullspace(la.transpose(images))


# -- bundle ----------------------------------------------------------------

class Algebra:
    """Cached data for one spec; every gauge computation uses ``borel_rep``."""

    def __init__(self, spec: AlgebraSpec):
        self.spec = spec

    @cached_property
    def cartan(self) -> list[list[int]]:
        return cartan_matrix(self.spec)

    @cached_property
    def ring(self) -> DiffRing:
        return self.spec.ring()

    @cached_property
    def rep(self) -> MatrixRep:
        return first_fundamental_rep(self.spec)

    @cached_property
    def borel_rep(self) -> MatrixRep:
        return self.rep.in_borel_order()

    @cached_property
    def graded(self) -> GradedBasis:
        return _build_graded_basis(self.borel_rep)

    def slice(self, style: str = "canonical") -> SliceBasis:
        return kostant_slice(self.spec, style)


@lru_cache(maxsize=None)
def algebra(spec: AlgebraSpec) -> Algebra:
    return Algebra(spec)


def matrix_to_json(mat: Sequence[Sequence]) -> list[list[str]]:
    return [[str(Fraction(x)) for x in row] for row in mat]


def matrix_from_json(data) -> Matrix:
    return [[Fraction(x) for x in row] for row in data]

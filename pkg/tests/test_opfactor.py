from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import golden_poly
from toda_integrals.diffring import DiffPoly, DiffRing, Monomial, to_latex
from toda_integrals.liedata import AlgebraSpec, LieDataError, weight_diagram
from toda_integrals.opfactor import (
    DiffOp, DiffOpError, IntegralSet, check_j_relations_g2, compose, extract_integrals,
    factorized_product, g2_j_relations, integral_positions, quick_integrals,
)

R1 = DiffRing(1, ((2,),))


def op(ring, *coeffs):
    """``op(r, c0, c1, ...)`` is ``c0 + c1 d + ...``."""
    return DiffOp(ring, dict(enumerate(coeffs)))


# -- composition -----------------------------------------------------------

def test_compose_examples():
    u1 = R1.jet(1)
    d = DiffOp.d(R1)
    assert compose(d, op(R1, u1)) == op(R1, R1.jet(1, 2), u1)
    # (d - u_x)(d + u_x) = d^2 + u_xx - u_x^2
    L = DiffOp.first_order(R1, u1) @ DiffOp.first_order(R1, -u1)
    assert L == op(R1, R1.jet(1, 2) - u1 ** 2, 0, 1)


def test_compose_noncommutative():
    u1 = R1.jet(1)
    d = DiffOp.d(R1)
    a = op(R1, u1)
    assert d @ a != a @ d
    assert d @ a - a @ d == op(R1, R1.jet(1, 2))


def test_operator_identity_and_order():
    I = DiffOp.d(R1, 0)
    L = op(R1, R1.jet(1), 3, R1.jet(1, 2))
    assert I @ L == L and L @ I == L
    assert L.order == 2
    assert DiffOp(R1).order == -1
    with pytest.raises(DiffOpError):
        DiffOp(R1, {-1: R1.one()})


def test_diffop_json_roundtrip():
    L = op(R1, R1.jet(1, 2), Fraction(1, 3), R1.jet(1) ** 2)
    data = L.to_json()
    assert list(data["degree_coeffs"]) == ["2", "1", "0"]
    assert DiffOp.from_json(data, R1) == L


RB = DiffRing(2, ((2, -1), (-1, 2)))


@st.composite
def small_ops(draw):
    coeffs = {}
    for k in range(draw(st.integers(0, 2)) + 1):
        p = RB.zero()
        for _ in range(draw(st.integers(0, 2))):
            c = draw(st.integers(-3, 3))
            p = p + RB.jet(draw(st.integers(1, 2)), draw(st.integers(1, 2))) * c
        if draw(st.booleans()):
            p = p + draw(st.integers(-2, 2))
        coeffs[k] = p
    return DiffOp(RB, coeffs)


@settings(max_examples=40, deadline=None)
@given(small_ops(), small_ops(), small_ops())
def test_compose_associative(a, b, c):
    assert (a @ b) @ c == a @ (b @ c)


@settings(max_examples=40, deadline=None)
@given(small_ops(), small_ops(), small_ops())
def test_compose_distributes(a, b, c):
    assert a @ (b + c) == a @ b + a @ c


# -- independent oracle: act on a test function ----------------------------

def apply_chain(spec):
    """Apply the factor chain right-to-left to a spare field ``psi``.

    The result is expanded in ``psi, psi', ...``; it only uses ``dx`` and
    multiplication, never operator composition.
    """
    spec = AlgebraSpec.parse(spec)
    n = spec.rank
    A = spec.ring().cartan
    cartan = tuple(tuple(r) + (0,) for r in A) + (tuple([0] * n) + (2,),)
    ring = DiffRing(n + 1, cartan)
    betas = [ring.linear_form(tuple(f) + (0,)) for f in weight_diagram(spec).forms]
    f = ring.jet(n + 1, 1)     # psi; psi^{(k)} is the (k+1)-th jet
    for beta in reversed(betas):
        f = f.dx() - beta * f
    coeffs = {}
    for m, c in f.terms.items():
        psi = [(i, k, p) for i, k, p in m.jets if i == n + 1]
        assert len(psi) == 1 and psi[0][2] == 1
        rest = DiffPoly(spec.ring(), {Monomial(tuple(j for j in m.jets if j[0] != n + 1), m.exp[:n]): c})
        k = psi[0][1] - 1
        coeffs[k] = coeffs.get(k, spec.ring().zero()) + rest
    return DiffOp(spec.ring(), coeffs)


@pytest.mark.parametrize("name", ["A1", "A2", "A3", "C2", "B2", "G2"])
def test_factorized_product_matches_action_oracle(name):
    assert factorized_product(name) == apply_chain(name)


def test_a2_first_integral():
    r = AlgebraSpec.parse("A2").ring()
    S = quick_integrals("A2")
    u, v = r.jet(1), r.jet(2)
    # hand expansion of (d - u_x)(d + u_x - v_x)(d + v_x)
    assert S.integrals[0].poly == r.jet(1, 2) + r.jet(2, 2) - u ** 2 + u * v - v ** 2
    assert S.declared_degrees() == [2, 3]


def test_liouville():
    S = quick_integrals("A1")
    r = AlgebraSpec.parse("A1").ring()
    assert S.polys() == [r.jet(1, 2) - r.jet(1) ** 2]


def test_positions():
    assert integral_positions("A3") == ([2, 1, 0], [])
    assert integral_positions("C2") == ([2, 0], [1])
    assert integral_positions("B2") == ([3, 1], [2, 0])
    assert integral_positions("G2") == ([5, 1], [4, 3, 2, 0])
    with pytest.raises(LieDataError):
        integral_positions("D4")


def test_extract_rejects_bad_operators():
    ring = AlgebraSpec.parse("A1").ring()
    with pytest.raises(DiffOpError):
        extract_integrals(op(ring, 0, 1), "A1")
    with pytest.raises(DiffOpError):
        extract_integrals(op(ring, 0, 0, 2), "A1")
    with pytest.raises(DiffOpError):
        extract_integrals(op(ring, 0, ring.jet(1), 1), "A1")


# -- g2 ----------------------------------------------------------------------

@pytest.fixture(scope="module")
def g2():
    return quick_integrals("G2")


def test_g2_first_integral_matches_reference(g2):
    assert to_latex(g2.integrals[0].poly) == r"6\,u_2+2\,v_2-6\,{u_1}^2+6\,u_1v_1-2\,{v_1}^2"


def test_g2_second_integral_matches_reference(g2):
    want = golden_poly("g2_I2.tex", "G2")
    assert len(want) == 62
    assert g2.integrals[1].poly == want


def test_g2_j_relations(g2):
    J = [j.poly for j in g2.residuals]
    assert check_j_relations_g2(g2, J)
    report = []
    bad = list(J)
    bad[2] = bad[2] + g2.integrals[0].poly
    assert not check_j_relations_g2(g2, bad, report)
    assert [lab for lab, _ in report] == ["J_3"]
    assert not check_j_relations_g2(g2, [DiffPoly(J[0].ring, {})] * 4)
    with pytest.raises(DiffOpError):
        check_j_relations_g2(g2, J[:3])


def test_g2_relations_formula_shape(g2):
    I1 = g2.integrals[0].poly
    J = g2_j_relations(g2.polys())
    assert J[0] == I1.dx() * Fraction(5, 2)


def test_integral_set_json_roundtrip(g2):
    data = g2.to_json()
    back = IntegralSet.from_json(data)
    assert back.polys() == g2.polys()
    assert [j.poly for j in back.residuals] == [j.poly for j in g2.residuals]
    assert back.integrals[1].position == 1
    assert data["integrals"][0]["label"] == "I_1"

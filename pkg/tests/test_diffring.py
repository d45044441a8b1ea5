from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toda_integrals.diffring import (
    DiffPoly, DiffRing, DiffRingError, Monomial, degree_decompose, parse_poly, to_latex, to_text,
)

A2 = DiffRing(2, ((2, -1), (-1, 2)))
G2 = DiffRing(2, ((2, -1), (-3, 2)), ("u", "v"))


# -- examples --------------------------------------------------------------

def test_additive_identity_and_inverse(a1):
    p = a1.jet(1, 2) - a1.jet(1, 1) ** 2
    assert a1.zero() + p == p
    assert (a1.jet(1, 1) + (-a1.jet(1, 1))).is_zero()
    assert (p + a1.jet(1, 1) ** 2) == a1.jet(1, 2)


def test_multiplication_examples(a1):
    p = a1.jet(1, 2) + 3
    assert a1.one() * p == p
    e = a1.exp_rho(1) * a1.exp_rho(1)
    assert list(e.terms) == [Monomial((), (2,))]
    r = A2
    s = (r.jet(1) + r.jet(2)) ** 2
    assert s == r.jet(1) ** 2 + r.jet(1) * r.jet(2) * 2 + r.jet(2) ** 2


def test_rank_mismatch():
    with pytest.raises(DiffRingError, match="rank mismatch"):
        DiffRing(1).jet(1) + DiffRing(2).jet(1)
    with pytest.raises(DiffRingError, match="rank mismatch"):
        DiffRing(1).jet(1) * DiffRing(2).jet(1)


def test_cartan_mismatch_is_an_error():
    with pytest.raises(DiffRingError):
        A2.jet(1) + G2.jet(1)


def test_dx_examples(a1):
    assert a1.jet(1, 1).dx() == a1.jet(1, 2)
    assert a1.exp_rho(1).dx() == a1.jet(1, 1) * a1.exp_rho(1) * 2
    I = a1.jet(1, 2) - a1.jet(1, 1) ** 2
    assert I.dx() == a1.jet(1, 3) - a1.jet(1, 1) * a1.jet(1, 2) * 2


def test_dx_of_exponential_needs_cartan():
    r = DiffRing(1)
    with pytest.raises(DiffRingError, match="Cartan matrix required"):
        r.exp_rho(1).dx()


def test_dy_examples(a1):
    I = a1.jet(1, 2) - a1.jet(1, 1) ** 2
    assert I.dy().is_zero()
    assert a1.jet(1, 1).dy() == -a1.exp_rho(1)
    # hand expansion: d_x^2(-E) with E_x = 2 u_1 E
    E = a1.exp_rho(1)
    expected = -(a1.jet(1, 2) * 2 + a1.jet(1, 1) ** 2 * 4) * E
    assert a1.jet(1, 3).dy() == expected


def test_dy_rejects_exponentials(a1):
    with pytest.raises(DiffRingError, match="exponential"):
        a1.exp_rho(1).dy()


def test_dy_uses_cartan_rows():
    # u_xy = -e^{2u-v}: d_x of the exponential brings down 2u_1 - v_1
    v2 = G2.jet(2, 2).dy()
    E = G2.exp_rho(2)
    assert v2 == -(G2.jet(1) * -3 + G2.jet(2) * 2) * E


def test_degree_decompose_examples(a1):
    I = a1.jet(1, 2) - a1.jet(1, 1) ** 2
    assert degree_decompose(I) == {2: I}
    assert degree_decompose(a1.zero()) == {}
    p = a1.jet(1, 1) + a1.jet(1, 3)
    assert degree_decompose(p) == {1: a1.jet(1, 1), 3: a1.jet(1, 3)}


def test_exponentials_have_degree_zero(a1):
    assert (a1.exp_rho(1) * a1.jet(1, 2)).degrees() == {2}


def test_invalid_construction():
    r = DiffRing(2)
    with pytest.raises(DiffRingError):
        r.jet(1, 0)
    with pytest.raises(DiffRingError):
        r.jet(3, 1)
    with pytest.raises(DiffRingError):
        r.exp((1, -1))


def test_json_roundtrip_and_order():
    p = G2.jet(1, 2) * 6 + G2.jet(2, 2) * 2 - G2.jet(1) ** 2 * 6 + G2.jet(1) * G2.jet(2) * 6
    p = p + G2.exp((1, 0)) * Fraction(5, 2)
    data = p.to_json()
    assert data["rank"] == 2
    assert data["terms"][0] == {"coeff": "5/2", "jets": [], "exp": [1, 0]}
    assert {"coeff": "-6", "jets": [[1, 1, 2]], "exp": [0, 0]} in data["terms"]
    assert DiffPoly.from_json(data, G2) == p


def test_text_and_latex(a1):
    I = a1.jet(1, 2) - a1.jet(1, 1) ** 2
    assert to_text(I) == "u1_2 - u1_1^2"
    assert to_latex(I) == "u^{1}_{2}-{u^{1}_{1}}^2"
    p = G2.jet(1, 2) * 6 - G2.jet(2, 1) ** 2 * 2 + G2.jet(1) * G2.jet(2) * Fraction(1, 2)
    assert to_latex(p) == r"6\,u_2+\tfrac{1}{2}\,u_1v_1-2\,{v_1}^2"
    assert to_text(p) == "6*u_2 + 1/2*u_1*v_1 - 2*v_1^2"


def test_parse_roundtrip(a1):
    p = G2.jet(1, 6) * 5 - G2.jet(1, 1) ** 4 * G2.jet(2, 2) * 2 + G2.jet(2, 12) * Fraction(3, 4)
    assert parse_poly(to_text(p), G2) == p
    assert parse_poly(to_latex(p), G2) == p
    assert parse_poly(r"-{v_{{1}}}^{4}{u_{{1}}}^{2}+\tfrac{1}{2}\, v_{{6}}", G2) == (
        -G2.jet(2) ** 4 * G2.jet(1) ** 2 + G2.jet(2, 6) * Fraction(1, 2))
    with pytest.raises(DiffRingError):
        parse_poly("q_1", G2)


# -- properties ------------------------------------------------------------

RING = DiffRing(3, ((2, -1, 0), (-1, 2, -2), (0, -1, 2)))  # B3


@st.composite
def polys(draw, ring=RING, with_exp=False, max_terms=4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        jets = {}
        for _ in range(draw(st.integers(0, 3))):
            key = (draw(st.integers(1, ring.rank)), draw(st.integers(1, 3)))
            jets[key] = jets.get(key, 0) + draw(st.integers(1, 2))
        exp = tuple(draw(st.integers(0, 1)) if with_exp else 0 for _ in range(ring.rank))
        m = Monomial(tuple(sorted((i, k, p) for (i, k), p in jets.items())), exp)
        terms[m] = Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 3)))
    return DiffPoly(ring, terms)


@settings(max_examples=60, deadline=None)
@given(polys(with_exp=True), polys(with_exp=True), polys(with_exp=True))
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p + q == q + p
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == RING.zero()


@settings(max_examples=60, deadline=None)
@given(polys(with_exp=True), polys(with_exp=True))
def test_dx_leibniz(p, q):
    assert (p * q).dx() == p.dx() * q + p * q.dx()


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_dy_leibniz(p, q):
    assert (p * q).dy() == p.dy() * q + p * q.dy()


@pytest.mark.parametrize("i", [1, 2, 3])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_mixed_partials_on_generators(i, k):
    v = RING.jet(i, k)
    # d_y(d_x v) is by definition d_x^{k}(-E_i)
    assert v.dy().dx() == v.dx().dy()
    assert v.dx().dy() == (-RING.exp_rho(i)).dx_n(k)


@settings(max_examples=40, deadline=None)
@given(polys())
def test_mixed_partials_commute(p):
    assert p.dy().dx() == p.dx().dy()


@settings(max_examples=60, deadline=None)
@given(polys(with_exp=True))
def test_degree_decompose_resums(p):
    parts = degree_decompose(p)
    total = RING.zero()
    for d, part in parts.items():
        assert part.is_homogeneous(d)
        total = total + part
    assert total == p


@settings(max_examples=60, deadline=None)
@given(polys())
def test_dx_raises_degree_by_one(p):
    for d, part in degree_decompose(p).items():
        dp = part.dx()
        assert dp.is_zero() or dp.degrees() == {d + 1}


@settings(max_examples=40, deadline=None)
@given(polys(with_exp=True))
def test_json_roundtrip_property(p):
    assert DiffPoly.from_json(p.to_json(), RING) == p

import pytest

from toda_integrals.diffring import DiffRingError
from toda_integrals.liedata import AlgebraSpec, connection_parts
from toda_integrals.opfactor import Integral, IntegralSet, quick_integrals
from toda_integrals.polymatrix import PolyMatrix
from toda_integrals.verify import (
    characteristic_report, closure_check, degree_audit, is_characteristic_integral,
    zero_curvature_residual,
)

SUPPORTED = ["A1", "A2", "A3", "A4", "B2", "B3", "C2", "C3", "G2", "D4", "D5"]


def test_characteristic_report():
    r = AlgebraSpec.parse("A1").ring()
    I = r.jet(1, 2) - r.jet(1) ** 2
    assert characteristic_report(I, "A1") == {"ok": True, "residual_terms": 0, "first_failing_monomials": []}
    bad = characteristic_report(r.jet(1, 2), "A1")
    assert not bad["ok"]
    # d_y u_xx = d_x(-e^{2u}) = -2 u_x e^{2u}
    assert bad["residual_terms"] == 1
    assert bad["first_failing_monomials"] == ["-2*u1_1*exp(rho1)"]
    with pytest.raises(DiffRingError):
        characteristic_report(r.exp_rho(1), "A1")
    with pytest.raises(DiffRingError):
        characteristic_report(AlgebraSpec.parse("A2").ring().jet(1), "A1")


def test_is_characteristic_integral():
    r = AlgebraSpec.parse("A2").ring()
    assert not is_characteristic_integral(r.jet(1) * r.jet(2), "A2")
    assert is_characteristic_integral(r.const(7), "A2")


@pytest.mark.parametrize("name", SUPPORTED)
def test_zero_curvature(name):
    assert zero_curvature_residual(name).is_zero()


def test_zero_curvature_detects_defect():
    spec = AlgebraSpec.parse("A2")
    u, eps, Y = connection_parts(spec)
    r = u.ring
    # drop the second simple root vector
    broken = PolyMatrix(r, 3, {k: v for k, v in Y.entries.items() if k != (1, 2)})
    assert not zero_curvature_residual(spec, broken).is_zero()
    scaled = Y.scale(r.const(2))
    assert not zero_curvature_residual(spec, scaled).is_zero()


def test_degree_audit():
    S = quick_integrals("C3")
    assert degree_audit(S)
    wrong = IntegralSet(S.spec, "quick", [Integral("I_1", S.integrals[0].poly, 3)])
    assert not degree_audit(wrong)
    missing = IntegralSet(S.spec, "quick", S.integrals[:2])
    assert not degree_audit(missing)
    r = S.spec.ring()
    mixed = IntegralSet(S.spec, "quick", [Integral("I_1", r.jet(1, 2) + r.jet(1, 3), 2)] + S.integrals[1:])
    assert not degree_audit(mixed)


def test_closure():
    S = quick_integrals("B2")
    a, b = S.polys()
    assert closure_check(a, b, "B2")

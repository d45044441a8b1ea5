"""Characteristic integrals of Toda field theories, computed exactly.

Two routes are provided: the factorized differential operator along a
non-branching weight chain (:mod:`toda_integrals.opfactor`) and the
Drinfeld-Sokolov gauge reduction to a Kostant slice
(:mod:`toda_integrals.dsgauge`).
"""
from .diffring import DiffPoly, DiffRing, Monomial, parse_poly, to_latex, to_text
from .dsgauge import GaugeResult, reduce_to_slice
from .liedata import AlgebraSpec, cartan_matrix, first_fundamental_rep, kostant_slice, weight_diagram
from .opfactor import DiffOp, IntegralSet, compose, factorized_product, quick_integrals
from .verify import degree_audit, is_characteristic_integral, zero_curvature_residual

__version__ = "0.1.0"

"""Exact differential polynomials in x-jet variables with formal exponentials.

A polynomial lives in a :class:`DiffRing`, which fixes the number of fields
``n`` and (optionally) the Cartan matrix ``A``.  Jet variables ``u^i_{x^k}``
carry ``k >= 1``; the formal exponential ``E^m`` stands for
``prod_i exp(m_i * rho_i)`` with ``rho_i = sum_j a_ij u^j``.

Two derivations act on the ring:

* :meth:`DiffPoly.dx` -- the total x-derivative;
* :meth:`DiffPoly.dy` -- the y-derivative on solutions of the Toda system,
  defined on exponential-free input by ``u^i_{xy} = -E^{e_i}``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence


class DiffRingError(ValueError):
    pass


@dataclass(frozen=True)
class DiffRing:
    """Ring context: rank, optional Cartan matrix and display names."""

    rank: int
    cartan: tuple[tuple[int, ...], ...] | None = None
    names: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.rank < 1:
            raise DiffRingError("rank must be positive")
        if self.cartan is not None:
            cartan = tuple(tuple(int(a) for a in row) for row in self.cartan)
            if len(cartan) != self.rank or any(len(r) != self.rank for r in cartan):
                raise DiffRingError("Cartan matrix shape does not match rank")
            object.__setattr__(self, "cartan", cartan)
        if self.names is not None and len(self.names) != self.rank:
            raise DiffRingError("need one name per field")
        object.__setattr__(self, "_dy_cache", {})

    # -- constructors -------------------------------------------------
    def zero(self) -> DiffPoly:
        return DiffPoly(self, {})

    def one(self) -> DiffPoly:
        return self.const(1)

    def const(self, c) -> DiffPoly:
        c = Fraction(c)
        if c == 0:
            return self.zero()
        return DiffPoly._raw(self, {self.unit_monomial(): c})

    def unit_monomial(self) -> Monomial:
        return Monomial((), (0,) * self.rank)

    def jet(self, i: int, k: int = 1, power: int = 1) -> DiffPoly:
        """``(u^i_{x^k})^power`` with 1-based field index ``i``."""
        if not 1 <= i <= self.rank:
            raise DiffRingError(f"field index {i} out of range 1..{self.rank}")
        if k < 1:
            raise DiffRingError("jet order must be >= 1")
        if power < 0:
            raise DiffRingError("negative power")
        if power == 0:
            return self.one()
        return DiffPoly._raw(self, {Monomial(((i, k, power),), (0,) * self.rank): Fraction(1)})

    def exp(self, m: Sequence[int]) -> DiffPoly:
        """The formal exponential ``prod_i exp(m_i rho_i)``."""
        m = tuple(int(a) for a in m)
        if len(m) != self.rank:
            raise DiffRingError("rank mismatch")
        if any(a < 0 for a in m):
            raise DiffRingError("exponential indices must be non-negative")
        return DiffPoly._raw(self, {Monomial((), m): Fraction(1)})

    def exp_rho(self, i: int) -> DiffPoly:
        m = [0] * self.rank
        m[i - 1] = 1
        return self.exp(m)

    def linear_form(self, coeffs: Sequence) -> DiffPoly:
        """``sum_j c_j u^j_x``."""
        if len(coeffs) != self.rank:
            raise DiffRingError("rank mismatch")
        terms = {}
        for j, c in enumerate(coeffs, start=1):
            c = Fraction(c)
            if c:
                terms[Monomial(((j, 1, 1),), (0,) * self.rank)] = c
        return DiffPoly._raw(self, terms)

    def combine(self, other: DiffRing) -> DiffRing:
        """Common context of two operands; raises on any mismatch."""
        if self is other:
            return self
        if self.rank != other.rank:
            raise DiffRingError("rank mismatch")
        if self.cartan is None:
            return other
        if other.cartan is not None and other.cartan != self.cartan:
            raise DiffRingError("Cartan matrix mismatch")
        return self

    def name(self, i: int) -> str:
        return self.names[i - 1] if self.names else f"u{i}"

    # -- y-derivative of generators ----------------------------------
    def dy_jet(self, i: int, k: int) -> DiffPoly:
        """``d_y u^i_{x^k} = d_x^{k-1}(-E^{e_i})``."""
        cache = self._dy_cache
        key = (i, k)
        if key not in cache:
            if k == 1:
                cache[key] = -self.exp_rho(i)
            else:
                cache[key] = self.dy_jet(i, k - 1).dx()
        return cache[key]


class Monomial(NamedTuple):
    """Product of jet powers and one formal exponential.

    ``jets`` is a sorted tuple of ``(field, order, power)`` with power > 0;
    ``exp`` is the exponential multi-index.
    """

    jets: tuple[tuple[int, int, int], ...]
    exp: tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(k * p for _, k, p in self.jets)

    @property
    def algebraic_degree(self) -> int:
        return sum(p for _, _, p in self.jets)

    def sort_key(self):
        # degree, then number of factors, then lex with u^1 before u^2 and
        # higher derivatives before lower ones, exponential last
        factors = []
        for i, k, p in self.jets:
            factors.extend([(i, -k)] * p)
        factors.sort()
        return (self.degree, self.algebraic_degree, tuple(factors), self.exp)

    def mul(self, other: Monomial) -> Monomial:
        if not other.jets:
            jets = self.jets
        elif not self.jets:
            jets = other.jets
        else:
            powers = dict(((i, k), p) for i, k, p in self.jets)
            for i, k, p in other.jets:
                powers[(i, k)] = powers.get((i, k), 0) + p
            jets = tuple(sorted((i, k, p) for (i, k), p in powers.items()))
        return Monomial(jets, tuple(a + b for a, b in zip(self.exp, other.exp)))

    def without(self, pos: int) -> Monomial:
        """Drop one power of the jet at position ``pos``."""
        i, k, p = self.jets[pos]
        if p == 1:
            jets = self.jets[:pos] + self.jets[pos + 1:]
        else:
            jets = self.jets[:pos] + ((i, k, p - 1),) + self.jets[pos + 1:]
        return Monomial(jets, self.exp)


def _add_into(acc: dict, terms: Mapping, scale=1) -> None:
    for m, c in terms.items():
        v = acc.get(m, 0) + c * scale
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)


class DiffPoly:
    """Immutable exact polynomial; ``terms`` maps :class:`Monomial` to Fraction."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: DiffRing, terms: Mapping[Monomial, object] | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                if len(m.exp) != ring.rank:
                    raise DiffRingError("rank mismatch")
                clean[m] = c
        self.ring = ring
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj._hash = None
        return obj

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> DiffPoly:
        if isinstance(other, DiffPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = self.ring.combine(other.ring)
        terms = dict(self.terms)
        _add_into(terms, other.terms)
        return DiffPoly._raw(ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = self.ring.combine(other.ring)
        terms = dict(self.terms)
        _add_into(terms, other.terms, -1)
        return DiffPoly._raw(ring, terms)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self.ring.zero()
            return DiffPoly._raw(self.ring, {m: c * other for m, c in self.terms.items()})
        if not isinstance(other, DiffPoly):
            return NotImplemented
        ring = self.ring.combine(other.ring)
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1.mul(m2)
                v = terms.get(m, 0) + c1 * c2
                if v:
                    terms[m] = v
                else:
                    del terms[m]
        return DiffPoly._raw(ring, terms)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise DiffRingError("negative power")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self.ring.rank == other.ring.rank and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.rank, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"DiffPoly({to_text(self)})"

    # -- queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def has_exp(self) -> bool:
        return any(any(m.exp) for m in self.terms)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: t[0].sort_key())

    def degrees(self) -> set[int]:
        return {m.degree for m in self.terms}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        ds = self.degrees()
        if degree is None:
            return len(ds) <= 1
        return ds <= {degree}

    def degree_decompose(self) -> dict[int, DiffPoly]:
        parts: dict[int, dict] = {}
        for m, c in self.terms.items():
            parts.setdefault(m.degree, {})[m] = c
        return {d: DiffPoly._raw(self.ring, t) for d, t in sorted(parts.items())}

    def filter(self, pred) -> DiffPoly:
        return DiffPoly._raw(self.ring, {m: c for m, c in self.terms.items() if pred(m)})

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    # -- derivations --------------------------------------------------
    def dx(self) -> DiffPoly:
        ring = self.ring
        terms: dict = {}
        rho_x = None
        for m, c in self.terms.items():
            for pos, (i, k, p) in enumerate(m.jets):
                # p * (m / u^i_k) * u^i_{k+1}
                new = m.without(pos).mul(Monomial(((i, k + 1, 1),), (0,) * len(m.exp)))
                v = terms.get(new, 0) + c * p
                if v:
                    terms[new] = v
                else:
                    terms.pop(new, None)
            if any(m.exp):
                if ring.cartan is None:
                    raise DiffRingError("Cartan matrix required")
                if rho_x is None:
                    rho_x = _rho_x(ring)
                # (sum_i m_i rho_i)_x
                lin: dict[int, int] = {}
                for i, mi in enumerate(m.exp):
                    if mi:
                        for j, a in rho_x[i].items():
                            lin[j] = lin.get(j, 0) + mi * a
                for j, a in lin.items():
                    if a:
                        new = m.mul(Monomial(((j, 1, 1),), (0,) * ring.rank))
                        v = terms.get(new, 0) + c * a
                        if v:
                            terms[new] = v
                        else:
                            terms.pop(new, None)
        return DiffPoly._raw(ring, terms)

    def dx_n(self, times: int) -> DiffPoly:
        p = self
        for _ in range(times):
            p = p.dx()
        return p

    def dy(self) -> DiffPoly:
        """y-derivative on Toda solutions (exponential-free input only)."""
        ring = self.ring
        if self.has_exp():
            raise DiffRingError("∂_y undefined on exponential terms")
        if self.terms and ring.cartan is None:
            raise DiffRingError("Cartan matrix required")
        acc: dict = {}
        for m, c in self.terms.items():
            for pos, (i, k, p) in enumerate(m.jets):
                rest = m.without(pos)
                for m2, c2 in ring.dy_jet(i, k).terms.items():
                    new = rest.mul(m2)
                    v = acc.get(new, 0) + c * p * c2
                    if v:
                        acc[new] = v
                    else:
                        acc.pop(new, None)
        return DiffPoly._raw(ring, acc)

    # -- serialization ------------------------------------------------
    def to_json(self) -> dict:
        return {
            "rank": self.ring.rank,
            "terms": [
                {
                    "coeff": str(c),
                    "jets": [[i, k, p] for i, k, p in m.jets],
                    "exp": list(m.exp),
                }
                for m, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping, ring: DiffRing | None = None) -> DiffPoly:
        rank = int(data["rank"])
        if ring is None:
            ring = DiffRing(rank)
        elif ring.rank != rank:
            raise DiffRingError("rank mismatch")
        terms = {}
        for t in data["terms"]:
            jets = tuple(sorted((int(i), int(k), int(p)) for i, k, p in t["jets"]))
            for i, k, p in jets:
                if not 1 <= i <= rank or k < 1 or p < 1:
                    raise DiffRingError(f"bad jet entry {[i, k, p]}")
            exp = tuple(int(a) for a in t.get("exp", [0] * rank))
            if len(exp) != rank or any(a < 0 for a in exp):
                raise DiffRingError("bad exponential index")
            m = Monomial(jets, exp)
            terms[m] = terms.get(m, 0) + Fraction(t["coeff"])
        return cls(ring, terms)


def _rho_x(ring: DiffRing) -> list[dict[int, int]]:
    """Row i of the Cartan matrix as a sparse map ``j -> a_ij`` (1-based j)."""
    return [{j + 1: a for j, a in enumerate(row) if a} for row in ring.cartan]


def degree_decompose(p: DiffPoly) -> dict[int, DiffPoly]:
    return p.degree_decompose()


def d_x(p: DiffPoly) -> DiffPoly:
    return p.dx()


def d_y_toda(p: DiffPoly) -> DiffPoly:
    return p.dy()


def linear_part(p: DiffPoly) -> DiffPoly:
    """Monomials of algebraic degree one in the jets (exponential-free)."""
    return p.filter(lambda m: m.algebraic_degree == 1 and not any(m.exp))


def first_order_part(p: DiffPoly, algebraic_degree: int | None = None) -> DiffPoly:
    """Monomials built only from first derivatives ``u^i_x``."""
    def keep(m):
        if any(m.exp) or not m.jets or any(k != 1 for _, k, _ in m.jets):
            return False
        return algebraic_degree is None or m.algebraic_degree == algebraic_degree
    return p.filter(keep)


# -- printing --------------------------------------------------------------

def _exp_text(exp: Sequence[int]) -> str:
    parts = []
    for i, a in enumerate(exp, start=1):
        if a:
            parts.append(f"rho{i}" if a == 1 else f"{a}*rho{i}")
    return "exp(" + "+".join(parts) + ")"


def _jet_text(ring: DiffRing, i: int, k: int) -> str:
    return f"{ring.name(i)}_{k}"


def to_text(p: DiffPoly) -> str:
    """Plain-text form, e.g. ``u1_2 - u1_1^2`` or ``6*u_2 + 2*v_2``."""
    if not p.terms:
        return "0"
    out = []
    for n, (m, c) in enumerate(p.sorted_terms()):
        factors = []
        for i, k, e in m.jets:
            v = _jet_text(p.ring, i, k)
            factors.append(v if e == 1 else f"{v}^{e}")
        if any(m.exp):
            factors.append(_exp_text(m.exp))
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if n == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out)


def _latex_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return rf"\tfrac{{{c.numerator}}}{{{c.denominator}}}"


def _latex_sub(k: int) -> str:
    return str(k) if k < 10 else "{" + str(k) + "}"


def to_latex(p: DiffPoly) -> str:
    """LaTeX with the subscript convention ``u_2`` for ``u_{xx}``."""
    if not p.terms:
        return "0"
    out = []
    for n, (m, c) in enumerate(p.sorted_terms()):
        factors = []
        for i, k, e in m.jets:
            if p.ring.names:
                v = f"{p.ring.names[i - 1]}_{_latex_sub(k)}"
            else:
                v = f"u^{{{i}}}_{{{k}}}"
            factors.append(v if e == 1 else f"{{{v}}}^{e}" if e < 10 else f"{{{v}}}^{{{e}}}")
        if any(m.exp):
            rho = "+".join(
                (rf"\rho_{{{i}}}" if a == 1 else rf"{a}\rho_{{{i}}}")
                for i, a in enumerate(m.exp, start=1) if a
            )
            factors.append(f"e^{{{rho}}}")
        mag = abs(c)
        body = "".join(factors)
        if not factors:
            body = _latex_coeff(mag)
        elif mag != 1:
            body = _latex_coeff(mag) + r"\," + body
        sign = "-" if c < 0 else ("" if n == 0 else "+")
        out.append(sign + body)
    return "".join(out)


_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<op>[+\-])"
    r"|(?P<num>\d+(?:/\d+)?)"
    r"|(?P<var>[A-Za-z]+\d*)_(?P<ord>\d+)(?:\^(?P<pow>\d+))?"
    r"|(?P<sep>[*])"
    r")"
)


def parse_poly(text: str, ring: DiffRing) -> DiffPoly:
    """Parse a sum of products of jet variables.

    Accepts the plain-text output of :func:`to_text` as well as the
    Maple-flavoured LaTeX (``5\\,u_{{6}}``,
    ``{v_{{1}}}^{2}``, ``\\tfrac{1}{2}``).  Exponentials are not supported.
    """
    names = {}
    for i in range(1, ring.rank + 1):
        names[ring.name(i)] = i
        names[f"u{i}"] = i
    s = re.sub(r"\\tfrac\{(\d+)\}\{(\d+)\}", r"\1/\2", text)
    for junk in ("\\\\", "&", r"\,", r"\left", r"\right", "{", "}", "\n", " "):
        s = s.replace(junk, "")
    # u^{1}_{2} style becomes u^1_2 after brace stripping
    s = re.sub(r"([A-Za-z]+)\^(\d+)_", r"\1\2_", s)
    terms: dict = {}
    unit = ring.unit_monomial()
    sign, coeff, mono, started = 1, None, unit, False

    def flush():
        if started:
            c = sign * (coeff if coeff is not None else Fraction(1))
            terms[mono] = terms.get(mono, 0) + c

    pos = 0
    while pos < len(s):
        mt = _TOKEN.match(s, pos)
        if not mt or mt.end() == pos:
            raise DiffRingError(f"cannot parse polynomial near {s[pos:pos + 20]!r}")
        pos = mt.end()
        if mt.group("op"):
            flush()
            sign = -1 if mt.group("op") == "-" else 1
            coeff, mono, started = None, unit, False
        elif mt.group("num"):
            f = Fraction(mt.group("num"))
            coeff = f if coeff is None else coeff * f
            started = True
        elif mt.group("var"):
            name = mt.group("var")
            if name not in names:
                raise DiffRingError(f"unknown variable {name!r}")
            power = int(mt.group("pow") or 1)
            k = int(mt.group("ord"))
            if k < 1:
                raise DiffRingError("jet order must be >= 1")
            mono = mono.mul(Monomial(((names[name], k, power),), unit.exp))
            started = True
    flush()
    return DiffPoly(ring, terms)


def dumps(p: DiffPoly) -> str:
    return json.dumps(p.to_json())


def sum_polys(polys: Iterable[DiffPoly], ring: DiffRing) -> DiffPoly:
    acc: dict = {}
    for p in polys:
        ring = ring.combine(p.ring)
        _add_into(acc, p.terms)
    return DiffPoly._raw(ring, acc)

"""Square matrices with :class:`DiffPoly` entries, stored sparsely."""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .diffring import DiffPoly, DiffRing, DiffRingError
from .linalg import Matrix


class PolyMatrix:
    """An ``m x m`` matrix over a :class:`DiffRing`.

    ``entries`` maps 0-based ``(row, col)`` to non-zero polynomials.
    """

    __slots__ = ("ring", "dim", "entries")

    def __init__(self, ring: DiffRing, dim: int, entries: Mapping[tuple[int, int], DiffPoly] | None = None):
        self.ring = ring
        self.dim = dim
        clean = {}
        for (a, b), p in (entries or {}).items():
            if not (0 <= a < dim and 0 <= b < dim):
                raise IndexError(f"entry {(a, b)} outside {dim}x{dim}")
            if not isinstance(p, DiffPoly):
                p = ring.const(p)
            else:
                self.ring = self.ring.combine(p.ring)
            if p:
                clean[(a, b)] = p
        self.entries = clean

    @classmethod
    def constant(cls, ring: DiffRing, mat: Matrix) -> PolyMatrix:
        n = len(mat)
        return cls(ring, n, {(a, b): ring.const(x) for a, row in enumerate(mat) for b, x in enumerate(row) if x})

    @classmethod
    def identity(cls, ring: DiffRing, dim: int) -> PolyMatrix:
        return cls(ring, dim, {(a, a): ring.one() for a in range(dim)})

    @classmethod
    def zero(cls, ring: DiffRing, dim: int) -> PolyMatrix:
        return cls(ring, dim)

    def __getitem__(self, key: tuple[int, int]) -> DiffPoly:
        return self.entries.get(key) or self.ring.zero()

    def _check(self, other: PolyMatrix) -> DiffRing:
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return self.ring.combine(other.ring)

    def __add__(self, other: PolyMatrix) -> PolyMatrix:
        ring = self._check(other)
        out = dict(self.entries)
        for k, p in other.entries.items():
            out[k] = out[k] + p if k in out else p
        return PolyMatrix(ring, self.dim, out)

    def __sub__(self, other: PolyMatrix) -> PolyMatrix:
        return self + (-other)

    def __neg__(self) -> PolyMatrix:
        return PolyMatrix(self.ring, self.dim, {k: -p for k, p in self.entries.items()})

    def scale(self, c) -> PolyMatrix:
        if isinstance(c, (int, Fraction)) and c == 0:
            return PolyMatrix(self.ring, self.dim)
        return PolyMatrix(self.ring, self.dim, {k: p * c for k, p in self.entries.items()})

    def __matmul__(self, other: PolyMatrix) -> PolyMatrix:
        ring = self._check(other)
        rows: dict[int, list] = {}
        for (b, c), q in other.entries.items():
            rows.setdefault(b, []).append((c, q))
        acc: dict[tuple[int, int], DiffPoly] = {}
        for (a, b), p in self.entries.items():
            for c, q in rows.get(b, ()):
                term = p * q
                acc[(a, c)] = acc[(a, c)] + term if (a, c) in acc else term
        return PolyMatrix(ring, self.dim, acc)

    def bracket(self, other: PolyMatrix) -> PolyMatrix:
        return self @ other - other @ self

    def transpose(self) -> PolyMatrix:
        return PolyMatrix(self.ring, self.dim, {(b, a): p for (a, b), p in self.entries.items()})

    def map(self, fn) -> PolyMatrix:
        return PolyMatrix(self.ring, self.dim, {k: fn(p) for k, p in self.entries.items()})

    def dx(self) -> PolyMatrix:
        return self.map(DiffPoly.dx)

    def dy(self) -> PolyMatrix:
        return self.map(DiffPoly.dy)

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.dim == other.dim and self.entries == other.entries

    def __hash__(self):
        return hash((self.dim, frozenset(self.entries.items())))

    def restrict(self, positions) -> PolyMatrix:
        pos = set(positions)
        return PolyMatrix(self.ring, self.dim, {k: p for k, p in self.entries.items() if k in pos})

    def is_nilpotent_upper(self) -> bool:
        return all(a < b for a, b in self.entries)

    def is_unipotent_upper(self) -> bool:
        for a in range(self.dim):
            if self[(a, a)] != 1:
                return False
        return all(a <= b for a, b in self.entries)

    def exp_nilpotent(self) -> PolyMatrix:
        """``exp(z)`` for strictly upper-triangular ``z`` (a finite sum)."""
        if not self.is_nilpotent_upper():
            raise DiffRingError("exponent must be strictly upper triangular (nilpotent)")
        result = PolyMatrix.identity(self.ring, self.dim)
        power = result
        k = 1
        while True:
            power = (power @ self).scale(Fraction(1, k))
            if power.is_zero():
                return result
            result = result + power
            k += 1

    def term_count(self) -> int:
        return sum(len(p) for p in self.entries.values())

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "entries": [[a + 1, b + 1, p.to_json()] for (a, b), p in sorted(self.entries.items())],
        }

    @classmethod
    def from_json(cls, data: Mapping, ring: DiffRing) -> PolyMatrix:
        return cls(ring, int(data["dim"]), {(a - 1, b - 1): DiffPoly.from_json(p, ring) for a, b, p in data["entries"]})

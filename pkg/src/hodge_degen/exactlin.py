"""Exact scalars and exact linear algebra over Q.

Scalars are stdlib ``fractions.Fraction`` (always reduced, positive
denominator) and :class:`CycloNumber`, the quadratic extension Q(mu) with
mu a primitive 6th root of unity, presented by mu^2 = mu - 1.

Matrix routines (rank, kernel, span membership) run a fraction-free
elimination: rows are scaled to integers once and reduced by their gcd
after every pivot step, so no intermediate Fractions are produced.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, sqrt
from typing import Iterable, Sequence

Rational = Fraction

QVector = tuple[Fraction, ...]

_SQRT3_2 = sqrt(3.0) / 2.0


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


@dataclass(frozen=True)
class CycloNumber:
    """a + b*mu with mu = (1 + sqrt(3) i)/2, so mu^2 = mu - 1."""

    a: Fraction
    b: Fraction

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "a", _as_fraction(a))
        object.__setattr__(self, "b", _as_fraction(b))

    @classmethod
    def coerce(cls, x) -> "CycloNumber":
        if isinstance(x, CycloNumber):
            return x
        return cls(_as_fraction(x))

    def __add__(self, o):
        o = CycloNumber.coerce(o)
        return CycloNumber(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(-self.a, -self.b)

    def __sub__(self, o):
        return self + (-CycloNumber.coerce(o))

    def __rsub__(self, o):
        return CycloNumber.coerce(o) + (-self)

    def __mul__(self, o):
        o = CycloNumber.coerce(o)
        # (a + b mu)(c + d mu) with mu^2 = mu - 1
        a, b, c, d = self.a, self.b, o.a, o.b
        return CycloNumber(a * c - b * d, a * d + b * c + b * d)

    __rmul__ = __mul__

    def conjugate(self) -> "CycloNumber":
        """Complex conjugation: mu -> 1 - mu."""
        return CycloNumber(self.a + self.b, -self.b)

    def norm(self) -> Fraction:
        """x * conj(x) = a^2 + a b + b^2, a nonnegative rational."""
        return self.a * self.a + self.a * self.b + self.b * self.b

    def inverse(self) -> "CycloNumber":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(mu)")
        c = self.conjugate()
        return CycloNumber(c.a / n, c.b / n)

    def __truediv__(self, o):
        return self * CycloNumber.coerce(o).inverse()

    def __rtruediv__(self, o):
        return CycloNumber.coerce(o) * self.inverse()

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        if self.b == 0:
            return f"Cyclo({self.a})"
        return f"Cyclo({self.a} + {self.b}*mu)"


MU = CycloNumber(0, 1)
CYCLO_ONE = CycloNumber(1, 0)
CYCLO_ZERO = CycloNumber(0, 0)


def cyclo_embed(x: CycloNumber) -> complex:
    """Numerical embedding sending mu to 0.5 + (sqrt(3)/2) i."""
    a = float(x.a)
    b = float(x.b)
    return complex(a + 0.5 * b, _SQRT3_2 * b)


@dataclass(frozen=True)
class QMatrix:
    """Dense matrix of Fractions."""

    entries: tuple[QVector, ...]

    def __init__(self, rows: Iterable[Iterable]):
        ent = tuple(tuple(_as_fraction(x) for x in row) for row in rows)
        if ent and any(len(r) != len(ent[0]) for r in ent):
            raise ValueError("ragged rows")
        object.__setattr__(self, "entries", ent)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def row(self, i: int) -> QVector:
        return self.entries[i]

    def mul_vector(self, v: Sequence[Fraction]) -> QVector:
        if self.cols != len(v):
            raise ValueError("dimension mismatch")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.entries)


def _int_rows(m: QMatrix) -> list[dict[int, int]]:
    """Rows as sparse {col: int}, each scaled by the lcm of its denominators."""
    out = []
    for row in m.entries:
        scale = 1
        for x in row:
            scale = scale * x.denominator // gcd(scale, x.denominator)
        r = {j: int(x * scale) for j, x in enumerate(row) if x != 0}
        out.append(r)
    return out


def _reduce_row(r: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in r.values():
        g = gcd(g, v)
    if g > 1:
        return {j: v // g for j, v in r.items()}
    return dict(r)


def _echelon(rows: list[dict[int, int]]) -> tuple[list[tuple[int, dict[int, int]]], list[int]]:
    """Fraction-free forward elimination on sparse integer rows.

    Returns (pivots, order) where pivots is a list of (pivot column, row)
    and order records pivot columns in elimination order.
    """
    pivots: list[tuple[int, dict[int, int]]] = []
    for r in rows:
        r = _reduce_row(r)
        for pc, prow in pivots:
            if pc in r:
                a, b = r[pc], prow[pc]
                g = gcd(a, b)
                ma, mb = b // g, a // g
                new = {}
                for j, v in r.items():
                    new[j] = v * ma
                for j, v in prow.items():
                    new[j] = new.get(j, 0) - v * mb
                r = _reduce_row({j: v for j, v in new.items() if v != 0})
        if r:
            pc = min(r)
            if r[pc] < 0:
                r = {j: -v for j, v in r.items()}
            pivots.append((pc, r))
    pivots.sort(key=lambda t: t[0])
    return pivots, [pc for pc, _ in pivots]


def rank(m: QMatrix) -> int:
    """Rank over Q by exact fraction-free elimination."""
    if m.rows == 0 or m.cols == 0:
        return 0
    pivots, _ = _echelon(_int_rows(m))
    return len(pivots)


def _back_substitute(pivots: list[tuple[int, dict[int, int]]]) -> list[tuple[int, dict[int, Fraction]]]:
    """Fully reduce the echelon rows (RREF), pivot entries normalized to 1."""
    reduced: list[tuple[int, dict[int, Fraction]]] = []
    for pc, row in reversed(pivots):
        r = {j: Fraction(v, row[pc]) for j, v in row.items()}
        for qc, qrow in reduced:
            f = r.get(qc)
            if f:
                for j, v in qrow.items():
                    r[j] = r.get(j, Fraction(0)) - f * v
                r = {j: v for j, v in r.items() if v != 0}
        reduced.append((pc, r))
    reduced.reverse()
    return reduced


def kernel_basis(m: QMatrix) -> list[QVector]:
    """Exact basis of {v : m v = 0}; count equals cols - rank(m)."""
    n = m.cols
    if n == 0:
        return []
    pivots, pivot_cols = _echelon(_int_rows(m))
    reduced = _back_substitute(pivots)
    pivot_set = set(pivot_cols)
    free_cols = [j for j in range(n) if j not in pivot_set]
    basis = []
    for fc in free_cols:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for pc, row in reduced:
            v[pc] = -row.get(fc, Fraction(0))
        basis.append(tuple(v))
    return basis


def in_span(vectors: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> tuple[bool, QVector | None]:
    """Exact membership of v in span(vectors); returns coefficients when inside.

    All vectors must share one dimension.
    """
    vecs = [tuple(_as_fraction(x) for x in w) for w in vectors]
    target = tuple(_as_fraction(x) for x in v)
    if any(len(w) != len(target) for w in vecs):
        raise ValueError("dimension mismatch")
    if not vecs:
        return (True, tuple()) if all(x == 0 for x in target) else (False, None)
    # Solve the transposed system A c = v by eliminating the augmented rows.
    n = len(target)
    k = len(vecs)
    aug = QMatrix([[vecs[j][i] for j in range(k)] + [target[i]] for i in range(n)])
    pivots, pivot_cols = _echelon(_int_rows(aug))
    if k in pivot_cols:
        return (False, None)
    reduced = _back_substitute(pivots)
    coeffs = [Fraction(0)] * k
    for pc, row in reduced:
        coeffs[pc] = row.get(k, Fraction(0))
    # Free coefficient columns stay zero; verify exactly.
    for i in range(n):
        if sum(coeffs[j] * vecs[j][i] for j in range(k)) != target[i]:
            return (False, None)
    return (True, tuple(coeffs))

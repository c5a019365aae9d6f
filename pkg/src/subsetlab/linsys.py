"""The 4 x n system behind the matrix method, its solution space and the
directional contribution table.

An :class:`Arrangement` places the *window* in its first four positions:
positions 0 and 1 hold the balance elements, positions 2 and 3 the pivot
elements whose membership is fixed by ``v_r`` and ``v_s``. The remaining
``n - 4`` positions are free variables; free column ``i`` (0-based)
corresponds to position ``i + 4``.

Everything here is exact (``int`` / ``Fraction``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegenerateTargets, DegenerateWindow, InstanceTooSmall

MembershipVector = tuple  # tuple[Fraction, ...]


@dataclass(frozen=True)
class Arrangement:
    elements: tuple
    origin: tuple = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if self.origin is None:
            object.__setattr__(self, "origin", tuple(range(len(self.elements))))
        else:
            object.__setattr__(self, "origin", tuple(self.origin))
        if len(self.origin) != len(self.elements):
            raise ValueError("origin must map every position")
        if len(set(self.origin)) != len(self.origin):
            raise ValueError("origin must be a bijection")

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def beta(self) -> int:
        return self.elements[0] - self.elements[1]

    def free_values(self) -> tuple:
        return self.elements[4:]


@dataclass(frozen=True)
class Assignment:
    """Target subset size ``t`` plus the four window membership flags."""

    t: int
    t1: int = 1
    t2: int = 1
    v_r: int = 1
    v_s: int = 1

    def __post_init__(self):
        for name in ("t1", "t2", "v_r", "v_s"):
            if getattr(self, name) not in (0, 1):
                raise ValueError(f"{name} must be 0 or 1")

    @property
    def window_flags(self) -> tuple:
        return (self.t1, self.t2, self.v_r, self.v_s)


@dataclass(frozen=True)
class LinearSystem:
    matrix: tuple  # 4 rows of n ints
    rhs: tuple  # (c, t, v_r, v_s)

    @property
    def n(self) -> int:
        return len(self.matrix[0])


@dataclass(frozen=True)
class ParticularSolution:
    b1: Fraction
    b2: Fraction
    v_r: Fraction
    v_s: Fraction
    n: int

    def vector(self) -> MembershipVector:
        return (self.b1, self.b2, self.v_r, self.v_s) + (Fraction(0),) * (self.n - 4)


@dataclass(frozen=True)
class NullBasis:
    """One special solution per free variable; ``columns[i] == (k1, k2)``."""

    columns: tuple
    n: int

    def vector(self, i: int) -> MembershipVector:
        k1, k2 = self.columns[i]
        v = [k1, k2, Fraction(0), Fraction(0)] + [Fraction(0)] * (self.n - 4)
        v[i + 4] = Fraction(1)
        return tuple(v)


@dataclass(frozen=True)
class ContributionTable:
    delta1: int
    delta2: int
    d1: tuple
    d2: tuple
    d3: tuple


def build_system(arr: Arrangement, asg: Assignment, c: int) -> LinearSystem:
    n = arr.n
    if n < 5:
        raise InstanceTooSmall(f"need at least 5 elements, got {n}")
    unit3 = tuple(1 if j == 2 else 0 for j in range(n))
    unit4 = tuple(1 if j == 3 else 0 for j in range(n))
    matrix = (tuple(arr.elements), (1,) * n, unit3, unit4)
    return LinearSystem(matrix, (c, asg.t, asg.v_r, asg.v_s))


def eliminate(system: LinearSystem) -> tuple[ParticularSolution, NullBasis]:
    """Forward elimination then back-substitution with free variables at zero.

    Pivots are taken in columns 0..3 in order; a column without a usable
    pivot means the window is singular, which for this matrix happens
    exactly when the two balance elements are equal.
    """
    n = system.n
    rows = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(system.matrix, system.rhs)]

    for col in range(4):
        pivot = next((r for r in range(col, 4) if rows[r][col] != 0), None)
        if pivot is None:
            raise DegenerateWindow("balance elements are equal (beta = 0)")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        for r in range(col + 1, 4):
            factor = rows[r][col] / rows[col][col]
            if factor:
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]

    for col in reversed(range(4)):
        p = rows[col][col]
        rows[col] = [x / p for x in rows[col]]
        for r in range(col):
            factor = rows[r][col]
            if factor:
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]

    x = [rows[r][n] for r in range(4)]
    particular = ParticularSolution(x[0], x[1], x[2], x[3], n)
    columns = []
    for j in range(4, n):
        special = [-rows[r][j] for r in range(4)]
        if special[2] or special[3]:
            raise AssertionError("pivot rows must not depend on free variables")
        columns.append((special[0], special[1]))
    return particular, NullBasis(tuple(columns), n)


def closed_form(arr: Arrangement, asg: Assignment, c: int) -> tuple[ParticularSolution, NullBasis]:
    a1, a2, ar, as_ = arr.elements[:4]
    beta = a1 - a2
    if beta == 0:
        raise DegenerateWindow("balance elements are equal (beta = 0)")
    t, v_r, v_s = asg.t, asg.v_r, asg.v_s
    rest = t - v_r - v_s
    b1 = Fraction(c - v_s * as_ - v_r * ar - a2 * rest, beta)
    b2 = Fraction(a1 * rest + v_s * as_ + v_r * ar - c, beta)
    columns = tuple(
        (Fraction(a2 - f, beta), Fraction(f - a1, beta)) for f in arr.free_values()
    )
    particular = ParticularSolution(b1, b2, Fraction(v_r), Fraction(v_s), arr.n)
    return particular, NullBasis(columns, arr.n)


def balance_gaps(arr: Arrangement, asg: Assignment, c: int) -> tuple[int, int]:
    """Scaled distances ``(t1 - b1) * beta`` and ``(t2 - b2) * beta``, expanded form."""
    a1, a2, ar, as_ = arr.elements[:4]
    t, t1, t2, v_r, v_s = asg.t, asg.t1, asg.t2, asg.v_r, asg.v_s
    delta1 = t1 * (a1 - a2) + v_s * (as_ - a2) + v_r * (ar - a2) + a2 * t - c
    delta2 = t2 * (a1 - a2) - v_s * (as_ - a1) - v_r * (ar - a1) - a1 * t + c
    return delta1, delta2


def balance_gaps_grouped(arr: Arrangement, asg: Assignment, c: int) -> tuple[int, int]:
    """Same quantities as :func:`balance_gaps`, grouped around the free-part sums."""
    a1, a2, ar, as_ = arr.elements[:4]
    t, t1, t2, v_r, v_s = asg.t, asg.t1, asg.t2, asg.v_r, asg.v_s
    delta1 = a2 * (t - t1 - v_r - v_s) - (c - t1 * a1 - v_r * ar - v_s * as_)
    delta2 = (c - t2 * a2 - v_r * ar - v_s * as_) - a1 * (t - t2 - v_r - v_s)
    return delta1, delta2


def contribution_table(arr: Arrangement, asg: Assignment, c: int) -> ContributionTable:
    a1, a2 = arr.elements[:2]
    if a1 == a2:
        raise DegenerateWindow("balance elements are equal (beta = 0)")
    delta1, delta2 = balance_gaps(arr, asg, c)
    if delta1 == 0 or delta2 == 0:
        raise DegenerateTargets(f"delta1={delta1}, delta2={delta2}")
    free = arr.free_values()
    d1 = tuple(Fraction(a2 - f, delta1) for f in free)
    d2 = tuple(Fraction(f - a1, delta2) for f in free)
    prod = delta1 * delta2
    d3 = tuple(
        abs(Fraction(delta1 * a1 + delta2 * a2 - f * (delta1 + delta2), prod)) for f in free
    )
    return ContributionTable(delta1, delta2, d1, d2, d3)


def assemble_membership(p: ParticularSolution, basis: NullBasis, selection: Iterable[int]) -> MembershipVector:
    m = list(p.vector())
    for i in selection:
        if not 0 <= i < len(basis.columns):
            raise IndexError(f"free column {i} out of range")
        k1, k2 = basis.columns[i]
        m[0] += k1
        m[1] += k2
        m[i + 4] += 1
    return tuple(m)


def residual(system: LinearSystem, m: Sequence) -> tuple:
    """``matrix @ m - rhs``; all zeros iff *m* solves the system."""
    return tuple(
        sum((Fraction(a) * x for a, x in zip(row, m)), Fraction(0)) - b
        for row, b in zip(system.matrix, system.rhs)
    )

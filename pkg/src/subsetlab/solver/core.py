from __future__ import annotations

import operator
from dataclasses import dataclass, field, fields
from typing import Optional

# origin tag for the fabricated element appended before solving
SENTINEL = -1


def _as_int(x) -> int:
    if isinstance(x, bool):
        raise TypeError(f"expected an integer, got {x!r}")
    return operator.index(x)


@dataclass(frozen=True)
class Instance:
    elements: tuple
    target: int

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(_as_int(x) for x in self.elements))
        object.__setattr__(self, "target", _as_int(self.target))

    @property
    def n(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class Solution:
    """A subset, identified by indices into ``Instance.elements``."""

    indices: tuple
    values: tuple
    sum: int

    @classmethod
    def from_indices(cls, inst: Instance, indices) -> "Solution":
        idx = tuple(sorted(indices))
        values = tuple(inst.elements[i] for i in idx)
        return cls(idx, values, sum(values))

    def __len__(self):
        return len(self.indices)


@dataclass
class SolverConfig:
    d3_lower_inclusive: bool = True
    enable_fabrication: bool = True
    max_exhaustive_n: int = 30
    # "auto" uses the compiled scan when every intermediate fits in int64
    engine: str = "auto"

    def __post_init__(self):
        if self.engine not in ("auto", "kernel", "reference"):
            raise ValueError(f"unknown engine {self.engine!r}")


@dataclass
class SolveStats:
    """Operation counters for one solver call."""

    rotations: int = 0
    partial_calls: int = 0
    windows: int = 0
    constrain_calls: int = 0
    test_calls: int = 0
    column_evals: int = 0
    degenerate_skips: int = 0
    max_test_columns: int = 0

    def add(self, other: "SolveStats") -> None:
        for f in fields(self):
            if f.name == "max_test_columns":
                self.max_test_columns = max(self.max_test_columns, other.max_test_columns)
            else:
                setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))


@dataclass
class SolveResult:
    solution: Optional[Solution]
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def found(self) -> bool:
        return self.solution is not None


def verify_solution(inst: Instance, sol: Optional[Solution]) -> bool:
    if sol is None or not sol.indices:
        return False
    idx = sol.indices
    if len(set(idx)) != len(idx):
        return False
    if any(not isinstance(i, int) or i < 0 or i >= inst.n for i in idx):
        return False
    values = tuple(inst.elements[i] for i in idx)
    if tuple(sol.values) != values:
        return False
    total = sum(values)
    return total == inst.target and sol.sum == total

"""Instance files, random instances, DIMACS CNF input and the 3-SAT reduction."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ReductionError
from .solver.core import Instance


@dataclass(frozen=True)
class GeneratorSpec:
    n: int
    seed: int
    range_bound: int | None = None  # defaults to 2 n^2
    target: int = 0

    @property
    def bound(self) -> int:
        return 2 * self.n * self.n if self.range_bound is None else self.range_bound


def mix_seed(*parts: int) -> int:
    """Derive a 64-bit seed from a master seed and trial coordinates."""
    state = np.random.SeedSequence([int(p) for p in parts]).generate_state(2, dtype=np.uint32)
    return int(state[0]) << 32 | int(state[1])


def random_instance(spec: GeneratorSpec) -> Instance:
    if spec.n < 1:
        raise ValueError("n must be at least 1")
    bound = spec.bound
    if bound <= 0:
        raise ValueError("range_bound must be positive")
    rng = random.Random(spec.seed)
    return Instance(tuple(rng.randint(-bound, bound) for _ in range(spec.n)), spec.target)


# -- instance files ---------------------------------------------------------


def _parse_int(value, field, line=None) -> int:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise ParseError("expected a decimal string", line=line, field=field)
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"not a decimal integer: {value!r}", line=line, field=field) from None


def parse_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    for key in ("elements", "target"):
        if key not in doc:
            raise ParseError("missing field", field=key)
    if not isinstance(doc["elements"], list):
        raise ParseError("expected an array", field="elements")
    elements = tuple(
        _parse_int(v, f"elements[{i}]") for i, v in enumerate(doc["elements"])
    )
    return Instance(elements, _parse_int(doc["target"], "target"))


def write_instance(inst: Instance) -> str:
    doc = {"elements": [str(a) for a in inst.elements], "target": str(inst.target)}
    return json.dumps(doc) + "\n"


# -- CNF --------------------------------------------------------------------


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple  # tuple of 3-tuples of nonzero ints

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(cl) for cl in self.clauses))
        for cl in self.clauses:
            if len(cl) != 3:
                raise ReductionError(f"clause {cl} does not have exactly 3 literals")
            if any(lit == 0 or abs(lit) > self.num_vars for lit in cl):
                raise ReductionError(f"clause {cl} has a literal outside 1..{self.num_vars}")


def parse_cnf(text: str) -> CnfFormula:
    """Read a DIMACS CNF document whose clauses all have three literals."""
    header = None
    clauses = []
    current = []
    current_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise ParseError("duplicate problem line", line=lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"bad problem line {line!r}", line=lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError(f"bad problem line {line!r}", line=lineno) from None
            continue
        if header is None:
            raise ParseError("clause before problem line", line=lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", line=lineno) from None
            if current_line is None:
                current_line = lineno
            if lit == 0:
                if len(current) != 3:
                    raise ParseError(f"clause has {len(current)} literals, expected 3", line=current_line)
                clauses.append(tuple(current))
                current, current_line = [], None
            else:
                if abs(lit) > header[0]:
                    raise ParseError(f"literal {lit} exceeds variable count {header[0]}", line=lineno)
                current.append(lit)
    if header is None:
        raise ParseError("missing problem line")
    if current:
        raise ParseError("unterminated clause", line=current_line)
    if len(clauses) != header[1]:
        raise ParseError(f"header declares {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(header[0], tuple(clauses))


def write_cnf(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.num_vars} {len(formula.clauses)}"]
    lines += [" ".join(str(lit) for lit in cl) + " 0" for cl in formula.clauses]
    return "\n".join(lines) + "\n"


def is_satisfiable(formula: CnfFormula) -> bool:
    """Brute force over all assignments."""
    for bits in itertools.product((False, True), repeat=formula.num_vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in cl) for cl in formula.clauses):
            return True
    return False


def reduce_3sat(formula: CnfFormula) -> Instance:
    """Base-10 digit-vector reduction from 3-SAT to subset sum.

    Digit ``i`` (from the most significant end) belongs to variable ``i``,
    then one digit per clause. Each literal contributes one item with a 1
    in its variable digit and, in each clause digit, the number of times
    that literal occurs in the clause. Each clause adds slack items 1 and 2
    in its digit. The target has 1 in every variable digit and 4 in every
    clause digit; no digit column can exceed 6, so nothing carries.

    A formula without variables maps to the empty instance with target 0,
    which stands for vacuous truth (the empty subset is never a solution).
    """
    for cl in formula.clauses:
        if len(cl) != 3:
            raise ReductionError(f"clause {cl} does not have exactly 3 literals")
    nv, nc = formula.num_vars, len(formula.clauses)
    width = nv + nc

    def digit(pos: int) -> int:
        return 10 ** (width - 1 - pos)

    items = []
    for v in range(1, nv + 1):
        for lit in (v, -v):
            value = digit(v - 1)
            for j, cl in enumerate(formula.clauses):
                value += cl.count(lit) * digit(nv + j)
            items.append(value)
    for j in range(nc):
        items.append(digit(nv + j))
        items.append(2 * digit(nv + j))
    target = sum(digit(i) for i in range(nv)) + sum(4 * digit(nv + j) for j in range(nc))
    return Instance(tuple(items), target)


def random_3cnf(num_vars: int, num_clauses: int, seed: int) -> CnfFormula:
    rng = random.Random(seed)
    clauses = tuple(
        tuple(rng.choice((1, -1)) * rng.randint(1, num_vars) for _ in range(3))
        for _ in range(num_clauses)
    )
    return CnfFormula(num_vars, clauses)


def all_3cnf(max_vars: int = 3, max_clauses: int = 3):
    """Every 3-CNF formula up to literal and clause ordering.

    Clauses are multisets of literals and formulas multisets of clauses,
    for 1..max_vars variables and 0..max_clauses clauses.
    """
    for nv in range(1, max_vars + 1):
        literals = [l for v in range(1, nv + 1) for l in (v, -v)]
        clauses = list(itertools.combinations_with_replacement(literals, 3))
        for k in range(max_clauses + 1):
            for combo in itertools.combinations_with_replacement(clauses, k):
                yield CnfFormula(nv, combo)

"""Seeded accuracy experiments, closed-form sweeps and operation-count probes.

Every trial draws its instance from ``mix_seed(master, n, trial)``, so a
trial's outcome depends only on the configuration and its coordinates and
never on how trials are scheduled across workers.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import CapacityExceeded, ConfigurationError, DegenerateWindow
from .generators import GeneratorSpec, mix_seed, random_instance
from .linsys import (
    Arrangement,
    Assignment,
    balance_gaps,
    balance_gaps_grouped,
    build_system,
    closed_form,
    contribution_table,
    eliminate,
)
from .oracles import DP_RANGE_LIMIT, MAX_EXHAUSTIVE_N, dp_decide, exhaustive_decide
from .solver import Instance, Solution, SolverConfig, SoundnessError, solve, verify_solution

log = logging.getLogger(__name__)

FULL_N_MAX = 20
FULL_TRIALS = 1_000_000
# beyond this many solver calls a sweep is not a desk-scale run
DESK_BUDGET = 10_000 * 14

REPORT_COLUMNS = (
    "n",
    "trials",
    "oracle_yes",
    "solver_yes",
    "agreements",
    "false_neg",
    "false_pos",
    "degenerate_skips",
    "mean_constrain_calls",
)


@dataclass(frozen=True)
class ExperimentConfig:
    n_min: int = 1
    n_max: int = 14
    trials_per_n: int = 10_000
    seed: int = 0
    method: str = "exact"  # exact | approx
    oracle: str = "exhaustive"  # exhaustive | dp
    permutations_per_trial: str = "1"  # "1" | "n"
    d3_lower_inclusive: bool = True
    enable_fabrication: bool = True

    def __post_init__(self):
        if self.method not in ("exact", "approx"):
            raise ConfigurationError(f"unknown method {self.method!r}")
        if self.oracle not in ("exhaustive", "dp"):
            raise ConfigurationError(f"unknown oracle {self.oracle!r}")
        object.__setattr__(self, "permutations_per_trial", str(self.permutations_per_trial))
        if self.permutations_per_trial not in ("1", "n"):
            raise ConfigurationError("permutations_per_trial must be '1' or 'n'")
        if not 1 <= self.n_min <= self.n_max:
            raise ConfigurationError("need 1 <= n_min <= n_max")
        if self.trials_per_n < 0:
            raise ConfigurationError("trials_per_n must be non-negative")

    @property
    def beyond_desk_scale(self) -> bool:
        calls = (self.n_max - self.n_min + 1) * self.trials_per_n
        return calls > DESK_BUDGET or self.n_max > 14

    def solver_config(self) -> SolverConfig:
        return SolverConfig(
            d3_lower_inclusive=self.d3_lower_inclusive,
            enable_fabrication=self.enable_fabrication,
        )


FULL_SCALE = ExperimentConfig(n_min=1, n_max=FULL_N_MAX, trials_per_n=FULL_TRIALS)


@dataclass(frozen=True)
class Counterexample:
    n: int
    trial: int
    seed: int
    instance: Instance
    oracle_witness: Optional[tuple]
    solver_answer: Optional[tuple]
    config: ExperimentConfig

    def to_record(self) -> dict:
        return {
            "n": self.n,
            "trial": self.trial,
            "seed": str(self.seed),
            "elements": [str(a) for a in self.instance.elements],
            "target": str(self.instance.target),
            "oracle_witness": None if self.oracle_witness is None else list(self.oracle_witness),
            "solver_answer": None if self.solver_answer is None else list(self.solver_answer),
            "config": asdict(self.config),
        }

    @classmethod
    def from_record(cls, rec: dict) -> "Counterexample":
        def opt(v):
            return None if v is None else tuple(v)

        return cls(
            n=rec["n"],
            trial=rec["trial"],
            seed=int(rec["seed"]),
            instance=Instance(tuple(int(a) for a in rec["elements"]), int(rec["target"])),
            oracle_witness=opt(rec["oracle_witness"]),
            solver_answer=opt(rec["solver_answer"]),
            config=ExperimentConfig(**rec["config"]),
        )


@dataclass
class ReportRow:
    n: int
    trials: int = 0
    oracle_yes: int = 0
    solver_yes: int = 0
    agreements: int = 0
    false_neg: int = 0
    false_pos: int = 0
    degenerate_skips: int = 0
    constrain_calls: int = 0

    @property
    def mean_constrain_calls(self) -> float:
        return self.constrain_calls / self.trials if self.trials else 0.0

    @property
    def agreement_rate(self) -> float:
        return self.agreements / self.trials if self.trials else 1.0


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    rows: list = field(default_factory=list)
    counterexamples: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def trials(self) -> int:
        return sum(r.trials for r in self.rows)

    @property
    def agreements(self) -> int:
        return sum(r.agreements for r in self.rows)

    @property
    def false_positives(self) -> int:
        return sum(r.false_pos for r in self.rows)

    @property
    def false_negatives(self) -> int:
        return sum(r.false_neg for r in self.rows)

    @property
    def agreement_rate(self) -> float:
        return self.agreements / self.trials if self.trials else 1.0


@dataclass(frozen=True)
class TrialOutcome:
    n: int
    trial: int
    oracle_yes: bool
    solver_yes: bool
    false_pos: bool
    degenerate_skips: int
    constrain_calls: int
    counterexample: Optional[Counterexample]


def trial_instance(cfg: ExperimentConfig, n: int, trial: int) -> tuple[int, Instance]:
    seed = mix_seed(cfg.seed, n, trial)
    return seed, random_instance(GeneratorSpec(n=n, seed=seed))


def _oracle(cfg: ExperimentConfig):
    return exhaustive_decide if cfg.oracle == "exhaustive" else dp_decide


def _solver_answer(cfg: ExperimentConfig, inst: Instance, seed: int):
    """Return (solution or None, verified, degenerate_skips, constrain_calls)."""
    scfg = cfg.solver_config()
    approx = cfg.method == "approx"
    if cfg.permutations_per_trial == "1":
        orders = [list(range(inst.n))]
    else:
        orders = []
        for p in range(inst.n):
            order = list(range(inst.n))
            random.Random(mix_seed(seed, p)).shuffle(order)
            orders.append(order)
    degenerate = calls = 0
    for order in orders:
        permuted = Instance(tuple(inst.elements[i] for i in order), inst.target)
        try:
            result = solve(permuted, scfg, approx=approx)
        except SoundnessError:
            return None, False, degenerate, calls
        degenerate += result.stats.degenerate_skips
        calls += result.stats.constrain_calls
        if result.solution is not None:
            sol = Solution.from_indices(inst, [order[i] for i in result.solution.indices])
            return sol, verify_solution(inst, sol), degenerate, calls
    return None, True, degenerate, calls


def run_trial(cfg: ExperimentConfig, n: int, trial: int) -> TrialOutcome:
    seed, inst = trial_instance(cfg, n, trial)
    verdict = _oracle(cfg)(inst)
    sol, verified, degenerate, calls = _solver_answer(cfg, inst, seed)
    solver_yes = sol is not None or not verified
    false_pos = solver_yes and (not verified or not verdict.satisfiable)
    ce = None
    if solver_yes != verdict.satisfiable or false_pos:
        ce = Counterexample(
            n=n,
            trial=trial,
            seed=seed,
            instance=inst,
            oracle_witness=verdict.witness.indices if verdict.witness else None,
            solver_answer=sol.indices if sol else None,
            config=cfg,
        )
    return TrialOutcome(n, trial, verdict.satisfiable, solver_yes, false_pos, degenerate, calls, ce)


def _run_chunk(args):
    cfg, coords = args
    return [run_trial(cfg, n, trial) for n, trial in coords]


def _check_capacity(cfg: ExperimentConfig) -> None:
    if cfg.oracle == "exhaustive" and cfg.n_max > MAX_EXHAUSTIVE_N:
        raise CapacityExceeded(f"exhaustive oracle limited to n <= {MAX_EXHAUSTIVE_N}")
    if cfg.oracle == "dp":
        bound = 2 * cfg.n_max * cfg.n_max
        if cfg.n_max * bound > DP_RANGE_LIMIT:
            raise CapacityExceeded("DP oracle range guard exceeded for n_max")


def run_accuracy_experiment(
    cfg: ExperimentConfig,
    workers: int = 1,
    counterexample_path: Optional[str | Path] = None,
    chunk_size: int = 200,
) -> ExperimentReport:
    _check_capacity(cfg)
    if cfg.beyond_desk_scale:
        log.warning("configuration %s is beyond desk scale", cfg)
    start = time.perf_counter()
    coords = [(n, k) for n in range(cfg.n_min, cfg.n_max + 1) for k in range(cfg.trials_per_n)]
    chunks = [(cfg, coords[i : i + chunk_size]) for i in range(0, len(coords), chunk_size)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = [o for part in pool.map(_run_chunk, chunks) for o in part]
    else:
        outcomes = [o for chunk in chunks for o in _run_chunk(chunk)]
    report = aggregate(cfg, outcomes)
    report.wall_time = time.perf_counter() - start
    if counterexample_path is not None:
        for ce in report.counterexamples:
            append_counterexample(ce, counterexample_path)
    return report


def aggregate(cfg: ExperimentConfig, outcomes) -> ExperimentReport:
    rows = {n: ReportRow(n) for n in range(cfg.n_min, cfg.n_max + 1)}
    ces = []
    for o in sorted(outcomes, key=lambda o: (o.n, o.trial)):
        row = rows[o.n]
        row.trials += 1
        row.oracle_yes += o.oracle_yes
        row.solver_yes += o.solver_yes
        row.false_pos += o.false_pos
        row.false_neg += o.oracle_yes and not o.solver_yes
        row.agreements += o.oracle_yes == o.solver_yes and not o.false_pos
        row.degenerate_skips += o.degenerate_skips
        row.constrain_calls += o.constrain_calls
        if o.counterexample is not None:
            ces.append(o.counterexample)
    return ExperimentReport(cfg, list(rows.values()), ces)


def replay(ce: Counterexample) -> Counterexample:
    """Re-run a persisted disagreement from its configuration and coordinates."""
    outcome = run_trial(ce.config, ce.n, ce.trial)
    if outcome.counterexample is None:
        raise AssertionError(f"trial (n={ce.n}, trial={ce.trial}) no longer disagrees")
    return outcome.counterexample


# -- persistence ------------------------------------------------------------


def report_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for r in report.rows:
        writer.writerow(
            [
                r.n,
                r.trials,
                r.oracle_yes,
                r.solver_yes,
                r.agreements,
                r.false_neg,
                r.false_pos,
                r.degenerate_skips,
                f"{r.mean_constrain_calls:.6f}",
            ]
        )
    return buf.getvalue()


def write_report(report: ExperimentReport, path: str | Path) -> None:
    path = Path(path)
    try:
        path.write_text(report_csv(report))
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror}") from exc


def append_counterexample(ce: Counterexample, path: str | Path) -> None:
    path = Path(path)
    try:
        with path.open("a") as fh:
            fh.write(json.dumps(ce.to_record(), sort_keys=True) + "\n")
    except OSError as exc:
        raise OSError(f"cannot append counterexample to {path}: {exc.strerror}") from exc


def read_counterexamples(path: str | Path) -> list:
    with Path(path).open() as fh:
        return [Counterexample.from_record(json.loads(line)) for line in fh if line.strip()]


# -- closed-form sweep ------------------------------------------------------


@dataclass
class ClosedFormSummary:
    trials: int = 0
    matches: int = 0
    skipped: int = 0
    identity_checks: int = 0
    first_failure: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.first_failure is None and self.matches == self.trials


def check_configuration(arr: Arrangement, asg: Assignment, c: int) -> Optional[str]:
    """Compare closed forms against elimination for one configuration.

    Returns ``"skipped"`` for a singular window, ``None`` when everything
    agrees, otherwise a description of the first mismatch.
    """
    try:
        ref_p, ref_k = eliminate(build_system(arr, asg, c))
    except DegenerateWindow:
        return "skipped"
    p, k = closed_form(arr, asg, c)
    if (p.b1, p.b2, p.v_r, p.v_s) != (ref_p.b1, ref_p.b2, ref_p.v_r, ref_p.v_s):
        return f"particular solution {p} != {ref_p}"
    if k.columns != ref_k.columns:
        return "null basis mismatch"
    if p.b1 + p.b2 != asg.t - asg.v_r - asg.v_s:
        return "row-2 consistency of particular solution"
    a = arr.elements
    for k1, k2 in k.columns:
        if k1 + k2 != -1:
            return "k1 + k2 != -1"
    for i, (k1, k2) in enumerate(k.columns):
        if a[0] * k1 + a[1] * k2 + a[i + 4] != 0:
            return "homogeneous row 1"
    beta = arr.beta
    d1, d2 = balance_gaps(arr, asg, c)
    if (d1, d2) != balance_gaps_grouped(arr, asg, c):
        return "expanded and grouped gap forms differ"
    if d1 != (asg.t1 - p.b1) * beta or d2 != (asg.t2 - p.b2) * beta:
        return "delta identity"
    if d1 and d2:
        table = contribution_table(arr, asg, c)
        for i, (k1, k2) in enumerate(k.columns):
            if table.d1[i] != k1 * beta / d1 or table.d2[i] != k2 * beta / d2:
                return "table rows vs null basis"
            if table.d3[i] != abs(table.d1[i] - table.d2[i]):
                return "D3 != |D1 - D2|"
    return None


def random_configuration(rng: random.Random, n_range=(5, 12), bound: int = 60):
    n = rng.randint(*n_range)
    arr = Arrangement(tuple(rng.randint(-bound, bound) for _ in range(n)))
    flags = [rng.randint(0, 1) for _ in range(4)]
    asg = Assignment(rng.randint(3, n - 1), *flags)
    c = rng.randint(-bound * n, bound * n)
    return arr, asg, c


def run_closed_form_check(trials: int, seed: int) -> ClosedFormSummary:
    """Draw configurations until *trials* nonsingular ones have been compared."""
    rng = random.Random(seed)
    summary = ClosedFormSummary()
    while summary.trials < trials:
        arr, asg, c = random_configuration(rng)
        outcome = check_configuration(arr, asg, c)
        if outcome == "skipped":
            summary.skipped += 1
            continue
        summary.trials += 1
        if outcome is None:
            summary.matches += 1
            summary.identity_checks += 1
        elif summary.first_failure is None:
            summary.first_failure = {
                "elements": list(arr.elements),
                "assignment": asdict(asg),
                "c": c,
                "reason": outcome,
            }
    return summary


# -- operation-count probe --------------------------------------------------


@dataclass
class ProbeResult:
    n_values: list
    mean_column_evals: list
    mean_constrain_calls: list
    max_test_columns: list
    slope: float


def parity_infeasible_instance(n: int, seed: int) -> Instance:
    """Even elements with an odd target: never satisfiable, so every solve runs the full search."""
    rng = random.Random(seed)
    bound = n * n
    return Instance(tuple(2 * rng.randint(1, bound) for _ in range(n)), 2 * rng.randint(0, bound) + 1)


def loglog_slope(xs, ys) -> float:
    return float(np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)[0])


def complexity_probe(n_values, trials: int, seed: int, approx: bool = False) -> ProbeResult:
    n_values = list(n_values)
    if len(n_values) < 3:
        raise ValueError("need at least 3 sizes to fit a slope")
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ValueError("sizes must be strictly ascending")
    evals, calls, widest = [], [], []
    for n in n_values:
        total_evals = total_calls = cols = 0
        for k in range(trials):
            inst = parity_infeasible_instance(n, mix_seed(seed, n, k))
            stats = solve(inst, approx=approx).stats
            total_evals += stats.column_evals
            total_calls += stats.constrain_calls
            cols = max(cols, stats.max_test_columns)
        evals.append(total_evals / trials)
        calls.append(total_calls / trials)
        widest.append(cols)
    return ProbeResult(n_values, evals, calls, widest, loglog_slope(n_values, evals))

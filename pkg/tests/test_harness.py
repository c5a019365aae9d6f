import random

import pytest

from subsetlab.errors import CapacityExceeded, ConfigurationError
from subsetlab.harness import (
    FULL_SCALE,
    Counterexample,
    ExperimentConfig,
    ExperimentReport,
    append_counterexample,
    check_configuration,
    complexity_probe,
    loglog_slope,
    parity_infeasible_instance,
    read_counterexamples,
    replay,
    report_csv,
    run_accuracy_experiment,
    run_closed_form_check,
    run_trial,
    trial_instance,
)
from subsetlab.linsys import Arrangement, Assignment
from subsetlab.oracles import exhaustive_decide
from subsetlab.solver import Instance


def test_small_sweep_shape():
    cfg = ExperimentConfig(n_min=1, n_max=1, trials_per_n=10, seed=42)
    report = run_accuracy_experiment(cfg)
    assert report.trials == 10 and len(report.rows) == 1
    assert report.false_positives == 0
    assert report.agreements == 10


def test_desk_scale_flag():
    assert FULL_SCALE.beyond_desk_scale
    assert not ExperimentConfig().beyond_desk_scale
    assert ExperimentConfig(n_max=15, trials_per_n=1).beyond_desk_scale


def test_config_validation():
    with pytest.raises(ConfigurationError):
        ExperimentConfig(method="greedy")
    with pytest.raises(ConfigurationError):
        ExperimentConfig(oracle="sat")
    with pytest.raises(ConfigurationError):
        ExperimentConfig(n_min=3, n_max=2)
    with pytest.raises(ConfigurationError):
        ExperimentConfig(permutations_per_trial="2")


def test_capacity_checked_before_running():
    with pytest.raises(CapacityExceeded):
        run_accuracy_experiment(ExperimentConfig(n_min=31, n_max=31, trials_per_n=1))
    with pytest.raises(CapacityExceeded):
        run_accuracy_experiment(ExperimentConfig(n_min=200, n_max=200, trials_per_n=1, oracle="dp"))


def test_trial_instances_are_reproducible():
    cfg = ExperimentConfig(seed=9)
    assert trial_instance(cfg, 6, 17) == trial_instance(cfg, 6, 17)
    assert trial_instance(cfg, 6, 17) != trial_instance(cfg, 6, 18)
    seed, inst = trial_instance(cfg, 6, 17)
    assert inst.n == 6 and inst.target == 0


def test_serial_and_parallel_agree():
    cfg = ExperimentConfig(n_min=1, n_max=7, trials_per_n=20, seed=3, method="approx")
    a = run_accuracy_experiment(cfg)
    b = run_accuracy_experiment(cfg, workers=2, chunk_size=17)
    assert report_csv(a) == report_csv(b)
    assert [c.to_record() for c in a.counterexamples] == [c.to_record() for c in b.counterexamples]


def test_approx_counterexamples_persist_and_replay(tmp_path):
    cfg = ExperimentConfig(n_min=9, n_max=10, trials_per_n=60, seed=0, method="approx")
    path = tmp_path / "ce.jsonl"
    report = run_accuracy_experiment(cfg, counterexample_path=path)
    assert report.counterexamples, "approximation should miss something at n=9..10"
    stored = read_counterexamples(path)
    assert [c.to_record() for c in stored] == [c.to_record() for c in report.counterexamples]
    for ce in stored[:5]:
        again = replay(ce)
        assert again.to_record() == ce.to_record()
        assert exhaustive_decide(ce.instance).satisfiable


def test_replay_refuses_agreeing_trial():
    cfg = ExperimentConfig(n_min=1, n_max=1, trials_per_n=1)
    outcome = run_trial(cfg, 1, 0)
    assert outcome.counterexample is None
    fake = Counterexample(1, 0, 0, Instance((1,), 0), None, None, cfg)
    with pytest.raises(AssertionError):
        replay(fake)


def test_counterexample_round_trip(tmp_path):
    cfg = ExperimentConfig(method="approx", d3_lower_inclusive=False)
    ce = Counterexample(4, 7, 2**63 + 5, Instance((10**25, -3), 1), (0, 1), None, cfg)
    path = tmp_path / "x.jsonl"
    append_counterexample(ce, path)
    append_counterexample(ce, path)
    assert read_counterexamples(path) == [ce, ce]


def test_permutation_mode_is_any_of():
    base = ExperimentConfig(n_min=9, n_max=9, trials_per_n=40, seed=1, method="approx")
    one = run_accuracy_experiment(base)
    many = run_accuracy_experiment(
        ExperimentConfig(n_min=9, n_max=9, trials_per_n=40, seed=1, method="approx", permutations_per_trial="n")
    )
    assert many.false_positives == 0
    assert many.rows[0].oracle_yes == one.rows[0].oracle_yes
    assert many.rows[0].solver_yes >= one.rows[0].solver_yes - 5


def test_csv_layout():
    cfg = ExperimentConfig(n_min=2, n_max=2, trials_per_n=0)
    empty = ExperimentReport(cfg)
    assert report_csv(empty).splitlines() == [
        "n,trials,oracle_yes,solver_yes,agreements,false_neg,false_pos,degenerate_skips,mean_constrain_calls"
    ]
    report = run_accuracy_experiment(ExperimentConfig(n_min=2, n_max=2, trials_per_n=5))
    lines = report_csv(report).splitlines()
    assert len(lines) == 2
    fields = lines[1].split(",")
    assert fields[0] == "2" and fields[1] == "5"
    assert len(fields[-1].split(".")[1]) == 6


def test_write_report_unwritable(tmp_path):
    from subsetlab.harness import write_report

    with pytest.raises(OSError, match="cannot write"):
        write_report(ExperimentReport(ExperimentConfig()), tmp_path / "missing" / "r.csv")


def test_closed_form_sweep():
    summary = run_closed_form_check(1000, 1)
    assert summary.trials == 1000 and summary.matches == 1000
    assert summary.first_failure is None and summary.passed


def test_closed_form_skips_singular_window():
    arr = Arrangement((3, 3, 1, 2, 5))
    assert check_configuration(arr, Assignment(3), 4) == "skipped"


def test_closed_form_flags_nothing_on_random_nonsingular():
    rng = random.Random(5)
    for _ in range(50):
        values = tuple(rng.randint(-9, 9) for _ in range(7))
        if values[0] == values[1]:
            continue
        assert check_configuration(Arrangement(values), Assignment(4, 1, 0, 0, 1), 3) is None


def test_parity_instances_are_infeasible():
    for n in (3, 6, 9):
        inst = parity_infeasible_instance(n, n)
        assert inst.target % 2 == 1 and all(a % 2 == 0 for a in inst.elements)
        assert not exhaustive_decide(inst).satisfiable


def test_probe_validation():
    with pytest.raises(ValueError):
        complexity_probe([6], 1, 0)
    with pytest.raises(ValueError):
        complexity_probe([6, 5, 7], 1, 0)


def test_probe_is_deterministic_and_bounded():
    a = complexity_probe([5, 6, 7], 2, 0)
    b = complexity_probe([5, 6, 7], 2, 0)
    assert a == b
    assert all(w <= n for w, n in zip(a.max_test_columns, a.n_values))
    assert a.mean_column_evals == sorted(a.mean_column_evals)


def test_loglog_slope_recovers_power():
    xs = [2, 4, 8, 16]
    assert loglog_slope(xs, [x**3 for x in xs]) == pytest.approx(3.0)

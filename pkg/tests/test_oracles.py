import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subsetlab.errors import CapacityExceeded
from subsetlab.oracles import dp_decide, exhaustive_decide
from subsetlab.solver import Instance, verify_solution


def brute(inst):
    for r in range(1, inst.n + 1):
        for combo in itertools.combinations(inst.elements, r):
            if sum(combo) == inst.target:
                return True
    return False


@pytest.mark.parametrize("decide", [exhaustive_decide, dp_decide])
def test_examples(decide):
    yes = decide(Instance((1, 2, 3), 6))
    assert yes.satisfiable and yes.witness.values == (1, 2, 3)
    assert not decide(Instance((2, 4), 7)).satisfiable
    assert not decide(Instance((2, 4, 6), 5)).satisfiable
    zero = decide(Instance((-3, 1, 2), 0))
    assert zero.satisfiable and zero.witness.values == (-3, 1, 2)


@pytest.mark.parametrize("decide", [exhaustive_decide, dp_decide])
def test_empty_subset_excluded(decide):
    assert not decide(Instance((5, 7), 0)).satisfiable
    assert not decide(Instance((), 0)).satisfiable


def test_exhaustive_witness_is_first_mask():
    # masks 0b011 (1+2) and 0b100 (3) both reach 3; 0b011 is smaller
    assert exhaustive_decide(Instance((1, 2, 3), 3)).witness.indices == (0, 1)


def test_capacity_guards():
    with pytest.raises(CapacityExceeded):
        exhaustive_decide(Instance(range(31), 5))
    with pytest.raises(CapacityExceeded):
        dp_decide(Instance((10**7, 1), 1))


def test_exhaustive_blocks_above_sixteen():
    rng = random.Random(0)
    values = [2 * rng.randint(1, 1000) for _ in range(20)]
    inst = Instance(values, values[3] + values[18] + values[19])
    v = exhaustive_decide(inst)
    assert v.satisfiable and verify_solution(inst, v.witness)
    assert not exhaustive_decide(Instance(values, 1)).satisfiable


def test_big_integers_fall_back_to_python():
    big = 10**30
    inst = Instance((big, 2 * big, -big, 5), 2 * big + 5)
    v = exhaustive_decide(inst)
    assert v.satisfiable and verify_solution(inst, v.witness)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(-40, 40), min_size=0, max_size=10), st.integers(-100, 100))
def test_oracles_agree_with_brute_force(values, c):
    inst = Instance(values, c)
    expected = brute(inst)
    for decide in (exhaustive_decide, dp_decide):
        verdict = decide(inst)
        assert verdict.satisfiable == expected
        if expected:
            assert verify_solution(inst, verdict.witness)

import pytest
from hypothesis import given, settings, strategies as st

from restartsched.adversaries import GeneralParams, UnitParams, general_lb_instance, unit_lb_instance
from restartsched.engine import simulate
from restartsched.model import Instance, Job
from restartsched.offline import (EmptyInstance, NodeLimitExceeded, NotAPermutation, eval_order,
                                  optimal_wc_max)
from restartsched.policies import POLICIES, make_policy

from conftest import brute_force_opt, brute_force_restart_opt, instances


def test_eval_order_single():
    assert eval_order(Instance.from_tuples([(0.0, 1.0, 1.0)]), [1]) == 1.0


def test_eval_order_general_case2():
    p = GeneralParams.compute()
    inst = general_lb_instance()
    value = eval_order(inst, [1, 2, 3, 4])
    assert value == pytest.approx(1 + p.p4, abs=1e-12)
    assert value == pytest.approx(1 / (p.R1 - 1), abs=1e-9)
    assert value == pytest.approx(2.1479, abs=1e-4)


def test_eval_order_unit_lb_1324():
    assert eval_order(unit_lb_instance(), [1, 3, 2, 4]) == pytest.approx(4.0, abs=1e-12)


@pytest.mark.parametrize("order", [[1, 2], [1, 2, 3, 3], [1, 2, 3, 5], [1, 2, 3, 4, 4]])
def test_eval_order_rejects_non_permutations(order):
    with pytest.raises(NotAPermutation):
        eval_order(unit_lb_instance(), order)


def test_opt_general_case2():
    p = GeneralParams.compute()
    res = optimal_wc_max(general_lb_instance())
    assert res.value == pytest.approx(1 / (p.R1 - 1), abs=1e-9)
    assert res.value == pytest.approx(eval_order(general_lb_instance(), res.order), abs=0)
    assert res.optimal


def test_opt_unit_case2_three_jobs():
    p = UnitParams.compute()
    inst = unit_lb_instance().restricted(lambda j: j.id != 4)
    res = optimal_wc_max(inst)
    assert res.value == pytest.approx(p.case2_r3 + 3, abs=1e-12)
    assert res.value == pytest.approx(3.9377, abs=1e-4)
    assert res.value == brute_force_opt(inst)[0]


def test_opt_two_unit_jobs():
    inst = Instance.from_tuples([(0.0, 1.0, 1.0), (0.5, 1.0, 10.0)])
    res = optimal_wc_max(inst)
    assert res.value == 15.0
    assert res.order == (2, 1)
    assert brute_force_opt(inst) == (15.0, (2, 1))


def test_opt_unit_lb_four_jobs():
    res = optimal_wc_max(unit_lb_instance())
    assert res.value <= 4.0 + 1e-9
    assert res.value == pytest.approx(brute_force_opt(unit_lb_instance())[0], rel=1e-12)


def test_errors():
    with pytest.raises(EmptyInstance):
        optimal_wc_max(Instance([]))
    with pytest.raises(ValueError):
        optimal_wc_max(unit_lb_instance(), node_limit=0)


def test_node_limit():
    inst = Instance.from_tuples([(0.1 * k, 1.0, 1.0 + (k * 7 % 5)) for k in range(9)])
    with pytest.raises(NodeLimitExceeded) as info:
        optimal_wc_max(inst, node_limit=5)
    res = info.value.result
    assert not res.optimal
    assert res.value == pytest.approx(eval_order(inst, res.order), abs=0)
    assert res.value >= optimal_wc_max(inst).value


@settings(max_examples=300, deadline=None)
@given(instances(max_jobs=7))
def test_matches_enumeration(inst):
    res = optimal_wc_max(inst)
    expected, _ = brute_force_opt(inst)
    assert res.value == pytest.approx(expected, rel=1e-12, abs=1e-15)
    assert eval_order(inst, res.order) == res.value
    assert sorted(res.order) == sorted(inst.ids)


@settings(max_examples=200)
@given(instances(max_jobs=6), st.sampled_from(sorted(POLICIES)))
def test_opt_below_every_policy(inst, name):
    assert optimal_wc_max(inst).value <= simulate(inst, make_policy(name)).objective + 1e-9


@settings(max_examples=150, deadline=None)
@given(instances(max_jobs=3, min_proc=0.125))
def test_restarts_and_idling_do_not_beat_permutations(inst):
    assert brute_force_restart_opt(inst) >= optimal_wc_max(inst).value - 1e-12


def test_restart_enumerator_finds_permutation_optimum():
    # the enumeration includes all eager permutation schedules, so it must reach OPT
    inst = Instance([Job(1, 0.0, 1.0, 1.0), Job(2, 0.5, 1.0, 10.0), Job(3, 0.25, 0.5, 3.0)])
    assert brute_force_restart_opt(inst) == pytest.approx(optimal_wc_max(inst).value, abs=1e-12)

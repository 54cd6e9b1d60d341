import pytest
from hypothesis import given, settings, strategies as st

from restartsched.adversaries import GeneralParams, figure1_instance
from restartsched.engine import (CONTINUE, AdversaryError, InterruptAndStart, PolicyError, Start,
                                 simulate, simulate_adaptive)
from restartsched.model import EventKind, Instance, Job, validate_trace
from restartsched.policies import POLICIES, make_policy

from conftest import instances

C, R, I, S = EventKind.COMPLETE, EventKind.RELEASE, EventKind.INTERRUPT, EventKind.START


def actions(trace):
    return [(e.kind, e.job, e.time) for e in trace.without_releases()]


def test_single_job():
    inst = Instance.from_tuples([(0.0, 1.0, 1.0)])
    for name in POLICIES:
        trace = simulate(inst, make_policy(name))
        assert actions(trace) == [(S, 1, 0.0), (C, 1, 1.0)]
        assert trace.objective == 1.0


def test_empty_instance_rejected():
    with pytest.raises(ValueError):
        simulate(Instance([]), make_policy("lw"))


def test_fig1_llw():
    trace = simulate(figure1_instance(), make_policy("llw"))
    got = actions(trace)
    expected = [(S, 1, 0.0), (I, 1, 0.2), (S, 2, 0.2), (C, 2, 1.2), (S, 3, 1.2), (I, 3, 1.4),
                (S, 4, 1.4), (C, 4, 2.4), (S, 3, 2.4), (C, 3, 3.4), (S, 1, 3.4), (C, 1, 4.4)]
    assert [(k, j) for k, j, _ in got] == [(k, j) for k, j, _ in expected]
    assert [t for *_, t in got] == pytest.approx([t for *_, t in expected], abs=1e-9)
    assert trace.completion_order()[1:] == [4, 3, 1]


def test_general_instance_jobs_1_2_under_lw():
    p = GeneralParams.compute()
    inst = Instance([Job(1, 0.0, 1.0, 1.0), Job(2, p.r2, 0.0, p.w2)])
    trace = simulate(inst, make_policy("lw"))
    assert [(k, j) for k, j, _ in actions(trace)] == [(S, 1), (I, 1), (S, 2), (C, 2), (S, 1), (C, 1)]
    times = [t for *_, t in actions(trace)]
    assert times == pytest.approx([0, p.r2, p.r2, p.r2, p.r2, p.r2 + 1], abs=1e-12)
    assert p.r2 == pytest.approx(0.4656, abs=1e-4)
    assert validate_trace(inst, trace).ok


class _OneJob:
    target_ratio = 1.0

    def __init__(self):
        self.done = False

    def observe(self, events, now):
        if self.done:
            return []
        self.done = True
        return [Job(1, 0.0, 1.0, 1.0)]


def test_adaptive_without_adaptivity_matches_simulate():
    inst, trace = simulate_adaptive(_OneJob(), make_policy("llw"))
    assert inst == Instance.from_tuples([(0.0, 1.0, 1.0)])
    assert trace == simulate(inst, make_policy("llw"))


class _Retroactive:
    target_ratio = 1.0

    def __init__(self):
        self.calls = 0

    def observe(self, events, now):
        self.calls += 1
        if self.calls == 1:
            return [Job(1, 0.0, 1.0, 1.0)]
        if now >= 1.0 and self.calls < 100:
            self.calls = 100
            return [Job(2, 0.5, 1.0, 1.0)]
        return []


def test_adversary_causality_enforced():
    with pytest.raises(AdversaryError):
        simulate_adaptive(_Retroactive(), make_policy("lw"))


class _SameInstant:
    """Emits job 2 at the very instant job 1 starts."""

    target_ratio = 1.0

    def __init__(self):
        self.state = 0

    def observe(self, events, now):
        if self.state == 0:
            self.state = 1
            return [Job(1, 0.0, 1.0, 1.0)]
        if self.state == 1 and events and events[-1].kind is S:
            self.state = 2
            return [Job(2, now, 1.0, 5.0)]
        return []


def test_same_instant_emission_is_valid():
    inst, trace = simulate_adaptive(_SameInstant(), make_policy("lw"))
    assert validate_trace(inst, trace).ok
    assert actions(trace)[:3] == [(S, 1, 0.0), (I, 1, 0.0), (S, 2, 0.0)]


class _Scripted:
    name = "scripted"

    def __init__(self, decisions):
        self.decisions = list(decisions)
        self.views = []

    def decide(self, view):
        self.views.append(view)
        return self.decisions.pop(0) if self.decisions else CONTINUE


@pytest.mark.parametrize("decision", [InterruptAndStart(1), Start(7)])
def test_bad_decision_when_idle(decision):
    inst = Instance.from_tuples([(0.0, 1.0, 1.0)])
    with pytest.raises(PolicyError):
        simulate(inst, _Scripted([decision]))


def test_start_while_running_is_rejected():
    inst = Instance.from_tuples([(0.0, 1.0, 1.0), (0.5, 1.0, 1.0)])
    with pytest.raises(PolicyError):
        simulate(inst, _Scripted([Start(1), Start(2)]))


def test_idling_forever_is_rejected():
    inst = Instance.from_tuples([(0.0, 1.0, 1.0)])
    with pytest.raises(PolicyError):
        simulate(inst, _Scripted([]))


def test_simultaneous_releases_are_batched():
    inst = Instance.from_tuples([(0.0, 1.0, 1.0), (0.0, 1.0, 2.0), (0.0, 1.0, 3.0)])
    policy = _Scripted([Start(3), Start(2), Start(1)])
    simulate(inst, policy)
    assert len(policy.views) == 3
    assert len(policy.views[0].waiting) == 3
    assert policy.views[0].running is None


def test_view_hides_future_jobs():
    inst = Instance.from_tuples([(0.0, 1.0, 1.0), (5.0, 1.0, 2.0)])
    policy = _Scripted([Start(1), Start(2)])
    simulate(inst, policy)
    assert [w.id for w in policy.views[0].waiting] == [1]


@settings(max_examples=200)
@given(instances(max_jobs=7), st.sampled_from(sorted(POLICIES)))
def test_traces_validate_and_are_deterministic(inst, name):
    trace = simulate(inst, make_policy(name))
    rep = validate_trace(inst, trace)
    assert rep.ok, rep.violations
    assert simulate(inst, make_policy(name)) == trace


@settings(max_examples=200)
@given(instances(max_jobs=7), st.sampled_from(sorted(POLICIES)))
def test_work_conserving(inst, name):
    trace = simulate(inst, make_policy(name))
    released, done, running = set(), set(), None
    events = trace.events
    for k, e in enumerate(events):
        if e.kind is R:
            released.add(e.job)
        elif e.kind is S:
            running = e.job
        elif e.kind is C:
            done.add(e.job)
            running = None
        elif e.kind is I:
            running = None
        end_of_instant = k + 1 == len(events) or events[k + 1].time > e.time
        if end_of_instant:
            assert running is not None or not (released - done), f"idle at {e.time}"


@settings(max_examples=150)
@given(instances(max_jobs=6), st.sampled_from(sorted(POLICIES)))
def test_online_causality(inst, name):
    full = simulate(inst, make_policy(name))
    times = sorted({j.release for j in inst.jobs})
    for t, t_next in zip(times, times[1:] + [float("inf")]):
        cut = inst.restricted(lambda j: j.release <= t)
        part = simulate(cut, make_policy(name))
        before = [e for e in full.events if e.time < t_next]
        assert [e for e in part.events if e.time < t_next] == before

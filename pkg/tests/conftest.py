import itertools

import numpy as np
from hypothesis import strategies as st

from restartsched.model import EventKind, Instance, Job

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def brute_force_opt(instance: Instance):
    """min over all n! orders, eager starts, written independently of offline.py"""
    best = None
    for order in itertools.permutations(instance.jobs):
        t, obj = 0.0, 0.0
        for j in order:
            t = max(t, j.release) + j.proc
            obj = max(obj, j.weight * t)
        if best is None or obj < best[0]:
            best = (obj, tuple(j.id for j in order))
    return best


def brute_force_restart_opt(instance: Instance) -> float:
    """Best objective over every restart schedule that only acts at release or
    completion times: at each such time continue, idle, interrupt, or start
    any released unfinished job."""
    jobs = list(instance.jobs)
    releases = sorted({j.release for j in jobs})
    best = [float("inf")]

    def go(t, running, done, obj):
        # running: (job, start) or None; done: frozenset of ids
        if len(done) == len(jobs):
            best[0] = min(best[0], obj)
            return
        if obj >= best[0]:
            return
        avail = [j for j in jobs if j.id not in done and j.release <= t
                 and (running is None or j.id != running[0].id)]
        options = [running]  # keep what is running (or keep idling)
        if running is not None:
            options.append(None)  # interrupt and idle
        options += [(j, t) for j in avail]
        for choice in options:
            nxt = [r for r in releases if r > t]
            finish = choice[1] + choice[0].proc if choice is not None else None
            cands = [x for x in (finish, nxt[0] if nxt else None) if x is not None]
            if not cands:
                continue
            t2 = min(cands)
            if finish is not None and finish <= t2:
                j = choice[0]
                go(t2, None, done | {j.id}, max(obj, j.weight * finish))
            else:
                go(t2, choice, done, obj)

    go(0.0, None, frozenset(), 0.0)
    return best[0]


def llw_interrupt_violations(trace, instance, threshold, phase_end, slack=1e-9):
    """Interruptions that LLW must never make."""
    weights = {j.id: j.weight for j in instance.jobs}
    last_start = {}
    bad = []
    events = trace.events
    for k, e in enumerate(events):
        if e.kind is EventKind.START:
            last_start[e.job] = e.time
        elif e.kind is EventKind.INTERRUPT:
            t = last_start[e.job]
            nxt = events[k + 1]
            if t >= threshold - slack:
                bad.append(f"run of {e.job} started {t} >= threshold")
            if not (t < e.time < phase_end(t)):
                bad.append(f"interrupt of {e.job} at {e.time} outside ({t}, {phase_end(t)})")
            if not (nxt.kind is EventKind.START and weights[nxt.job] > weights[e.job]):
                bad.append(f"interrupt of {e.job} not followed by a heavier start")
    return bad


def random_instance(rng: np.random.Generator, n_max: int, unit: bool, release_hi: float = 6.0):
    n = int(rng.integers(1, n_max + 1))
    rows = []
    for _ in range(n):
        p = 1.0 if unit else float(rng.uniform(0.0, 2.0))
        rows.append((float(rng.uniform(0, release_hi)), p, float(rng.uniform(1, 10))))
    return Instance.from_tuples(rows)


@st.composite
def instances(draw, max_jobs=6, unit=None, min_proc=0.0):
    n = draw(st.integers(1, max_jobs))
    is_unit = draw(st.booleans()) if unit is None else unit
    # coarse grid so that ties in release and weight actually occur
    rel = st.integers(0, 40).map(lambda k: k / 8)
    wt = st.integers(1, 40).map(lambda k: k / 4)
    proc = st.just(1.0) if is_unit else st.integers(int(min_proc * 8), 16).map(lambda k: k / 8)
    jobs = [Job(i, draw(rel), draw(proc), draw(wt)) for i in range(1, n + 1)]
    return Instance(jobs)

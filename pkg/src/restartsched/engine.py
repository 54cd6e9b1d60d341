"""Event-driven single-machine simulation with restarts.

Decision points are time 0, release times and completion times. At each one
the engine first records completions, then the batch of releases, and only
then consults the policy once. A zero-length job completes the moment it is
started and the policy is consulted again at the same instant.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Protocol, Sequence

from .model import EventKind, Instance, Job, Trace, TraceEvent, wc_max
from .numerics import DEFAULT_TOL, Tolerance


class PolicyError(RuntimeError):
    """The policy returned a decision that cannot be applied."""


class AdversaryError(RuntimeError):
    """An adversary emitted a job whose release lies in the past."""


@dataclass(frozen=True)
class Continue:
    pass


@dataclass(frozen=True)
class Start:
    job: int


@dataclass(frozen=True)
class InterruptAndStart:
    job: int


CONTINUE = Continue()
OnlineDecision = Continue | Start | InterruptAndStart


@dataclass(frozen=True)
class RunningJob:
    id: int
    weight: float
    start: float


@dataclass(frozen=True)
class WaitingJob:
    id: int
    weight: float
    release: float
    proc: float


@dataclass(frozen=True)
class PolicyView:
    """Everything an online policy is allowed to see at time ``now``."""

    now: float
    running: RunningJob | None
    waiting: tuple[WaitingJob, ...]


class OnlinePolicy(Protocol):
    name: str

    def decide(self, view: PolicyView) -> OnlineDecision: ...


class AdversaryScript(Protocol):
    """Stateful release oracle.

    ``observe`` is called once with an empty trace at time 0 and then after
    every event appended to the trace. It returns jobs to add to the
    instance; each release must be >= ``now``.
    """

    target_ratio: float

    def observe(self, events: Sequence[TraceEvent], now: float) -> list[Job]: ...


class _FixedScript:
    target_ratio = 1.0

    def __init__(self, instance: Instance):
        self._jobs = list(instance.jobs)

    def observe(self, events, now):
        jobs, self._jobs = self._jobs, []
        return jobs


@dataclass
class EngineState:
    now: float = 0.0
    running: tuple[Job, float] | None = None
    waiting: dict[int, Job] = field(default_factory=dict)
    completed: set[int] = field(default_factory=set)


class _Run:
    def __init__(self, adversary, policy, tol):
        self.adversary = adversary
        self.policy = policy
        self.tol = tol
        self.state = EngineState()
        self.events: list[TraceEvent] = []
        self.jobs: dict[int, Job] = {}
        self.pending: list[tuple[float, int]] = []
        self.observe_each_event = not isinstance(adversary, _FixedScript)

    def enqueue(self, jobs):
        now = self.state.now
        for job in jobs:
            if job.id in self.jobs:
                raise AdversaryError(f"job id {job.id} emitted twice")
            if self.tol.time_lt(job.release, now):
                raise AdversaryError(
                    f"job {job.id} released at {job.release!r}, emitted at {now!r}")
            self.jobs[job.id] = job
            heapq.heappush(self.pending, (max(job.release, now), job.id))

    def emit(self, kind, job_id):
        self.events.append(TraceEvent(self.state.now, kind, job_id))
        if self.observe_each_event:
            self.enqueue(self.adversary.observe(self.events, self.state.now))

    def view(self):
        st = self.state
        running = None
        if st.running is not None:
            job, start = st.running
            running = RunningJob(job.id, job.weight, start)
        waiting = tuple(WaitingJob(j.id, j.weight, j.release, j.proc) for j in st.waiting.values())
        return PolicyView(st.now, running, waiting)

    def start(self, job_id):
        st = self.state
        job = st.waiting.pop(job_id)
        st.running = (job, st.now)
        self.emit(EventKind.START, job_id)
        if job.proc == 0:
            st.running = None
            st.completed.add(job_id)
            self.emit(EventKind.COMPLETE, job_id)
            return True
        return False

    def consult(self):
        st = self.state
        while st.waiting:
            decision = self.policy.decide(self.view())
            if isinstance(decision, Continue):
                return
            if st.running is None:
                if not isinstance(decision, Start):
                    raise PolicyError(f"{decision} while the machine is idle")
            elif not isinstance(decision, InterruptAndStart):
                raise PolicyError(f"{decision} while job {st.running[0].id} runs")
            if decision.job not in st.waiting:
                raise PolicyError(f"{decision}: job {decision.job} is not waiting")
            if st.running is not None:
                victim = st.running[0]
                st.running = None
                st.waiting[victim.id] = victim
                self.emit(EventKind.INTERRUPT, victim.id)
            if not self.start(decision.job):
                return

    def run(self):
        st = self.state
        self.enqueue(self.adversary.observe((), 0.0))
        while True:
            finish = None
            if st.running is not None:
                job, started = st.running
                finish = started + job.proc
            nxt = self.pending[0][0] if self.pending else None
            if finish is None and nxt is None:
                break
            st.now = min(t for t in (finish, nxt) if t is not None)
            if finish is not None and finish <= st.now:
                job = st.running[0]
                st.running = None
                st.completed.add(job.id)
                self.emit(EventKind.COMPLETE, job.id)
            while self.pending and self.pending[0][0] <= st.now:
                _, jid = heapq.heappop(self.pending)
                st.waiting[jid] = self.jobs[jid]
                self.emit(EventKind.RELEASE, jid)
            self.consult()
            if st.running is None and st.waiting and not self.pending:
                raise PolicyError(f"policy leaves jobs {sorted(st.waiting)} waiting forever")
        instance = Instance(self.jobs.values())
        events = tuple(self.events)
        return instance, Trace(events, wc_max(events, instance))


def simulate(instance: Instance, policy: OnlinePolicy, tol: Tolerance = DEFAULT_TOL) -> Trace:
    if not len(instance):
        raise ValueError("cannot simulate an empty instance")
    return _Run(_FixedScript(instance), policy, tol).run()[1]


def simulate_adaptive(adversary: AdversaryScript, policy: OnlinePolicy,
                      tol: Tolerance = DEFAULT_TOL) -> tuple[Instance, Trace]:
    return _Run(adversary, policy, tol).run()

"""Jobs, instances, traces and the weighted-makespan objective."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .numerics import DEFAULT_TOL, Tolerance


class MissingCompletion(ValueError):
    pass


@dataclass(frozen=True)
class Job:
    id: int
    release: float
    proc: float
    weight: float

    def __post_init__(self):
        if not self.release >= 0:
            raise ValueError(f"job {self.id}: release must be >= 0, got {self.release!r}")
        if not self.proc >= 0:
            raise ValueError(f"job {self.id}: proc must be >= 0, got {self.proc!r}")
        if not self.weight > 0:
            raise ValueError(f"job {self.id}: weight must be > 0, got {self.weight!r}")


def _job_order(job: Job):
    return (job.release, job.id)


@dataclass(frozen=True)
class Instance:
    jobs: tuple[Job, ...]

    def __init__(self, jobs: Iterable[Job]):
        jobs = tuple(sorted(jobs, key=_job_order))
        ids = [j.id for j in jobs]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate job ids in {ids}")
        object.__setattr__(self, "jobs", jobs)

    @classmethod
    def from_tuples(cls, rows: Iterable[Sequence[float]]) -> "Instance":
        """Build from ``(release, proc, weight)`` rows, ids 1..n in row order."""
        return cls(Job(i, float(r), float(p), float(w)) for i, (r, p, w) in enumerate(rows, 1))

    def __len__(self):
        return len(self.jobs)

    def __iter__(self):
        return iter(self.jobs)

    @property
    def ids(self) -> list[int]:
        return [j.id for j in self.jobs]

    def by_id(self) -> dict[int, Job]:
        return {j.id: j for j in self.jobs}

    def scaled(self, factor: float) -> "Instance":
        return Instance(Job(j.id, j.release, j.proc, j.weight * factor) for j in self.jobs)

    def restricted(self, keep) -> "Instance":
        return Instance(j for j in self.jobs if keep(j))


class EventKind(enum.Enum):
    # value = rank in the canonical order inside one timestamp
    COMPLETE = 0
    RELEASE = 1
    INTERRUPT = 2
    START = 3

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, label: str) -> "EventKind":
        try:
            return cls[label.upper()]
        except KeyError:
            raise ValueError(f"unknown event kind {label!r}") from None


@dataclass(frozen=True)
class TraceEvent:
    time: float
    kind: EventKind
    job: int

    def __str__(self):
        return f"{self.kind.label} {self.job}@{self.time:g}"


@dataclass(frozen=True)
class Trace:
    events: tuple[TraceEvent, ...]
    objective: float

    def without_releases(self) -> list[TraceEvent]:
        return [e for e in self.events if e.kind is not EventKind.RELEASE]

    def interrupts(self) -> list[TraceEvent]:
        return [e for e in self.events if e.kind is EventKind.INTERRUPT]

    def completion_order(self) -> list[int]:
        return [e.job for e in self.events if e.kind is EventKind.COMPLETE]


def completion_times(trace: Trace | Sequence[TraceEvent], jobs: Iterable[int] | None = None) -> dict[int, float]:
    """Time of each job's Complete event.

    When ``jobs`` is given, every listed id must have completed.
    """
    events = trace.events if isinstance(trace, Trace) else trace
    done = {e.job: e.time for e in events if e.kind is EventKind.COMPLETE}
    if jobs is None:
        jobs = {e.job for e in events}
    missing = sorted(set(jobs) - done.keys())
    if missing:
        raise MissingCompletion(f"jobs never complete: {missing}")
    return done


def wc_max(trace: Trace | Sequence[TraceEvent], instance: Instance) -> float:
    done = completion_times(trace, instance.ids)
    return max((j.weight * done[j.id] for j in instance.jobs), default=0.0)


@dataclass(frozen=True)
class Violation:
    index: int  # event index, -1 when the violation is about the trace as a whole
    rule: str
    detail: str = ""

    def __str__(self):
        where = f"event {self.index}" if self.index >= 0 else "trace"
        return f"{where}: {self.rule}" + (f" ({self.detail})" if self.detail else "")


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def add(self, index, rule, detail=""):
        self.violations.append(Violation(index, rule, detail))


def validate_trace(instance: Instance, trace: Trace, tol: Tolerance = DEFAULT_TOL) -> ValidationReport:
    """Check a trace against restart semantics for ``instance``.

    Inside one timestamp the kinds must follow Complete < Release <
    Interrupt < Start. A decision round ends with a Start; a later round at
    the same timestamp (after a zero-length job completes, or after a
    same-instant release) may begin again from Complete.
    """
    rep = ValidationReport()
    jobs = instance.by_id()
    released: set[int] = set()
    completed: set[int] = set()
    restarted: set[int] = set()
    running: tuple[int, float] | None = None
    overdue = None
    prev: TraceEvent | None = None

    for i, ev in enumerate(trace.events):
        if ev.time < 0:
            rep.add(i, "negative time", str(ev))
        if ev.job not in jobs:
            rep.add(i, "unknown job", str(ev))
            continue
        job = jobs[ev.job]
        if prev is not None:
            if ev.time < prev.time:
                rep.add(i, "time goes backwards", f"{prev} then {ev}")
            elif (ev.time == prev.time and ev.kind.value < prev.kind.value
                  and prev.kind is not EventKind.START):
                rep.add(i, "event order within timestamp", f"{prev} then {ev}")
        prev = ev

        # a running job whose processing time has elapsed must have completed
        if running is not None and running != overdue and not (
                ev.kind is EventKind.COMPLETE and ev.job == running[0]):
            rid, rstart = running
            if tol.time_lt(rstart + jobs[rid].proc, ev.time):
                rep.add(i, "ran past its processing time", f"job {rid} started {rstart:g}")
                overdue = running

        if ev.kind is EventKind.RELEASE:
            if ev.job in released:
                rep.add(i, "duplicate release", str(ev))
            if not tol.time_eq(ev.time, job.release):
                rep.add(i, "release time mismatch", f"{ev} vs r={job.release:g}")
            released.add(ev.job)
        elif ev.kind is EventKind.START:
            if ev.job not in released or tol.time_lt(ev.time, job.release):
                rep.add(i, "started before release", str(ev))
            if ev.job in completed:
                rep.add(i, "started after completion", str(ev))
            if running is not None:
                rep.add(i, "machine busy", f"{ev} while job {running[0]} runs")
            if running is not None and running[0] == ev.job:
                continue
            running = (ev.job, ev.time)
        elif ev.kind is EventKind.INTERRUPT:
            if running is None or running[0] != ev.job:
                rep.add(i, "interrupt of a job that is not running", str(ev))
                continue
            restarted.add(ev.job)
            running = None
        else:
            if ev.job in completed:
                rep.add(i, "duplicate completion", str(ev))
            if running is None or running[0] != ev.job:
                rep.add(i, "completion of a job that is not running", str(ev))
            else:
                ran = ev.time - running[1]
                if not tol.time_eq(ran, job.proc):
                    rule = ("work lost on restart" if ran < job.proc and ev.job in restarted
                            else "completion time mismatch")
                    rep.add(i, rule, f"ran {ran:g} of p={job.proc:g}")
                running = None
            completed.add(ev.job)

    if running is not None:
        rep.add(-1, "trace ends with a running job", f"job {running[0]}")
    for jid in sorted(jobs.keys() - released):
        rep.add(-1, "missing release", f"job {jid}")
    for jid in sorted(jobs.keys() - completed):
        rep.add(-1, "missing completion", f"job {jid}")
    if not (jobs.keys() - completed):
        obj = wc_max(trace, instance)
        if abs(obj - trace.objective) > tol.eps_weight * max(1.0, abs(obj)):
            rep.add(-1, "objective mismatch", f"recorded {trace.objective!r}, actual {obj!r}")
    return rep

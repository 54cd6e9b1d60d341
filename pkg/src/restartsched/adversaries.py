"""Adaptive lower-bound adversaries and fixed instance generators.

All numeric parameters derive from the cubic roots in ``numerics``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .model import EventKind, Instance, Job, TraceEvent
from .numerics import Kind, llw_threshold, ratio_constant


class UnknownFamily(KeyError):
    pass


@dataclass(frozen=True)
class GeneralParams:
    """Job data of the general (arbitrary sizes) lower bound."""

    R1: float
    r2: float  # release of the zero-length heavy job
    w2: float
    decision_time: float  # release of jobs 3 and 4
    w3: float
    w4: float
    p4: float

    @classmethod
    def compute(cls) -> "GeneralParams":
        R1 = ratio_constant(Kind.R1).value
        heavy = 1 / (R1 - 1)
        return cls(R1=R1, r2=1 / (R1 * (R1 - 1)) - 1, w2=heavy, decision_time=1.0,
                   w3=heavy, w4=1.0, p4=heavy - 1)


@dataclass(frozen=True)
class UnitParams:
    """Job data of the unit-size lower bound."""

    R2: float
    r2: float
    w2: float
    case1_r3: float
    case1_w3: float
    case2_r3: float
    case2_w3: float
    r4: float
    w4: float

    @classmethod
    def compute(cls) -> "UnitParams":
        R2 = ratio_constant(Kind.R2).value
        r2 = 3 / R2 - 2
        return cls(R2=R2, r2=r2, w2=4 / 3,
                   case1_r3=1 + r2, case1_w3=(3 + r2) / (2 + r2),
                   case2_r3=6 / R2**2 - 3, case2_w3=2.0,
                   r4=3.0, w4=1.0)


def _status(events: Sequence[TraceEvent]):
    started, completed, interrupted = set(), {}, set()
    for e in events:
        if e.kind is EventKind.START:
            started.add(e.job)
        elif e.kind is EventKind.COMPLETE:
            completed[e.job] = e.time
        elif e.kind is EventKind.INTERRUPT:
            interrupted.add(e.job)
    return started, completed, interrupted


class GeneralLowerBound:
    """Forces ratio R1 ~ 1.4656 on any online algorithm (arbitrary sizes).

    Job 1 (p=1, w=1) at 0, job 2 (p=0, w=1/(R1-1)) at R1-1. If job 2 has
    completed by time 1, jobs 3 (p=0) and 4 (p=1/(R1-1)-1) arrive at time 1;
    otherwise nothing more arrives.
    """

    family = "general"

    def __init__(self):
        self.params = GeneralParams.compute()
        self.target_ratio = self.params.R1
        self.case: int | None = None
        self._emitted_initial = False

    def observe(self, events: Sequence[TraceEvent], now: float) -> list[Job]:
        p = self.params
        if not self._emitted_initial:
            self._emitted_initial = True
            return [Job(1, 0.0, 1.0, 1.0), Job(2, p.r2, 0.0, p.w2)]
        if self.case is not None:
            return []
        _, completed, _ = _status(events)
        if 2 in completed and completed[2] <= p.decision_time:
            self.case = 2
            return [Job(3, p.decision_time, 0.0, p.w3), Job(4, p.decision_time, p.p4, p.w4)]
        # job 1 finished first, or time 1 passed with job 2 still open
        if 1 in completed or now > p.decision_time:
            self.case = 1
        return []


class UnitLowerBound:
    """Forces ratio R2 ~ 1.2344 on any online algorithm (unit sizes).

    Job 1 (w=1) at 0 and job 2 (w=4/3) at 3/R2-2. Case 2 is entered as soon
    as the algorithm commits to serving job 2 while job 1 is unfinished, as
    long as that happens by 6/R2^2-3: job 3 (w=2) then arrives at that time,
    and if job 3 later completes before job 2, job 4 (w=1) arrives at 3.
    Case 1 is entered when job 1 completes first: job 3 (w=(3+r2)/(2+r2))
    arrives at 1+r2.

    Neither job can have completed by 6/R2^2-3, so "serving job 2 before job
    1" is read off the current commitment rather than from completions.
    """

    family = "unit"

    def __init__(self):
        self.params = UnitParams.compute()
        self.target_ratio = self.params.R2
        self.case: int | None = None
        self._emitted_initial = False
        self._job4 = False

    def observe(self, events: Sequence[TraceEvent], now: float) -> list[Job]:
        p = self.params
        if not self._emitted_initial:
            self._emitted_initial = True
            return [Job(1, 0.0, 1.0, 1.0), Job(2, p.r2, 1.0, p.w2)]
        started, completed, _ = _status(events)
        if self.case is None:
            if 2 in started and 1 not in completed and now <= p.case2_r3:
                self.case = 2
                return [Job(3, p.case2_r3, 1.0, p.case2_w3)]
            if 1 in completed and 2 not in completed:
                self.case = 1
                return [Job(3, max(p.case1_r3, now), 1.0, p.case1_w3)]
            return []
        if self.case == 2 and not self._job4 and 3 in completed and 2 not in completed:
            self._job4 = True
            return [Job(4, max(p.r4, now), 1.0, p.w4)]
        return []


def general_lb_adversary() -> GeneralLowerBound:
    return GeneralLowerBound()


def unit_lb_adversary() -> UnitLowerBound:
    return UnitLowerBound()


ADVERSARIES: dict[str, Callable[[], object]] = {
    "general": general_lb_adversary,
    "unit": unit_lb_adversary,
}


def make_adversary(family: str):
    try:
        return ADVERSARIES[family]()
    except KeyError:
        raise UnknownFamily(f"unknown adversary family {family!r}; "
                            f"choose from {sorted(ADVERSARIES)}") from None


def tightness_instance(eps: float, heavy_weight: float, R: float | None = None) -> Instance:
    """A unit job starting exactly at the no-interrupt threshold, then a heavier
    unit job ``eps`` later."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    if not heavy_weight >= 1:
        raise ValueError("heavy_weight must be >= 1")
    s = llw_threshold(R)
    return Instance([Job(1, s, 1.0, 1.0), Job(2, s + eps, 1.0, float(heavy_weight))])


def tightness_closed_form(eps: float, heavy_weight: float, R: float | None = None) -> float:
    """LLW/OPT on ``tightness_instance`` for heavy_weight > 1."""
    s = llw_threshold(R)
    M = heavy_weight
    return M * (s + 2) / max(M * (s + 1 + eps), s + 2 + eps)


def figure1_instance() -> Instance:
    """Four unit jobs with (release, weight) (0,1), (0.2,1.1), (0.7,1.6), (1.4,2.3)."""
    return Instance.from_tuples([(0.0, 1.0, 1.0), (0.2, 1.0, 1.1), (0.7, 1.0, 1.6), (1.4, 1.0, 2.3)])


def unit_lb_instance() -> Instance:
    """Realized four-job instance of the unit lower bound when job 3 overtakes job 2."""
    p = UnitParams.compute()
    return Instance([Job(1, 0.0, 1.0, 1.0), Job(2, p.r2, 1.0, p.w2),
                     Job(3, p.case2_r3, 1.0, p.case2_w3), Job(4, p.r4, 1.0, p.w4)])


def general_lb_instance() -> Instance:
    """Realized four-job instance of the general lower bound when job 2 runs first."""
    p = GeneralParams.compute()
    return Instance([Job(1, 0.0, 1.0, 1.0), Job(2, p.r2, 0.0, p.w2),
                     Job(3, p.decision_time, 0.0, p.w3), Job(4, p.decision_time, p.p4, p.w4)])

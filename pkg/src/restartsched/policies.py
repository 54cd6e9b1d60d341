"""Largest-Weight online policies.

``lw``        LW with interruptions: a strictly heavier arrival preempts.
``lw-nointr`` LW without interruptions: a started job always runs to the end.
``llw``       Limited LW: a run started at t < (2-R)/(R-1) may be preempted by a
              strictly heavier arrival only inside the open window
              (t, (t+2)/R - 1); any other run is never preempted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .engine import CONTINUE, InterruptAndStart, OnlineDecision, PolicyView, Start, WaitingJob
from .numerics import DEFAULT_TOL, Tolerance, llw_ratio, llw_threshold


class UnknownPolicy(KeyError):
    pass


def phase_end(t: float, R: float | None = None) -> float:
    """End of the LW-phase of a run started at ``t``."""
    if R is None:
        R = llw_ratio()
    return (t + 2) / R - 1


def heaviest(waiting: tuple[WaitingJob, ...], tol: Tolerance = DEFAULT_TOL) -> WaitingJob:
    """Maximum-weight waiting job; near-ties go to the earliest release, then smallest id."""
    top = max(j.weight for j in waiting)
    return min((j for j in waiting if j.weight >= top - tol.eps_weight),
               key=lambda j: (j.release, j.id))


class LWPolicy:
    def __init__(self, interruptions: bool = True, tol: Tolerance = DEFAULT_TOL):
        self.interruptions = interruptions
        self.tol = tol
        self.name = "lw" if interruptions else "lw-nointr"

    def may_interrupt(self, view: PolicyView) -> bool:
        return self.interruptions

    def decide(self, view: PolicyView) -> OnlineDecision:
        if not view.waiting:
            return CONTINUE
        best = heaviest(view.waiting, self.tol)
        if view.running is None:
            return Start(best.id)
        if (self.tol.weight_gt(best.weight, view.running.weight)
                and self.may_interrupt(view)):
            return InterruptAndStart(best.id)
        return CONTINUE


def lw_policy(interruptions: bool = True, tol: Tolerance = DEFAULT_TOL) -> LWPolicy:
    return LWPolicy(interruptions, tol)


@dataclass(frozen=True)
class PhaseActive:
    phase_start: float
    phase_end: float


@dataclass(frozen=True)
class Locked:
    pass


@dataclass
class LlwState:
    R: float
    threshold: float
    mode: PhaseActive | Locked | None = None  # None while idle
    run: tuple[int, float] | None = None  # (job id, last start) the mode refers to


class LLWPolicy(LWPolicy):
    def __init__(self, R: float | None = None, tol: Tolerance = DEFAULT_TOL):
        super().__init__(True, tol)
        self.name = "llw"
        R = llw_ratio() if R is None else R
        self.state = LlwState(R, llw_threshold(R))

    def _refresh(self, view: PolicyView):
        st, tol = self.state, self.tol
        running = view.running
        if running is None:
            st.mode, st.run = None, None
            return
        run = (running.id, running.start)
        if st.run != run:
            st.run = run
            t = running.start
            if tol.time_lt(t, st.threshold):
                st.mode = PhaseActive(t, phase_end(t, st.R))
            else:
                st.mode = Locked()
        # the window is open on the right: reaching t' locks the run for good
        if isinstance(st.mode, PhaseActive) and not tol.time_lt(view.now, st.mode.phase_end):
            st.mode = Locked()

    def may_interrupt(self, view: PolicyView) -> bool:
        mode = self.state.mode
        return (isinstance(mode, PhaseActive)
                and self.tol.time_lt(mode.phase_start, view.now)
                and self.tol.time_lt(view.now, mode.phase_end))

    def decide(self, view: PolicyView) -> OnlineDecision:
        self._refresh(view)
        return super().decide(view)


def llw_policy(R: float | None = None, tol: Tolerance = DEFAULT_TOL) -> LLWPolicy:
    return LLWPolicy(R, tol)


POLICIES: dict[str, Callable[[], LWPolicy]] = {
    "lw": lambda: lw_policy(True),
    "lw-nointr": lambda: lw_policy(False),
    "llw": llw_policy,
}


def make_policy(name: str) -> LWPolicy:
    """Fresh policy instance for one simulation."""
    try:
        return POLICIES[name]()
    except KeyError:
        raise UnknownPolicy(f"unknown policy {name!r}; choose from {sorted(POLICIES)}") from None

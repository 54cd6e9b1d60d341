"""Exact offline optimum of the weighted makespan with release dates.

Offline there is nothing to gain from restarts or deliberate idling. Take
any feasible schedule and look at the final, completed run of each job:

* every earlier, interrupted run of a job is wasted work; deleting it only
  frees machine time, so no completion gets later;
* with the wasted runs gone, shifting each completed run as early as its
  release and its predecessor allow again makes no completion later.

The result is the eager schedule of the order in which the jobs complete,
so the minimum over permutations with eager starts is the optimum. The
search below is a depth-first branch-and-bound over those permutations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .model import Instance


class NotAPermutation(ValueError):
    pass


class EmptyInstance(ValueError):
    pass


@dataclass(frozen=True)
class OptResult:
    value: float
    order: tuple[int, ...]
    explored: int
    optimal: bool = True


class NodeLimitExceeded(RuntimeError):
    """Search budget exhausted; ``result`` holds the best order found so far."""

    def __init__(self, result: OptResult):
        super().__init__(f"node limit reached after {result.explored} nodes; "
                         f"best value so far {result.value!r}")
        self.result = result


DEFAULT_NODE_LIMIT = 10**7


def eval_order(instance: Instance, order: Sequence[int]) -> float:
    """Weighted makespan of processing ``order`` with eager starts."""
    jobs = instance.by_id()
    if sorted(order) != sorted(jobs) or len(set(order)) != len(order):
        raise NotAPermutation(f"{list(order)} is not a permutation of {sorted(jobs)}")
    t = 0.0
    best = 0.0
    for jid in order:
        j = jobs[jid]
        t = max(t, j.release) + j.proc
        best = max(best, j.weight * t)
    return best


def heaviest_first(instance: Instance) -> list[int]:
    return [j.id for j in sorted(instance.jobs, key=lambda j: (-j.weight, j.release, j.id))]


def optimal_wc_max(instance: Instance, node_limit: int = DEFAULT_NODE_LIMIT) -> OptResult:
    """Minimum weighted makespan over all job orders (exact)."""
    n = len(instance)
    if n == 0:
        raise EmptyInstance("no jobs")
    if node_limit <= 0:
        raise ValueError("node_limit must be positive")

    # children are tried heaviest first so good incumbents appear early
    jobs = sorted(instance.jobs, key=lambda j: (-j.weight, j.release, j.id))
    rel = [j.release for j in jobs]
    proc = [j.proc for j in jobs]
    wt = [j.weight for j in jobs]
    ids = [j.id for j in jobs]

    start = list(range(n))
    best_val = eval_order(instance, [ids[i] for i in start])
    best = [best_val, tuple(start)]
    explored = 0
    path: list[int] = []

    def bound(t, partial, remaining):
        # each remaining job ends no earlier than max(t, r) + p; the job run
        # last ends no earlier than max(t, min r) + total p
        lb = partial
        total = 0.0
        min_r = float("inf")
        min_w = float("inf")
        for k in remaining:
            c = (rel[k] if rel[k] > t else t) + proc[k]
            if wt[k] * c > lb:
                lb = wt[k] * c
            total += proc[k]
            if rel[k] < min_r:
                min_r = rel[k]
            if wt[k] < min_w:
                min_w = wt[k]
        tail = min_w * ((min_r if min_r > t else t) + total)
        return tail if tail > lb else lb

    def dfs(t, partial, remaining):
        nonlocal explored
        explored += 1
        if explored > node_limit:
            raise _Abort
        if not remaining:
            if partial < best[0]:
                best[0] = partial
                best[1] = tuple(path)
            return
        if bound(t, partial, remaining) >= best[0]:
            return
        for idx, k in enumerate(remaining):
            c = (rel[k] if rel[k] > t else t) + proc[k]
            val = wt[k] * c
            if val < partial:
                val = partial
            if val >= best[0]:
                continue
            path.append(k)
            dfs(c, val, remaining[:idx] + remaining[idx + 1:])
            path.pop()

    try:
        dfs(0.0, 0.0, start)
    except _Abort:
        result = OptResult(best[0], tuple(ids[i] for i in best[1]), explored, optimal=False)
        raise NodeLimitExceeded(result) from None
    return OptResult(best[0], tuple(ids[i] for i in best[1]), explored)


class _Abort(Exception):
    pass


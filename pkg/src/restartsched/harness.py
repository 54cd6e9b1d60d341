"""Ratio measurements: fuzzing, adversary runs and constant checks."""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .adversaries import make_adversary
from .engine import simulate, simulate_adaptive
from .io import write_instance
from .model import Instance, Job, Trace, validate_trace
from .numerics import DEFAULT_TOL, Kind, cubic_residual, llw_ratio, llw_threshold, ratio_constant
from .offline import optimal_wc_max
from .policies import POLICIES, UnknownPolicy, make_policy, phase_end


class ConfigError(ValueError):
    pass


def ratio(alg: float, opt: float) -> float:
    if opt > 0:
        return alg / opt
    return 1.0 if alg <= 0 else math.inf


@dataclass(frozen=True)
class FuzzConfig:
    count: int
    n_max: int
    unit: bool = True
    weight_range: tuple[float, float] = (1.0, 10.0)
    release_range: tuple[float, float] = (0.0, 8.0)
    seed: int = 0
    policy: str = "llw"
    ratio_bound: float | None = None  # defaults to R

    def validate(self) -> None:
        if self.count < 1:
            raise ConfigError("count must be >= 1")
        if not 1 <= self.n_max <= 8:
            raise ConfigError("n_max must lie in [1, 8]")
        for name in ("weight_range", "release_range"):
            lo, hi = getattr(self, name)
            if not lo <= hi:
                raise ConfigError(f"{name}: lo must be <= hi")
        if self.weight_range[0] <= 0:
            raise ConfigError("weights must be positive")
        if self.release_range[0] < 0:
            raise ConfigError("releases must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.policy not in POLICIES:
            raise ConfigError(f"unknown policy {self.policy!r}")

    @property
    def bound(self) -> float:
        return llw_ratio() if self.ratio_bound is None else self.ratio_bound


def instance_seed(seed: int, index: int) -> int:
    """64-bit seed of the ``index``-th fuzz instance; independent of batching."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)[0])


def random_instance(config: FuzzConfig, sub_seed: int) -> Instance:
    rng = np.random.default_rng(sub_seed)
    n = int(rng.integers(1, config.n_max + 1))
    releases = rng.uniform(*config.release_range, size=n)
    weights = rng.uniform(*config.weight_range, size=n)
    procs = np.ones(n) if config.unit else rng.uniform(0.0, 2.0, size=n)
    return Instance(Job(i + 1, float(r), float(p), float(w))
                    for i, (r, p, w) in enumerate(zip(releases, procs, weights)))


HIST_WIDTH = 0.01


@dataclass
class FuzzReport:
    max_ratio: float = 0.0
    argmax_index: int = -1
    argmax_seed: int = -1
    argmax_instance: Instance | None = None
    violations: int = 0
    violating: list[tuple[int, int, float]] = field(default_factory=list)
    invalid_traces: int = 0
    histogram: Counter = field(default_factory=Counter)  # bin index -> count
    # (index, instance seed, n, alg, opt, ratio)
    rows: list[tuple[int, int, int, float, float, float]] = field(default_factory=list)
    count: int = 0

    def merge(self, other: "FuzzReport") -> "FuzzReport":
        """Combine two partial reports; associative and commutative."""
        if not other.count:
            return self
        if not self.count:
            return other
        best = min((self, other), key=lambda r: (-r.max_ratio, r.argmax_index))
        return FuzzReport(max_ratio=best.max_ratio, argmax_index=best.argmax_index,
                          argmax_seed=best.argmax_seed, argmax_instance=best.argmax_instance,
                          violations=self.violations + other.violations,
                          violating=sorted(self.violating + other.violating),
                          invalid_traces=self.invalid_traces + other.invalid_traces,
                          histogram=self.histogram + other.histogram,
                          rows=sorted(self.rows + other.rows),
                          count=self.count + other.count)

    def histogram_lines(self) -> list[str]:
        lines = []
        for b in sorted(self.histogram):
            lo = 1 + b * HIST_WIDTH
            lines.append(f"[{lo:.2f}, {lo + HIST_WIDTH:.2f})  {self.histogram[b]}")
        return lines


def _fuzz_range(config: FuzzConfig, lo: int, hi: int, dump_dir: str | None = None) -> FuzzReport:
    rep = FuzzReport()
    bound = config.bound
    for index in range(lo, hi):
        sub = instance_seed(config.seed, index)
        inst = random_instance(config, sub)
        trace = simulate(inst, make_policy(config.policy))
        opt = optimal_wc_max(inst).value
        r = ratio(trace.objective, opt)
        rep.count += 1
        rep.rows.append((index, sub, len(inst), trace.objective, opt, r))
        rep.histogram[int(math.floor((r - 1) / HIST_WIDTH)) if math.isfinite(r) else -1] += 1
        if rep.argmax_index < 0 or r > rep.max_ratio:
            rep.max_ratio, rep.argmax_index, rep.argmax_seed, rep.argmax_instance = r, index, sub, inst
        if not validate_trace(inst, trace).ok:
            rep.invalid_traces += 1
        if r > bound + DEFAULT_TOL.eps_ratio:
            rep.violations += 1
            rep.violating.append((index, sub, r))
            if dump_dir is not None:
                Path(dump_dir).mkdir(parents=True, exist_ok=True)
                write_instance(inst, Path(dump_dir) / f"violation_{index}_{sub}.json")
    return rep


def fuzz(config: FuzzConfig, workers: int = 1, dump_dir: str | None = None,
         chunk: int = 2000) -> FuzzReport:
    """Random instances under ``config.policy``, each measured against the exact optimum.

    Instance ``i`` depends only on ``(seed, i)``, so the report is the same for
    any number of workers.
    """
    config.validate()
    bounds = [(lo, min(lo + chunk, config.count)) for lo in range(0, config.count, chunk)]
    if workers <= 1:
        parts = [_fuzz_range(config, lo, hi, dump_dir) for lo, hi in bounds]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_fuzz_range, [config] * len(bounds),
                                  [b[0] for b in bounds], [b[1] for b in bounds],
                                  [dump_dir] * len(bounds)))
    report = parts[0]
    for part in parts[1:]:
        report = report.merge(part)
    return report


@dataclass(frozen=True)
class AdversaryRecord:
    policy: str
    family: str
    alg: float
    opt: float
    ratio: float
    target: float
    instance: Instance
    trace: Trace
    opt_order: tuple[int, ...]


def adversary_report(policy: str, family: str) -> AdversaryRecord:
    if policy not in POLICIES:
        raise UnknownPolicy(f"unknown policy {policy!r}")
    adversary = make_adversary(family)
    instance, trace = simulate_adaptive(adversary, make_policy(policy))
    opt = optimal_wc_max(instance)
    return AdversaryRecord(policy, family, trace.objective, opt.value,
                           ratio(trace.objective, opt.value), adversary.target_ratio,
                           instance, trace, opt.order)


RATIO_RANGES = {Kind.R: (1.3097, 1.3099), Kind.R1: (1.4655, 1.4657), Kind.R2: (1.2343, 1.2345)}
IDENTITY_TOL = 1e-9


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    error: float
    passed: bool


def verify_constants(tol: float = 1e-12) -> list[Check]:
    """Residual of each ratio constant against ``tol`` plus derived identities."""
    checks = []
    for kind, (lo, hi) in RATIO_RANGES.items():
        c = ratio_constant(kind)
        res = cubic_residual(kind, c.value)
        checks.append(Check(f"{kind.value} cubic residual", c.value, res, abs(res) <= tol))
        checks.append(Check(f"{kind.value} in [{lo}, {hi}]", c.value, 0.0, lo <= c.value <= hi))
    R1 = ratio_constant(Kind.R1).value
    r2 = 1 / (R1 * (R1 - 1)) - 1
    checks.append(Check("general r2 = R1 - 1", r2, r2 - (R1 - 1), abs(r2 - (R1 - 1)) <= IDENTITY_TOL))
    s = llw_threshold()
    fp = phase_end(s) - s
    checks.append(Check("phase end fixed point at threshold", s, fp, abs(fp) <= IDENTITY_TOL))
    checks.append(Check("threshold in [2.2278, 2.2282]", s, 0.0, 2.2278 <= s <= 2.2282))
    return checks

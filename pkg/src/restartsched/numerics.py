"""Algebraic constants of the restart scheduling problem and the shared
floating-point comparison policy.

Three cubics define the ratios used throughout the package:

    R   : 3x^3 - 2x^2 - x - 2 = 0   (competitive ratio of LLW)
    R1  :  x^3 -  x^2     - 1 = 0   (general lower bound)
    R2  : 4x^3 -  x^2     - 6 = 0   (unit-size lower bound)
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass
from fractions import Fraction


class NoSignChange(ValueError):
    pass


class BadBracket(ValueError):
    pass


class ConvergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Tolerance:
    """Absolute slacks used for every time, weight and ratio comparison.

    ``lt(a, b)`` reads "a is strictly less than b", i.e. ``a < b - eps``.
    """

    eps_time: float = 1e-9
    eps_weight: float = 1e-9
    eps_ratio: float = 1e-9

    def __post_init__(self):
        if min(self.eps_time, self.eps_weight, self.eps_ratio) <= 0:
            raise ValueError("tolerances must be strictly positive")

    def time_lt(self, a: float, b: float) -> bool:
        return a < b - self.eps_time

    def time_eq(self, a: float, b: float) -> bool:
        return abs(a - b) <= self.eps_time

    def weight_gt(self, a: float, b: float) -> bool:
        return a > b + self.eps_weight


DEFAULT_TOL = Tolerance()


def _cubic(coeffs, x):
    a3, a2, a1, a0 = coeffs
    return ((a3 * x + a2) * x + a1) * x + a0


def _dcubic(coeffs, x):
    a3, a2, a1, _ = coeffs
    return (3 * a3 * x + 2 * a2) * x + a1


def find_cubic_root(a3: float, a2: float, a1: float, a0: float,
                    lo: float, hi: float, tol: float = 1e-12,
                    max_iter: int = 400) -> float:
    """Root of ``a3 x^3 + a2 x^2 + a1 x + a0`` inside ``[lo, hi]``.

    Safeguarded Newton: each step either stays strictly inside the current
    sign-change bracket or is replaced by a bisection step, so the result
    never leaves ``[lo, hi]`` and the sequence of iterates is deterministic.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not lo < hi:
        raise BadBracket(f"lo={lo!r} must be < hi={hi!r}")
    c = (a3, a2, a1, a0)
    flo, fhi = _cubic(c, lo), _cubic(c, hi)
    if abs(flo) <= tol:
        return lo
    if abs(fhi) <= tol:
        return hi
    if flo * fhi > 0:
        raise NoSignChange(f"cubic has the same sign at {lo!r} and {hi!r}")

    # keep f(neg) < 0 < f(pos)
    neg, pos = (lo, hi) if flo < 0 else (hi, lo)
    x = 0.5 * (lo + hi)
    for _ in range(max_iter):
        fx = _cubic(c, x)
        if abs(fx) <= tol:
            return x
        if fx < 0:
            neg = x
        else:
            pos = x
        a, b = min(neg, pos), max(neg, pos)
        mid = 0.5 * (a + b)
        if not a < mid < b:
            break
        d = _dcubic(c, x)
        step = x - fx / d if d != 0 else mid
        x = step if a < step < b else mid
    fx = _cubic(c, x)
    if abs(fx) <= tol:
        return x
    raise ConvergenceError(f"|cubic(x)| = {abs(fx):.3g} > tol = {tol:.3g} at x = {x!r}")


class Kind(str, enum.Enum):
    R = "R"
    R1 = "R1"
    R2 = "R2"


# integer coefficients (a3, a2, a1, a0) and a bracket containing the real root
CUBICS = {
    Kind.R: ((3, -2, -1, -2), (1.0, 2.0)),
    Kind.R1: ((1, -1, 0, -1), (1.0, 2.0)),
    Kind.R2: ((4, -1, 0, -6), (1.0, 2.0)),
}


@dataclass(frozen=True)
class RatioConstant:
    kind: Kind
    value: float
    # exact value of the defining cubic at the binary64 ``value``
    residual: float


def cubic_residual(kind: Kind | str, x: float) -> float:
    """Exact residual of the defining cubic at a float, rounded once to float.

    Evaluated over the rationals, so it is nonzero for every float (the roots
    are irrational) and free of evaluation round-off.
    """
    coeffs, _ = CUBICS[Kind(kind)]
    return float(_cubic(coeffs, Fraction(x)))


_cache: dict[Kind, RatioConstant] = {}
_lock = threading.Lock()


def ratio_constant(kind: Kind | str) -> RatioConstant:
    kind = Kind(kind)
    const = _cache.get(kind)
    if const is not None:
        return const
    with _lock:
        if kind not in _cache:
            coeffs, (lo, hi) = CUBICS[kind]
            x = find_cubic_root(*map(float, coeffs), lo, hi, tol=1e-13)
            _cache[kind] = RatioConstant(kind, x, cubic_residual(kind, x))
        return _cache[kind]


def llw_ratio() -> float:
    return ratio_constant(Kind.R).value


def llw_threshold(R: float | None = None) -> float:
    """Start time from which LLW never interrupts: (2 - R) / (R - 1)."""
    if R is None:
        R = llw_ratio()
    return (2 - R) / (R - 1)

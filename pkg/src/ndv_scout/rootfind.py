"""Safeguarded scalar Newton-Raphson solver.

Both storage-size inversion and coupon-collector inversion reduce to a
one-dimensional root find on a monotone objective. Raw Newton is unsafe
here: the storage objective is piecewise (bit-width steps) and its smooth
derivative overstates the local slope, so Newton can crawl; the coupon
objective flattens toward its asymptote. A bracketing interval is therefore
maintained alongside, and any Newton step that leaves it, meets a vanishing
derivative, or has stopped shrinking the residual is replaced by a
bracket-narrowing step: false position with Illinois damping, or a plain
bisection when false position would hug an endpoint (which happens when the
root sits on one of the objective's jumps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import NonFinite, NoSignChange

DERIVATIVE_FLOOR = 1e-12
# A Newton step must cut the residual to this fraction or the solver stops
# trusting Newton for the rest of the solve. Quadratic convergence sails
# far under it; the piecewise crawl (smooth derivative >> true local slope)
# sits far above it.
NEWTON_PROGRESS = 0.6
# False-position points within this fraction of an endpoint indicate a
# stalled secant; bisect instead.
FP_ENDPOINT_HUG = 0.01


@dataclass(frozen=True)
class RootProblem:
    """A bracketed scalar root-finding problem.

    The derivative may be a continuous approximation of a piecewise
    objective; only the objective itself decides convergence.
    """

    objective: Callable[[float], float]
    derivative: Callable[[float], float]
    initial_guess: float
    lower_bound: float
    upper_bound: float
    tolerance: float = 1e-6
    max_iterations: int = 100

    def __post_init__(self):
        if not self.lower_bound < self.upper_bound:
            raise ValueError(
                f"lower_bound {self.lower_bound} must be < upper_bound {self.upper_bound}"
            )
        if not self.lower_bound <= self.initial_guess <= self.upper_bound:
            raise ValueError(
                f"initial_guess {self.initial_guess} outside "
                f"[{self.lower_bound}, {self.upper_bound}]"
            )
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass(frozen=True)
class RootResult:
    root: float
    iterations: int
    converged: bool


def _checked(f: Callable[[float], float], x: float) -> float:
    y = f(x)
    if not math.isfinite(y):
        raise NonFinite(f"objective returned {y!r} at x={x!r}")
    return y


class _Bracket:
    """Sign-changing interval with Illinois-damped endpoint residuals."""

    def __init__(self, lo: float, f_lo: float, hi: float, f_hi: float):
        self.lo, self.f_lo = lo, f_lo
        self.hi, self.f_hi = hi, f_hi
        self._last_side = 0

    def update(self, x: float, fx: float) -> None:
        if (fx < 0) == (self.f_lo < 0):
            self.lo, self.f_lo = x, fx
            if self._last_side == -1:
                self.f_hi *= 0.5
            self._last_side = -1
        else:
            self.hi, self.f_hi = x, fx
            if self._last_side == 1:
                self.f_lo *= 0.5
            self._last_side = 1

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def safeguard_point(self) -> float:
        """Next bracket-narrowing point: false position or midpoint."""
        width = self.hi - self.lo
        mid = self.lo + 0.5 * width
        denom = self.f_hi - self.f_lo
        if denom == 0 or not math.isfinite(denom):
            return mid
        x = self.lo - self.f_lo * width / denom
        margin = FP_ENDPOINT_HUG * width
        if not (self.lo + margin < x < self.hi - margin) or not math.isfinite(x):
            return mid
        return x


def solve(problem: RootProblem) -> RootResult:
    """Find a root with Newton steps safeguarded by the bracket.

    Stops when |f(x)| <= tolerance * scale(f), with
    scale(f) = max(1, |f(lo)|, |f(hi)|), or when the step shrinks below
    tolerance * max(1, |x|). The residual rule alone can spin on flat
    objectives, hence the dual test.

    Raises NoSignChange when the objective does not bracket a root and a
    Newton step leaves the interval; raises NonFinite on NaN/inf.
    """
    f = problem.objective
    fprime = problem.derivative
    lo, hi = float(problem.lower_bound), float(problem.upper_bound)
    tol = problem.tolerance

    f_lo = _checked(f, lo)
    f_hi = _checked(f, hi)
    scale = max(1.0, abs(f_lo), abs(f_hi))
    residual_tol = tol * scale

    if abs(f_lo) <= residual_tol:
        return RootResult(lo, 0, True)
    if abs(f_hi) <= residual_tol:
        return RootResult(hi, 0, True)

    bracket = _Bracket(lo, f_lo, hi, f_hi) if (f_lo < 0) != (f_hi < 0) else None

    x = float(problem.initial_guess)
    fx = _checked(f, x)
    if abs(fx) <= residual_tol:
        return RootResult(x, 0, True)
    newton_trusted = True

    for iteration in range(1, problem.max_iterations + 1):
        if bracket is None and (fx < 0) != (f_lo < 0):
            # A later evaluation exposed a sign change against the lower end.
            bracket = _Bracket(lo, f_lo, x, fx)
        elif bracket is not None:
            bracket.update(x, fx)

        took_newton = False
        if newton_trusted:
            d = fprime(x)
            newton_ok = math.isfinite(d) and abs(d) >= DERIVATIVE_FLOOR
            if newton_ok:
                x_new = x - fx / d
                newton_ok = math.isfinite(x_new)
            if newton_ok:
                if bracket is not None:
                    newton_ok = bracket.contains(x_new)
                else:
                    newton_ok = lo <= x_new <= hi
            took_newton = newton_ok

        if not took_newton:
            if bracket is None:
                raise NoSignChange(
                    f"no sign change on [{problem.lower_bound}, {problem.upper_bound}] "
                    "and Newton left the interval"
                )
            x_new = bracket.safeguard_point()

        fx_new = _checked(f, x_new)
        if abs(fx_new) <= residual_tol or abs(x_new - x) <= tol * max(1.0, abs(x)):
            return RootResult(x_new, iteration, True)
        if took_newton and abs(fx_new) > NEWTON_PROGRESS * abs(fx):
            newton_trusted = False
        x, fx = x_new, fx_new

    return RootResult(x, problem.max_iterations, False)

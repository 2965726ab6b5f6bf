"""Exact checks of the Hamming-ball mean-weight function f(x, r).

    f(x, r) = (1/r) * sum_{w<=r} w C(x, w) / sum_{w<=r} C(x, w),   1 <= r <= x/2

The forgery bound relies on f being non-increasing in r.  Writing
A_r = sum w C(x,w), B_r = sum C(x,w), D_r = r B_r - A_r and c_r = C(x, r),
the step f(x, r+1) <= f(x, r) is equivalent to the integer inequality

    A_r * B_r >= (x - r) * c_r * D_r

which is what every checker here evaluates.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np

from .errors import DomainError

_U = 2.0**-53


def f_exact(x: int, r: int) -> Fraction:
    if r < 1:
        raise DomainError("f(x, r) needs r >= 1")
    if 2 * r > x:
        raise DomainError(f"f(x, r) needs r <= x/2 (x={x}, r={r})")
    num = 0
    den = 0
    c = 1
    for w in range(r + 1):
        num += w * c
        den += c
        c = c * (x - w) // (w + 1)
    return Fraction(num, r * den)


def _step_holds_exact(x: int, r: int) -> bool:
    A = B = 0
    c = 1
    for w in range(r + 1):
        A += w * c
        B += c
        if w < r:
            c = c * (x - w) // (w + 1)
    D = r * B - A
    return A * B >= (x - r) * c * D


def check_monotonic(x: int) -> Optional[int]:
    """Exact check that f(x, r+1) <= f(x, r) for every 1 <= r < x/2.

    Returns None when the property holds, otherwise the first r at which
    f(x, r+1) > f(x, r).  Prefix sums are updated incrementally, so the cost
    is O(x) big-integer operations.
    """
    if x < 2:
        raise DomainError("x must be >= 2")
    half = x // 2
    c = x
    B = 1 + x
    A = x
    D = 1
    for r in range(1, half):
        if A * B < (x - r) * c * D:
            return r
        c_next = c * (x - r) // (r + 1)
        D += B
        B += c_next
        A += (r + 1) * c_next
        c = c_next
    return None


@dataclass
class RangeReport:
    x_max: int
    largest_checked: int
    steps_checked: int
    exact_fallbacks: int
    counterexample: Optional[tuple] = None
    seconds: float = 0.0

    @property
    def holds(self) -> bool:
        return self.counterexample is None


def _counterexample(x: int, r: int) -> tuple:
    return (x, r, f_exact(x, r), f_exact(x, r + 1))


def check_range(x_max: int, x_min: int = 2, method: str = "certified") -> RangeReport:
    """Check monotonicity for every x in [x_min, x_max].

    ``method="exact"`` runs :func:`check_monotonic` on each x.  The default
    ``"certified"`` method evaluates the step inequality for all x at once
    using normalized recurrences in double precision

        b = B_r/c_r,  a = A_r/c_r,  e = D_r/c_r,
        b' = b p + 1,  a' = a p + (r+1),  e' = (e + b) p,  p = (r+1)/(x-r)

    All terms are positive, so each quantity carries relative error at most
    3 r u after r steps (u = 2**-53).  A step is accepted or rejected only
    when the computed margin exceeds a rigorous bound on that error; any
    undecided step is re-evaluated with exact integers, and any violation is
    confirmed exactly before it is reported.
    """
    if x_min < 2 or x_max < x_min:
        raise DomainError("need 2 <= x_min <= x_max")
    t0 = time.perf_counter()
    if method == "exact":
        steps = 0
        for x in range(x_min, x_max + 1):
            r = check_monotonic(x)
            steps += max(x // 2 - 1, 0)
            if r is not None:
                return RangeReport(x_max, x, steps, 0, _counterexample(x, r),
                                   time.perf_counter() - t0)
        return RangeReport(x_max, x_max, steps, 0, None, time.perf_counter() - t0)
    if method != "certified":
        raise ValueError(f"unknown method {method!r}")

    lo = max(x_min, 4)
    fallbacks = 0
    steps = 0
    worst = None
    if lo <= x_max:
        xs = np.arange(lo, x_max + 1, dtype=np.float64)
        b = (1.0 + xs) / xs
        a = np.ones_like(xs)
        e = 1.0 / xs
        r = 1
        while True:
            start = max(2 * r + 2 - lo, 0)
            if start >= xs.size:
                break
            xv = xs[start:]
            bv, av, ev = b[start:], a[start:], e[start:]
            lhs = av * bv
            rhs = (xv - r) * ev
            tol = 16.0 * (r + 2) * _U
            ok = lhs * (1.0 - tol) > rhs * (1.0 + tol)
            steps += xv.size
            if not ok.all():
                for i in np.flatnonzero(~ok):
                    x = int(xv[i])
                    fallbacks += 1
                    if not _step_holds_exact(x, r):
                        if worst is None or x < worst[0]:
                            worst = (x, r)
            p = (r + 1.0) / (xv - r)
            e[start:] = (ev + bv) * p
            a[start:] = av * p + (r + 1.0)
            b[start:] = bv * p + 1.0
            r += 1
    if worst is not None:
        x = worst[0]
        return RangeReport(x_max, x, steps, fallbacks,
                           _counterexample(x, check_monotonic(x)),
                           time.perf_counter() - t0)
    return RangeReport(x_max, x_max, steps, fallbacks, None, time.perf_counter() - t0)


def f_half_closed_form(z: int) -> Fraction:
    """f(2z, z) = 1 / (1 + C(2z, z) / 4**z)."""
    if z < 1:
        raise DomainError("z must be >= 1")
    return 1 / (1 + Fraction(math.comb(2 * z, z), 4**z))


def half_bound_holds(z: int) -> bool:
    """Exact test of f(2z, z) >= 1 / (1 + 1/sqrt(3z + 1)).

    Equivalent to C(2z, z) * sqrt(3z + 1) <= 4**z; both sides are squared
    so the comparison stays in integers.
    """
    return math.comb(2 * z, z) ** 2 * (3 * z + 1) <= 16**z


def half_bound(z: int) -> float:
    return 1.0 / (1.0 + 1.0 / math.sqrt(3 * z + 1))


@dataclass
class Sandwich:
    lower: mpmath.mpf
    upper: mpmath.mpf
    exact: int

    @property
    def holds(self) -> bool:
        return self.lower <= self.exact <= self.upper


def binomial_tail_sandwich(n: int, r: int) -> Sandwich:
    """Entropy bounds around sum_{k<=r} C(n, k) for 1 <= r <= n/2.

    Bounds are returned as mpmath floats because 2**(n h(r/n)) overflows
    doubles for n beyond ~1000.
    """
    if r < 1 or 2 * r > n:
        raise DomainError(f"need 1 <= r <= n/2 (n={n}, r={r})")
    exact = sum(math.comb(n, k) for k in range(r + 1))
    with mpmath.workdps(50):
        frac = mpmath.mpf(r) / n
        h = -frac * mpmath.log(frac, 2) - (1 - frac) * mpmath.log(1 - frac, 2)
        upper = mpmath.power(2, n * h)
        lower = upper / mpmath.sqrt(8 * r * (1 - frac))
    result = Sandwich(lower, upper, exact)
    assert result.holds, f"tail sandwich violated at n={n}, r={r}"
    return result


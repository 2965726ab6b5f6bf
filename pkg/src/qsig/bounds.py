"""Binary entropy, its inverse, and Chernoff tail bounds."""
from __future__ import annotations

import math

from .errors import DomainError


def binary_entropy(p: float) -> float:
    """h(p) in bits, with h(0) = h(1) = 0."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"binary entropy needs p in [0, 1], got {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def entropy_inverse(y: float) -> float:
    """Left inverse of h onto [0, 1/2], by bisection.

    Bisects until the bracket stops shrinking in double precision, then
    returns whichever endpoint reproduces ``y`` more closely.
    """
    if not 0.0 <= y <= 1.0:
        raise DomainError(f"entropy inverse needs y in [0, 1], got {y}")
    if y == 0.0:
        return 0.0
    if y == 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if binary_entropy(mid) < y:
            lo = mid
        else:
            hi = mid
    if abs(binary_entropy(lo) - y) <= abs(binary_entropy(hi) - y):
        return lo
    return hi


def chernoff_upper(mu: float, delta: float) -> float:
    """Bound on Pr[X >= (1 + delta) mu] for a sum of independent bits."""
    if mu <= 0 or delta <= 0:
        raise DomainError("Chernoff bound needs mu > 0 and delta > 0")
    return math.exp(-delta * delta * mu / (2.0 + delta))


def chernoff_lower(mu: float, delta: float) -> float:
    """Bound on Pr[X <= (1 - delta) mu]."""
    if mu <= 0 or delta <= 0:
        raise DomainError("Chernoff bound needs mu > 0 and delta > 0")
    return math.exp(-delta * delta * mu / 2.0)

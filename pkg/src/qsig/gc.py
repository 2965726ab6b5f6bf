"""Analytic cost model of the Gottesman-Chuang scheme with fingerprint embedding.

Code rates are taken at their asymptotic values: L/d = 1 - h(gamma) for the
embedding code and K/N = 1 - h(beta) for the message code.  Embedding into
low-dimensional spaces is not modelled; at fixed small d the forger's
disadvantage shrinks exponentially in T, which makes it a poor baseline.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .bounds import binary_entropy
from .errors import DomainError, InsecureParametersError


def gc_delta(gamma: float) -> float:
    """Largest overlap between embeddings of keys one bit flip apart."""
    if not 0.0 <= gamma <= 0.25:
        raise DomainError(f"gamma must lie in [0, 1/4], got {gamma}")
    return 1.0 - 4.0 * gamma


def forge1_from_margin(delta: float, margin: float) -> float:
    """2**-margin + (1 - 2**-margin) delta**2, margin = L - T log2 d."""
    tail = 2.0 ** (-margin)
    return tail + (1.0 - tail) * delta * delta


@dataclass(frozen=True)
class GCParams:
    d: int
    gamma: float
    beta: float
    T: int
    reuse: bool = True
    qr_target: float = 1 - 1e-12

    def __post_init__(self):
        gc_delta(self.gamma)
        if not 0.0 < self.beta < 0.5:
            raise DomainError(f"beta must lie in (0, 1/2), got {self.beta}")
        if not 0.0 <= self.qr_target < 1.0:
            raise DomainError("Q_R target must lie in [0, 1)")

    @property
    def delta(self) -> float:
        return gc_delta(self.gamma)

    @property
    def L(self) -> float:
        return self.d * (1.0 - binary_entropy(self.gamma))

    @property
    def margin(self) -> float:
        return self.L - self.T * math.log2(self.d)


def gc_forge1(p: GCParams) -> tuple[float, float]:
    """Single-qudit forgery probability and J = 1 - p_forge1.

    Genuine signatures never fail a GC01 position, so J is also the gap.
    """
    if p.margin <= 0:
        raise InsecureParametersError(
            f"L = {p.L:.6g} <= T log2 d = {p.T * math.log2(p.d):.6g}")
    pf = forge1_from_margin(p.delta, p.margin)
    # 1 - pf written without cancellation
    J = 8.0 * p.gamma * (1.0 - 2.0 * p.gamma) * -math.expm1(-p.margin * math.log(2.0))
    return pf, J


def _dim_ok(d: int, bound: float) -> bool:
    return d / math.log2(d) > bound


def gc_min_dimension(T: int, gamma: float) -> tuple[int, int]:
    """(smallest d with d / log2 d > T / (1 - h(gamma)), round(T log2 T))."""
    if T < 2:
        raise DomainError("T must be >= 2")
    bound = T / (1.0 - binary_entropy(gamma))
    solved = next((d for d in (2, 3) if _dim_ok(d, bound)), None)
    if solved is None:
        # d / log2 d is increasing from d = 3 on
        lo, hi = 3, 4
        while not _dim_ok(hi, bound):
            lo, hi = hi, 2 * hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if _dim_ok(mid, bound):
                hi = mid
            else:
                lo = mid
        solved = hi
    return solved, round(T * math.log2(T))


def gc_min_codeword(beta: float, J: float, qr_target: float) -> float:
    """N_min = ln(1/(1 - Q_R)) / (beta J)."""
    if beta <= 0 or J <= 0:
        raise DomainError("need beta > 0 and J > 0")
    if not 0.0 <= qr_target < 1.0:
        raise DomainError("Q_R target must lie in [0, 1)")
    return -math.log1p(-qr_target) / (beta * J)


def gc_reject_threshold(N: float, beta: float, J: float, qr_target: float) -> float:
    """z_rej = 2 beta N J - 2 sqrt(beta N J) sqrt(ln(1/(1 - Q_R))); positive iff N > N_min."""
    mean = beta * N * J
    return 2.0 * mean - 2.0 * math.sqrt(mean) * math.sqrt(-math.log1p(-qr_target))


def gc_qubits_per_bit(d: int, beta: float, reuse: bool) -> float:
    """(2 - reuse) log2 d / (1 - h(beta))."""
    if not 0.0 < beta < 0.5:
        raise DomainError(f"beta must lie in (0, 1/2), got {beta}")
    if d < 2:
        raise DomainError("d must be >= 2")
    return (1 if reuse else 2) * math.log2(d) / (1.0 - binary_entropy(beta))


def gc_summary(p: GCParams) -> dict:
    pf, J = gc_forge1(p)
    solved, approx = gc_min_dimension(p.T, p.gamma) if p.T >= 2 else (None, None)
    return {
        "delta": p.delta,
        "L": p.L,
        "p_forge1": pf,
        "J_gc": J,
        "d_min": {"solved": solved, "approx": approx},
        "N_min": gc_min_codeword(p.beta, J, p.qr_target),
        "qubits_per_bit": gc_qubits_per_bit(p.d, p.beta, p.reuse),
    }

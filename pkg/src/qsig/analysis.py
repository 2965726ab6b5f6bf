"""Figures of merit and parameter engineering for the nonbinary scheme.

Logs are base 2 in qubit accounting and natural inside Chernoff exponents.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np
from scipy.special import betainc

from .adversary import p1_bound
from .bounds import binary_entropy, chernoff_lower
from .coding import CodeSpec
from .errors import DomainError, ParameterError, QsigError, SweepError
from .fingerprint import alphabet_size, hidden_length
from .gc import gc_min_dimension, gc_qubits_per_bit
from .protocol import SchemeParams

# -- repudiation algebra ----------------------------------------------------


@dataclass(frozen=True)
class OutcomeDistribution:
    Q_R: float
    Q_0: float
    Q_1: float

    def __post_init__(self):
        for q in (self.Q_R, self.Q_0, self.Q_1):
            if not 0.0 <= q <= 1.0:
                raise DomainError(f"probability {q} outside [0, 1]")
        if abs(self.Q_R + self.Q_0 + self.Q_1 - 1.0) > 1e-12:
            raise DomainError("Q_R + Q_0 + Q_1 must equal 1")


@dataclass(frozen=True)
class Repudiation:
    exact: float
    bound_pow: float
    bound_lin: float


def repudiation_probability(dist: OutcomeDistribution, T: int) -> Repudiation:
    """Pr[some verifier 1-accepts and some verifier rejects] for T i.i.d. verifiers.

    exact = 1 - (1-Q_R)^T - (1-Q_1)^T + Q_0^T, together with the bounds
    1 - (1 - min(Q_R, Q_1))^T and T min(Q_R, Q_1).
    """
    if T < 1:
        raise DomainError("T must be >= 1")
    if T == 1:
        exact = 0.0
    else:
        # 1 - (1-a)^T computed as -expm1(T log1p(-a)) to keep tiny values
        def one_minus_pow(a):
            return 1.0 if a == 1.0 else -math.expm1(T * math.log1p(-a))
        exact = one_minus_pow(dist.Q_R) - (1.0 - dist.Q_1) ** T + dist.Q_0 ** T
        exact = max(exact, 0.0)
    m = min(dist.Q_R, dist.Q_1)
    bound_pow = 1.0 if m == 1.0 else -math.expm1(T * math.log1p(-m))
    bound_lin = T * m
    if bound_lin <= 1.0:
        assert exact <= bound_pow + 1e-12 and bound_pow <= bound_lin + 1e-12
    return Repudiation(exact, bound_pow, bound_lin)


def repudiation_from_eps(eps1: float, eps2: float, T: int) -> float:
    """T max(eps1, eps2), capped at 1."""
    for e in (eps1, eps2):
        if not 0.0 <= e <= 1.0:
            raise DomainError(f"error probability {e} outside [0, 1]")
    return min(1.0, T * max(eps1, eps2))


# -- correctness ------------------------------------------------------------

_EXACT_TAIL_MAX_N = 400


def genuine_accept_probability(N: int, G: float, z_acc: int) -> float:
    """Pr[Binomial(N, G) <= z_acc].

    For N <= 400 the sum is done in exact rational arithmetic on the binary
    value of G.  Larger N use the regularized incomplete beta function for
    the upper tail, which keeps absolute error near machine precision.
    """
    if N < 0 or not 0.0 <= G <= 1.0:
        raise DomainError("need N >= 0 and G in [0, 1]")
    if not 0 <= z_acc <= N:
        raise DomainError(f"need 0 <= z_acc <= N (z_acc={z_acc}, N={N})")
    if z_acc == N or G == 0.0:
        return 1.0
    if N <= _EXACT_TAIL_MAX_N:
        g = Fraction(G)
        h = 1 - g
        total = sum(math.comb(N, z) * g**z * h ** (N - z) for z in range(z_acc + 1))
        return float(total)
    # Pr[X > z_acc] = I_G(z_acc + 1, N - z_acc)
    return float(1.0 - betainc(z_acc + 1, N - z_acc, G))


# -- parameter settings -----------------------------------------------------


def acceptance_threshold(N: int, alpha: float, eps_c: float) -> float:
    """N alpha + sqrt(N alpha) sqrt(3 ln(1/eps_c))."""
    mean = N * alpha
    return mean + math.sqrt(mean) * math.sqrt(3.0 * math.log(1.0 / eps_c))


def forgery_mean_tally(N: int, alpha: float, theta: float, p1: float) -> float:
    """(1 - 2 theta) N alpha + 2 theta N (1 - p1)."""
    return (1.0 - 2.0 * theta) * N * alpha + 2.0 * theta * N * (1.0 - p1)


def rejection_threshold(N: int, alpha: float, theta: float, p1: float,
                        eps_f: float) -> float:
    E = forgery_mean_tally(N, alpha, theta, p1)
    return E - math.sqrt(E) * math.sqrt(2.0 * math.log(1.0 / eps_f))


def codeword_length(alpha: float, theta: float, gap: float,
                    eps_c: float, eps_f: float) -> float:
    num = (math.sqrt(3.0 * math.log(1.0 / eps_c))
           + math.sqrt(1.0 + 4.0 * theta) * math.sqrt(2.0 * math.log(1.0 / eps_f)))
    return (num / (gap / alpha)) ** 2 / alpha**3


def asymptotic_message_length(N: int, theta: float) -> int:
    return max(1, int(math.floor(N * (1.0 - binary_entropy(theta)) + 0.5)))


def set_parameters(alpha: float, d: int, T: int, nu: float = 0.2,
                   eps_c: float = 1e-9, eps_f: float = 1e-12,
                   correction: bool = True) -> SchemeParams:
    """Choose theta, N and the two thresholds for given (alpha, d, T).

    N is rounded up, z_acc rounded up and z_rej rounded down.  K follows the
    asymptotic rate N (1 - h(theta)) of the synthetic code.  Raises
    ParameterError naming the first violated constraint.
    """
    S = alphabet_size(alpha)
    hidden_length(d, S)
    if not nu > alpha:
        raise ParameterError(f"nu must exceed alpha (nu={nu}, alpha={alpha})")
    for name, e in (("eps_c", eps_c), ("eps_f", eps_f)):
        if not 0.0 < e < 1.0:
            raise ParameterError(f"{name} must lie in (0, 1)")
    bound = p1_bound(alpha, d, T, correction=correction)
    if bound.gap <= 0:
        raise ParameterError(f"gap 1 - p1 - alpha = {bound.gap:.6g} is not positive")
    theta = alpha / 2.0 * (1.0 + nu)
    if theta >= 0.5:
        raise ParameterError(f"theta = {theta:g} must stay below 1/2")
    N = math.ceil(codeword_length(alpha, theta, bound.gap, eps_c, eps_f))
    z_acc = math.ceil(acceptance_threshold(N, alpha, eps_c))
    z_rej = math.floor(rejection_threshold(N, alpha, theta, bound.p1, eps_f))
    code = CodeSpec(S, asymptotic_message_length(N, theta), N, theta)
    return SchemeParams(d=d, S=S, T=T, code=code, z_acc=z_acc, z_rej=z_rej,
                        eps_c=eps_c, eps_f=eps_f, nu=nu, p1=bound.p1)


def _p1(params: SchemeParams) -> float:
    if params.p1 is not None:
        return params.p1
    return p1_bound(params.alpha, params.d, params.T).p1


def chernoff_reject_bound(mean: float, z_rej: float) -> float:
    """Lower bound on Pr[Z >= z_rej] when Z has mean ``mean``."""
    if not z_rej < mean:
        raise DomainError(f"degenerate bound: z_rej = {z_rej:g} >= mean tally {mean:g}")
    return 1.0 - chernoff_lower(mean, (mean - z_rej) / mean)


def forgery_reject_probability(params: SchemeParams) -> float:
    """Chernoff lower bound on Q_R for the minimal forgery."""
    E = forgery_mean_tally(params.N, params.alpha, params.theta, _p1(params))
    return chernoff_reject_bound(E, params.z_rej)


def repudiation_bound_scheme(params: SchemeParams) -> float:
    """T max(eps_f^nu^2, eps_c^nu^2), capped at 1.

    The unspecified [1 + O(alpha)] correction factor is not included.
    """
    if params.nu is None:
        raise ParameterError("repudiation bound needs nu")
    nu2 = params.nu**2
    return min(1.0, params.T * max(params.eps_f**nu2, params.eps_c**nu2))


def qubits_per_bit(params: SchemeParams) -> tuple[float, float]:
    """(N log2 d / (K log2 S), (log2 d / log2 S) / (1 - h(theta)))."""
    if params.K <= 0:
        raise DomainError("K must be positive")
    lg_d, lg_s = math.log2(params.d), math.log2(params.S)
    exact = params.N * lg_d / (params.K * lg_s)
    asym = lg_d / lg_s / (1.0 - binary_entropy(params.theta))
    floor = (1 + (math.log2(params.T) + math.log2(lg_d)) / lg_s) * params.N / params.K
    assert exact >= floor * (1 - 1e-12), "d - ell >= T log2 d must bound the cost"
    return exact, asym


@dataclass(frozen=True)
class FiguresOfMerit:
    G: float
    J: float
    gap: float
    p1: float
    qubits_per_bit: float
    repudiation_bound: Optional[float]


def figures_of_merit(params: SchemeParams) -> FiguresOfMerit:
    p1 = _p1(params)
    rep = repudiation_bound_scheme(params) if params.nu is not None else None
    return FiguresOfMerit(G=params.alpha, J=1.0 - p1, gap=1.0 - p1 - params.alpha,
                          p1=p1, qubits_per_bit=qubits_per_bit(params)[0],
                          repudiation_bound=rep)


# -- sweep ------------------------------------------------------------------

SWEEP_COLUMNS = ("alpha", "d", "theta", "N", "p1", "gap",
                 "qubits_per_bit", "gc_qubits_per_bit", "admissible")


@dataclass
class SweepRow:
    alpha: float
    d: int
    theta: float
    N: Optional[int]
    p1: float
    gap: float
    qubits_per_bit: float
    gc_qubits_per_bit: float
    admissible: bool
    d_requested: float = 0.0
    reason: str = ""
    extras: dict = field(default_factory=dict)

    def as_tuple(self):
        return tuple(getattr(self, c) for c in SWEEP_COLUMNS)


def gap_matched_gamma(gap: float) -> float:
    """gamma with 8 gamma (1 - 2 gamma) = gap, the GC01 embedding of equal gap."""
    if not 0.0 < gap <= 1.0:
        raise DomainError(f"gap must lie in (0, 1], got {gap}")
    return (1.0 - math.sqrt(1.0 - gap)) / 4.0


def gc_baseline_cost(T: int, gap: float, beta: float) -> float:
    """GC01 qubits per bit (re-using unopened keys) at the same gap.

    The embedding rate gamma is matched to the gap, the dimension is the
    smallest one admitted for that gamma, and the message code corrects the
    same error rate beta = theta as ours.
    """
    gamma = gap_matched_gamma(gap)
    d_gc, _ = gc_min_dimension(T, gamma)
    return gc_qubits_per_bit(d_gc, beta, reuse=True)


def snap_dimension(d: float, S: int) -> int:
    return max(S, int(round(d / S)) * S)


def sweep(T: int, alphas: Iterable[float], d_min: float, d_max: float, points: int,
          nu: float = 0.2, eps_c: float = 1e-9, eps_f: float = 1e-12,
          x_axis: str = "gap", correction: bool = True) -> list[SweepRow]:
    """Figure data: one row per (alpha, d) with d log-spaced in [d_min, d_max].

    d is snapped to the nearest multiple of S = 1/alpha (the requested value
    is kept in ``d_requested``).  Points that fail any constraint are kept
    and flagged ``admissible=False``.
    """
    if points < 1 or not 0 < d_min <= d_max:
        raise DomainError("need points >= 1 and 0 < d_min <= d_max")
    if x_axis not in ("gap", "codelength"):
        raise DomainError(f"unknown x axis {x_axis!r}")
    nan = float("nan")
    rows = []
    for alpha in alphas:
        S = alphabet_size(alpha)
        theta = alpha / 2.0 * (1.0 + nu)
        for d_req in np.geomspace(d_min, d_max, points):
            d = snap_dimension(float(d_req), S)
            try:
                params = set_parameters(alpha, d, T, nu, eps_c, eps_f, correction)
            except QsigError as exc:
                rows.append(SweepRow(alpha, d, theta, None, nan, nan, nan, nan, False,
                                     float(d_req), str(exc)))
                continue
            gap = 1.0 - params.p1 - alpha
            try:
                gc_cost = gc_baseline_cost(T, gap, params.theta)
            except QsigError:
                gc_cost = nan
            rows.append(SweepRow(alpha, d, params.theta, params.N, params.p1, gap,
                                 qubits_per_bit(params)[0], gc_cost, True, float(d_req)))
    if not any(r.admissible for r in rows):
        raise SweepError("no admissible point in the sweep")
    if x_axis == "codelength":
        rows.sort(key=lambda r: (not r.admissible, r.N if r.N is not None else 0))
    return rows

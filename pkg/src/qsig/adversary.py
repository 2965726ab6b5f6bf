"""Forgery against a single position: the Hamming-ball attacker and its bound.

An attacker holding T copies of a public key learns at most T log2 d bits
about the d - ell hidden bits.  The guess distribution that maximizes the
forger's acceptance under that min-entropy budget is uniform on a Hamming
ball of radius r around the most likely string, so the realized distance W
to the true hidden bits has Pr[W = w] proportional to C(d - ell, w) for
w <= r.  The acceptance probability for a realized W is
(ell - 2W)**2 / (ell d).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from .bounds import entropy_inverse
from .errors import InsecureParametersError, ParameterError
from .fingerprint import alphabet_size, as_bits, hidden_length
from .rng import make_rng


def leakage(d: int, T: int) -> float:
    """phi = T log2(d) / d."""
    return T * math.log2(d) / d


def _dims(alpha: float, d: int, T: int):
    S = alphabet_size(alpha)
    n = hidden_length(d, S)
    phi = leakage(d, T)
    if T < 0:
        raise ParameterError("T must be non-negative")
    if phi >= alpha:
        raise InsecureParametersError(
            f"phi = T log2(d)/d = {phi:.6g} >= alpha = {alpha:g}: "
            "T copies can reveal the whole hidden substring")
    return S, n, d - n, phi


def optimal_radius(alpha: float, d: int, T: int) -> int:
    """Smallest admissible ball radius, ceil((d - ell) h_inv(1 - phi/alpha))."""
    _, n, _, phi = _dims(alpha, d, T)
    r = math.ceil(n * entropy_inverse(1 - phi / alpha))
    return max(0, min(r, n // 2))


def expected_W_ball(hidden_length: int, r: int) -> Fraction:
    """E[W] for W distributed on {0..r} with weights C(n, w), exact."""
    if not 0 <= 2 * r <= hidden_length:
        raise ParameterError(f"radius must satisfy 0 <= r <= n/2 (n={hidden_length}, r={r})")
    num = den = 0
    c = 1
    for w in range(r + 1):
        num += w * c
        den += c
        c = c * (hidden_length - w) // (w + 1)
    return Fraction(num, den)


@dataclass(frozen=True)
class ForgeryModel:
    radius: int
    hidden_length: int

    def __post_init__(self):
        if self.hidden_length < 1:
            raise ParameterError("hidden length must be positive")
        if not 0 <= 2 * self.radius <= self.hidden_length:
            raise ParameterError(
                f"radius {self.radius} must lie in [0, {self.hidden_length // 2}]")

    @classmethod
    def for_scheme(cls, alpha: float, d: int, T: int) -> "ForgeryModel":
        S = alphabet_size(alpha)
        return cls(optimal_radius(alpha, d, T), hidden_length(d, S))

    def W_distribution(self) -> np.ndarray:
        w = np.arange(self.radius + 1)
        n = self.hidden_length
        logc = gammaln(n + 1) - gammaln(w + 1) - gammaln(n - w + 1)
        p = np.exp(logc - logc.max())
        return p / p.sum()

    def accept_probability(self, d: int) -> float:
        """Per-position acceptance (1 - J) averaged over the ball distribution."""
        ell = d - self.hidden_length
        w = np.arange(self.radius + 1)
        q = (ell - 2.0 * w) ** 2 / (ell * d)
        return float(np.dot(self.W_distribution(), q))


@dataclass(frozen=True)
class ForgeryBound:
    p1: float
    gap: float
    alpha: float
    radius: int
    correction: float


def p1_bound(alpha: float, d: int, T: int, correction: bool = True) -> ForgeryBound:
    """Upper bound p1 on a forged position's acceptance probability.

        p1 = (1-alpha) [ (1 - alpha/(1-alpha) * 2 h_inv(1 - phi/alpha))**2
                         + sqrt(8/3) sqrt(d - ell) / ell ]

    ``correction=False`` drops the sqrt(d - ell)/ell term.  The returned gap is
    1 - p1 - alpha.
    """
    _, n, ell, phi = _dims(alpha, d, T)
    x = 2.0 * entropy_inverse(1 - phi / alpha)
    main = (1.0 - alpha / (1.0 - alpha) * x) ** 2
    corr = math.sqrt(8.0 / 3.0) * math.sqrt(n) / ell if correction else 0.0
    p1 = (1.0 - alpha) * (main + corr)
    return ForgeryBound(p1, 1.0 - p1 - alpha, alpha,
                        optimal_radius(alpha, d, T), corr)


def sample_distances(model: ForgeryModel, size: int, seed=None) -> np.ndarray:
    rng = make_rng(seed)
    return rng.choice(model.radius + 1, size=size, p=model.W_distribution())


def forge_attempt(true_hidden, model: ForgeryModel, seed=None):
    """Draw the ball attacker's guess for ``true_hidden``.

    Returns ``(guess, W)`` where ``guess`` differs from ``true_hidden`` in
    exactly W uniformly chosen positions.
    """
    bits = as_bits(true_hidden)
    if bits.size != model.hidden_length:
        raise ParameterError(
            f"hidden string has length {bits.size}, model expects {model.hidden_length}")
    rng = make_rng(seed)
    W = int(rng.choice(model.radius + 1, p=model.W_distribution()))
    guess = bits.copy()
    flip = rng.choice(bits.size, size=W, replace=False)
    guess[flip] ^= 1
    return guess, W

"""Signer and verifier for the substring-reveal signature scheme.

Public keys are never built as amplitude vectors.  Each verifier holds its
own copy of the product state mu(k^1) x ... x mu(k^N) and measures every
factor with a single binary projector, so the outcome at position i is an
independent Bernoulli draw with success probability
|<mu(k^i)|psi_i>|^2 = (ell - 2 W_i)**2 / (ell d).  Sampling those draws is
statistically exact.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import coding
from .adversary import ForgeryModel, forge_attempt
from .coding import CodeSpec
from .errors import ParameterError
from .fingerprint import hidden_length
from .rng import make_rng, trial_rng


@dataclass(frozen=True)
class SchemeParams:
    d: int
    S: int
    T: int
    code: CodeSpec
    z_acc: int
    z_rej: int
    eps_c: float = 1e-9
    eps_f: float = 1e-12
    nu: Optional[float] = None
    p1: Optional[float] = None

    def __post_init__(self):
        hidden_length(self.d, self.S)
        if self.code.S != self.S:
            raise ParameterError("code alphabet differs from scheme alphabet")
        if self.T < 1:
            raise ParameterError("need at least one verifier")
        N = self.N
        # alpha N <= z_acc, kept in integers: N / S <= z_acc
        if not self.S * self.z_acc >= N:
            raise ParameterError(f"need alpha N <= z_acc ({N / self.S:g} > {self.z_acc})")
        if not self.z_acc < self.z_rej:
            raise ParameterError(f"need z_acc < z_rej ({self.z_acc} >= {self.z_rej})")
        if not self.z_rej <= 2 * self.theta * N * (1 + 1e-12):
            raise ParameterError(
                f"need z_rej <= 2 theta N ({self.z_rej} > {2 * self.theta * N:g})")
        if self.nu is not None and not self.nu > self.alpha:
            raise ParameterError(f"need nu > alpha ({self.nu} <= {self.alpha})")
        if self.hidden < self.T * math.log2(self.d):
            raise ParameterError(
                f"need d - ell >= T log2 d ({self.hidden} < {self.T * math.log2(self.d):.4g})")

    @property
    def alpha(self) -> float:
        return 1.0 / self.S

    @property
    def hidden(self) -> int:
        return self.d // self.S

    @property
    def ell(self) -> int:
        return self.d - self.hidden

    @property
    def N(self) -> int:
        return self.code.N

    @property
    def K(self) -> int:
        return self.code.K

    @property
    def theta(self) -> float:
        return self.code.theta

    @property
    def phi(self) -> float:
        return self.T * math.log2(self.d) / self.d

    def verdict(self, z: int) -> "Verdict":
        if z <= self.z_acc:
            return Verdict.ACC1
        if z >= self.z_rej:
            return Verdict.REJ
        return Verdict.ACC0


class Verdict(enum.Enum):
    REJ = "REJ"
    ACC0 = "0-ACC"
    ACC1 = "1-ACC"


@dataclass
class KeySet:
    keys: np.ndarray  # shape (N, d), uint8


@dataclass
class Signature:
    revealed: np.ndarray  # shape (N, ell), uint8


@dataclass(frozen=True)
class VerifyOutcome:
    z: int
    verdict: Verdict


def _revealed_positions(params: SchemeParams) -> np.ndarray:
    """Row s lists [d] minus I(s) in increasing order."""
    h = params.hidden
    cols = np.arange(params.ell)
    return np.stack([np.where(cols < s * h, cols, cols + h) for s in range(params.S)])


def keygen(params: SchemeParams, seed=None) -> KeySet:
    rng = make_rng(seed)
    return KeySet(rng.integers(0, 2, size=(params.N, params.d), dtype=np.uint8))


def _check_keys(keys: KeySet, params: SchemeParams):
    if keys.keys.shape != (params.N, params.d):
        raise ParameterError(
            f"key set has shape {keys.keys.shape}, expected {(params.N, params.d)}")


def sign(keys: KeySet, x, params: SchemeParams) -> Signature:
    """Encode ``x`` and reveal each key outside the block of its codeword symbol."""
    _check_keys(keys, params)
    c = coding.encode(params.code, x)
    pos = _revealed_positions(params)[c]
    return Signature(np.take_along_axis(keys.keys, pos, axis=1))


def mismatch_counts(keys: KeySet, c, sig: Signature, params: SchemeParams) -> np.ndarray:
    """W_i: revealed-bit mismatches between sig and the keys for codeword c."""
    _check_keys(keys, params)
    if sig.revealed.shape != (params.N, params.ell):
        raise ParameterError(
            f"signature has shape {sig.revealed.shape}, expected {(params.N, params.ell)}")
    pos = _revealed_positions(params)[np.asarray(c, dtype=np.int64)]
    expected = np.take_along_axis(keys.keys, pos, axis=1)
    return np.count_nonzero(expected != sig.revealed, axis=1)


def position_accept_probabilities(W: np.ndarray, params: SchemeParams) -> np.ndarray:
    ell, d = params.ell, params.d
    return (ell - 2.0 * W) ** 2 / (ell * d)


def verify_simulate(keys: KeySet, x, sig: Signature, params: SchemeParams,
                    seed=None) -> VerifyOutcome:
    """One verifier's run: re-encode, measure every position, tally failures."""
    c = coding.encode(params.code, x)
    W = mismatch_counts(keys, c, sig, params)
    rng = make_rng(seed)
    passed = rng.random(params.N) < position_accept_probabilities(W, params)
    z = int(params.N - np.count_nonzero(passed))
    return VerifyOutcome(z, params.verdict(z))


def forge_signature(keys: KeySet, x, sig: Signature, x_forged,
                    params: SchemeParams, model: ForgeryModel, seed=None) -> Signature:
    """Ball attacker's signature for ``x_forged`` after seeing ``sig`` on ``x``.

    Where the two codewords agree the genuine substring is copied.  Elsewhere
    the attacker knows every bit except the block I(c_i) hidden by the
    genuine signature, and fills that block with a ball-model guess.
    ``keys`` is used only to read the true hidden block that the guess is
    drawn around.
    """
    rng = make_rng(seed)
    c = coding.encode(params.code, x)
    c_new = coding.encode(params.code, x_forged)
    h = params.hidden
    out = sig.revealed.copy()
    for i in np.flatnonzero(c != c_new):
        k = keys.keys[i]
        s, t = int(c[i]), int(c_new[i])
        guess, _ = forge_attempt(k[s * h:(s + 1) * h], model, rng)
        row = k.copy()
        row[s * h:(s + 1) * h] = guess
        out[i] = np.delete(row, np.arange(t * h, (t + 1) * h))
    return Signature(out)


# -- trial harness ----------------------------------------------------------

SCENARIOS = ("genuine", "forgery", "repudiation")


@dataclass
class TrialSummary:
    scenario: str
    trials: int
    T: int
    N: int
    error_rate: float
    modified_positions: int
    verdict_counts: dict
    histogram: np.ndarray
    repudiations: int
    extras: dict = field(default_factory=dict)

    @property
    def verifications(self) -> int:
        return self.trials * self.T

    def _q(self, v: Verdict) -> float:
        return self.verdict_counts[v] / self.verifications

    @property
    def Q(self) -> tuple:
        """Empirical (Q_R, Q_0, Q_1) over all verifier runs."""
        return (self._q(Verdict.REJ), self._q(Verdict.ACC0), self._q(Verdict.ACC1))

    @property
    def Q_stderr(self) -> tuple:
        n = self.verifications
        return tuple(math.sqrt(q * (1 - q) / n) for q in self.Q)

    @property
    def repudiation_rate(self) -> float:
        return self.repudiations / self.trials

    @property
    def repudiation_stderr(self) -> float:
        p = self.repudiation_rate
        return math.sqrt(p * (1 - p) / self.trials)

    @property
    def mean_tally(self) -> float:
        z = np.arange(self.histogram.size)
        return float(np.dot(z, self.histogram) / self.histogram.sum())


def _position_error_laws(scenario: str, params: SchemeParams, theta: Optional[float]):
    """Return (m, law) where m positions are modified and ``law`` describes them.

    ``law`` is either a single error probability or, for forgery, the pair
    (W probabilities, per-W error probability) of the ball attacker.
    """
    if scenario == "genuine":
        return 0, None
    if scenario == "repudiation":
        return params.N, (params.z_acc + params.z_rej) / (2 * params.N)
    if scenario == "forgery":
        th = params.theta if theta is None else theta
        m = int(math.floor(2 * th * params.N + 0.5))
        model = ForgeryModel.for_scheme(params.alpha, params.d, params.T)
        w = np.arange(model.radius + 1)
        fail = 1.0 - (params.ell - 2.0 * w) ** 2 / (params.ell * params.d)
        return m, (model.W_distribution(), fail)
    raise ParameterError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")


def run_trials(scenario: str, params: SchemeParams, trials: int, seed: int = 0,
               theta: Optional[float] = None) -> TrialSummary:
    """Simulate ``trials`` signed messages, each verified by all T verifiers.

    genuine: every position fails with probability alpha.
    forgery: round(2 theta N) positions carry a ball-attacker guess, the rest
      are copied and fail with probability alpha.  The guess is shared by all
      verifiers, so for each trial the realized distances are drawn once and
      each verifier then measures independently.
    repudiation: a dishonest signer tunes every position to fail with
      probability (z_acc + z_rej) / (2N) for every verifier.

    Trial i draws from ``trial_rng(seed, i)``; ``theta`` overrides the code's
    rate for the forgery scenario.
    """
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    N, T, alpha = params.N, params.T, params.alpha
    m, law = _position_error_laws(scenario, params, theta)
    if not 0 <= m <= N:
        raise ParameterError(f"modified positions {m} outside [0, {N}]")
    hist = np.zeros(N + 1, dtype=np.int64)
    counts = {v: 0 for v in Verdict}
    repud = 0
    for i in range(trials):
        rng = trial_rng(seed, i)
        if scenario == "repudiation":
            z = rng.binomial(N, law, size=T)
        else:
            z = rng.binomial(N - m, alpha, size=T)
            if m:
                pw, fail = law
                shells = rng.multinomial(m, pw)
                z = z + rng.binomial(shells[None, :], fail[None, :],
                                     size=(T, shells.size)).sum(axis=1)
        hist += np.bincount(z, minlength=N + 1)
        n_acc1 = int(np.count_nonzero(z <= params.z_acc))
        n_rej = int(np.count_nonzero(z >= params.z_rej))
        counts[Verdict.ACC1] += n_acc1
        counts[Verdict.REJ] += n_rej
        counts[Verdict.ACC0] += T - n_acc1 - n_rej
        if n_acc1 and n_rej:
            repud += 1
    if scenario == "genuine":
        rate = alpha
    elif scenario == "repudiation":
        rate = law
    else:
        pw, fail = law
        rate = ((N - m) * alpha + m * float(np.dot(pw, fail))) / N
    return TrialSummary(scenario, trials, T, N, rate, m, counts, hist, repud)

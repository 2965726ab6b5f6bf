"""Nonbinary codes that map messages in {0..S-1}^K to codewords of length N.

Two backends:

* ``"reed-solomon"``: evaluation-form RS over GF(S), S a prime power and
  N <= S - 1.  MDS, so distinct codewords differ in >= N - K + 1 places.
* ``"synthetic"``: systematic random linear code over Z_S with a fixed
  generator derived from (S, K, N).  It works for any S and any rate and is
  used together with :func:`minimal_forgery_codeword`, which models the
  attacker's cheapest message change as a codeword at distance round(2 theta N).

No decoder is provided; verification re-encodes the received message.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .rng import make_rng

BACKENDS = ("synthetic", "reed-solomon")


def _factor_prime_power(q: int):
    if q < 2:
        return None
    for p in range(2, math.isqrt(q) + 1):
        if q % p == 0:
            m = 0
            while q % p == 0:
                q //= p
                m += 1
            return (p, m) if q == 1 else None
    return (q, 1)


def is_prime_power(q: int) -> bool:
    return _factor_prime_power(q) is not None


class GF:
    """GF(p**m) with elements 0..q-1 read as base-p polynomial coefficients."""

    def __init__(self, q: int):
        pm = _factor_prime_power(q)
        if pm is None:
            raise ParameterError(f"GF({q}) does not exist: {q} is not a prime power")
        self.q = q
        self.p, self.m = pm
        self.exp = [0] * (2 * q)
        self.log = [0] * q
        self.modulus = self._primitive_modulus()
        x = 1
        for i in range(q - 1):
            self.exp[i] = x
            self.log[x] = i
            x = self._mul_by_x(x)
        for i in range(q - 1, 2 * q):
            self.exp[i] = self.exp[i - (q - 1)]

    def _digits(self, a):
        out = []
        for _ in range(self.m):
            out.append(a % self.p)
            a //= self.p
        return out

    def _from_digits(self, ds):
        return sum(c * self.p**i for i, c in enumerate(ds))

    def _mul_by_x_mod(self, a, low):
        # low: coefficients of x**m expressed in lower powers
        ds = self._digits(a)
        top = ds[-1]
        shifted = [0] + ds[:-1]
        return self._from_digits([(s + top * l) % self.p for s, l in zip(shifted, low)])

    def _primitive_modulus(self):
        if self.m == 1:
            # multiplication by a primitive root g stands in for "times x"
            g = next(g for g in range(1, self.p)
                     if self._order_mod_p(g) == self.p - 1)
            return [g]
        for low in itertools.product(range(self.p), repeat=self.m):
            if low[0] == 0:
                continue
            x, seen = 1, 0
            while True:
                x = self._mul_by_x_mod(x, low)
                seen += 1
                if x == 1:
                    break
                if seen >= self.q:
                    break
            if seen == self.q - 1:
                return list(low)
        raise AssertionError("no primitive polynomial found")

    def _order_mod_p(self, g):
        x, k = g % self.p, 1
        while x != 1:
            x = x * g % self.p
            k += 1
        return k

    def _mul_by_x(self, a):
        if self.m == 1:
            return a * self.modulus[0] % self.p
        return self._mul_by_x_mod(a, self.modulus)

    def add(self, a, b):
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self._from_digits([(x + y) % self.p
                                  for x, y in zip(self._digits(a), self._digits(b))])

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def pow_gen(self, k):
        return self.exp[k % (self.q - 1)]


@functools.lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)


@dataclass(frozen=True)
class CodeSpec:
    S: int
    K: int
    N: int
    theta: float
    backend: str = "synthetic"

    def __post_init__(self):
        if self.S < 2:
            raise ParameterError("alphabet size S must be >= 2")
        if not 1 <= self.K <= self.N:
            raise ParameterError(f"need 1 <= K <= N (K={self.K}, N={self.N})")
        if not 0.0 <= self.theta < 0.5:
            raise ParameterError(f"correctable rate theta must lie in [0, 1/2), got {self.theta}")
        if self.backend not in BACKENDS:
            raise ParameterError(f"unknown code backend {self.backend!r}")
        if self.backend == "reed-solomon":
            if not is_prime_power(self.S):
                raise ParameterError(f"Reed-Solomon needs S a prime power, got {self.S}")
            if self.N > self.S - 1:
                raise ParameterError(f"Reed-Solomon needs N <= S - 1 (N={self.N}, S={self.S})")


def reed_solomon_spec(S: int, N: int, K: int) -> CodeSpec:
    return CodeSpec(S, K, N, (N - K) / (2 * N), backend="reed-solomon")


@functools.lru_cache(maxsize=64)
def _rs_matrix(S: int, K: int, N: int) -> tuple:
    gf = field(S)
    # row i holds alpha**(i j) for j = 0..N-1
    return tuple(tuple(gf.pow_gen(i * j) for j in range(N)) for i in range(K))


@functools.lru_cache(maxsize=64)
def _synthetic_parity(S: int, K: int, N: int) -> np.ndarray:
    rng = make_rng(S * 1_000_003 + K * 1009 + N)
    return rng.integers(0, S, size=(K, N - K), dtype=np.int64)


def _check_message(spec: CodeSpec, x) -> np.ndarray:
    msg = np.asarray(x, dtype=np.int64)
    if msg.ndim != 1 or msg.size != spec.K:
        raise ParameterError(f"message must have length K={spec.K}, got shape {msg.shape}")
    if msg.size and (msg.min() < 0 or msg.max() >= spec.S):
        raise ParameterError(f"message symbols must lie in [0, {spec.S})")
    return msg


def encode(spec: CodeSpec, x) -> np.ndarray:
    """Deterministic linear encoding of a K-symbol message to N symbols."""
    msg = _check_message(spec, x)
    if spec.backend == "synthetic":
        parity = (msg @ _synthetic_parity(spec.S, spec.K, spec.N)) % spec.S
        return np.concatenate([msg, parity])
    gf = field(spec.S)
    rows = _rs_matrix(spec.S, spec.K, spec.N)
    out = [0] * spec.N
    for i, xi in enumerate(msg.tolist()):
        if xi == 0:
            continue
        row = rows[i]
        for j in range(spec.N):
            out[j] = gf.add(out[j], gf.mul(xi, row[j]))
    return np.asarray(out, dtype=np.int64)


def forgery_distance(spec: CodeSpec) -> int:
    """round(2 theta N), the codeword distance of the cheapest message change."""
    if spec.theta * spec.N < 1:
        raise ParameterError(
            f"theta * N = {spec.theta * spec.N:g} < 1: code cannot separate messages")
    return int(math.floor(2 * spec.theta * spec.N + 0.5))


def minimal_forgery_codeword(spec: CodeSpec, c, seed=None) -> np.ndarray:
    """Codeword-model string at distance exactly round(2 theta N) from ``c``.

    Positions are chosen uniformly without replacement and each chosen
    symbol is replaced by a uniformly chosen different symbol.
    """
    c = np.asarray(c, dtype=np.int64)
    if c.ndim != 1 or c.size != spec.N:
        raise ParameterError(f"codeword must have length N={spec.N}")
    m = forgery_distance(spec)
    rng = make_rng(seed)
    pos = np.sort(rng.choice(spec.N, size=m, replace=False))
    out = c.copy()
    out[pos] = (c[pos] + rng.integers(1, spec.S, size=m)) % spec.S
    return out

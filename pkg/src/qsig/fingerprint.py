"""Amplitude arithmetic for fingerprinting states.

A d-bit string x is encoded as the real unit vector with entries
(-1)**x_j / sqrt(d).  Everything the protocol needs (overlaps between
public keys and verification projectors) reduces to Hamming distances, so
the main routines work on bit strings and return exact rationals.  The
``dense_*`` functions build the vectors explicitly and exist only as a
brute-force oracle for small d.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DimensionError, ParameterError, ResourceError

DENSE_LIMIT = 2**20
PSI_SUM_LIMIT = 20


def as_bits(x) -> np.ndarray:
    """Coerce a 0/1 sequence to a 1-D uint8 array."""
    bits = np.asarray(x, dtype=np.uint8)
    if bits.ndim != 1 or bits.size == 0:
        raise DimensionError("bit string must be a non-empty 1-D sequence")
    if bits.max() > 1:
        raise ValueError("bit string entries must be 0 or 1")
    return bits


def hamming(x, y) -> int:
    x, y = as_bits(x), as_bits(y)
    if x.size != y.size:
        raise DimensionError(f"length mismatch: {x.size} != {y.size}")
    return int(np.count_nonzero(x != y))


def inner_product(x, y) -> float:
    """<mu(y)|mu(x)> = 1 - 2|x xor y|/d."""
    d = len(as_bits(x))
    return float(1 - Fraction(2 * hamming(x, y), d))


def hidden_length(d: int, S: int) -> int:
    if S < 2 or d % S:
        raise ParameterError(f"S must be an integer >= 2 dividing d (d={d}, S={S})")
    return d // S


def index_set(s: int, d: int, ell: int) -> range:
    """Positions kept hidden when signing symbol ``s``.

    Block ``s`` of width d - ell; the blocks for s = 0..S-1 tile [0, d).
    """
    width = d - ell
    if width <= 0 or d % width:
        raise ParameterError(f"d - ell = {width} must be positive and divide d = {d}")
    S = d // width
    if not 0 <= s < S:
        raise ParameterError(f"symbol {s} outside alphabet of size {S}")
    return range(s * width, (s + 1) * width)


def complement(I: Sequence[int], d: int) -> np.ndarray:
    """[d] minus I, in increasing order."""
    if isinstance(I, range) and I.step == 1 and 0 <= I.start <= I.stop <= d:
        return np.concatenate((np.arange(I.start), np.arange(I.stop, d)))
    mask = np.ones(d, dtype=bool)
    idx = np.asarray(I, dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= d):
        raise DimensionError("index set reaches outside [0, d)")
    mask[idx] = False
    return np.flatnonzero(mask)


def revealed_distance(k, I: Sequence[int], kappa) -> int:
    """Hamming distance between kappa and k restricted to the complement of I."""
    k = as_bits(k)
    kappa = as_bits(kappa)
    rest = complement(I, k.size)
    if len(I) + kappa.size != k.size or rest.size != kappa.size:
        raise DimensionError(
            f"|I| + len(kappa) must equal d: {len(I)} + {kappa.size} != {k.size}")
    return int(np.count_nonzero(k[rest] != kappa))


def overlap_probability(W: int, ell: int, d: int) -> Fraction:
    """|<mu(k)|psi>|^2 = (ell - 2W)^2 / (ell d) for W revealed-bit mismatches."""
    return Fraction((ell - 2 * W) ** 2, ell * d)


def accept_probability(k, I: Sequence[int], kappa) -> Fraction:
    """Probability that projecting mu(k) onto psi(I, kappa) succeeds.

    Exact rational; equals ell/d = 1 - alpha when kappa is the honest
    substring and 0 when half the revealed bits are wrong.
    """
    k = as_bits(k)
    W = revealed_distance(k, I, kappa)
    return overlap_probability(W, k.size - len(I), k.size)


def dense_mu(x) -> np.ndarray:
    x = as_bits(x)
    if x.size > DENSE_LIMIT:
        raise ResourceError(f"dense fingerprint limited to d <= {DENSE_LIMIT}")
    return (1.0 - 2.0 * x) / math.sqrt(x.size)


def dense_psi(I: Sequence[int], kappa, d: int) -> np.ndarray:
    """Verification vector built by literally summing mu(k) over all consistent k.

    The 2**|I| fingerprints that agree with ``kappa`` off ``I`` are added up
    and the sum is normalized.  Use :func:`psi_closed_form` for the
    ell-supported shortcut.
    """
    kappa = as_bits(kappa)
    hidden = np.asarray(I, dtype=np.int64)
    rest = complement(hidden, d)
    if rest.size != kappa.size:
        raise DimensionError(f"kappa has length {kappa.size}, expected {rest.size}")
    h = hidden.size
    if h > PSI_SUM_LIMIT or d > DENSE_LIMIT:
        raise ResourceError(f"brute-force psi limited to d - ell <= {PSI_SUM_LIMIT}")

    total = np.zeros(d)
    base = np.zeros(d, dtype=np.uint8)
    base[rest] = kappa
    chunk = 1 << min(h, 14)
    shifts = np.arange(h, dtype=np.int64)
    for start in range(0, 1 << h, chunk):
        a = np.arange(start, min(start + chunk, 1 << h), dtype=np.int64)
        keys = np.repeat(base[None, :], a.size, axis=0)
        keys[:, hidden] = ((a[:, None] >> shifts) & 1).astype(np.uint8)
        total += ((1.0 - 2.0 * keys) / math.sqrt(d)).sum(axis=0)
    return total / np.linalg.norm(total)


def psi_closed_form(I: Sequence[int], kappa, d: int) -> np.ndarray:
    kappa = as_bits(kappa)
    rest = complement(I, d)
    if rest.size != kappa.size:
        raise DimensionError(f"kappa has length {kappa.size}, expected {rest.size}")
    if d > DENSE_LIMIT:
        raise ResourceError(f"dense vectors limited to d <= {DENSE_LIMIT}")
    v = np.zeros(d)
    v[rest] = (1.0 - 2.0 * kappa) / math.sqrt(kappa.size)
    return v


def alphabet_size(alpha: float) -> int:
    """S = 1/alpha, which must be an integer >= 2."""
    if not 0 < alpha <= 0.5:
        raise ParameterError(f"alpha must lie in (0, 1/2], got {alpha}")
    S = round(1 / alpha)
    if abs(S * alpha - 1) > 1e-9:
        raise ParameterError(f"1/alpha = {1 / alpha:g} is not an integer; "
                             "S must be an integer dividing d")
    return S

"""Segmented sieves for primality, square-freeness, and Mobius values.

All range operations work on half-open intervals [lo, hi) of 64-bit
integers and share a cached base-prime table.  A built Segment is
immutable and safe to share read-only between threads or forked workers.

Conventions for the edge values: 0 and 1 are not prime; 1 is square-free
with mu(1) = 1; 0 is not square-free and mu(0) = 0, so terms indexed by a
zero difference vanish in downstream sums.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Optional

import numpy as np

# Integers per segment.  2**24 keeps the prime and square-free bitmaps in a
# few MB while amortizing base-prime enumeration at 1e9+ scale.
SEGMENT_CAPACITY = 1 << 24

_MAX_BOUND = 1 << 63

# Miller-Rabin witness set that is deterministic for every n < 3.3e24,
# comfortably covering the full 64-bit range.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class SegmentCapacityError(ValueError):
    """Requested range exceeds the segment capacity; the caller must chunk."""


_base_lock = threading.Lock()
_base_limit = 0
_base_primes: np.ndarray = np.empty(0, dtype=np.int64)


def base_primes(limit: int) -> np.ndarray:
    """Primes <= limit as an int64 array, served from a growing cache.

    The cache grows geometrically so repeated segment sieving against the
    same sqrt bound costs one plain sieve in total.
    """
    global _base_limit, _base_primes
    if limit > _base_limit:
        with _base_lock:
            if limit > _base_limit:
                new_limit = max(limit, 2 * _base_limit, 1 << 16)
                flags = np.ones(new_limit + 1, dtype=bool)
                flags[:2] = False
                for p in range(2, math.isqrt(new_limit) + 1):
                    if flags[p]:
                        flags[p * p :: p] = False
                _base_primes = np.flatnonzero(flags).astype(np.int64)
                _base_limit = new_limit
    primes = _base_primes
    return primes[: int(np.searchsorted(primes, limit, side="right"))]


def _check_range(lo: int, hi: int) -> None:
    if not 0 <= lo <= hi <= _MAX_BOUND:
        raise ValueError(f"range [{lo}, {hi}) must satisfy 0 <= lo <= hi <= 2**63")
    if hi - lo > SEGMENT_CAPACITY:
        raise SegmentCapacityError(
            f"range length {hi - lo} exceeds segment capacity {SEGMENT_CAPACITY}"
        )


def prime_bitmap(lo: int, hi: int) -> np.ndarray:
    """Boolean array over [lo, hi): True exactly where the value is prime."""
    _check_range(lo, hi)
    bits = np.ones(hi - lo, dtype=bool)
    for m in (0, 1):
        if lo <= m < hi:
            bits[m - lo] = False
    if hi <= 2:
        return bits
    for p in base_primes(math.isqrt(hi - 1)):
        p = int(p)
        start = max(p * p, ((lo + p - 1) // p) * p)
        if start < hi:
            bits[start - lo :: p] = False
    return bits


def primes_in(lo: int, hi: int) -> list[int]:
    """Ascending list of primes in [lo, hi)."""
    return (np.flatnonzero(prime_bitmap(lo, hi)) + lo).tolist()


def squarefree_bitmap(lo: int, hi: int) -> np.ndarray:
    """Boolean array over [lo, hi): True where no prime square divides the value.

    Strikes multiples of p**2 for every prime p <= sqrt(hi - 1).
    """
    _check_range(lo, hi)
    bits = np.ones(hi - lo, dtype=bool)
    if lo == 0 and hi > 0:
        bits[0] = False  # mu(0) = 0 convention
    if hi <= 2:
        return bits
    for p in base_primes(math.isqrt(hi - 1)):
        p2 = int(p) * int(p)
        if p2 >= hi:
            break
        start = ((lo + p2 - 1) // p2) * p2
        if start < hi:
            bits[start - lo :: p2] = False
    return bits


def mobius_in(lo: int, hi: int) -> np.ndarray:
    """Mobius values over [lo, hi) as an int8 array.

    Each base prime p <= sqrt(hi - 1) flips the sign of its multiples once
    and zeroes multiples of p**2; a leftover cofactor > 1 after the single
    division is necessarily one more prime and flips the sign again.
    """
    _check_range(lo, hi)
    mob = np.ones(hi - lo, dtype=np.int8)
    if lo == 0 and hi > 0:
        mob[0] = 0
    if hi <= 2:
        return mob
    remaining = np.arange(lo, hi, dtype=np.int64)
    for p in base_primes(math.isqrt(hi - 1)):
        p = int(p)
        start = ((lo + p - 1) // p) * p
        if start >= hi:
            continue
        sl = slice(start - lo, None, p)
        np.negative(mob[sl], out=mob[sl])
        remaining[sl] //= p
        p2 = p * p
        start2 = ((lo + p2 - 1) // p2) * p2
        if start2 < hi:
            mob[start2 - lo :: p2] = 0
    tail = (remaining > 1) & (mob != 0)
    mob[tail] = -mob[tail]
    if lo == 0 and hi > 0:
        mob[0] = 0
    return mob


@dataclass(frozen=True)
class Segment:
    """One sieved half-open window with bit-per-value primality and
    square-freeness, plus optional Mobius data."""

    lo: int
    hi: int
    prime_bits: np.ndarray
    squarefree_bits: np.ndarray
    mobius: Optional[np.ndarray] = None

    def index(self, m: int) -> int:
        if not self.lo <= m < self.hi:
            raise IndexError(f"{m} outside segment [{self.lo}, {self.hi})")
        return m - self.lo

    def is_prime(self, m: int) -> bool:
        return bool(self.prime_bits[self.index(m)])

    def is_squarefree(self, m: int) -> bool:
        return bool(self.squarefree_bits[self.index(m)])


def sieve_segment(lo: int, hi: int, with_mobius: bool = False) -> Segment:
    """Sieve one segment; see SEGMENT_CAPACITY for the allowed width."""
    return Segment(
        lo=lo,
        hi=hi,
        prime_bits=prime_bitmap(lo, hi),
        squarefree_bits=squarefree_bitmap(lo, hi),
        mobius=mobius_in(lo, hi) if with_mobius else None,
    )


def is_prime(n: int) -> bool:
    """Deterministic primality test, exact for all 0 <= n < 2**64."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = (d & -d).bit_length() - 1
    d >>= r
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_squarefree(n: int) -> bool:
    """Single-value square-freeness by trial division.

    Intended for the small-to-moderate values that appear as witness parts;
    cost is O(sqrt(n) / log sqrt(n)) divisions.
    """
    if n <= 0:
        return False
    if n == 1:
        return True
    for p in base_primes(math.isqrt(n)):
        p = int(p)
        if p * p > n:
            break
        if n % p == 0:
            n //= p
            if n % p == 0:
                return False
    return True

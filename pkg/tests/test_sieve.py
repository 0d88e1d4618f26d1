"""Sieve correctness against naive oracles.

The independent oracle here is complete trial division: every value in a
window is fully factored by striking prime multiples and dividing them
out, which yields primality, square-freeness, and Mobius values without
touching the production sieve code paths.
"""

import math
import random

import numpy as np
import pytest

from sqfrep.sieve import (
    SEGMENT_CAPACITY,
    SegmentCapacityError,
    base_primes,
    is_prime,
    is_squarefree,
    mobius_in,
    prime_bitmap,
    primes_in,
    sieve_segment,
    squarefree_bitmap,
)


# --- oracles -----------------------------------------------------------------

def naive_is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    d = 5
    while d * d <= n:
        if n % d == 0 or n % (d + 2) == 0:
            return False
        d += 6
    return True


def naive_mobius(n):
    if n <= 0:
        return 0
    value = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            value = -value
        d += 1
    if n > 1:
        value = -value
    return value


def window_factor_oracle(lo, hi):
    """Fully factor every value in [lo, hi) by prime strikes; returns
    (is_prime, mobius) lists.  Independent of the segmented sieve path."""
    width = hi - lo
    factors = [[] for _ in range(width)]
    remaining = list(range(lo, hi))
    if hi > 1:
        for p in base_primes(math.isqrt(hi - 1)).tolist():
            start = ((lo + p - 1) // p) * p
            if start == 0:
                start = p
            for m in range(start, hi, p):
                i = m - lo
                while remaining[i] > 1 and remaining[i] % p == 0:
                    remaining[i] //= p
                    factors[i].append(p)
    primes = []
    mobs = []
    for i in range(width):
        value = lo + i
        fac = list(factors[i])
        if remaining[i] > 1:  # one leftover prime factor above sqrt(hi - 1)
            fac.append(remaining[i])
        if value < 2:
            primes.append(False)
            mobs.append(0 if value == 0 else 1)
            continue
        primes.append(fac == [value])
        mobs.append(0 if len(fac) != len(set(fac)) else (-1) ** len(fac))
    return primes, mobs


# --- basic values --------------------------------------------------------------

def test_small_primes():
    assert primes_in(2, 11) == [2, 3, 5, 7]
    assert primes_in(0, 2) == []
    assert primes_in(0, 3) == [2]


def test_primes_window_at_1e6_vs_trial_division():
    lo, hi = 10**6, 10**6 + 100
    expected = [n for n in range(lo, hi) if naive_is_prime(n)]
    assert primes_in(lo, hi) == expected


def test_edge_conventions():
    bits = squarefree_bitmap(0, 11)
    assert not bits[0], "0 is not square-free by convention"
    assert bits[1], "1 is square-free"
    assert [m for m in range(1, 11) if bits[m]] == [1, 2, 3, 5, 6, 7, 10]
    mob = mobius_in(0, 2)
    assert mob[0] == 0 and mob[1] == 1
    prime = prime_bitmap(0, 2)
    assert not prime[0] and not prime[1]


def test_squarefree_count_to_100():
    bits = squarefree_bitmap(1, 101)
    assert int(bits.sum()) == 61


def test_mobius_values():
    mob = mobius_in(0, 211)
    assert mob[1] == 1 and mob[6] == 1 and mob[30] == -1 and mob[4] == 0
    assert mob[210] == 1  # four prime factors
    assert int(mob[1:101].sum()) == 1  # Mertens(100)


def test_capacity_error():
    with pytest.raises(SegmentCapacityError):
        primes_in(0, SEGMENT_CAPACITY + 1)
    with pytest.raises(ValueError):
        primes_in(-1, 10)
    with pytest.raises(ValueError):
        primes_in(10, 5)


def test_random_windows_against_factor_oracle():
    rng = random.Random(20260809)
    for _ in range(40):
        scale = 10 ** rng.randint(2, 12)
        lo = rng.randrange(0, scale)
        width = rng.randint(1, 300)
        hi = lo + width
        primes, mob = window_factor_oracle(lo, hi)
        assert prime_bitmap(lo, hi).tolist() == primes, (lo, hi)
        got_mob = mobius_in(lo, hi)
        assert got_mob.tolist() == mob, (lo, hi)
        sq = squarefree_bitmap(lo, hi)
        assert np.array_equal(sq, got_mob != 0), (lo, hi)


def test_segment_boundary_independence():
    rng = random.Random(7)
    for _ in range(10):
        a = rng.randrange(0, 10**9)
        b = a + rng.randint(1, 500)
        c = b + rng.randint(1, 500)
        joint = sieve_segment(a, c, with_mobius=True)
        left = sieve_segment(a, b, with_mobius=True)
        right = sieve_segment(b, c, with_mobius=True)
        assert np.array_equal(joint.prime_bits, np.concatenate([left.prime_bits, right.prime_bits]))
        assert np.array_equal(
            joint.squarefree_bits,
            np.concatenate([left.squarefree_bits, right.squarefree_bits]),
        )
        assert np.array_equal(joint.mobius, np.concatenate([left.mobius, right.mobius]))


def test_segment_accessors():
    seg = sieve_segment(10, 20)
    assert seg.is_prime(11) and not seg.is_prime(15)
    assert seg.is_squarefree(10) and not seg.is_squarefree(12)
    with pytest.raises(IndexError):
        seg.index(20)


def test_is_prime_basics():
    assert is_prime(2)
    assert not is_prime(1)
    assert not is_prime(0)
    assert is_prime(740_000_117)  # 740000138 - 21
    assert is_prime(740_000_138 - 235)
    assert is_prime(740_000_138 - 247)
    assert is_prime(740_000_138 - 391)
    assert is_prime(10**9 + 7) == naive_is_prime(10**9 + 7)


def test_is_prime_against_trial_division_sampled():
    rng = random.Random(99)
    for _ in range(200):
        n = rng.randrange(0, 10**7)
        assert is_prime(n) == naive_is_prime(n), n


def test_is_prime_adversarial_values():
    # strong pseudoprimes to small witness prefixes, with their factorizations
    assert 3215031751 == 151 * 751 * 28351
    assert not is_prime(3215031751)
    assert 3825123056546413051 == 149491 * 747451 * 34233211
    assert not is_prime(3825123056546413051)
    assert is_prime(2**61 - 1)  # Mersenne prime
    assert not is_prime(2**62 - 1)


def test_is_squarefree_single_values():
    assert is_squarefree(1)
    assert not is_squarefree(0)
    assert is_squarefree(2 * 3 * 5 * 7)
    assert not is_squarefree(4) and not is_squarefree(18)
    for n in range(1, 500):
        assert is_squarefree(n) == (naive_mobius(n) != 0), n


def test_base_primes_cache_growth():
    small = base_primes(100)
    assert small.tolist()[:5] == [2, 3, 5, 7, 11]
    assert small[-1] == 97
    bigger = base_primes(10**4)
    assert bigger[-1] == 9973

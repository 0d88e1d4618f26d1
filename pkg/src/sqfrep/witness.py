"""Witness searches: representations n = p + s that certify whole families
of moduli k at once.

Each strategy finds one or more representations of n as an odd prime plus a
square-free part, structured so that gcd conditions between the parts
guarantee at least one part is co-prime to every k in the advertised
family.  Searches ascend over the square-free part (the cheap side), which
keeps primality of n - s as the only expensive check and makes every
search deterministic.

Strategy summary:

* large_modulus   -- one part s <= s_cap; certifies all primes q > s_cap.
* small_modulus_pair -- two parts with gcd <= 2; certifies all odd primes.
* coprime_cover   -- N+1 pairwise co-prime parts (even n) or even parts
                     with pairwise co-prime odd halves (odd n); certifies
                     odd k with at most N prime factors.
* double_goldbach -- two prime pairs, four distinct primes; certifies any
                     k with at most three prime factors.
* triple_odd      -- three even parts with pairwise co-prime odd halves;
                     by pigeonhole this certifies odd k with at most two
                     prime factors (three parts cannot dodge three).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from .sieve import (
    SEGMENT_CAPACITY,
    base_primes,
    is_prime,
    is_squarefree,
    prime_bitmap,
    squarefree_bitmap,
)

# Subtractor-prime budget for the double-Goldbach search.  Chosen by
# exhaustive scan: every even n in [36, 1e7) except n = 38 has two Goldbach
# pairs with smaller primes below 1000 (worst case 953 at n = 6206272),
# while n = 740000138 has no Goldbach pair at all below 1117 and therefore
# falls back to the co-prime cover.
DEFAULT_GOLDBACH_P_LIMIT = 1000

DEFAULT_S_CAP = 10**5


class Strategy(str, Enum):
    LARGE_MODULUS = "large_modulus"
    SMALL_MODULUS_PAIR = "small_modulus_pair"
    COPRIME_COVER = "coprime_cover"
    DOUBLE_GOLDBACH = "double_goldbach"
    TRIPLE_ODD = "triple_odd"
    DIRECT = "direct"


class WitnessNotFound(LookupError):
    """A bounded search exhausted its budget without finding a witness."""

    def __init__(self, strategy: Strategy, n: int, detail: str = ""):
        self.strategy = strategy
        self.n = n
        super().__init__(f"{strategy.value} found no witness for n={n}" + (f" ({detail})" if detail else ""))


class ArithContext:
    """Primality / square-freeness backend for the searches.

    When built with a limit, lookups below the limit hit byte tables
    (cheap, shareable across forked workers); everything else falls back
    to the deterministic single-value tests.
    """

    def __init__(self, limit: int = 0):
        self.limit = limit
        if limit > 0:
            prime = np.empty(limit, dtype=bool)
            sqfree = np.empty(limit, dtype=bool)
            for lo in range(0, limit, SEGMENT_CAPACITY):
                hi = min(lo + SEGMENT_CAPACITY, limit)
                prime[lo:hi] = prime_bitmap(lo, hi)
                sqfree[lo:hi] = squarefree_bitmap(lo, hi)
            self._prime = prime.tobytes()
            self._sqfree = sqfree.tobytes()
        else:
            self._prime = b""
            self._sqfree = b""

    def is_prime(self, m: int) -> bool:
        if 0 <= m < self.limit:
            return self._prime[m] == 1
        return is_prime(m)

    def is_squarefree(self, m: int) -> bool:
        if 0 <= m < self.limit:
            return self._sqfree[m] == 1
        return is_squarefree(m)


_DEFAULT_CTX = ArithContext(0)


@dataclass(frozen=True)
class WitnessRecord:
    """One certificate: primes[i] + parts[i] = n for every i, with the
    strategy's gcd structure tying the parts together."""

    n: int
    strategy: Strategy
    primes: Tuple[int, ...]
    parts: Tuple[int, ...]
    covered_moduli: str

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "strategy": self.strategy.value,
            "primes": list(self.primes),
            "parts": list(self.parts),
            "covered_moduli": self.covered_moduli,
        }

    def verify(self, ctx: Optional[ArithContext] = None) -> bool:
        """Re-validate every clause: sums, primality, square-freeness, and
        the strategy-specific gcd conditions."""
        ctx = ctx or _DEFAULT_CTX
        if len(self.primes) != len(self.parts):
            return False
        for p, s in zip(self.primes, self.parts):
            if p + s != self.n or not ctx.is_prime(p) or not ctx.is_squarefree(s):
                return False
        parts = self.parts
        if self.strategy is Strategy.LARGE_MODULUS:
            return len(parts) == 1 and self.primes[0] % 2 == 1
        if self.strategy is Strategy.SMALL_MODULUS_PAIR:
            return (
                len(parts) == 2
                and self.primes[0] > self.primes[1] > 2
                and math.gcd(parts[0], parts[1]) <= 2
            )
        if self.strategy is Strategy.DOUBLE_GOLDBACH:
            return len(set(self.primes)) == 4 and all(ctx.is_prime(s) for s in parts)
        if self.strategy is Strategy.TRIPLE_ODD:
            if len(parts) != 3 or any(p <= 2 or p % 2 == 0 for p in self.primes):
                return False
            for i in range(3):
                for j in range(i + 1, 3):
                    g = math.gcd(parts[i], parts[j])
                    if g & (g - 1):  # gcd must have no odd prime divisor
                        return False
            return True
        if self.strategy is Strategy.COPRIME_COVER:
            if self.n % 2 == 0:
                return all(
                    math.gcd(parts[i], parts[j]) == 1
                    for i in range(len(parts))
                    for j in range(i + 1, len(parts))
                )
            if any(s % 2 for s in parts):
                return False
            return all(
                math.gcd(parts[i] // 2, parts[j] // 2) == 1
                for i in range(len(parts))
                for j in range(i + 1, len(parts))
            )
        return True  # DIRECT carries no extra structure


@dataclass
class ExceptionLedger:
    """Accumulated search failures per strategy, with any fallback witness
    that rescued the value.  Merges deterministically by sorting on n."""

    failed: Dict[str, List[int]] = field(default_factory=dict)
    fallback: Dict[int, WitnessRecord] = field(default_factory=dict)

    def record_failure(self, strategy: Strategy, n: int) -> None:
        self.failed.setdefault(strategy.value, []).append(n)

    def record_fallback(self, n: int, record: WitnessRecord) -> None:
        self.fallback[n] = record

    def merge(self, other: "ExceptionLedger") -> None:
        for strategy, values in other.failed.items():
            self.failed.setdefault(strategy, []).extend(values)
        self.fallback.update(other.fallback)
        for values in self.failed.values():
            values.sort()

    def to_dict(self) -> dict:
        return {
            "failed": {k: sorted(v) for k, v in sorted(self.failed.items())},
            "fallback": {str(n): rec.to_dict() for n, rec in sorted(self.fallback.items())},
        }


def witness_admits_modulus(w: WitnessRecord, k: int) -> bool:
    """True iff some part of the witness is co-prime to k."""
    return any(math.gcd(s, k) == 1 for s in w.parts)


def find_rep_large_modulus(
    n: int, s_cap: int = DEFAULT_S_CAP, ctx: Optional[ArithContext] = None
) -> WitnessRecord:
    """Smallest square-free s <= s_cap with n - s an odd prime.

    Any square-free s <= s_cap is automatically co-prime to every prime
    q > s_cap, so one representation certifies that whole family.
    """
    if n < 4:
        raise ValueError("find_rep_large_modulus requires n >= 4")
    ctx = ctx or _DEFAULT_CTX
    for s in range(1, min(s_cap, n - 3) + 1):
        p = n - s
        if p % 2 and ctx.is_squarefree(s) and ctx.is_prime(p):
            return WitnessRecord(
                n=n,
                strategy=Strategy.LARGE_MODULUS,
                primes=(p,),
                parts=(s,),
                covered_moduli=f"primes q > {s_cap}",
            )
    raise WitnessNotFound(Strategy.LARGE_MODULUS, n)


def find_rep_pair_small_modulus(n: int, ctx: Optional[ArithContext] = None) -> WitnessRecord:
    """Two odd primes p1 > p2 with square-free parts of gcd <= 2.

    Any odd prime q divides at most one of the two parts, so the pair
    certifies every odd prime modulus simultaneously.  Ascends over parts;
    among witnesses it minimizes the larger part, then the smaller.
    """
    if n < 4:
        raise ValueError("find_rep_pair_small_modulus requires n >= 4")
    ctx = ctx or _DEFAULT_CTX
    seen: List[int] = []
    for s in range(1, n - 2):
        p = n - s
        if p < 3:
            break
        if p % 2 == 0 or not ctx.is_squarefree(s) or not ctx.is_prime(p):
            continue
        for s_prev in seen:
            if math.gcd(s_prev, s) <= 2:
                return WitnessRecord(
                    n=n,
                    strategy=Strategy.SMALL_MODULUS_PAIR,
                    primes=(n - s_prev, n - s),
                    parts=(s_prev, s),
                    covered_moduli="all odd primes q",
                )
        seen.append(s)
    raise WitnessNotFound(
        Strategy.SMALL_MODULUS_PAIR, n, f"{len(seen)} usable part(s)"
    )


def find_coprime_cover(
    n: int, N: int = 2, ctx: Optional[ArithContext] = None
) -> WitnessRecord:
    """Greedy ascending cover of N+1 square-free parts with n - part prime.

    Even n: parts pairwise co-prime.  Odd n: parts even and square-free
    with pairwise co-prime odd halves, so no odd prime divides two of them.
    Either way an odd k with at most N prime factors misses at least one
    part.
    """
    if n < 16:
        raise ValueError("find_coprime_cover requires n >= 16")
    if N not in (2, 3):
        raise ValueError("N must be 2 or 3")
    ctx = ctx or _DEFAULT_CTX
    chosen: List[int] = []
    if n % 2 == 0:
        for ell in range(1, n - 1):
            if not ctx.is_squarefree(ell) or not ctx.is_prime(n - ell):
                continue
            if all(math.gcd(ell, c) == 1 for c in chosen):
                chosen.append(ell)
                if len(chosen) == N + 1:
                    break
    else:
        for ell in range(2, n - 2, 2):
            if not ctx.is_squarefree(ell):
                continue
            p = n - ell
            if p < 3 or not ctx.is_prime(p):
                continue
            half = ell // 2
            if all(math.gcd(half, c // 2) == 1 for c in chosen):
                chosen.append(ell)
                if len(chosen) == N + 1:
                    break
    if len(chosen) < N + 1:
        raise WitnessNotFound(Strategy.COPRIME_COVER, n, f"only {len(chosen)} parts")
    return WitnessRecord(
        n=n,
        strategy=Strategy.COPRIME_COVER,
        primes=tuple(n - ell for ell in chosen),
        parts=tuple(chosen),
        covered_moduli=f"odd square-free k with at most {N} prime factors",
    )


def find_double_goldbach(
    n: int,
    ctx: Optional[ArithContext] = None,
    p_limit: int = DEFAULT_GOLDBACH_P_LIMIT,
) -> WitnessRecord:
    """Two Goldbach representations n = p1 + p2 = q1 + q2, four distinct
    primes, searching the smaller prime of each pair ascending up to
    p_limit.

    Four distinct primes cannot all share a factor with a k that has at
    most three prime factors, so one of the four representations is always
    admissible.
    """
    if n < 8 or n % 2:
        raise ValueError("find_double_goldbach requires even n >= 8")
    ctx = ctx or _DEFAULT_CTX
    pairs: List[Tuple[int, int]] = []
    for p in base_primes(min(p_limit, (n - 1) // 2)).tolist():
        if ctx.is_prime(n - p):
            pairs.append((p, n - p))
            if len(pairs) == 2:
                (a, b), (c, d) = pairs
                return WitnessRecord(
                    n=n,
                    strategy=Strategy.DOUBLE_GOLDBACH,
                    primes=(a, b, c, d),
                    parts=(b, a, d, c),
                    covered_moduli="any k with at most 3 prime factors",
                )
    raise WitnessNotFound(
        Strategy.DOUBLE_GOLDBACH, n, f"{len(pairs)} pair(s) with p <= {p_limit}"
    )


def find_triple_odd(n: int, ctx: Optional[ArithContext] = None) -> WitnessRecord:
    """Three odd primes with even square-free parts whose pairwise gcds are
    powers of two, i.e. the odd halves are pairwise co-prime.

    An odd k with at most two prime factors shares a factor with at most
    two of the three parts, so one part stays co-prime to it.
    """
    if n < 9 or n % 2 == 0:
        raise ValueError("find_triple_odd requires odd n >= 9")
    ctx = ctx or _DEFAULT_CTX
    halves: List[int] = []
    parts: List[int] = []
    for s in range(2, n - 2, 2):
        if not ctx.is_squarefree(s):
            continue
        p = n - s
        if p < 3 or not ctx.is_prime(p):
            continue
        m = s // 2
        if all(math.gcd(m, h) == 1 for h in halves):
            halves.append(m)
            parts.append(s)
            if len(parts) == 3:
                return WitnessRecord(
                    n=n,
                    strategy=Strategy.TRIPLE_ODD,
                    primes=tuple(n - s for s in parts),
                    parts=tuple(parts),
                    covered_moduli="odd k with at most 2 prime factors",
                )
    raise WitnessNotFound(Strategy.TRIPLE_ODD, n, f"only {len(parts)} parts")


def find_direct(n: int, k: int, ctx: Optional[ArithContext] = None) -> WitnessRecord:
    """Per-modulus brute force: smallest prime p < n with n - p square-free
    and co-prime to k.  Used for cross-validation and sub-threshold n."""
    if n < 3:
        raise ValueError("find_direct requires n >= 3")
    ctx = ctx or _DEFAULT_CTX
    for p in range(2, n):
        if not ctx.is_prime(p):
            continue
        s = n - p
        if ctx.is_squarefree(s) and math.gcd(s, k) == 1:
            return WitnessRecord(
                n=n,
                strategy=Strategy.DIRECT,
                primes=(p,),
                parts=(s,),
                covered_moduli=f"k = {k}",
            )
    raise WitnessNotFound(Strategy.DIRECT, n, f"k={k}")


def run_strategy_chain(
    n: int,
    ctx: Optional[ArithContext] = None,
    strategies: Optional[Tuple[Strategy, ...]] = None,
    ledger: Optional[ExceptionLedger] = None,
    goldbach_p_limit: int = DEFAULT_GOLDBACH_P_LIMIT,
) -> Optional[WitnessRecord]:
    """Run the per-n strategy chain, recording failures in the ledger.

    Default chain: even n tries double-Goldbach then the co-prime cover;
    odd n tries the triple search then the cover.  Strategies whose
    preconditions exclude n are skipped silently.  Returns the first
    witness found, or None when every applicable strategy failed.
    """
    ctx = ctx or _DEFAULT_CTX
    if strategies is None:
        if n % 2 == 0:
            strategies = (Strategy.DOUBLE_GOLDBACH, Strategy.COPRIME_COVER)
        else:
            strategies = (Strategy.TRIPLE_ODD, Strategy.COPRIME_COVER)
    witness = None
    failed_any = False
    for strategy in strategies:
        try:
            if strategy is Strategy.DOUBLE_GOLDBACH:
                if n % 2 or n < 8:
                    continue
                witness = find_double_goldbach(n, ctx, p_limit=goldbach_p_limit)
            elif strategy is Strategy.TRIPLE_ODD:
                if n % 2 == 0 or n < 9:
                    continue
                witness = find_triple_odd(n, ctx)
            elif strategy is Strategy.COPRIME_COVER:
                if n < 16:
                    continue
                if n % 2 == 0:
                    # keep the 3-factor guarantee a Goldbach pair would have
                    # given; drop to a 3-part cover only if no 4-part exists
                    try:
                        witness = find_coprime_cover(n, 3, ctx)
                    except WitnessNotFound:
                        witness = find_coprime_cover(n, 2, ctx)
                else:
                    witness = find_coprime_cover(n, 2, ctx)
            elif strategy is Strategy.SMALL_MODULUS_PAIR:
                witness = find_rep_pair_small_modulus(n, ctx)
            elif strategy is Strategy.LARGE_MODULUS:
                witness = find_rep_large_modulus(n, ctx=ctx)
            else:
                continue
        except WitnessNotFound as exc:
            failed_any = True
            if ledger is not None:
                ledger.record_failure(exc.strategy, n)
            continue
        break
    if witness is not None and failed_any and ledger is not None:
        ledger.record_fallback(n, witness)
    return witness

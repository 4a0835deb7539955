"""Sieve-backed integer arithmetic.

Smallest-prime-factor sieves, factorization, Jacobi symbols, multiplicative
functions defined by their values on prime powers, and bulk tabulation of
such functions over an interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Callable, Optional, Sequence

import numpy as np

# spf entries are stored as 32-bit integers; larger limits are rejected.
SPF_LIMIT_CAP = 2**32 - 1
DEFAULT_MEMORY_BUDGET = 8 * 2**30  # bytes allowed for a single sieve array

# Exact-integer evaluation refuses results that would exceed 128 bits.
INT128_CEILING = 1 << 127

Factorization = list[tuple[int, int]]


@dataclass(frozen=True)
class SieveTable:
    """Smallest-prime-factor table covering 2 <= n <= limit.

    Immutable after construction; safe to share across threads.
    """

    limit: int
    spf: np.ndarray  # uint32; spf[n] = smallest prime factor of n, n >= 2

    def is_prime(self, n: int) -> bool:
        return 2 <= n <= self.limit and int(self.spf[n]) == n


def build_spf_sieve(limit: int, max_bytes: int = DEFAULT_MEMORY_BUDGET) -> SieveTable:
    """Build a smallest-prime-factor table for [2, limit].

    Cost is O(limit log log limit); the array uses 4 bytes per entry and the
    call is rejected when that would exceed max_bytes.
    """
    if limit < 2:
        raise ValueError(f"sieve limit must be >= 2, got {limit}")
    if limit > SPF_LIMIT_CAP:
        raise ValueError(f"sieve limit {limit} exceeds 32-bit entry cap {SPF_LIMIT_CAP}")
    if 4 * (limit + 1) > max_bytes:
        raise ValueError(
            f"sieve limit {limit} needs {4 * (limit + 1)} bytes, over budget {max_bytes}"
        )
    spf = np.zeros(limit + 1, dtype=np.uint32)
    for p in range(2, isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    unmarked = np.flatnonzero(spf[2:] == 0) + 2
    spf[unmarked] = unmarked  # untouched entries are prime
    return SieveTable(limit=limit, spf=spf)


def factorize(n: int, table: SieveTable) -> Factorization:
    """Return [(p, e), ...] with strictly increasing p and prod p^e == n."""
    if n < 1 or n > table.limit:
        raise ValueError(f"n={n} outside sieve range [1, {table.limit}]")
    out: Factorization = []
    spf = table.spf
    m = n
    while m > 1:
        p = int(spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        out.append((p, e))
    return out


def factorize_trial(n: int) -> Factorization:
    """Trial-division factorization; for small n where no sieve is at hand."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    out: Factorization = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out


def quad_symbol(a: int, m: int) -> int:
    """Jacobi symbol (a/m) for odd m >= 1; the Legendre symbol for prime m."""
    if m < 1 or m % 2 == 0:
        raise ValueError(f"modulus must be odd and positive, got {m}")
    a %= m
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


# ---------------------------------------------------------------------------
# Multiplicative functions given on prime powers


@dataclass(frozen=True)
class PrimePowerFn:
    """A multiplicative function determined by its values on prime powers.

    rule(p, k) gives the value at p^k for k >= 1 and must accept either a
    scalar prime or an ndarray of primes (k is always a scalar).  The value
    at k = 0 is implicitly 1.  two_rule, when given, overrides the values at
    p = 2 (several of the built-in tables are irregular there).
    """

    rule: Callable
    two_rule: Optional[Callable[[int], float]] = None
    name: str = ""

    def __call__(self, p: int, k: int) -> float:
        if k == 0:
            return 1.0
        if p == 2 and self.two_rule is not None:
            return float(self.two_rule(k))
        return float(self.rule(p, k))

    def on_primes(self, primes: np.ndarray, k: int) -> np.ndarray:
        """Vectorized values at p^k over an ascending array of primes."""
        if k == 0:
            return np.ones(len(primes))
        # rules may divide by zero at p = 2 before the override lands
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            vals = np.asarray(self.rule(primes.astype(np.float64), k), dtype=np.float64)
        if vals.shape == ():  # rule returned a scalar constant
            vals = np.full(len(primes), float(vals))
        if self.two_rule is not None and len(primes) and primes[0] == 2:
            vals[0] = float(self.two_rule(k))
        return vals


def eval_multiplicative(fn: PrimePowerFn, fac: Factorization) -> float:
    """Value of the induced multiplicative function at n = prod p^e."""
    out = 1.0
    for p, e in fac:
        out *= fn(p, e)
    return out


def eval_divisor_sum(fn: PrimePowerFn, fac: Factorization) -> float:
    """Sum of fn over the divisors of n, as the product of local partial sums.

    Equals sum_{d | n} fn(d) with fn extended multiplicatively.
    """
    out = 1.0
    for p, e in fac:
        out *= 1.0 + sum(fn(p, j) for j in range(1, e + 1))
    return out


def mobius_invert_local(r: Sequence[float]) -> list[float]:
    """Invert partial sums at a single prime: f(p^k) = r(p^k) - r(p^(k-1)).

    r lists (r(p^0), r(p^1), ..., r(p^K)) with r(p^0) = 1; returns
    [f(p^1), ..., f(p^K)], the unique table whose divisor sums rebuild r.
    """
    if not len(r) or r[0] != 1:
        raise ValueError("r must start with r(p^0) = 1")
    return [r[k] - r[k - 1] for k in range(1, len(r))]


def partial_sum_fn(fn: PrimePowerFn, name: str = "") -> PrimePowerFn:
    """Prime-power table of the divisor sums 1 + fn(p) + ... + fn(p^k)."""

    def rule(p, k):
        acc = fn.rule(p, 1)
        for j in range(2, k + 1):
            acc = acc + fn.rule(p, j)
        return 1.0 + acc

    two = None
    if fn.two_rule is not None:
        def two(k, _f=fn):
            return 1.0 + sum(_f(2, j) for j in range(1, k + 1))

    return PrimePowerFn(rule, two_rule=two, name=name or f"1*{fn.name}")


# ---------------------------------------------------------------------------
# Exact-integer named functions


def totient(n: int, table: Optional[SieveTable] = None) -> int:
    """Euler totient, exact."""
    return jordan_totient(n, 1, table)


def jordan_totient(n: int, k: int, table: Optional[SieveTable] = None) -> int:
    """Jordan totient J_k(n) = n^k prod_{p|n} (1 - p^-k), exact.

    Rejects arguments whose value would exceed 128 bits.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if n ** k >= INT128_CEILING:
        raise ValueError(f"J_{k}({n}) exceeds the 128-bit range")
    fac = factorize(n, table) if table is not None else factorize_trial(n)
    out = 1
    for p, e in fac:
        out *= p ** (k * e) - p ** (k * (e - 1))
    return out


def eval_named(name: str, n: int, k: int = 1) -> int:
    """Evaluate a named exact-integer function: 'totient' or 'jordan'."""
    if name == "totient":
        return totient(n)
    if name == "jordan":
        return jordan_totient(n, k)
    raise ValueError(f"unknown named function {name!r}")


# ---------------------------------------------------------------------------
# Prime lists and bulk tabulation

_prime_cache: dict = {"limit": 0, "primes": None}


def primes_up_to(limit: int) -> np.ndarray:
    """Ascending int64 array of primes <= limit (cached across calls)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    if _prime_cache["limit"] < limit:
        composite = np.zeros(limit + 1, dtype=bool)
        composite[:2] = True
        for p in range(2, isqrt(limit) + 1):
            if not composite[p]:
                composite[p * p :: p] = True
        _prime_cache["primes"] = np.flatnonzero(~composite).astype(np.int64)
        _prime_cache["limit"] = limit
    primes = _prime_cache["primes"]
    if _prime_cache["limit"] == limit:
        return primes
    return primes[: int(np.searchsorted(primes, limit, side="right"))]


def multiplicative_table(fn: PrimePowerFn, limit: int) -> np.ndarray:
    """Tabulate the multiplicative function with local values fn(p, e).

    Returns a float64 array indexed by n for 0 <= n <= limit, with entry 0
    set to 0 and entry 1 to 1.  One pass over prime powers; zero values in
    the table are handled (exact-divisibility updates, no ratio tricks).
    """
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    res = np.ones(limit + 1)
    res[0] = 0.0
    primes = primes_up_to(limit)
    if not len(primes):
        return res
    n_small = int(np.searchsorted(primes, isqrt(limit), side="right"))
    for p in primes[:n_small].tolist():
        pe, e = p, 1
        while pe <= limit:
            idx = np.arange(pe, limit + 1, pe)
            res[idx[(idx // pe) % p != 0]] *= fn(p, e)
            pe *= p
            e += 1
    big = primes[n_small:]
    if len(big):
        # p > sqrt(limit): every multiple p*q <= limit has q < p, so the
        # exponent of p is exactly 1 and values can be scattered per q.
        vals = fn.on_primes(big, 1)
        res[big] *= vals
        q = 2
        while q * int(big[0]) <= limit:
            hi = int(np.searchsorted(big, limit // q, side="right"))
            res[big[:hi] * q] *= vals[:hi]
            q += 1
    return res


def totient_table(limit: int) -> np.ndarray:
    """Exact int64 array of totient values for 0 <= n <= limit."""
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in primes_up_to(limit).tolist():
        phi[p::p] -= phi[p::p] // p
    return phi


def jordan_table(limit: int, k: int) -> np.ndarray:
    """Exact array of J_k values for 0 <= n <= limit.

    Uses int64 when limit^k fits, Python integers (object dtype) up to the
    128-bit ceiling, and rejects anything larger.
    """
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if limit ** k >= INT128_CEILING:
        raise ValueError(f"J_{k} values up to {limit} exceed the 128-bit range")
    if limit ** k < 2**62:
        jk = np.arange(limit + 1, dtype=np.int64) ** k
    else:
        jk = np.array([n**k for n in range(limit + 1)], dtype=object)
    for p in primes_up_to(limit).tolist():
        pk = p**k
        jk[p::p] -= jk[p::p] // pk
    return jk

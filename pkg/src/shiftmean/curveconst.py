"""Elliptic-curve order constants and their mean-value verification runs.

The constant attached to a target group order N factors as

    twin_prime_constant * shift_part(N-1) * order_part(N)

with both parts multiplicative.  The original (unnormalized) variant swaps
order_part for a product that is not multiplicative at squares: its factor at
primes with even valuation carries a quadratic-residue symbol of the p-free
part of N.  Substituting that symbol by its mean value changes each
congruence-restricted sum only by O(1), which is what substitution_gap
measures directly.
"""

from __future__ import annotations

import enum
import math
from functools import lru_cache
from typing import Optional

import numpy as np

from .arith import (
    Factorization,
    PrimePowerFn,
    factorize_trial,
    multiplicative_table,
    primes_up_to,
    quad_symbol,
    totient,
)
from .euler import EulerProductValue, prime_zeta_odd
from .reports import MeanValueReport, MeanValueRow

DEFAULT_CONSTANT_CUTOFF = 10**8

ORIGINAL_MEAN = 31.0 / 30.0  # mean value of the unnormalized constant


class SymbolConvention(enum.Enum):
    """Reading of the residue symbol of the odd part at p = 2.

    UNIT takes it to be 1 (the substitution the 31/30 mean is derived under);
    KRONECKER uses the standard Kronecker extension.  Exactly one is active
    per evaluation.
    """

    UNIT = "unit"
    KRONECKER = "kronecker"


def _symbol_at_two(odd_part: int, conv: SymbolConvention) -> int:
    if conv is SymbolConvention.UNIT:
        return 1
    r = (-odd_part) % 8
    return 1 if r in (1, 7) else -1


# ---------------------------------------------------------------------------
# Prime-power kernels (Moebius inverses of the factor functions)

def _shift_kernel_rule(p, k):
    return 1.0 / ((p + 1.0) * (p - 2.0)) if k == 1 else 0.0 * p


shift_kernel = PrimePowerFn(
    _shift_kernel_rule,
    two_rule=lambda k: -1.0 / 3.0 if k == 1 else 0.0,
    name="shift_kernel",
)


def _order_kernel_rule(p, k):
    return (p - 1.0) / (p**k * (p - 2.0))


order_kernel = PrimePowerFn(
    _order_kernel_rule,
    two_rule=lambda k: 0.0 if k == 1 else 2.0 ** (1 - k),
    name="order_kernel",
)

order_kernel_odd = PrimePowerFn(
    _order_kernel_rule,
    two_rule=lambda k: -1.0 if k == 1 else 0.0,
    name="order_kernel_odd",
)


def _odd_val_kernel_rule(p, k):
    if k == 1:
        return (p - 1.0) / (p * (p - 2.0))
    if k % 2 == 0:
        return 1.0 / (p ** (k - 1) * (p - 2.0))
    return -1.0 / (p**k * (p - 2.0))


def _odd_val_kernel_two(k):
    if k == 1:
        return 0.0
    return 2.0 ** (2 - k) if k % 2 == 0 else -(2.0 ** (1 - k))


odd_val_kernel = PrimePowerFn(
    _odd_val_kernel_rule, two_rule=_odd_val_kernel_two, name="odd_val_kernel"
)


averaged_order_kernel = PrimePowerFn(
    _order_kernel_rule,
    two_rule=lambda k: 3.0 / 2.0**k if k % 2 == 0 else 0.0,
    name="averaged_order_kernel",
)

KERNELS = {
    "shift": shift_kernel,
    "order": order_kernel,
    "order_odd": order_kernel_odd,
    "odd_val": odd_val_kernel,
    "averaged_order": averaged_order_kernel,
}


# ---------------------------------------------------------------------------
# Factor functions (scalar via factorization, and as tabulation rules)

def _inv_square_deficit(p: float) -> float:
    """1 / (1 - 1/(p-1)^2) for p > 2."""
    return (p - 1.0) ** 2 / (p * (p - 2.0))


def shift_part(n: int, fac: Optional[Factorization] = None) -> float:
    """Multiplicative factor attached to the shifted argument N-1."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    out = 1.0
    for p, _e in fac if fac is not None else factorize_trial(n):
        out *= 1.0 - 1.0 / ((p - 1.0) ** 2 * (p + 1.0))
        if p > 2:
            out *= _inv_square_deficit(p)
    return out


def order_part(n: int, odd_support: bool = False,
               fac: Optional[Factorization] = None) -> float:
    """Multiplicative factor attached to the order N itself.

    With odd_support the function vanishes on even N (the odd-restricted
    mean-value run).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if odd_support and n % 2 == 0:
        return 0.0
    out = 1.0
    for p, e in fac if fac is not None else factorize_trial(n):
        out *= p / (p - 1.0) * (1.0 - 1.0 / (float(p) ** e * (p - 1.0)))
        if p > 2:
            out *= _inv_square_deficit(p)
    return out


def odd_val_part(n: int, fac: Optional[Factorization] = None) -> float:
    """Like order_part but with the (1 - 1/(p^e (p-1))) factor only at odd valuations."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    out = 1.0
    for p, e in fac if fac is not None else factorize_trial(n):
        out *= p / (p - 1.0)
        if p > 2:
            out *= _inv_square_deficit(p)
        if e % 2 == 1:
            out *= 1.0 - 1.0 / (float(p) ** e * (p - 1.0))
    return out


def even_val_symbol_part(n: int, conv: SymbolConvention = SymbolConvention.UNIT,
                         fac: Optional[Factorization] = None) -> float:
    """Product over primes with even positive valuation, carrying the symbol
    of the p-free part; not multiplicative."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    out = 1.0
    for p, e in fac if fac is not None else factorize_trial(n):
        if e % 2 != 0:
            continue
        free_part = n // p**e
        chi = _symbol_at_two(free_part, conv) if p == 2 else quad_symbol(-free_part, p)
        out *= 1.0 - (p - chi) / (float(p) ** (e + 1) * (p - 1.0))
    return out


def even_val_mean_part(n: int, fac: Optional[Factorization] = None) -> float:
    """The symbol-free (mean-substituted) counterpart of even_val_symbol_part."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    out = 1.0
    for p, e in fac if fac is not None else factorize_trial(n):
        if e % 2 != 0:
            continue
        if p == 2:
            out *= 1.0 - 1.0 / 2.0 ** (e + 1)
        else:
            out *= 1.0 - 1.0 / (float(p) ** e * (p - 1.0))
    return out


def order_part_original(n: int, conv: SymbolConvention = SymbolConvention.UNIT) -> float:
    """Order-side factor of the unnormalized constant: odd_val * even_val_symbol."""
    fac = factorize_trial(n)
    return odd_val_part(n, fac) * even_val_symbol_part(n, conv, fac)


# Parent functions as tabulation rules (multiplicative, one sieve pass).

def _shift_part_rule(p, k):
    return (1.0 - 1.0 / ((p - 1.0) ** 2 * (p + 1.0))) * _inv_square_deficit(p)


shift_part_fn = PrimePowerFn(
    _shift_part_rule, two_rule=lambda k: 2.0 / 3.0, name="shift_part"
)


def _order_part_rule(p, k):
    return (p - 1.0) / (p - 2.0) * (1.0 - 1.0 / (p**k * (p - 1.0)))


order_part_fn = PrimePowerFn(
    _order_part_rule, two_rule=lambda k: 2.0 - 2.0 ** (1 - k), name="order_part"
)


def _odd_val_part_rule(p, k):
    base = (p - 1.0) / (p - 2.0)
    if k % 2 == 1:
        return base * (1.0 - 1.0 / (p**k * (p - 1.0)))
    return base + 0.0 * p


odd_val_part_fn = PrimePowerFn(
    _odd_val_part_rule,
    two_rule=lambda k: 2.0 * (1.0 - 2.0 ** (-k)) if k % 2 == 1 else 2.0,
    name="odd_val_part",
)


def _even_val_mean_rule(p, k):
    if k % 2 == 1:
        return 1.0 + 0.0 * p
    return 1.0 - 1.0 / (p**k * (p - 1.0))


even_val_mean_fn = PrimePowerFn(
    _even_val_mean_rule,
    two_rule=lambda k: 1.0 - 2.0 ** (-(k + 1)) if k % 2 == 0 else 1.0,
    name="even_val_mean",
)


def even_val_symbol_table(limit: int,
                          conv: SymbolConvention = SymbolConvention.UNIT) -> np.ndarray:
    """Tabulate even_val_symbol_part over [0, limit].

    Not multiplicative, so it gets its own pass: for each prime power p^(2a)
    the cofactors m with p not dividing m are batched and the symbol is read
    off a quadratic-residue table mod p.
    """
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    res = np.ones(limit + 1)
    res[0] = 0.0
    primes = primes_up_to(math.isqrt(limit))
    for p in primes.tolist():
        qr = _qr_table(p) if p > 2 else None
        base = p * p
        while base <= limit:
            m = np.arange(1, limit // base + 1, dtype=np.int64)
            m = m[m % p != 0]
            if p == 2:
                if conv is SymbolConvention.UNIT:
                    chi = np.ones(len(m))
                else:
                    r = (-m) % 8
                    chi = np.where((r == 1) | (r == 7), 1.0, -1.0)
            else:
                chi = qr[(-m) % p].astype(np.float64)
            res[base * m] *= 1.0 - (p - chi) / (float(base) * p * (p - 1.0))
            base *= p * p
    return res


@lru_cache(maxsize=128)
def _qr_table(p: int) -> np.ndarray:
    """chi[t] for t mod p: 0 at 0, +1 at nonzero squares, -1 otherwise."""
    squares = np.unique((np.arange(1, p, dtype=np.int64) ** 2) % p)
    table = np.full(p, -1, dtype=np.int8)
    table[squares] = 1
    table[0] = 0
    return table


# ---------------------------------------------------------------------------
# Constants

def twin_prime_constant(prime_cutoff: int) -> EulerProductValue:
    """prod_{2 < p <= cutoff} (1 - 1/(p-1)^2), with certified crude tail 2/(P-1)
    and a sharper prime-density estimate alongside."""
    if prime_cutoff < 3:
        raise ValueError(f"prime cutoff must be >= 3, got {prime_cutoff}")
    odd = primes_up_to(prime_cutoff)[1:].astype(np.float64)
    s = -1.0 / (odd - 1.0) ** 2
    value = float(np.exp(np.sum(np.log1p(s))))
    crude = 2.0 / (prime_cutoff - 1)
    sharp = abs(value) / (prime_cutoff * (math.log(prime_cutoff) - 1.0))
    return EulerProductValue(
        value=value,
        prime_cutoff=prime_cutoff,
        power_depth=1,
        tail_bound=crude,
        tail_bound_sharp=sharp,
    )


def twin_prime_oracle() -> float:
    """Prime-zeta-accelerated value of the full product, ~1e-13 accurate.

    log of the product is -sum_{m>=2} ((2^m - 2)/m) * sum_{p odd} p^-m,
    folding the odd prime zeta values instead of truncating at a cutoff.
    """
    acc = 0.0
    for m in range(2, 130):
        term = (2.0**m - 2.0) / m * prime_zeta_odd(m)
        acc -= term
        if abs(term) < 1e-20:
            break
    return math.exp(acc)


_c2_cache: dict[int, EulerProductValue] = {}


def cached_twin_prime_constant(prime_cutoff: int = DEFAULT_CONSTANT_CUTOFF) -> EulerProductValue:
    """Computed once per cutoff and reused by every order-constant evaluation."""
    if prime_cutoff not in _c2_cache:
        _c2_cache[prime_cutoff] = twin_prime_constant(prime_cutoff)
    return _c2_cache[prime_cutoff]


def order_constant(n: int, *, c2: Optional[EulerProductValue] = None) -> float:
    """The normalized order constant for target order n >= 2."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if c2 is None:
        c2 = cached_twin_prime_constant()
    return c2.value * shift_part(n - 1) * order_part(n)


def order_constant_original(n: int, conv: SymbolConvention = SymbolConvention.UNIT,
                            *, c2: Optional[EulerProductValue] = None) -> float:
    """The unnormalized (original-form) order constant for n >= 2."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if c2 is None:
        c2 = cached_twin_prime_constant()
    return c2.value * shift_part(n - 1) * order_part_original(n, conv)


def order_constant_direct(n: int, prime_cutoff: int) -> EulerProductValue:
    """The order constant straight from its defining product, truncated.

    Runs over p <= cutoff with p not dividing n; the squared residue symbol
    of n-1 reduces to an indicator: 1 when p does not divide n-1, else 0.
    Returns the truncated value with tail accounting; multiply by n/totient(n)
    to compare with order_constant.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if prime_cutoff < 3:
        raise ValueError(f"prime cutoff must be >= 3, got {prime_cutoff}")
    primes = primes_up_to(prime_cutoff)
    pf = primes.astype(np.float64)
    indicator = ((n - 1) % primes != 0).astype(np.float64)
    if n == 1:
        indicator[:] = 0.0  # n-1 = 0 is divisible by every prime
    deficits = -(indicator * pf + 1.0) / ((pf - 1.0) ** 2 * (pf + 1.0))
    for p, e in factorize_trial(n):
        if p <= prime_cutoff:
            idx = int(np.searchsorted(primes, p))
            deficits[idx] = -1.0 / (float(p) ** e * (p - 1.0))
    value = float(np.exp(np.sum(np.log1p(deficits))))
    crude = 2.0 / (prime_cutoff - 1)
    return EulerProductValue(
        value=value,
        prime_cutoff=prime_cutoff,
        power_depth=1,
        tail_bound=abs(value) * math.expm1(crude),
        tail_bound_sharp=abs(value) / (prime_cutoff * (math.log(prime_cutoff) - 1.0)),
    )


def eval_point(n: int, conv: SymbolConvention = SymbolConvention.UNIT,
               *, c2: Optional[EulerProductValue] = None) -> dict:
    """All factor values at a single order n, for the JSON eval interface."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if c2 is None:
        c2 = cached_twin_prime_constant()
    fac = factorize_trial(n)
    g2 = odd_val_part(n, fac)
    g3 = even_val_symbol_part(n, conv, fac)
    g4 = even_val_mean_part(n, fac)
    return {
        "N": n,
        "Kstar": order_constant(n, c2=c2),
        "Khat": order_constant_original(n, conv, c2=c2),
        "F_star": shift_part(n - 1),
        "G_star": order_part(n, fac=fac),
        "G1": g2 * g3,
        "G2": g2,
        "G3": g3,
        "G4": g4,
        "convention": conv.value,
    }


# ---------------------------------------------------------------------------
# Mean-value verification runs

MEAN_TARGETS = ("t2a", "t2b", "t3")


def _mean_slope(which: str) -> float:
    if which == "t2a":
        return 1.0
    if which == "t2b":
        return 1.0 / 3.0
    if which == "t3":
        return ORIGINAL_MEAN
    raise ValueError(f"unknown mean-value target {which!r}; options: {MEAN_TARGETS}")


def mean_order_grid(which: str, x_grid, conv: SymbolConvention = SymbolConvention.UNIT,
                    *, c2: Optional[EulerProductValue] = None) -> MeanValueReport:
    """Empirical sum of the order constant over N <= x against its main term.

    t2a: all N, main term x.  t2b: odd N only, main term x/3.  t3: the
    unnormalized constant, main term 31x/30.  Sums start at N = 2 since the
    shifted factor is undefined at 0; the omission is absorbed by the
    O(log x) error scale.  Normalized residual divides by log x.
    """
    slope = _mean_slope(which)
    xs = [int(v) for v in x_grid]
    if not xs or any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError("x grid must be non-empty and strictly increasing")
    if xs[0] < 2:
        raise ValueError("grid must start at x >= 2")
    xmax = xs[-1]
    if c2 is None:
        c2 = cached_twin_prime_constant()

    shift_vals = multiplicative_table(shift_part_fn, xmax - 1)
    if which == "t2a":
        order_vals = multiplicative_table(order_part_fn, xmax)
    elif which == "t2b":
        order_vals = multiplicative_table(order_part_fn, xmax)
        order_vals[0::2] = 0.0
    else:
        order_vals = multiplicative_table(odd_val_part_fn, xmax) * even_val_symbol_table(xmax, conv)

    # products[i] is the term at N = i + 2
    products = shift_vals[1:xmax] * order_vals[2 : xmax + 1]
    rows = []
    for x in xs:
        emp = c2.value * math.fsum(products[: x - 1].tolist())
        pred = slope * x
        residual = emp - pred
        rows.append(
            MeanValueRow(
                x=x, empirical=emp, predicted=pred,
                residual=residual, normalized=residual / math.log(x),
            )
        )
    return MeanValueReport(rows=tuple(rows), error_label="log x", label=which)


def mean_order_row(x: int, which: str,
                   conv: SymbolConvention = SymbolConvention.UNIT,
                   *, c2: Optional[EulerProductValue] = None) -> MeanValueRow:
    """Single grid row; see mean_order_grid."""
    return mean_order_grid(which, [x], conv, c2=c2).rows[0]


def substitution_gap(x: int, d: int = 1, modulus: int = 1,
                     conv: SymbolConvention = SymbolConvention.UNIT) -> float:
    """Congruence-restricted sum of (even_val_symbol_part - even_val_mean_part).

    Sums over N <= x with N = 1 (mod d) and N = 0 (mod modulus).  The symbol
    substitution claims this stays O(1) in x for every coprime pair (d,
    modulus); incompatible congruences give the empty sum, 0.
    """
    if x < 1 or d < 1 or modulus < 1:
        raise ValueError("x, d, modulus must all be >= 1")
    if math.gcd(d, modulus) > 1:
        return 0.0
    symbol_vals = even_val_symbol_table(x, conv)
    mean_vals = multiplicative_table(even_val_mean_fn, x)
    n = np.arange(x + 1, dtype=np.int64)
    mask = (n % d == 1 % d) & (n % modulus == 0)
    mask[0] = False
    return math.fsum((symbol_vals[mask] - mean_vals[mask]).tolist())

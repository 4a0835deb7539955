"""Euler-product constants for mean values of shifted multiplicative products.

Computes the constant in front of the main term of sums
sum_{n<=x} F(n-h) G(n) where F(n) = A(n) sum_{d|n} f(d) and
G(n) = B(n) sum_{d|n} g(d) with f, g multiplicative and A(n) = n^a,
B(n) = n^b monomials.  The constant is a product of per-prime local factors
with a correction factor at each prime dividing the shift h.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .arith import PrimePowerFn, factorize_trial, primes_up_to

# Power-series truncation: stop once p^k passes the ceiling or the summand
# magnitude falls below the floor; both are beyond double resolution for the
# geometrically decaying tables used here.
POWER_CEILING = 10**18
TERM_FLOOR = 1e-20
DEFAULT_DEPTH = 60

# local factors smaller than this are treated as degenerate (division by
# near-zero in the shift correction)
DEGENERATE_FLOOR = 1e-12

DEFAULT_PRIME_CUTOFF = 10**6


class DegenerateLocalFactor(ArithmeticError):
    """The exponent-zero local sum vanished; the shift correction divides by it."""


@dataclass(frozen=True)
class MonomialBaseline:
    """Smooth parts A(n) = n^deg_shifted, B(n) = n^deg_direct.

    The progression sums sum_{n<=x, n=r mod m} A(n-h)B(n) are x^(a+b+1)/(m(a+b+1))
    up to an error O(x^(a+b)), which fixes the main term and error scale below.
    """

    deg_shifted: int
    deg_direct: int

    def __post_init__(self):
        if self.deg_shifted < 0 or self.deg_direct < 0:
            raise ValueError("degrees must be non-negative")

    def main_term(self, x: float) -> float:
        d = self.deg_shifted + self.deg_direct + 1
        return float(x) ** d / d

    def progression_error(self, x: float) -> float:
        return float(x) ** (self.deg_shifted + self.deg_direct)


@dataclass(frozen=True)
class ShiftedPairSpec:
    """One full shifted-mean-value problem instance.

    The absolute convergence of sum |f(d)|/d and sum |g(d)|/d, and the
    doubling bounds on the partial-sum envelopes, are the caller's
    responsibility; they hold for every built-in preset.
    """

    f: PrimePowerFn
    g: PrimePowerFn
    shift: int
    baseline: MonomialBaseline

    def __post_init__(self):
        if self.shift < 1:
            raise ValueError(f"shift must be >= 1, got {self.shift}")


@dataclass(frozen=True)
class EulerProductValue:
    """A truncated Euler product together with its truncation accounting.

    tail_bound estimates the effect of primes beyond prime_cutoff using the
    measured envelope max_p p*|f(p)+g(p)| extended past the cutoff; it is a
    heuristic bound (the convergence hypotheses carry no effective rate), and
    tail_bound_sharp, when present, is a prime-density refinement of it.
    """

    value: float
    prime_cutoff: int
    power_depth: int
    tail_bound: float
    tail_bound_sharp: Optional[float] = None


def _max_depth(p: int, depth: int) -> int:
    """Largest usable exponent at p: min(depth, floor(log_p POWER_CEILING))."""
    k, pk = 0, 1
    while k < depth and pk <= POWER_CEILING // p:
        pk *= p
        k += 1
    return max(k, 1)


def paired_power_sum(f: PrimePowerFn, g: PrimePowerFn, p: int, min_exp: int,
                     depth: int) -> float:
    """Sum of f(p^e1) g(p^e2) / p^(e1+e2) over pairs with min(e1,e2) = min_exp.

    Exponents beyond depth are dropped.
    """
    if depth < min_exp:
        raise ValueError(f"depth {depth} smaller than min exponent {min_exp}")
    i = min_exp
    total = f(p, i) * g(p, i) / float(p) ** (2 * i)
    for e in range(i + 1, depth + 1):
        w = float(p) ** (e + i)
        total += (f(p, e) * g(p, i) + f(p, i) * g(p, e)) / w
    return total


def local_factor(f: PrimePowerFn, g: PrimePowerFn, p: int, depth: int) -> float:
    """1 + sum_{j=1..depth} (f(p^j)+g(p^j))/p^j, one factor of the prime product."""
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    total = 1.0
    for j in range(1, depth + 1):
        total += (f(p, j) * 1.0 + 1.0 * g(p, j)) / float(p) ** j
    return total


def shift_local_factor(f: PrimePowerFn, g: PrimePowerFn, p: int, valuation: int,
                       depth: int) -> float:
    """Correction factor at a prime p dividing the shift to the given valuation.

    Returns 1 + (sum_{i=1..valuation} p^i S_i) / S_0 where S_i is
    paired_power_sum at minimum exponent i.  Raises DegenerateLocalFactor when
    |S_0| falls below DEGENERATE_FLOOR.
    """
    if valuation < 1:
        raise ValueError(f"valuation must be >= 1, got {valuation}")
    s0 = paired_power_sum(f, g, p, 0, depth)
    if abs(s0) < DEGENERATE_FLOOR:
        raise DegenerateLocalFactor(
            f"local sum at p={p} is {s0:.3e}, below floor {DEGENERATE_FLOOR}"
        )
    num = math.fsum(
        p**i * paired_power_sum(f, g, p, i, depth) for i in range(1, valuation + 1)
    )
    return 1.0 + num / s0


def shifted_mean_constant(pair: ShiftedPairSpec, prime_cutoff: int = DEFAULT_PRIME_CUTOFF,
                          depth: int = DEFAULT_DEPTH) -> EulerProductValue:
    """The constant multiplying the main term of the shifted mean value.

    Product over primes p <= prime_cutoff of the local factors, times the
    shift correction at each prime dividing the shift.  Deterministic for
    fixed inputs: primes are folded in ascending order, in log space when
    every factor is positive.
    """
    h_fac = factorize_trial(pair.shift) if pair.shift > 1 else []
    if h_fac and h_fac[-1][0] > prime_cutoff:
        raise ValueError(
            f"prime cutoff {prime_cutoff} below largest prime {h_fac[-1][0]} of shift"
        )
    primes = primes_up_to(prime_cutoff)
    if not len(primes):
        raise ValueError(f"prime cutoff {prime_cutoff} admits no primes")
    pf = primes.astype(np.float64)

    sums = np.zeros(len(primes))
    envelope = 0.0
    depth_used = 0
    for k in range(1, depth + 1):
        hi = len(primes)
        if float(primes[-1]) ** k > POWER_CEILING:
            hi = int(np.searchsorted(primes, int(POWER_CEILING ** (1.0 / k)) + 1))
        if hi == 0:
            break
        sub = pf[:hi]
        with np.errstate(over="ignore"):
            terms = (pair.f.on_primes(primes[:hi], k) + pair.g.on_primes(primes[:hi], k)) / sub**k
        if k == 1:
            envelope = float(np.max(np.abs(terms) * sub * sub)) if hi else 0.0
        sums[:hi] += terms
        depth_used = k
        if not np.any(np.abs(terms) >= TERM_FLOOR):
            break

    if np.all(sums > -1.0):
        value = float(np.exp(np.sum(np.log1p(sums))))
    else:
        value = float(np.prod(1.0 + sums))

    for p, nu in h_fac:
        value *= shift_local_factor(pair.f, pair.g, p, nu, _max_depth(p, depth))

    cutoff = float(prime_cutoff)
    tail_rel = envelope / (cutoff * math.log(cutoff)) if cutoff > 2 else envelope
    tail = abs(value) * math.expm1(tail_rel) if tail_rel < 700 else math.inf
    return EulerProductValue(
        value=value,
        prime_cutoff=prime_cutoff,
        power_depth=depth_used,
        tail_bound=tail,
    )


def double_sum_oracle(pair: ShiftedPairSpec, cutoff: int) -> float:
    """Brute-force rearranged double sum; converges to the same constant.

    Sums f(d) g(d1) gcd(d,d1) / (d d1) over all d, d1 <= cutoff whose gcd
    divides the shift.  Values of f and g come from direct per-integer
    factorization, independent of the Euler-product path this checks.
    """
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")
    h = pair.shift

    def table_values(fn: PrimePowerFn) -> np.ndarray:
        vals = np.empty(cutoff + 1)
        vals[0] = 0.0
        for n in range(1, cutoff + 1):
            v = 1.0
            for p, e in factorize_trial(n):
                v *= fn(p, e)
            vals[n] = v
        return vals

    f_vals = table_values(pair.f)
    g_vals = table_values(pair.g)
    d1 = np.arange(cutoff + 1, dtype=np.int64)
    g_over_d1 = np.zeros(cutoff + 1)
    g_over_d1[1:] = g_vals[1:] / d1[1:]

    contributions = []
    for d in range(1, cutoff + 1):
        fd = f_vals[d]
        if fd == 0.0:
            continue
        common = np.gcd(d, d1[1:])
        mask = h % common == 0
        inner = float(np.sum(g_over_d1[1:][mask] * common[mask]))
        contributions.append(fd / d * inner)
    return math.fsum(contributions)


def predicted_main(pair: ShiftedPairSpec, x: float,
                   constant: Optional[EulerProductValue] = None,
                   prime_cutoff: int = DEFAULT_PRIME_CUTOFF,
                   depth: int = DEFAULT_DEPTH) -> float:
    """Predicted main term at x: constant times the baseline main term."""
    if x < pair.shift + 1:
        raise ValueError(f"x={x} smaller than shift+1={pair.shift + 1}")
    if constant is None:
        constant = shifted_mean_constant(pair, prime_cutoff, depth)
    return constant.value * pair.baseline.main_term(x)


# ---------------------------------------------------------------------------
# Prime zeta machinery: independent high-precision oracles for the products


def riemann_zeta(s: float, terms: int = 10000) -> float:
    """Riemann zeta for real s > 1 via Euler-Maclaurin; ~1e-15 relative."""
    if s <= 1:
        raise ValueError(f"zeta oracle needs s > 1, got {s}")
    n = np.arange(1, terms, dtype=np.float64)
    head = float(np.sum(n ** (-float(s))))
    t = float(terms)
    return (
        head
        + t ** (1 - s) / (s - 1)
        + 0.5 * t ** (-s)
        + s / 12.0 * t ** (-s - 1)
        - s * (s + 1) * (s + 2) / 720.0 * t ** (-s - 3)
        + s * (s + 1) * (s + 2) * (s + 3) * (s + 4) / 30240.0 * t ** (-s - 5)
    )


_MU_SMALL = [0, 1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0, -1, 1, 1, 0, -1, 0, -1,
             0, 1, 1, -1, 0, 0, 1, 0, 0, -1, -1, -1, 0, 1, 1, 1, 0, -1, 1, 1,
             0, -1, -1, -1, 0, 0, 1, -1, 0, 0, 0, 1, 0, -1, 0, 1, 0, 1, 1, -1]


def prime_zeta(s: float) -> float:
    """P(s) = sum over primes of p^-s for s > 1.

    Moebius-zeta folding for small s; direct summation once s >= 14, where
    the folded result carries only absolute (not relative) accuracy and
    downstream weights would amplify that.
    """
    if s >= 14:
        return float(np.sum(primes_up_to(10000).astype(np.float64) ** (-float(s))))
    total = 0.0
    for k in range(1, len(_MU_SMALL)):
        mu = _MU_SMALL[k]
        if mu == 0:
            continue
        ks = k * s
        if ks > 120:
            break
        lz = math.log(riemann_zeta(ks)) if ks < 50 else riemann_zeta(ks) - 1.0
        total += mu / k * lz
    return total


def prime_zeta_odd(s: float) -> float:
    """Sum over odd primes of p^-s; avoids the 2^-s cancellation for large s."""
    if s >= 14:
        odd = primes_up_to(10000)[1:].astype(np.float64)
        return float(np.sum(odd ** (-float(s))))
    return prime_zeta(s) - 2.0 ** (-s)

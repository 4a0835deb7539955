import random
from fractions import Fraction
from math import gcd, isqrt

import numpy as np
import pytest

from shiftmean.arith import (
    PrimePowerFn,
    build_spf_sieve,
    eval_divisor_sum,
    eval_multiplicative,
    eval_named,
    factorize,
    jordan_table,
    jordan_totient,
    mobius_invert_local,
    multiplicative_table,
    partial_sum_fn,
    primes_up_to,
    quad_symbol,
    totient,
    totient_table,
)

PHI_RATIO = PrimePowerFn(lambda p, k: -1.0 / p if k == 1 else 0.0 * p, name="phi_ratio")
ZERO_FN = PrimePowerFn(lambda p, k: 0.0 * p, name="zero")


# ---------------------------------------------------------------------------
# sieve and factorization


def test_spf_small_table():
    t = build_spf_sieve(10)
    assert t.spf[2:11].tolist() == [2, 3, 2, 5, 2, 7, 2, 3, 2]


def test_spf_smallest_case():
    assert build_spf_sieve(2).spf[2] == 2


def test_spf_prime_square():
    assert build_spf_sieve(49).spf[49] == 7


def test_spf_rejects_bad_limits():
    with pytest.raises(ValueError):
        build_spf_sieve(1)
    with pytest.raises(ValueError):
        build_spf_sieve(2**32)
    with pytest.raises(ValueError):
        build_spf_sieve(10**6, max_bytes=1000)


def test_spf_entries_are_prime_divisors(sieve_10k):
    spf = sieve_10k.spf
    rng = random.Random(7)
    for _ in range(300):
        n = rng.randrange(2, 10**4 + 1)
        p = int(spf[n])
        assert n % p == 0
        assert sieve_10k.is_prime(p)
        # smallest: no prime below p divides n
        for q in range(2, p):
            assert n % q != 0 or not sieve_10k.is_prime(q)


def test_factorize_examples(sieve_10k):
    assert factorize(12, sieve_10k) == [(2, 2), (3, 1)]
    assert factorize(1, sieve_10k) == []
    assert factorize(97, sieve_10k) == [(97, 1)]


def test_factorize_rejects_out_of_range(sieve_10k):
    with pytest.raises(ValueError):
        factorize(0, sieve_10k)
    with pytest.raises(ValueError):
        factorize(10**4 + 1, sieve_10k)


def test_factorize_reconstructs_and_valuations(sieve_10k):
    rng = random.Random(11)
    for _ in range(500):
        n = rng.randrange(1, 10**4 + 1)
        fac = factorize(n, sieve_10k)
        prod = 1
        for p, e in fac:
            prod *= p**e
            # e is the p-adic valuation, recomputed by plain division
            m, v = n, 0
            while m % p == 0:
                m //= p
                v += 1
            assert v == e
        assert prod == n
        assert all(a < b for (a, _), (b, _) in zip(fac, fac[1:]))


# ---------------------------------------------------------------------------
# Jacobi symbol


def _euler_criterion(a, p):
    """Legendre symbol by modular exponentiation; independent oracle."""
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def test_quad_symbol_identity_at_one():
    for m in (1, 3, 7, 9, 15, 1001):
        assert quad_symbol(1, m) == 1


def test_quad_symbol_against_euler_criterion():
    primes = [p for p in primes_up_to(200).tolist() if p > 2]
    for p in primes:
        for a in range(0, 2 * p, 7):
            assert quad_symbol(a, p) == _euler_criterion(a, p)
    assert quad_symbol(2, 7) == 1  # 2^3 = 1 mod 7


def test_quad_symbol_shared_factor():
    assert quad_symbol(3, 9) == 0


def test_quad_symbol_rejects_even_modulus():
    with pytest.raises(ValueError):
        quad_symbol(3, 8)
    with pytest.raises(ValueError):
        quad_symbol(3, 0)


def test_quad_symbol_multiplicative_in_modulus():
    rng = random.Random(3)
    for _ in range(200):
        a = rng.randrange(-50, 200)
        m1 = 2 * rng.randrange(1, 60) + 1
        m2 = 2 * rng.randrange(1, 60) + 1
        assert quad_symbol(a, m1 * m2) == quad_symbol(a, m1) * quad_symbol(a, m2)


def test_quad_symbol_completely_multiplicative_in_argument():
    rng = random.Random(19)
    for _ in range(200):
        m = 2 * rng.randrange(1, 200) + 1
        a, b = rng.randrange(0, 3 * m), rng.randrange(0, 3 * m)
        assert quad_symbol(a * b, m) == quad_symbol(a, m) * quad_symbol(b, m)


def test_quad_symbol_cancellation_nonsquare_odd():
    for m in (3, 5, 7, 15, 21, 27, 33, 45, 99, 105):
        assert isqrt(m) ** 2 != m
        assert sum(quad_symbol(a, m) for a in range(1, m + 1)) == 0


# ---------------------------------------------------------------------------
# divisor sums and local Moebius inversion


def _divisor_sum_brute(fn, n, table):
    """Direct enumeration over divisors; the oracle eval_divisor_sum must match."""
    total = 0.0
    for d in range(1, n + 1):
        if n % d == 0:
            total += eval_multiplicative(fn, factorize(d, table))
    return total


def test_eval_divisor_sum_phi_ratio(sieve_10k):
    val = eval_divisor_sum(PHI_RATIO, factorize(6, sieve_10k))
    assert val == pytest.approx(Fraction(1, 3), abs=1e-15)  # (1-1/2)(1-1/3)


def test_eval_divisor_sum_trivial(sieve_10k):
    assert eval_divisor_sum(PHI_RATIO, factorize(1, sieve_10k)) == 1.0
    assert eval_divisor_sum(ZERO_FN, factorize(360, sieve_10k)) == 1.0


def test_eval_divisor_sum_matches_brute_force(sieve_10k):
    rng = random.Random(5)
    bumpy = PrimePowerFn(lambda p, k: (-1.0) ** k / (p + k), name="bumpy")
    for fn in (PHI_RATIO, bumpy):
        for n in list(range(1, 200)) + [rng.randrange(1, 10**4) for _ in range(100)]:
            fac = factorize(n, sieve_10k)
            assert eval_divisor_sum(fn, fac) == pytest.approx(
                _divisor_sum_brute(fn, n, sieve_10k), rel=1e-12, abs=1e-12
            )


def test_eval_divisor_sum_full_range(sieve_10k):
    # every n <= 1e4, against divisor enumeration done by sieve accumulation
    limit = 10**4
    point_vals = np.array(
        [0.0] + [eval_multiplicative(PHI_RATIO, factorize(d, sieve_10k)) for d in range(1, limit + 1)]
    )
    divsums = np.zeros(limit + 1)
    for d in range(1, limit + 1):
        divsums[d::d] += point_vals[d]
    for n in range(1, limit + 1):
        got = eval_divisor_sum(PHI_RATIO, factorize(n, sieve_10k))
        assert got == pytest.approx(divsums[n], rel=1e-12, abs=1e-12), n


def test_mobius_invert_phi_case():
    p = 5.0
    r = [1.0] + [1.0 - 1.0 / p] * 6
    f = mobius_invert_local(r)
    assert f[0] == pytest.approx(-1.0 / p, abs=1e-16)
    assert all(v == 0.0 for v in f[1:])


def test_mobius_invert_identity_function():
    assert mobius_invert_local([1.0, 1.0, 1.0, 1.0]) == [0.0, 0.0, 0.0]


def test_mobius_invert_requires_unit_start():
    with pytest.raises(ValueError):
        mobius_invert_local([2.0, 1.0])
    with pytest.raises(ValueError):
        mobius_invert_local([])


def test_mobius_round_trip_random_sequences():
    rng = random.Random(13)
    for _ in range(50):
        k = rng.randrange(1, 9)
        f = [rng.uniform(-2, 2) for _ in range(k)]
        r = [1.0]
        for v in f:
            r.append(r[-1] + v)
        back = mobius_invert_local(r)
        assert back == pytest.approx(f, abs=1e-12)


def test_mobius_invert_recovers_shift_kernel_on_primes():
    # partial sums constant in k >= 1 invert to a weight at k=1 only,
    # equal to 1/((p+1)(p-2))
    from shiftmean.curveconst import shift_part_fn

    for p in (3, 5, 7, 11, 101):
        r = [1.0] + [shift_part_fn(p, k) for k in range(1, 6)]
        f = mobius_invert_local(r)
        assert f[0] == pytest.approx(1.0 / ((p + 1) * (p - 2)), rel=1e-14)
        assert f[1:] == pytest.approx([0.0] * 4, abs=1e-16)


# ---------------------------------------------------------------------------
# named exact functions


def _jordan_brute(n, k):
    """Count k-tuples mod n with gcd(a_1, ..., a_k, n) = 1; exponential, tiny n only."""
    count = 0
    for tup in range(n**k):
        g, t = n, tup
        for _ in range(k):
            g = gcd(g, t % n)
            t //= n
        if g == 1:
            count += 1
    return count


def test_eval_named_examples():
    assert eval_named("totient", 10) == 4
    assert eval_named("totient", 1) == 1
    assert eval_named("jordan", 6, 2) == 24
    with pytest.raises(ValueError):
        eval_named("sigma", 5)


def test_jordan_matches_tuple_count_oracle():
    for n in range(1, 13):
        for k in (1, 2):
            assert jordan_totient(n, k) == _jordan_brute(n, k)


def test_jordan_overflow_rejected():
    with pytest.raises(ValueError):
        jordan_totient(10**6, 22)


def test_totient_with_table(sieve_10k):
    assert totient(9973, sieve_10k) == 9972  # prime
    assert totient(10**4, sieve_10k) == 4000


# ---------------------------------------------------------------------------
# multiplicativity of induced functions


def test_induced_function_multiplicative_on_random_coprime_pairs(sieve_1m):
    rng = random.Random(17)
    fns = [
        PHI_RATIO,
        PrimePowerFn(lambda p, k: 1.0 / (p + 1.0) ** k, name="smooth"),
    ]
    done = 0
    while done < 1000:
        m = rng.randrange(2, 1000)
        n = rng.randrange(2, 10**6 // m)
        if gcd(m, n) != 1:
            continue
        fm = factorize(m, sieve_1m)
        fn_ = factorize(n, sieve_1m)
        fmn = factorize(m * n, sieve_1m)
        for fn in fns:
            lhs = eval_multiplicative(fn, fmn)
            rhs = eval_multiplicative(fn, fm) * eval_multiplicative(fn, fn_)
            assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)
        done += 1


# ---------------------------------------------------------------------------
# tabulation


def test_multiplicative_table_matches_pointwise_eval(sieve_10k):
    from shiftmean.curveconst import order_kernel, order_part_fn

    for fn in (order_part_fn, partial_sum_fn(order_kernel)):
        table = multiplicative_table(fn, 5000)
        for n in range(1, 5001):
            expect = eval_multiplicative(fn, factorize(n, sieve_10k))
            assert table[n] == pytest.approx(expect, rel=1e-12), n
    assert table[0] == 0.0


def test_multiplicative_table_handles_zero_values(sieve_10k):
    # odd-support table: zero at p = 2 wipes all even entries
    from shiftmean.curveconst import order_kernel_odd

    dsum = partial_sum_fn(order_kernel_odd)
    table = multiplicative_table(dsum, 2000)
    assert np.all(table[2::2] == 0.0)
    for n in range(1, 2000, 2):
        expect = eval_divisor_sum(order_kernel_odd, factorize(n, sieve_10k))
        assert table[n] == pytest.approx(expect, rel=1e-12)


def test_totient_table_exact(sieve_10k):
    table = totient_table(5000)
    assert table[1:7].tolist() == [1, 1, 2, 2, 4, 2]
    for n in range(1, 5001, 97):
        assert int(table[n]) == totient(n, sieve_10k)


def test_jordan_table_exact_and_wide(sieve_10k):
    t2 = jordan_table(3000, 2)
    for n in range(1, 3001, 53):
        assert int(t2[n]) == jordan_totient(n, 2, sieve_10k)
    # object-dtype path for wide values
    t9 = jordan_table(300, 9)
    assert t9.dtype == object
    for n in (1, 2, 128, 255, 300):
        assert t9[n] == jordan_totient(n, 9)
    with pytest.raises(ValueError):
        jordan_table(10**6, 22)


def test_primes_up_to_cache_consistency():
    big = primes_up_to(10**4)
    small = primes_up_to(100)
    assert small.tolist() == [p for p in big.tolist() if p <= 100]
    assert primes_up_to(1).size == 0

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from shiftmean.arith import PrimePowerFn, multiplicative_table
from shiftmean.curveconst import twin_prime_constant
from shiftmean.euler import (
    DegenerateLocalFactor,
    MonomialBaseline,
    ShiftedPairSpec,
    double_sum_oracle,
    local_factor,
    paired_power_sum,
    predicted_main,
    prime_zeta,
    riemann_zeta,
    shift_local_factor,
    shifted_mean_constant,
)
from shiftmean.presets import jordan_preset, kstar_preset, phi_preset

# Independent high-precision values of the full products, frozen from the
# prime-zeta oracle (ln prod(1 - 2/p^(k+1)) = -sum_m (2^m/m) P((k+1) m)).
PHI_PAIR_CONSTANT = 0.32263409893924516
JORDAN2_PAIR_CONSTANT = 0.6768927370098817

ZERO_PAIR = ShiftedPairSpec(
    f=PrimePowerFn(lambda p, k: 0.0 * p, name="zero"),
    g=PrimePowerFn(lambda p, k: 0.0 * p, name="zero"),
    shift=1,
    baseline=MonomialBaseline(0, 0),
)


def _sp_brute(f, g, p, i, emax):
    """Literal double sum over exponent pairs with min(e1, e2) = i."""
    total = 0.0
    for e1 in range(emax + 1):
        for e2 in range(emax + 1):
            if min(e1, e2) == i:
                total += f(p, e1) * g(p, e2) / float(p) ** (e1 + e2)
    return total


def _random_table(rng, depth=10):
    vals = {k: float(Fraction(rng.randrange(-9, 10), rng.randrange(1, 10))) for k in range(1, depth + 1)}
    return PrimePowerFn(lambda p, k, _v=vals: _v.get(k, 0.0) / p**k, name="random")


# ---------------------------------------------------------------------------
# paired power sums and local factors


def test_paired_power_sum_phi_examples():
    pair = phi_preset().pair
    assert paired_power_sum(pair.f, pair.g, 2, 0, 20) == pytest.approx(0.5, abs=1e-16)
    assert paired_power_sum(pair.f, pair.g, 2, 1, 20) == pytest.approx(1 / 16, abs=1e-16)


def test_paired_power_sum_zero_pair():
    assert paired_power_sum(ZERO_PAIR.f, ZERO_PAIR.g, 5, 0, 10) == 1.0
    for i in (1, 2, 3):
        assert paired_power_sum(ZERO_PAIR.f, ZERO_PAIR.g, 5, i, 10) == 0.0


def test_paired_power_sum_matches_brute_force():
    rng = random.Random(23)
    for _ in range(25):
        f, g = _random_table(rng), _random_table(rng)
        p = rng.choice([2, 3, 5, 7, 11])
        for i in (0, 1, 2):
            assert paired_power_sum(f, g, p, i, 12) == pytest.approx(
                _sp_brute(f, g, p, i, 12), rel=1e-12, abs=1e-15
            )


def test_paired_power_sum_depth_precondition():
    pair = phi_preset().pair
    with pytest.raises(ValueError):
        paired_power_sum(pair.f, pair.g, 2, 3, 2)


def test_local_factor_equals_min_zero_sum():
    rng = random.Random(29)
    for _ in range(50):
        f, g = _random_table(rng), _random_table(rng)
        for p in (2, 3, 5, 7, 11):
            assert abs(local_factor(f, g, p, 12) - paired_power_sum(f, g, p, 0, 12)) <= 1e-14


def test_local_factor_phi_pair_closed_form():
    pair = phi_preset().pair
    for p in (2, 3, 5, 101):
        assert local_factor(pair.f, pair.g, p, 40) == pytest.approx(1 - 2 / p**2, rel=1e-15)


def test_completeness_rearrangement():
    # sum_i S_i equals the product of the two truncated single sums: both
    # sides arrange the same finite double sum
    rng = random.Random(31)
    for _ in range(20):
        f, g = _random_table(rng), _random_table(rng)
        p, depth = rng.choice([2, 3, 5, 7, 11]), 8
        lhs = sum(paired_power_sum(f, g, p, i, depth) for i in range(depth + 1))
        fsumv = 1.0 + sum(f(p, e) / p**e for e in range(1, depth + 1))
        gsumv = 1.0 + sum(g(p, e) / p**e for e in range(1, depth + 1))
        assert lhs == pytest.approx(fsumv * gsumv, rel=1e-12, abs=1e-14)


def test_shift_local_factor_phi_values():
    pair = phi_preset().pair
    # closed form 1 + 1/(p(p^2-2)) at valuation 1
    assert shift_local_factor(pair.f, pair.g, 2, 1, 40) == pytest.approx(5 / 4, rel=1e-15)
    assert shift_local_factor(pair.f, pair.g, 3, 1, 40) == pytest.approx(22 / 21, rel=1e-15)


def test_shift_local_factor_zero_pair_is_one():
    assert shift_local_factor(ZERO_PAIR.f, ZERO_PAIR.g, 7, 3, 10) == 1.0


def test_shift_local_factor_degenerate():
    # tables with value -1 at every prime kill the exponent-zero local sum at p=2
    mu_like = PrimePowerFn(lambda p, k: -1.0 + 0.0 * p if k == 1 else 0.0 * p, name="mu_like")
    with pytest.raises(DegenerateLocalFactor):
        shift_local_factor(mu_like, mu_like, 2, 1, 10)


# ---------------------------------------------------------------------------
# the constant


def test_constant_phi_pair_matches_oracle_value():
    c = shifted_mean_constant(phi_preset().pair, 10**6)
    assert c.tail_bound >= 0
    assert abs(c.value - PHI_PAIR_CONSTANT) <= c.tail_bound + 1e-12
    # tail itself is small at this cutoff
    assert c.tail_bound < 1e-6


def test_constant_jordan2_matches_oracle_value():
    c = shifted_mean_constant(jordan_preset(2).pair, 10**6)
    assert abs(c.value - JORDAN2_PAIR_CONSTANT) <= c.tail_bound + 1e-12


def test_constant_zero_pair():
    c = shifted_mean_constant(ZERO_PAIR, 10**4)
    assert c.value == 1.0
    assert c.tail_bound == 0.0


def test_constant_with_shift_factors():
    c1 = shifted_mean_constant(phi_preset().pair, 10**5)
    c2 = shifted_mean_constant(phi_preset(shift=2).pair, 10**5)
    c6 = shifted_mean_constant(phi_preset(shift=6).pair, 10**5)
    assert c2.value == pytest.approx(c1.value * 5 / 4, rel=1e-14)
    assert c6.value == pytest.approx(c1.value * (5 / 4) * (22 / 21), rel=1e-14)


def test_constant_reciprocal_of_twin_prime_product():
    # the curve-order pair telescopes against the twin-prime product at any
    # shared cutoff: local factor at 2 is 1, at odd p the exact reciprocal
    for cutoff in (10**3, 10**5):
        c = shifted_mean_constant(kstar_preset().pair, cutoff)
        t = twin_prime_constant(cutoff)
        assert c.value * t.value == pytest.approx(1.0, rel=1e-12)


def test_constant_rejects_small_cutoff_for_shift():
    with pytest.raises(ValueError):
        shifted_mean_constant(phi_preset(shift=22).pair, 7)


def test_constant_deterministic():
    a = shifted_mean_constant(phi_preset().pair, 10**5)
    b = shifted_mean_constant(phi_preset().pair, 10**5)
    assert a == b


def test_tail_bound_monotone_in_cutoff_small_scale():
    for preset in (phi_preset(), jordan_preset(2), kstar_preset()):
        tails = [shifted_mean_constant(preset.pair, P).tail_bound for P in (10**4, 10**5, 10**6)]
        assert tails[0] >= tails[1] >= tails[2]


# ---------------------------------------------------------------------------
# double-sum oracle


def test_double_sum_oracle_single_term():
    assert double_sum_oracle(ZERO_PAIR, 1) == 1.0


def test_double_sum_oracle_reduces_to_single_sum():
    # g vanishing on all prime powers leaves sum_{d<=D} f(d)/d
    pair = ShiftedPairSpec(
        f=phi_preset().pair.f,
        g=PrimePowerFn(lambda p, k: 0.0 * p, name="zero"),
        shift=1,
        baseline=MonomialBaseline(1, 1),
    )
    D = 200
    vals = multiplicative_table(pair.f, D)
    expect = math.fsum(vals[d] / d for d in range(1, D + 1))
    assert double_sum_oracle(pair, D) == pytest.approx(expect, rel=1e-13)


def test_double_sum_oracle_converges_to_constant():
    # errors shrink in trend across three decades of cutoff on every preset
    for preset in (phi_preset(), jordan_preset(2), kstar_preset()):
        c = shifted_mean_constant(preset.pair, 10**6).value
        errs = [abs(double_sum_oracle(preset.pair, D) - c) for D in (100, 1000, 10000)]
        assert errs[2] < errs[0], preset.name
        assert errs[2] <= 1e-3, preset.name


def test_double_sum_oracle_with_shift():
    # gcd condition actually bites: shift 4 admits gcd in {1, 2, 4}
    pair = phi_preset(shift=4).pair
    c = shifted_mean_constant(pair, 10**6).value
    assert abs(double_sum_oracle(pair, 2000) - c) < 2e-3


# ---------------------------------------------------------------------------
# predicted main term and baseline


def test_predicted_main_flat_baseline():
    pair = kstar_preset().pair
    c = shifted_mean_constant(pair, 10**4)
    assert predicted_main(pair, 50, constant=c) == pytest.approx(c.value * 50)


def test_predicted_main_degree_scaling():
    phi_pair = phi_preset().pair
    c = shifted_mean_constant(phi_pair, 10**4)
    assert predicted_main(phi_pair, 100, constant=c) == pytest.approx(c.value * 100**3 / 3)
    j2 = jordan_preset(2).pair
    cj = shifted_mean_constant(j2, 10**4)
    assert predicted_main(j2, 100, constant=cj) == pytest.approx(cj.value * 100**5 / 5)


def test_predicted_main_rejects_tiny_x():
    with pytest.raises(ValueError):
        predicted_main(phi_preset(shift=5).pair, 5)


def test_baseline_progression_sums_within_error_scale():
    # direct progression sums stay within a uniform multiple of the declared
    # error envelope (constant measured over this family, frozen with margin)
    for a, b in ((0, 0), (1, 1), (2, 2), (1, 2)):
        bl = MonomialBaseline(a, b)
        for m in (1, 3, 5):
            for h in (1, 6):
                for x in (500, 2000):
                    for r in range(m)[:2]:
                        direct = sum(
                            (n - h) ** a * n**b for n in range(h + 1, x + 1) if n % m == r
                        )
                        assert abs(direct - bl.main_term(x) / m) <= 8.0 * bl.progression_error(x)


def test_baseline_rejects_negative_degrees():
    with pytest.raises(ValueError):
        MonomialBaseline(-1, 0)


def test_pair_spec_rejects_bad_shift():
    with pytest.raises(ValueError):
        ShiftedPairSpec(
            f=ZERO_PAIR.f, g=ZERO_PAIR.g, shift=0, baseline=MonomialBaseline(0, 0)
        )


def test_pair_partial_sums_bounded():
    # sanity proxy for absolute convergence: sum_{d<=D} |f(d)|/d is
    # non-decreasing and stays under a fixed bound on every preset table
    from shiftmean.presets import get_preset

    D = 10**5
    d = np.arange(1, D + 1, dtype=np.float64)
    presets = [phi_preset(), jordan_preset(2), kstar_preset(),
               get_preset("kstar-odd"), get_preset("khat")]
    for preset in presets:
        for fn in (preset.pair.f, preset.pair.g):
            vals = multiplicative_table(fn, D)
            cums = np.cumsum(np.abs(vals[1:]) / d)
            assert np.all(np.diff(cums) >= 0)
            assert cums[-1] < 3.0


# ---------------------------------------------------------------------------
# zeta oracles


def test_riemann_zeta_known_points():
    assert riemann_zeta(2) == pytest.approx(math.pi**2 / 6, rel=1e-13)
    assert riemann_zeta(4) == pytest.approx(math.pi**4 / 90, rel=1e-13)


def test_prime_zeta_against_direct_sum():
    from shiftmean.arith import primes_up_to

    direct = float(np.sum(primes_up_to(10**6).astype(np.float64) ** -2.0))
    # truncation tail of the direct sum is ~1/(P log P) ~ 7e-8
    assert prime_zeta(2) == pytest.approx(direct, abs=2e-7)
    assert prime_zeta(2) > direct
    # large-argument path: dominated by 2^-s
    assert prime_zeta(20) == pytest.approx(2.0**-20 + 3.0**-20 + 5.0**-20, rel=1e-10)

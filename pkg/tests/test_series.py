from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pslab.genlib import fixture_series, gen_named
from pslab.genlib import generators as gen
from pslab.series import (QQ, ZZ, Modulus, SeriesError, TruncatedSeries, Zmod, compose,
                          derivative, inverse, power, rational_power, reduce_mod, root,
                          substitute_power)


def ser(coeffs, n=None, ring=ZZ, var="x"):
    return TruncatedSeries(coeffs, n, ring, var)


def test_add_takes_min_precision():
    s = ser([1, 1], 3) + ser([1, 0, 1], 2)
    assert s.coeffs == (2, 1, 1) and s.precision == 2


def test_add_mod4():
    s = ser([0, 1, 3], ring=Zmod(2, 2)) + ser([0, 0, 3], ring=Zmod(2, 2))
    assert s.coeffs == (0, 1, 2)


def test_add_zero_is_identity():
    f = ser([3, -1, 4, 1], 3)
    assert f + TruncatedSeries.zero(3) == f


def test_ring_and_variable_mismatch():
    with pytest.raises(SeriesError):
        ser([1, 1]) + ser([1, 1], ring=QQ)
    with pytest.raises(SeriesError):
        ser([1, 1]) + ser([1, 1], var="w")


def test_modulus_must_be_prime_power():
    with pytest.raises(SeriesError):
        Modulus(4, 1)
    with pytest.raises(SeriesError):
        Modulus.from_int(12)
    assert Modulus.from_int(32) == Modulus(2, 5)


def test_inverse_pair_chiH1():
    f = gen_named("chiH1_w", 20)
    assert (f * ser([1, -4], 20, var="w")).coeffs[:3] == (0, 2, 0)
    assert inverse(ser([1, -4], 10)).coeffs == tuple(4**n for n in range(11))


def test_lacunary_square_mod2():
    L = reduce_mod(gen.lacunary(256, "u"), 2)
    assert L * L == substitute_power(L, 2).truncate(256)


def test_catalan_x5():
    c = gen_named("catalan_C", 8)
    assert (c.shift(1)).coeffs[5] == 14
    # recurrence oracle
    cat = [1]
    for n in range(8):
        cat.append(sum(cat[i] * cat[n - i] for i in range(n + 1)))
    assert list(c.coeffs) == cat[:9]


def test_compose_monomial_and_identity():
    g = ser([1] * 11)
    assert compose(g, ser([0, 0, 1], 10)).coeffs == tuple(1 - k % 2 for k in range(11))
    assert compose(g, ser([0, 1], 10)) == g


def test_compose_sound_precision():
    f = ser([1, 1, 1], 2)
    out = compose(f, ser([0, 0, 1], 30))
    # f is known through x^2, so f(x^2) is known through x^5
    assert out.precision == 5


def test_phi_composed_with_landen():
    n = 14
    out = compose(gen.phi(n, "v"), gen.landen_argument(n, "v").scale(4))
    assert [out.coeffs[k] for k in (4, 6, 8, 10, 12)] == [4, 16, 120, 480, 2800]


def test_substitute_power_precision_and_lacunary():
    L = gen.lacunary(64, "u")
    L2 = substitute_power(L, 2)
    assert L2.precision == 129
    assert L2.truncate(64) == L - ser([0, 1], 64, var="u")


def test_quarter_power_table():
    assert list(gen.chiH1_v(8).coeffs) == [1, 4, 12, 32, 76, 176, 400, 896, 1960]


def test_chiL2_v_matches_printed():
    v = gen.chiL2_v(12)
    assert [v.coeffs[k] for k in (4, 6, 8, 10, 12)] == [4, 16, 104, 416, 2224]


def test_psi_leading_term():
    psi = gen.psi(10)
    assert psi.valuation() == 2 and psi.coeffs[2] == Fraction(1, 16)


def test_derivative():
    assert derivative(ser([0, 0, 0, 0, 1])).coeffs == (0, 0, 0, 4)
    assert not any(derivative(ser([5], 3)).coeffs)


def test_reduce_mod_examples():
    chi = fixture_series("chiL_v")
    assert reduce_mod(chi, 8).terms() == {4: 4}
    G2 = reduce_mod(fixture_series("G_v"), 2)
    assert G2.support() == [1, 2, 4, 8]
    assert not any(reduce_mod(ser([2, 4, 6, 8]), 2).coeffs)


def test_reduce_rational_with_denominator():
    s = ser([Fraction(1, 3), Fraction(2, 3)], ring=QQ)
    assert reduce_mod(s, 2).coeffs == (1, 0)
    with pytest.raises(SeriesError):
        reduce_mod(ser([Fraction(1, 2)], ring=QQ), 2)


def test_exact_div():
    assert ser([4, 8, 12]).exact_div(4).coeffs == (1, 2, 3)
    with pytest.raises(SeriesError):
        ser([4, 6]).exact_div(4)


small = st.integers(-50, 50)
coeff_lists = st.lists(small, min_size=1, max_size=12)


@given(coeff_lists, coeff_lists, st.sampled_from([2, 3, 4, 8, 9, 27]))
def test_reduce_mod_is_a_ring_homomorphism(a, b, m):
    n = min(len(a), len(b)) - 1
    f, g = ser(a, n), ser(b, n)
    assert reduce_mod(f + g, m) == reduce_mod(f, m) + reduce_mod(g, m)
    assert reduce_mod(f * g, m) == reduce_mod(f, m) * reduce_mod(g, m)


@given(st.lists(small, min_size=1, max_size=12), st.sampled_from([2, 3, 5, 7]))
def test_frobenius_identity(a, p):
    f = reduce_mod(ser(a), p)
    assert power(f, p) == substitute_power(f, p).truncate(f.precision)


@given(st.lists(small, min_size=1, max_size=12))
def test_inverse_round_trip(a):
    f = ser([1] + a)
    assert inverse(inverse(f)) == f
    assert (f * inverse(f)) == TruncatedSeries.one(f.precision)


@given(st.lists(small, min_size=1, max_size=10), st.integers(2, 4))
def test_root_round_trip(a, d):
    f = ser([1] + a)
    assert root(power(f, d), d) == f


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=8),
       st.fractions(min_value=-3, max_value=3, max_denominator=5),
       st.fractions(min_value=-3, max_value=3, max_denominator=5))
def test_rational_power_additive(a, s, t):
    f = ser([1] + a, ring=QQ)
    assert rational_power(f, s) * rational_power(f, t) == rational_power(f, s + t)


@given(st.lists(small, min_size=2, max_size=10), st.lists(small, min_size=2, max_size=10))
def test_compose_agrees_with_naive_expansion(a, b):
    f = ser(a)
    g = ser([0] + b[1:])
    n = min(f.precision, g.precision)
    out = compose(f, g.truncate(n))
    naive = TruncatedSeries.zero(out.precision)
    gp = TruncatedSeries.one(out.precision)
    for c in f.coeffs:
        naive = naive + gp.scale(c)
        gp = gp * g.truncate(out.precision)
    assert out == naive


def _trial_division(n):
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


@given(st.integers(-5, 200_000))
def test_is_prime_matches_trial_division(n):
    from pslab.series import is_prime
    assert is_prime(n) == _trial_division(n)


def test_prime_power_detection_for_large_moduli():
    assert Modulus.from_int((2**61 - 1) ** 2) == Modulus(2**61 - 1, 2)
    with pytest.raises(SeriesError):
        Modulus.from_int(2**61 * 3)


def test_catalan_inverse_mod8():
    n = 300
    c = gen_named("catalan_C", n)
    inner = substitute_power(c, 2).truncate(n).shift(1).truncate(n)
    s = reduce_mod(inverse(1 - inner).scale(4) + 4, 8)
    assert s.support() == [2**k for k in range(9)]

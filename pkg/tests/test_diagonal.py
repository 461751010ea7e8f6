from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pslab.congruence import find_algebraic, verify_algebraic
from pslab.diagonal import (DiagonalError, MultivariateRational, diagonal, expand_taylor,
                            parse_polynomial)
from pslab.series import reduce_mod


def rat(num, den):
    return MultivariateRational.parse(num, den)


def test_parse_polynomial():
    names, poly = parse_polynomial("1 - x - 2*x^2*y + 3*y")
    assert names == ["x", "y"]
    assert poly == {(0, 0): 1, (1, 0): -1, (2, 1): -2, (0, 1): 3}


@pytest.mark.parametrize("text", ["", "1 - ", "x^", "2x", "x * * y", "1 +- x y"])
def test_parse_errors(text):
    with pytest.raises(DiagonalError):
        parse_polynomial(text)


def test_zero_constant_denominator():
    with pytest.raises(DiagonalError):
        rat("1", "x - y")


def test_pascal():
    c = expand_taylor(rat("1", "1 - x - y"), 6)
    assert c[(2, 2)] == 6
    assert all(v == comb(a + b, a) for (a, b), v in c.items())


def test_polynomial_over_one():
    c = expand_taylor(rat("1 + 2*x*y - y^2", "1"), 3)
    assert {k: v for k, v in c.items() if v} == {(0, 0): 1, (1, 1): 2, (0, 2): -1}


def test_univariate():
    assert diagonal(rat("1", "1 - x"), 10).coeffs == (1,) * 11


def test_central_binomials():
    d = diagonal(rat("1", "1 - x - y"), 10)
    assert d.coeffs == tuple(comb(2 * n, n) for n in range(11))
    assert reduce_mod(d, 2).terms() == {0: 1}


def test_rational_denominator_constant():
    d = diagonal(rat("1", "2 - x - y"), 4)
    assert d.ring.kind == "rational" and d.coeffs[1] == comb(2, 1) / 2**3


def test_cap():
    with pytest.raises(DiagonalError, match="cap"):
        diagonal(rat("1", "1 - x - y - z"), 128)


def test_nontrivial_diagonal_is_algebraic_mod2():
    d = reduce_mod(diagonal(rat("1", "1 - x - x*y - y^2"), 64), 2)
    assert d.support() == [0, 1, 3, 7, 15, 31, 63]
    best = find_algebraic(d, 2, 2)[0]
    assert verify_algebraic(best, d).ok and best.status == "verified"


def test_central_binomials_mod3_algebraic():
    d = reduce_mod(diagonal(rat("1", "1 - x - y"), 120), 3)
    found = find_algebraic(d, 2, 2)
    assert found and verify_algebraic(found[0], d).ok


small = st.integers(-3, 3)


@given(st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), small, max_size=5),
       st.sampled_from([1, -1]), st.integers(2, 5), st.sampled_from([2, 3, 4]))
def test_diagonal_commutes_with_reduction(den, c0, n, m):
    den = {k: v for k, v in den.items() if k != (0, 0) and v}
    den[(0, 0)] = c0
    fr = MultivariateRational(("x", "y"), {(0, 0): 1}, den)
    d = diagonal(fr, n)
    # the same recurrence run with residues
    red = MultivariateRational(("x", "y"), {(0, 0): 1}, {k: v % m for k, v in den.items()})
    assert reduce_mod(d, m) == reduce_mod(diagonal(red, n), m)


@given(st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), small, max_size=4),
       st.integers(1, 5))
def test_expansion_inverts_denominator(den, n):
    den = {k: v for k, v in den.items() if v}
    den[(0, 0)] = 1
    fr = MultivariateRational(("x", "y"), {(0, 0): 1}, den)
    c = expand_taylor(fr, n)
    top = 2 * n
    for a in range(top + 1):
        for b in range(top + 1 - a):
            conv = sum(v * c.get((a - i, b - j), 0) for (i, j), v in den.items() if i <= a and j <= b)
            assert conv == (1 if (a, b) == (0, 0) else 0)

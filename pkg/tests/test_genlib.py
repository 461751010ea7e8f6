from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pslab import isingverify as iv
from pslab.genlib import (GENERATORS, FixtureFormatError, SeriesFixture, dumps_fixture,
                          fixture_names, fixture_series, gen_hypergeometric_2f1, gen_named,
                          load_fixture, loads_fixture, save_fixture)
from pslab.genlib import generators as gen
from pslab.series import QQ, ZZ, TruncatedSeries, Zmod


def test_hypergeometric_low_temperature():
    z = TruncatedSeries.monomial(2, 16, QQ, "w", 16)
    f = gen_hypergeometric_2f1(Fraction(3, 2), Fraction(5, 2), 3, z, 16)
    got = f.shift(4).truncate(16).scale(4)
    assert [got.coeffs[k] for k in range(4, 17, 2)] == [
        4, 80, 1400, 23520, 388080, 6342336, 103062960]


def test_hypergeometric_of_zero_is_one():
    z = TruncatedSeries.zero(6, QQ)
    assert gen_hypergeometric_2f1(1, 2, 3, z, 6) == TruncatedSeries.one(6, QQ)


def test_over4_prefix():
    f = gen.chiL2_w(12).exact_div(4)
    assert [f.coeffs[k] for k in (4, 6, 8, 10, 12)] == [1, 20, 350, 5880, 97020]


def test_gen_named_examples():
    L = gen_named("lacunary_L", 1024)
    assert L.support() == [0, 1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024]
    assert gen_named("chiH1_w", 4).coeffs == (0, 2, 8, 32, 128)
    assert gen_named("catalan_C", 5).coeffs == (1, 1, 2, 5, 14, 42)


def test_unknown_generator():
    with pytest.raises(KeyError):
        gen_named("no_such_series", 4)


@pytest.mark.parametrize("name", sorted(GENERATORS))
def test_every_generator_is_deterministic(name):
    assert gen_named(name, 40) == gen_named(name, 40)


def test_fixture_spot_values():
    h = fixture_series("chiH3_w_over8")
    assert (h.coeffs[9], h.coeffs[11], h.coeffs[12]) == (1, 36, 4)
    k = fixture_series("chiL6_w_over64")
    assert (k.coeffs[36], k.coeffs[38], k.coeffs[40]) == (1, 144, 11306)


def test_fixture_round_trip(tmp_path):
    fx = SeriesFixture("demo", TruncatedSeries([0, 3, 0, 5], 6, Zmod(2, 3), "w"), "unit test")
    path = tmp_path / "demo.series"
    save_fixture(fx, path)
    assert load_fixture(path) == fx


def test_every_bundled_fixture_round_trips():
    for name in fixture_names():
        fx = loads_fixture(dumps_fixture(SeriesFixture(name, fixture_series(name), "x")))
        assert fx.series == fixture_series(name)


@pytest.mark.parametrize("text, where", [
    ("nope", 1),
    ("pslab-series 1\nname a\nvariable x\nring integer\nprecision 3\nprovenance p\n2 1\n1 1\n", 8),
    ("pslab-series 1\nname a\nvariable x\nring integer\nprecision 1\nprovenance p\n2 1\n", 7),
    ("pslab-series 1\nname a\nvariable x\nring mod 8 2 3\nprecision 2\nprovenance p\n0 9\n", 7),
    ("pslab-series 1\nname a\nvariable x\nring integer\nprecision 2\nprovenance p\n0 x\n", 7),
])
def test_fixture_errors_carry_line_numbers(text, where):
    with pytest.raises(FixtureFormatError) as err:
        loads_fixture(text)
    assert err.value.line == where


def test_missing_header():
    with pytest.raises(FixtureFormatError, match="missing header"):
        loads_fixture("pslab-series 1\nname a\nvariable x\nring integer\nprecision 2\n")


def test_rational_fixture():
    fx = loads_fixture("pslab-series 1\nname a\nvariable x\nring rational\nprecision 2\n"
                       "provenance p\n0 1/3\n2 -5/2\n")
    assert fx.series.ring == QQ and fx.series.coeffs[2] == Fraction(-5, 2)


def test_G1_fixture_typo_is_localised():
    g1 = fixture_series("G1_v")
    closed = (gen.chiH1_v(13) - 1).exact_div(4)
    assert g1.first_difference(closed) == 12
    assert (closed.coeffs[12], closed.coeffs[13]) == (10472, 22176)


def test_F_u_conflicts_with_v_table_only_at_u10():
    F = fixture_series("F_u")
    assert F.first_difference(iv.F_u().truncate(10)) == 10


def test_G_v_fixture_matches_conversion():
    assert fixture_series("G_v") == iv.G_v().truncate(fixture_series("G_v").precision)


def test_high_w_to_v_needs_zero_constant():
    with pytest.raises(Exception):
        gen.high_w_to_v(TruncatedSeries([1, 1], 4, ZZ, "w"))


@given(st.integers(0, 300))
def test_lacunary_tail_closed_forms_are_consistent(n):
    # mod 16 form reduces to the mod 8 form
    a = gen_named("chiH_over2_mod16_closed", n)
    b = gen_named("chiH_over2_mod8_closed", n)
    assert TruncatedSeries(a.coeffs, n, Zmod(2, 3), a.var) == b


@given(st.integers(1, 200))
def test_lacunary_functional_equation(n):
    L = gen.lacunary(n, "u")
    L2 = TruncatedSeries(L.coeffs[: n // 2 + 1], n // 2, ZZ, "u")
    from pslab.series import substitute_power
    assert substitute_power(L2, 2).truncate(n) + TruncatedSeries.monomial(1, n, ZZ, "u") == L

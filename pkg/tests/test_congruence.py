import pytest
from hypothesis import given
from hypothesis import strategies as st

from pslab import isingverify as iv
from pslab.congruence import (CONJECTURAL, VERIFIED, AlgebraicRelation, FrobeniusRelation,
                              RelationError, find_algebraic, frobenius_from_algebraic,
                              frobenius_property_check, frobenius_residual, loads_relation,
                              same_up_to_torsion, solve_frobenius, verify_algebraic, verify_frobenius)
from pslab.genlib import fixture_series, gen_named
from pslab.genlib import generators as gen
from pslab.series import Modulus, TruncatedSeries, Zmod, reduce_mod


def frob(m, polys, q=()):
    return FrobeniusRelation(Modulus.from_int(m), tuple(map(tuple, polys)), tuple(q))


def test_F32_equation_to_2048():
    rel = frob(32, [[0, 0, 1], [31]], [0, 0, 0, 0, 0, 16, 24, 0, 8])
    r = verify_frobenius(rel, gen_named("F32_closed", 2048))
    assert r.ok and r.through >= 2048


def test_G2_equation_on_fixture():
    rel = frob(2, [[1], [1]], [0, 1])
    r = verify_frobenius(rel, reduce_mod(fixture_series("G_v"), 2))
    assert r.ok and str(r) == "none"


def test_zero_relation_on_zero_series():
    rel = frob(2, [[]])
    assert verify_frobenius(rel, TruncatedSeries.zero(10, Zmod(2))).ok


def test_wrong_relation_reports_first_order():
    rel = frob(2, [[1], [1]], [0, 1, 1])
    r = verify_frobenius(rel, gen_named("G_mod2_closed", 64))
    assert r.first_nonzero == 2 and str(r) == "order 2"


def test_residual_precision_is_sound():
    f = gen_named("G_mod2_closed", 10)
    rel = frob(2, [[0, 0, 1], [1]])
    _, through = frobenius_residual(rel, f)
    # x^2 f(x) is known through x^12, f(x^2) through x^21
    assert through == 12


@pytest.mark.parametrize("name, m, q", [("G_mod2_closed", 2, (0, 1)), ("G_mod4_closed", 4, (0, 1, 2))])
def test_solver_recovers_G_equations(name, m, q):
    f = gen_named(name, 512)
    found = solve_frobenius(f, 1, 0, len(q) - 1)
    best = found[0]
    assert best.status == VERIFIED
    # p0 f(v) + p1 f(v^2) = q, normalised so p0 = 1
    assert best.polys == ((1,), (m - 1,)) and best.inhomogeneous == q


def test_solver_recovers_F32_modulo_torsion():
    f = gen_named("F32_closed", 512)
    best = solve_frobenius(f, 1, 2, 8)[0]
    assert best.status == VERIFIED
    printed = frob(32, [[0, 0, 1], [31]], [0, 0, 0, 0, 0, 16, 24, 0, 8])
    assert same_up_to_torsion(best, printed, f)


def test_solver_deduces5_equivalent_modulo_torsion():
    f = gen_named("chiL4_mod4_closed", 512)
    best = solve_frobenius(f, 1, 4, 64)[0]
    assert best.status == VERIFIED
    assert same_up_to_torsion(best, iv.R_D5, f)


def test_torsion_equivalence_rejects_distinct_relations():
    f = gen_named("F32_closed", 128)
    printed = frob(32, [[0, 0, 1], [31]], [0, 0, 0, 0, 0, 16, 24, 0, 8])
    # 2 F(u^2) = 8u^4 + 16u^8 holds but is pure torsion, not a scalar multiple
    torsion = frob(32, [[], [2]], [0, 0, 0, 0, 8, 0, 0, 0, 16])
    assert verify_frobenius(torsion, f).ok
    assert not same_up_to_torsion(torsion, printed, f)
    broken = frob(32, [[0, 0, 1], [31]], [0, 0, 0, 0, 0, 16, 24, 0, 9])
    assert not same_up_to_torsion(broken, printed, f)


def test_solver_zero_series_gives_trivial_relation():
    found = solve_frobenius(TruncatedSeries.zero(20, Zmod(3)), 1, 1, 1)
    assert found[0].trivial and found[0].polys == ((1,),)


def test_conjectural_when_underdetermined():
    f = gen_named("G_mod2_closed", 8)
    found = solve_frobenius(f, 1, 3, 3)
    assert all(r.status == CONJECTURAL for r in found)


def test_degree2_on_fixture():
    rel = iv.DEGREE2
    r = verify_algebraic(rel, reduce_mod(fixture_series("chiH3_w_over8"), 2))
    assert r.ok and r.through >= 28


def test_degree9_on_fixture():
    r = verify_algebraic(iv.degree9_relation(), reduce_mod(fixture_series("chiH3_w_over8"), 3))
    assert r.ok and r.through >= 28


def test_catalan_quadratic_mod2():
    rel = AlgebraicRelation(2, ((1,), (1,), (0, 1)))
    assert verify_algebraic(rel, reduce_mod(gen_named("catalan_C", 512), 2)).ok


def test_find_algebraic_examples():
    h = find_algebraic(gen_named("chiH3_mod2_closed", 512), 10, 2)[0]
    assert h.grid == iv.DEGREE2.grid and h.status == VERIFIED
    L = reduce_mod(gen.lacunary(512, "x"), 2)
    assert str(find_algebraic(L, 4, 2)[0]) == "y^2 + y + x"
    geo = reduce_mod(gen.geometric(64), 2)
    assert str(find_algebraic(geo, 1, 1)[0]) == "x*y + y + 1"


def test_frobenius_property():
    assert frobenius_property_check(TruncatedSeries([1, 1], 20, Zmod(2)))
    assert frobenius_property_check(reduce_mod(fixture_series("chiH3_w_over8"), 2))


def test_frobenius_from_algebraic():
    # y^2 + x y + x^10 = 0 reads x H(x) + H(x^2) = x^10 because H^2 = H(x^2) mod 2
    rel = frobenius_from_algebraic(iv.DEGREE2)
    assert rel.polys == ((0, 1), (1,)) and verify_frobenius(rel, gen_named("chiH3_mod2_closed", 256)).ok
    assert frobenius_from_algebraic(AlgebraicRelation(3, ((1,), (0,), (1,)))) is None
    L = AlgebraicRelation(2, ((0, 1), (1,), (1,)))
    fr = frobenius_from_algebraic(L)
    assert verify_frobenius(fr, reduce_mod(gen.lacunary(256, "x"), 2)).ok


def test_serialization_round_trip():
    rel = frob(16, [[0, 1], [15]], [0, 0, 0, 8])
    assert loads_relation(rel.dumps()) == rel
    assert loads_relation(iv.DEGREE2.dumps()) == iv.DEGREE2


@pytest.mark.parametrize("text", [
    "",
    "frobenius-relation mod=6 h=0\np0: 1\nq: 0\nstatus: verified through=3\n",
    "frobenius-relation mod=4 h=1\np0: 1\nq: 0\nstatus: verified through=3\n",
    "algebraic-relation p=2 dx=0 dy=1\ny1: 1\nstatus: verified\n",
    "mystery\n",
])
def test_malformed_relations(text):
    with pytest.raises(RelationError):
        loads_relation(text)


def test_algebraic_search_needs_prime():
    with pytest.raises(RelationError):
        find_algebraic(TruncatedSeries([1, 1], 10, Zmod(2, 2)), 1, 1)


residues = st.lists(st.integers(0, 10), min_size=1, max_size=8)


@given(st.sampled_from([2, 3, 5]), st.lists(st.integers(0, 4), min_size=3, max_size=40))
def test_frobenius_property_holds_for_every_series(p, coeffs):
    assert frobenius_property_check(TruncatedSeries(coeffs, None, Zmod(p)))


@given(st.sampled_from([(2, 1), (2, 2), (3, 1)]), st.lists(st.integers(0, 8), min_size=24, max_size=40),
       st.integers(0, 2), st.integers(0, 3))
def test_solver_verifier_closure(pr, coeffs, dpoly, dinhom):
    f = TruncatedSeries(coeffs, None, Zmod(*pr))
    for rel in solve_frobenius(f, 1, dpoly, dinhom):
        assert verify_frobenius(rel, f).ok


@given(st.sampled_from([2, 3]), st.lists(st.integers(0, 2), min_size=1, max_size=4),
       st.lists(st.integers(0, 2), min_size=1, max_size=4))
def test_planted_relation_is_recovered(p, a, b):
    # f = a(x) / (1 - x b(x)) satisfies (1 - x b) f = a
    n = 60
    ring = Zmod(p)
    den = TruncatedSeries([1] + [(-c) % p for c in b], n, ring)
    from pslab.series import inverse
    f = TruncatedSeries(a, n, ring) * inverse(den)
    found = find_algebraic(f, len(b) + len(a), 1)
    assert found and all(verify_algebraic(r, f).ok for r in found)


def test_solver_drops_relations_refuted_past_row_n():
    # x h(x) vanishes through x^3 but h is known through x^3, so x h is known through x^4
    h = TruncatedSeries([0, 0, 0, 1], 3, Zmod(2))
    found = solve_frobenius(h, 1, 1, 1)
    assert all(verify_frobenius(r, h).ok for r in found)
    assert any(r.polys[0] == (0, 1) and not any(r.polys[1:]) for r in found.refuted)

"""The verification campaign over the Ising susceptibility series.

Each check id groups independent sub-checks ("branches").  Closed-form
branches run to the campaign order (default 2048); fixture branches are
bounded by the precision of the printed coefficient tables, and every report
line states the order it reached.

Checks expect either a vanishing residual (the usual case) or, for negative
results, a nonzero one whose first order is recorded.
"""

from __future__ import annotations

import fnmatch
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .congruence import (AlgebraicRelation, FrobeniusRelation, find_algebraic,
                         frobenius_property_check, verify_algebraic, verify_frobenius)
from .genlib import fixture_series, gen_named
from .genlib import generators as gen
from .series import (QQ, Modulus, TruncatedSeries, Zmod, compose, derivative, inverse,
                     reduce_mod, substitute_power)

DEFAULT_ORDER = 2048
PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"


class MissingFixture(LookupError):
    pass


@dataclass(frozen=True)
class Outcome:
    """What a check observed: residual order (None = vanished) and reach."""

    through: int
    residual: int | None


@dataclass(frozen=True)
class CheckSpec:
    id: str
    branch: str
    modulus: str
    anchor: str
    expect: str
    inputs: tuple[str, ...]
    run: Callable[[int], Outcome]

    @property
    def name(self) -> str:
        return f"{self.id}.{self.branch}" if self.branch else self.id


@dataclass(frozen=True)
class CheckReport:
    id: str
    branch: str
    status: str
    modulus: str
    through: int
    residual: int | None
    anchor: str
    runtime: float = 0.0
    reason: str = ""

    @property
    def name(self) -> str:
        return f"{self.id}.{self.branch}" if self.branch else self.id

    def line(self) -> str:
        res = "none" if self.residual is None else f"order {self.residual}"
        out = (f"CHECK {self.name} {self.status} mod={self.modulus} through={self.through} "
               f'residual={res} ref="{self.anchor}"')
        if self.reason:
            out += f' reason="{self.reason}"'
        return out


CATALOG: list[CheckSpec] = []


def check(cid: str, branch: str, mod, anchor: str, inputs=(), expect: str = "zero"):
    def deco(fn):
        CATALOG.append(CheckSpec(cid, branch, str(mod), anchor, expect, tuple(inputs), fn))
        return fn
    return deco


# -- shared data ------------------------------------------------------------

def fx(name: str) -> TruncatedSeries:
    try:
        return fixture_series(name)
    except KeyError:
        raise MissingFixture(f"fixture {name} not found") from None


@lru_cache(maxsize=None)
def closed(name: str, order: int) -> TruncatedSeries:
    return gen_named(name, order)


@lru_cache(maxsize=None)
def chiL2_w(order: int) -> TruncatedSeries:
    return gen.chiL2_w(order)


@lru_cache(maxsize=None)
def chiH1_v(order: int) -> TruncatedSeries:
    return gen.chiH1_v(order)


@lru_cache(maxsize=None)
def chiL_w_full() -> TruncatedSeries:
    """chi~_L = chi~^(2) + 16 (chi~^(4)/16) + (chi~_L - chi~^(2) - chi~^(4)), through w^44."""
    c4 = fx("chiL4_w_over16")
    d24 = fx("diffL24_w")
    n = min(c4.precision, d24.precision)
    return chiL2_w(n) + c4.truncate(n).scale(16) + d24.truncate(n)


@lru_cache(maxsize=None)
def chiH_w_full() -> TruncatedSeries:
    """chi~_H = chi~^(1) + 8 (chi~^(3)/8) + (chi~_H - chi~^(1) - chi~^(3)), through w^28."""
    c3 = fx("chiH3_w_over8")
    d13 = fx("diffH13_w")
    n = min(c3.precision, d13.precision)
    return gen.chiH1_w(n) + c3.truncate(n).scale(8) + d13.truncate(n)


@lru_cache(maxsize=None)
def chiL_v_full() -> TruncatedSeries:
    return gen.low_w_to_v(chiL_w_full()).to_integer()


@lru_cache(maxsize=None)
def chiH_v_full() -> TruncatedSeries:
    return gen.high_w_to_v(chiH_w_full()).to_integer()


@lru_cache(maxsize=None)
def F_u() -> TruncatedSeries:
    """Even part of chi_L(v) written in u = v^2."""
    v = chiL_v_full()
    return TruncatedSeries(v.coeffs[::2], v.precision // 2, v.ring, "u")


@lru_cache(maxsize=None)
def G_v() -> TruncatedSeries:
    return (chiH_v_full() - 1).exact_div(4)


def mod(f: TruncatedSeries, m: int) -> TruncatedSeries:
    if f.ring.kind == "mod":
        return reduce_mod(f, Modulus.from_int(m))
    return reduce_mod(f.to_integer(), m)


def poly(terms: dict, m: int, order: int, var: str) -> TruncatedSeries:
    return TruncatedSeries.from_terms({e: c % m for e, c in terms.items()}, order,
                                      Zmod(*_pr(m)), var)


def _pr(m: int) -> tuple[int, int]:
    md = Modulus.from_int(m)
    return md.p, md.r


def compare(a: TruncatedSeries, b: TruncatedSeries, through: int | None = None) -> Outcome:
    n = min(a.precision, b.precision) if through is None else through
    a, b = a.truncate(n), b.truncate(n)
    return Outcome(n, a.first_difference(b))


def vanishes(f: TruncatedSeries) -> Outcome:
    return Outcome(f.precision, f.valuation())


def frob(m: int, polys: list[dict], q: dict) -> FrobeniusRelation:
    def dense(d):
        return tuple(d.get(i, 0) % m for i in range(max(d) + 1)) if d else ()
    return FrobeniusRelation(Modulus.from_int(m), tuple(dense(d) for d in polys), dense(q))


def frob_outcome(rel: FrobeniusRelation, f: TruncatedSeries) -> Outcome:
    r = verify_frobenius(rel, f)
    return Outcome(r.through, r.first_nonzero)


def shifted(poly_terms: dict, shift: int, scale: int = 1) -> dict:
    return {e + shift: scale * c for e, c in poly_terms.items()}


# -- C01-C04: F(u) modulo 2^r ------------------------------------------------

F_SMALL = {2: {}, 4: {}, 8: {2: 4}, 16: {2: 4, 4: 8}}
for _m, _t in F_SMALL.items():
    def _f(order, m=_m, t=_t):
        f = mod(F_u(), m)
        return compare(f, poly(t, m, f.precision, "u"))
    check("C01", f"mod{_m}", _m, "F_2 = 0, F_4 = 0, F_8 = 4u^2, F_16 = 4u^2 + 8u^4",
          ("chiL4_w_over16", "diffL24_w"))(_f)

R_F32 = frob(32, [{2: 1}, {0: -1}], {5: 16, 6: 24, 8: 8})
A_F32 = "u^2 F32(u) = F32(u^2) + 16u^5 + 24u^6 + 8u^8 mod 32"


@check("C02", "fixture", 32, "F32 = 20u^2 + 24u^4 + 16u^2 L(u) mod 32", ("chiL4_w_over16", "diffL24_w"))
def _c02_fixture(order):
    f = mod(F_u(), 32)
    return compare(f, closed("F32_closed", f.precision))


@check("C02", "funcequ", 32, A_F32)
def _c02_funcequ(order):
    return frob_outcome(R_F32, closed("F32_closed", order))


@check("C02", "fixture-funcequ", 32, A_F32, ("chiL4_w_over16", "diffL24_w"))
def _c02_ffe(order):
    return frob_outcome(R_F32, mod(F_u(), 32))


_F64_Q = shifted({0: 3, 1: 4, 2: 6, 4: 2, 5: 58, 6: 4, 7: 2, 11: 6}, 5, 16)
R_F64 = frob(64, [{2: 3, 6: 2}, {0: -3, 2: -2}], _F64_Q)
A_F64 = "u^2 (3 + 2u^4) F64(u) = (3 + 2u^2) F64(u^2) + 16u^5 p(u) mod 64"


@check("C03", "fixture", 64, "F64 = 60u^2 (11 + 8u + 10u^2 + 8u^4 + 8u^6) + (48u^2 + 32u^4) L(u) mod 64",
       ("chiL4_w_over16", "diffL24_w"))
def _c03_fixture(order):
    f = mod(F_u(), 64)
    return compare(f, closed("F64_closed", f.precision))


@check("C03", "funcequ", 64, A_F64)
def _c03_funcequ(order):
    return frob_outcome(R_F64, closed("F64_closed", order))


@check("C03", "fixture-funcequ", 64, A_F64, ("chiL4_w_over16", "diffL24_w"))
def _c03_ffe(order):
    return frob_outcome(R_F64, mod(F_u(), 64))


# u^8 (u^4 - 3) F(u) - u^4 (u^6 - 2u^2 - 3) F(u^2) = (3 - u^2) F(u^4) + 16u^10 p28(u);
# the F(u^4) factor follows from eliminating L between the first form at u and u^2
R_F128 = frob(128, [{12: 1, 8: -3}, {10: -1, 6: 2, 4: 3}, {2: 1, 0: -3}], shifted(gen.P28, 10, 16))
A_F128 = "u^8 (u^4 - 3) F(u) - u^4 (u^6 - 2u^2 - 3) F(u^2) = (3 - u^2) F(u^4) + 16u^10 p28 mod 128"


@check("C04", "fixture", 128, "u^2 F128(u) = F128(u^2) + 32u^6 (3 - u^2) L(u) + 8u^5 p13 mod 128",
       ("chiL4_w_over16", "diffL24_w"))
def _c04_fixture(order):
    f = mod(F_u(), 128)
    return compare(f, closed("F128_Lform", f.precision))


@check("C04", "twostep", 128, A_F128)
def _c04_twostep(order):
    return frob_outcome(R_F128, closed("F128_Lform", order))


@check("C04", "fixture-twostep", 128, A_F128, ("chiL4_w_over16", "diffL24_w"))
def _c04_ffe(order):
    return frob_outcome(R_F128, mod(F_u(), 128))


# -- C05/C06: G(v) = (chi_H(v) - 1)/4 ----------------------------------------

R_G2 = frob(2, [{0: 1}, {0: -1}], {1: 1})
R_G4 = frob(4, [{0: 1}, {0: -1}], {1: 1, 2: 2})
A_G2 = "G2(v) = G2(v^2) + v mod 2"
A_G4 = "G4(v) = G4(v^2) + v + 2v^2 mod 4"
G_INPUTS = ("chiH3_w_over8", "diffH13_w")


@check("C05", "mod2-table", 2, "G2 = L(v) - 1 mod 2", ("G_mod2_table",))
def _c05_t2(order):
    t = fx("G_mod2_table")
    return compare(t, closed("G_mod2_closed", t.precision))


@check("C05", "mod2-fixture", 2, "G2 = L(v) - 1 mod 2", G_INPUTS)
def _c05_f2(order):
    g = mod(G_v(), 2)
    return compare(g, closed("G_mod2_closed", g.precision))


@check("C05", "mod2-funcequ", 2, A_G2)
def _c05_e2(order):
    return frob_outcome(R_G2, closed("G_mod2_closed", order))


@check("C05", "mod4-table", 4, "G4 = 3L(v) - 3 - 2v mod 4", ("G_mod4_table",))
def _c05_t4(order):
    t = fx("G_mod4_table")
    return compare(t, closed("G_mod4_closed", t.precision))


@check("C05", "mod4-fixture", 4, "G4 = 3L(v) - 3 - 2v mod 4", G_INPUTS)
def _c05_f4(order):
    g = mod(G_v(), 4)
    return compare(g, closed("G_mod4_closed", g.precision))


@check("C05", "mod4-funcequ", 4, A_G4)
def _c05_e4(order):
    return frob_outcome(R_G4, closed("G_mod4_closed", order))


@check("C05", "mod8-fixture", 8, "G8 table", ("G_mod8_table",) + G_INPUTS)
def _c05_f8(order):
    return compare(fx("G_mod8_table"), mod(G_v(), 8))


def _hat_g8(g8: TruncatedSeries) -> Outcome:
    n = g8.precision
    L = gen.lacunary(n, "v", g8.ring)
    lhs = (g8 + L - 1).scale(2)
    return compare(lhs, poly({1: 4}, 8, n, "v"))


@check("C05", "mod8-hat-table", 8, "2 (G8(v) + L(v) - 1) = 4v mod 8", ("G_mod8_table",))
def _c05_h8t(order):
    return _hat_g8(fx("G_mod8_table"))


@check("C05", "mod8-hat-fixture", 8, "2 (G8(v) + L(v) - 1) = 4v mod 8", G_INPUTS)
def _c05_h8f(order):
    return _hat_g8(mod(G_v(), 8))


H1_TABLE = {2: {1: 1, 2: 1, 4: 1},
            4: {1: 1, 2: 3, 4: 3, 8: 2},
            8: {1: 1, 2: 3, 4: 3, 5: 4, 6: 4, 8: 2},
            16: {1: 1, 2: 3, 3: 8, 4: 3, 5: 12, 6: 4, 8: 10, 9: 8, 10: 8, 12: 8, 16: 8}}
for _m, _t in H1_TABLE.items():
    def _f(order, m=_m, t=_t):
        g1 = (chiH1_v(order) - 1).exact_div(4)
        return compare(mod(g1, m), poly(t, m, order, "v"))
    check("C06", f"mod{_m}", _m, "(chi_H^(1)(v) - 1)/4 mod 2^r is a polynomial, e.g. v + v^2 + v^4 mod 2")(_f)


# -- C07/C08: chi~_H in w modulo 16 and 32 ----------------------------------

def _high_w_checks(cid, m, closed_name, table, rel, anchor_form, anchor_eq):
    check(cid, "table", m, anchor_form, (table,))(
        lambda order: compare(fx(table), closed(closed_name, fx(table).precision)))

    def _fix(order):
        f = mod(chiH_w_full(), m)
        return compare(f, closed(closed_name, f.precision))
    check(cid, "fixture", m, anchor_form, ("chiH3_w_over8", "diffH13_w"))(_fix)
    check(cid, "funcequ", m, anchor_eq)(lambda order: frob_outcome(rel, closed(closed_name, order)))
    check(cid, "fixture-funcequ", m, anchor_eq, ("chiH3_w_over8", "diffH13_w"))(
        lambda order: frob_outcome(rel, mod(chiH_w_full(), m)))
    check(cid, "delta-zero", m, "chi~_H - (chi~_H^(1) + chi~_H^(3)) = 0 mod 2^r, r <= 5", ("diffH13_w",))(
        lambda order: vanishes(mod(fx("diffH13_w"), m)))


_high_w_checks("C07", 16, "chiH_mod16_closed", "chiH_mod16_table",
               frob(16, [{1: 1}, {0: -1}], shifted({7: 1, 1: -1, 0: -1}, 3, -8)),
               "chi~_H = 10w + 8w^3 + 8w^5 + 8w L(w) mod 16",
               "chi~_H(w^2) = w chi~_H(w) + 8w^3 (w^7 - w - 1) mod 16")
_high_w_checks("C08", 32, "chiH_mod32_closed", "chiH_mod32_table",
               frob(32, [{1: 1}, {0: -1}], shifted({15: 2, 7: -1, 1: 1, 0: -5}, 3, -8)),
               "chi~_H = 10w + 16w^2 + 8w^3 + 8w^5 + 16w^9 + 24w L(w) mod 32",
               "chi~_H(w^2) = w chi~_H(w) + 8w^3 (2w^15 - w^7 + w - 5) mod 32")


# -- C09/C10: chi~_L in w modulo 32, 64, 128 --------------------------------

A_C09 = "chi~_L and chi~_L^(2) mod 32 are lacunary and differ by 16w^16"


@check("C09", "chiL-table", 32, A_C09, ("chiL_mod32_table",))
def _c09_lt(order):
    t = fx("chiL_mod32_table")
    return compare(t, closed("chiL_mod32_lacunary", t.precision))


@check("C09", "chiL-fixture", 32, A_C09, ("chiL4_w_over16", "diffL24_w"))
def _c09_lf(order):
    f = mod(chiL_w_full(), 32)
    return compare(f, closed("chiL_mod32_lacunary", f.precision))


@check("C09", "chiL2-table", 32, A_C09, ("chiL2_mod32_table",))
def _c09_2t(order):
    t = fx("chiL2_mod32_table")
    return compare(t, closed("chiL2_mod32_lacunary", t.precision))


@check("C09", "chiL2-closed", 32, A_C09)
def _c09_2c(order):
    return compare(mod(chiL2_w(order), 32), closed("chiL2_mod32_lacunary", order))


@check("C09", "difference", 32, A_C09)
def _c09_diff(order):
    d = closed("chiL2_mod32_lacunary", order) - closed("chiL_mod32_lacunary", order)
    return compare(d, poly({16: 16}, 32, order, "w"))


@check("C10", "diff2-zero", 16, "chi~_L - chi~_L^(2) = 0 mod 2, 4, 8, 16", ("diffL2_w",))
def _c10_d2z(order):
    return vanishes(mod(fx("diffL2_w"), 16))


@check("C10", "diff2-mod32", 32, "chi~_L - chi~_L^(2) = 16w^16 mod 32", ("diffL2_w",))
def _c10_d232(order):
    d = fx("diffL2_w")
    return compare(mod(d, 32), poly({16: 16}, 32, d.precision, "w"))


@check("C10", "diff2-mod64", 64, "chi~_L - chi~_L^(2) = 32w^4 L(w) + 16w^16 + 32w^4 (w^28 - w^8 - w^4 - w^2 - w - 1) mod 64",
       ("diffL2_w",))
def _c10_d264(order):
    d = mod(fx("diffL2_w"), 64)
    return compare(d, closed("diffL_mod64_closed", d.precision))


@check("C10", "diff24-zero", 64, "chi~_L - chi~_L^(2) - chi~_L^(4) = 0 mod 2^r, r <= 6", ("diffL24_w",))
def _c10_d24z(order):
    return vanishes(mod(fx("diffL24_w"), 64))


@check("C10", "diff24-mod128", 128, "chi~_L - chi~_L^(2) - chi~_L^(4) = 64w^4 L(w) - 64w^4 (w^16 + w^8 + w^4 + w^2 + w + 1) mod 128",
       ("diffL24_w",))
def _c10_d24(order):
    d = mod(fx("diffL24_w"), 128)
    return compare(d, closed("diffL24_mod128_closed", d.precision))


@check("C10", "diff246-zero", 256, "chi~_L - chi~_L^(2) - chi~_L^(4) - chi~_L^(6) = 0 mod 2^r, r <= 8",
       ("diffL246_w",))
def _c10_d246(order):
    return vanishes(mod(fx("diffL246_w"), 256))


# -- C11/C12: chi~^(3)/8 and chi~^(4)/16 -------------------------------------

R_D3 = frob(2, [{1: 1}, {0: -1}], {10: 1})
R_D4 = frob(4, [{1: 1}, {0: -1}], shifted({0: 4, 7: 1, 15: -2}, 3))
R_D5 = frob(4, [{4: -1}, {0: 1}], shifted({44: 2, 16: -2, 12: 1, 4: 2, 0: -1}, 20))


@check("C11", "mod2-fixture", 2, "chi~_H^(3)/8 = w L(w) - w (w^4 + w^2 + w + 1) mod 2", ("chiH3_w_over8",))
def _c11_f2(order):
    f = mod(fx("chiH3_w_over8"), 2)
    return compare(f, closed("chiH3_mod2_closed", f.precision))


@check("C11", "mod2-funcequ", 2, "w H(w) = H(w^2) + w^10 mod 2")
def _c11_e2(order):
    return frob_outcome(R_D3, closed("chiH3_mod2_closed", order))


@check("C11", "mod4-fixture", 4, "chi~_H^(3)/8 = 3w L(w) + w (2w^8 + w^4 + w^2 + w + 1) mod 4", ("chiH3_w_over8",))
def _c11_f4(order):
    f = mod(fx("chiH3_w_over8"), 4)
    return compare(f, closed("chiH3_mod4_closed", f.precision))


@check("C11", "mod4-funcequ", 4, "w H(w) = H(w^2) + w^3 (4 + w^7 - 2w^15) mod 4")
def _c11_e4(order):
    return frob_outcome(R_D4, closed("chiH3_mod4_closed", order))


@check("C12", "mod2-fixture", 2, "chi~_L^(4)/16 = w^16 mod 2", ("chiL4_w_over16",))
def _c12_f2(order):
    f = mod(fx("chiL4_w_over16"), 2)
    return compare(f, poly({16: 1}, 2, f.precision, "w"))


@check("C12", "mod4-fixture", 4, "chi~_L^(4)/16 = 2w^4 L(w) + w^16 + 2w^4 (w^28 + w^8 + w^4 + w^2 + w + 1) mod 4",
       ("chiL4_w_over16",))
def _c12_f4(order):
    f = mod(fx("chiL4_w_over16"), 4)
    return compare(f, closed("chiL4_mod4_closed", f.precision))


@check("C12", "funcequ", 4, "K(w^2) = w^4 K(w) + w^20 (2w^44 - 2w^16 + w^12 + 2w^4 - 1) mod 4")
def _c12_e(order):
    return frob_outcome(R_D5, closed("chiL4_mod4_closed", order))


# -- C13/C14: algebraic relations for H = chi~^(3)/8 -------------------------

def _grid(terms: dict, p: int) -> tuple:
    """{(i, j): c} for c x^i y^j -> grid[j][i]."""
    dy = max(j for _, j in terms)
    dx = max(i for i, _ in terms)
    g = [[0] * (dx + 1) for _ in range(dy + 1)]
    for (i, j), c in terms.items():
        g[j][i] = (g[j][i] + c) % p
    return tuple(map(tuple, g))


DEGREE2 = AlgebraicRelation(2, _grid({(0, 2): 1, (1, 1): 1, (10, 0): 1}, 2))


def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _ppow(a, k):
    out = [1]
    for _ in range(k):
        out = _pmul(out, a)
    return out


def _dense(d):
    return [d.get(i, 0) for i in range(max(d) + 1)]


def degree9_relation() -> AlgebraicRelation:
    p01 = _dense({6: 1, 5: 1, 4: 1, 2: -1, 1: -1, 0: 1})
    p02 = _dense({37: 1, 36: -1, 35: 1, 33: -1, 31: 1, 30: -1, 28: 1, 27: 1, 24: 1, 23: -1,
                  22: 1, 21: -1, 18: -1, 16: -1, 14: 1, 12: -1, 11: -1, 10: -1, 7: 1, 5: -1,
                  3: -1, 0: -1})
    one_w2 = [1, 0, 1]
    p1 = _pmul(_ppow(one_w2, 20), _ppow([1, -1], 13))
    p3 = _pmul(_pmul(_ppow(one_w2, 18), _ppow([1, -1], 15)), [-1, 0, -1, 0, 1])
    p9 = _pmul(_pmul(_ppow([1, 1], 3), _ppow(one_w2, 18)), _ppow([-1, 1], 24))
    rows = {9: p9, 3: [0] * 6 + p3, 1: [0] * 10 + p1, 0: [0] * 19 + _pmul(p01, p02)}
    return AlgebraicRelation(3, tuple(tuple(c % 3 for c in rows.get(j, [])) for j in range(10)))


@check("C13", "fixture", 2, "H^2 + w H + w^10 = 0 mod 2", ("chiH3_w_over8",))
def _c13_fix(order):
    r = verify_algebraic(DEGREE2, mod(fx("chiH3_w_over8"), 2))
    return Outcome(r.through, r.first_nonzero)


@check("C13", "frobenius", 2, "H(w)^2 = H(w^2) mod 2", ("chiH3_w_over8",))
def _c13_frob(order):
    f = mod(fx("chiH3_w_over8"), 2)
    return Outcome(f.precision, None if frobenius_property_check(f) else 0)


@check("C13", "rediscovery", 2, "H^2 + w H + w^10 = 0 mod 2")
def _c13_find(order):
    f = closed("chiH3_mod2_closed", min(order, 512))
    found = find_algebraic(f, 10, 2)
    ok = bool(found) and found[0].grid == DEGREE2.grid and found[0].status == "verified"
    return Outcome(f.precision, None if ok else 0)


@check("C14", "fixture", 3, "p9 H^9 + w^6 p3 H^3 + w^10 p1 H + w^19 p0 = 0 mod 3 (partial)", ("chiH3_w_over8",))
def _c14_fix(order):
    r = verify_algebraic(degree9_relation(), mod(fx("chiH3_w_over8"), 3))
    return Outcome(r.through, r.first_nonzero)


# -- C15-C17: Landen ----------------------------------------------------------

def landen_residual(f: TruncatedSeries) -> TruncatedSeries:
    """f(v/(1+4v^2)) - (1/8) (1+4v^2)/v^3 d/dv f(v^2), exact over Q, in v."""
    f = f.to_rational().rename("v")
    n = f.precision
    lhs = compose(f, gen.landen_argument(n, "v"))
    df = derivative(substitute_power(f, 2))
    if any(df.coeffs[:3]):
        raise ValueError("series must vanish to order 2 for the v^-3 factor")
    quot = TruncatedSeries(df.coeffs[3:], df.precision - 3, QQ, "v")
    rhs = quot.mul_poly([1, 0, 4]).scale(Fraction(1, 8))
    m = min(lhs.precision, rhs.precision)
    return lhs.truncate(m) - rhs.truncate(m)


@check("C15", "exact", "exact", "Phi(4v/(1 + 4v^2)) = 4 Psi(4v^2)")
def _c15(order):
    n = 60
    lhs = compose(gen.phi(n, "v"), gen.landen_argument(n, "v").scale(4))
    rhs = compose(gen.psi(n // 2, "v"), TruncatedSeries.monomial(2, n, QQ, "v", 4)).scale(4)
    return compare(lhs, rhs)


@check("C16", "exact", "exact", "chi~^(2)(v/(1+4v^2)) = (1/8) (1+4v^2)/v^3 d/dv chi~^(2)(v^2)")
def _c16(order):
    return vanishes(landen_residual(chiL2_w(40)))


A_C17 = "chi~_L/4 does not satisfy the Landen relation of chi~^(2) mod 8"


@check("C17", "exact", "exact", A_C17, ("chiL4_w_over16", "diffL24_w"), expect="nonzero")
def _c17_exact(order):
    return vanishes(landen_residual(chiL_w_full()))


@check("C17", "mod8", 8, A_C17, ("chiL4_w_over16", "diffL24_w"), expect="nonzero")
def _c17_mod8(order):
    r = landen_residual(chiL_w_full().exact_div(4))
    return vanishes(mod(r.to_integer(), 8))


@check("C17", "control", 8, "chi~^(2)/4 satisfies it mod 8", ("chiL4_w_over16", "diffL24_w"))
def _c17_control(order):
    r = landen_residual(chiL2_w(chiL_w_full().precision).exact_div(4))
    return vanishes(mod(r.to_integer(), 8))


# -- C18/C19: chi~_L/4 and chi~_H/2 in w -----------------------------------

R_FLOW8 = frob(8, [{4: -1}, {0: 1}], shifted({0: 2, 2: 1, 6: -1}, 10, -2))
A_FLOW8 = "F~8(w^2) - w^4 F~8(w) + 2w^10 (2 + w^2 - w^6) = 0 mod 8"
LOW_SMALL = {2: {4: 1}, 4: {4: 1, 8: 2}}

for _m, _t in LOW_SMALL.items():
    def _f(order, m=_m, t=_t):
        f = mod(chiL_w_full().exact_div(4), m)
        return compare(f, poly(t, m, f.precision, "w"))
    check("C18", f"mod{_m}", _m, "F~2 = w^4, F~4 = w^4 + 2w^8", ("chiL4_w_over16", "diffL24_w"))(_f)

    def _g(order, m=_m, t=_t):
        return compare(mod(chiL2_w(order).exact_div(4), m), poly(t, m, order, "w"))
    check("C18", f"chiL2-mod{_m}", _m, "chi~^(2)/4 gives the same series mod 2 and 4")(_g)


@check("C18", "mod8-fixture", 8, "F~8 = w^4 + 4w^6 + 6w^8 + 4w^12 + 4w^20 + ...", ("chiL4_w_over16", "diffL24_w"))
def _c18_f8(order):
    f = mod(chiL_w_full().exact_div(4), 8)
    return compare(f, closed("chiL_over4_mod8_closed", f.precision))


@check("C18", "mod8-table", 8, "F~8 = w^4 + 4w^6 + 6w^8 + 4w^12 + 4w^20 + ...", ("chiL_w_over4_mod8_table",))
def _c18_t8(order):
    t = fx("chiL_w_over4_mod8_table")
    return compare(t, closed("chiL_over4_mod8_closed", t.precision))


@check("C18", "funcequ", 8, A_FLOW8)
def _c18_e8(order):
    return frob_outcome(R_FLOW8, closed("chiL_over4_mod8_closed", order))


@check("C18", "chiL2-mod8", 8, "chi~^(2)/4 gives the same series as F~ mod 8")
def _c18_2m8(order):
    return compare(mod(chiL2_w(order).exact_div(4), 8), closed("chiL_over4_mod8_closed", order))


@check("C18", "chiL2-funcequ", 8, "chi~^(2)/4 satisfies the same mod 8 equation as F~")
def _c18_2e8(order):
    return frob_outcome(R_FLOW8, mod(chiL2_w(order).exact_div(4), 8))


R_FH8 = frob(8, [{1: 1}, {0: -1}], shifted({7: 1, 1: -1, 0: 1}, 3, 4))
R_FH16 = frob(16, [{1: 1}, {0: -1}], shifted({15: 2, 7: 1, 1: -1, 0: 1}, 3, 4))

for _m in (2, 4):
    def _f(order, m=_m):
        f = mod(chiH_w_full().exact_div(2), m)
        return compare(f, poly({1: 1}, m, f.precision, "w"))
    check("C19", f"mod{_m}", _m, "F~2 = w, F~4 = w", ("chiH3_w_over8", "diffH13_w"))(_f)

for _m, _name, _table, _rel, _af, _ae in (
        (8, "chiH_over2_mod8_closed", "chiH_w_over2_mod8_table", R_FH8,
         "F~8 = w + 4w^2 + 4w^9 + 4w^17 + ... mod 8",
         "F~8(w^2) + 4w^3 (w^7 - w + 1) = w F~8(w) mod 8"),
        (16, "chiH_over2_mod16_closed", "chiH_w_over2_mod16_table", R_FH16,
         "F~16 = w + 4w^2 + 4w^9 + 12w^17 + ... mod 16",
         "F~16(w^2) + 4w^3 (2w^15 + w^7 - w + 1) = w F~16(w) mod 16")):
    def _fix(order, m=_m, name=_name):
        f = mod(chiH_w_full().exact_div(2), m)
        return compare(f, closed(name, f.precision))

    def _tab(order, name=_name, table=_table):
        t = fx(table)
        return compare(t, closed(name, t.precision))

    def _eq(order, name=_name, rel=_rel):
        return frob_outcome(rel, closed(name, order))

    check("C19", f"mod{_m}-fixture", _m, _af, ("chiH3_w_over8", "diffH13_w"))(_fix)
    check("C19", f"mod{_m}-table", _m, _af, (_table,))(_tab)
    check("C19", f"mod{_m}-funcequ", _m, _ae)(_eq)

H1_OVER2 = {2: {1: 1}, 4: {1: 1}, 8: {1: 1, 2: 4}, 16: {1: 1, 2: 4, 3: 16}, 32: {1: 1, 2: 4, 3: 16},
            64: {1: 1, 2: 4, 3: 16}, 128: {1: 1, 2: 4, 3: 16, 4: 64}}
for _m, _t in H1_OVER2.items():
    def _f(order, m=_m, t=_t):
        h = gen.chiH1_w(order).exact_div(2)
        return compare(mod(h, m), poly(t, m, order, "w"))
    check("C19", f"chiH1-mod{_m}", _m, "chi~_H^(1)/2 = w/(1 - 4w) mod 2^r")(_f)


# -- C20: Catalan -----------------------------------------------------------

@check("C20", "xC", 2, "x C(x) = L(x) - 1 mod 2")
def _c20_xc(order):
    n = min(order, 512)
    c = mod(gen.catalan(n), 2).shift(1).truncate(n)
    return compare(c, mod(gen.lacunary(n, "x") - 1, 2))


@check("C20", "C2x", 2, "x C(x^2) - C(x) + 1 = 0 mod 2")
def _c20_c2x(order):
    n = min(order, 512)
    rel = frob(2, [{0: -1}, {1: 1}], {0: -1})
    return frob_outcome(rel, mod(gen.catalan(n), 2))


# 4 + 4/(1 - x C(x^2)) has constant term 8 = 0, so the lacunary series here is
# sum_n x^(2^n) = L(x) - 1, the form without the constant term
@check("C20", "mod8", 8, "4 + 4/(1 - x C(x^2)) = 4 sum_n x^(2^n) mod 8")
def _c20_m8(order):
    n = min(order, 512)
    c = gen.catalan(n)
    inner = substitute_power(c, 2).truncate(n).shift(1).truncate(n)
    lhs = mod(inverse(1 - inner).scale(4) + 4, 8)
    return compare(lhs, mod((gen.lacunary(n, "x") - 1).scale(4), 8))


# -- C21/C22: v-variable differences and internal consistency ----------------

@check("C21", "fixture", 64, "chi_L - chi_L^(2) = 16v^16 + 32v^20 + 32v^32 + 32v^36 + ... mod 64",
       ("diffL2_v", "diffL2_v_mod64_table"))
def _c21_fix(order):
    t = fx("diffL2_v_mod64_table")
    return compare(mod(fx("diffL2_v"), 64), t)


@check("C21", "converted", 64, "chi_L - chi_L^(2) = 16v^16 + 32v^20 + 32v^32 + 32v^36 + ... mod 64",
       ("diffL2_w", "diffL2_v_mod64_table"))
def _c21_conv(order):
    d = gen.low_w_to_v(fx("diffL2_w")).to_integer()
    return compare(mod(d, 64), fx("diffL2_v_mod64_table"))


@check("C21", "mod32", 32, "chi_L - chi_L^(2) = 16v^16 mod 32", ("diffL2_v",))
def _c21_32(order):
    d = fx("diffL2_v")
    return compare(mod(d, 32), poly({16: 16}, 32, d.precision, "v"))


def _consistency(branch, anchor, inputs, lhs, rhs, through=None):
    def run(order):
        return compare(lhs(), rhs(), through)
    check("C22", branch, "exact", anchor, inputs)(run)


_consistency("low-agree", "chi~_L and chi~_L^(2) agree through w^14", ("chiL_w",),
             lambda: fx("chiL_w"), lambda: chiL2_w(20), 14)
_consistency("low-agree-w16", "chi~_L - chi~_L^(2) starts at 16w^16", ("chiL_w",),
             lambda: (fx("chiL_w") - chiL2_w(20)).truncate(16),
             lambda: TruncatedSeries.monomial(16, 16, fx("chiL_w").ring, "w", 16))
_consistency("high-agree", "chi~_H and chi~_H^(1) agree through w^8", ("chiH_w",),
             lambda: fx("chiH_w"), lambda: gen.chiH1_w(11), 8)
_consistency("diff2", "difference table chi~_L - chi~_L^(2)", ("chiL_w", "diffL2_w"),
             lambda: fx("diffL2_w"), lambda: fx("chiL_w") - chiL2_w(20))
_consistency("diff24", "difference table chi~_L - chi~_L^(2) - chi~_L^(4)",
             ("chiL_w", "chiL4_w_over16", "diffL24_w"),
             lambda: fx("diffL24_w"),
             lambda: fx("chiL_w") - chiL2_w(20) - fx("chiL4_w_over16").truncate(20).scale(16))
_consistency("diff246", "difference table chi~_L - chi~_L^(2) - chi~_L^(4) - chi~_L^(6)",
             ("chiL_w", "chiL4_w_over16", "chiL6_w_over64", "diffL246_w"),
             lambda: fx("diffL246_w"),
             lambda: (fx("chiL_w") - chiL2_w(20) - fx("chiL4_w_over16").truncate(20).scale(16)
                      - fx("chiL6_w_over64").truncate(20).scale(64)))
_consistency("diff246-vs-24", "chi~_L^(6) = (diff24) - (diff246)",
             ("chiL6_w_over64", "diffL24_w", "diffL246_w"),
             lambda: fx("chiL6_w_over64").truncate(48).scale(64),
             lambda: fx("diffL24_w") - fx("diffL246_w").truncate(48))
_consistency("diffH13", "difference table chi~_H - chi~_H^(1) - chi~_H^(3)",
             ("chiH_w", "chiH3_w_over8", "diffH13_w"),
             lambda: fx("diffH13_w"),
             lambda: fx("chiH_w") - gen.chiH1_w(11) - fx("chiH3_w_over8").truncate(11).scale(8))
_consistency("diffH135", "difference table chi~_H - chi~_H^(1) - chi~_H^(3) - chi~_H^(5)",
             ("chiH_w", "chiH3_w_over8", "chiH5_w_over32", "diffH135_w"),
             lambda: fx("diffH135_w"),
             lambda: (fx("chiH_w") - gen.chiH1_w(11) - fx("chiH3_w_over8").truncate(11).scale(8)
                      - fx("chiH5_w_over32").truncate(11).scale(32)))
_consistency("diffH135-vs-13", "chi~_H^(5) = (diffH13) - (diffH135)",
             ("chiH5_w_over32", "diffH13_w", "diffH135_w"),
             lambda: fx("chiH5_w_over32").truncate(35).scale(32),
             lambda: fx("diffH13_w") - fx("diffH135_w").truncate(35))
_consistency("chiL-assembled", "chi~_L table vs chi~^(2) + chi~^(4) + difference",
             ("chiL_w", "chiL4_w_over16", "diffL24_w"), lambda: fx("chiL_w"), chiL_w_full)
_consistency("chiH-assembled", "chi~_H table vs chi~^(1) + chi~^(3) + difference",
             ("chiH_w", "chiH3_w_over8", "diffH13_w"), lambda: fx("chiH_w"), chiH_w_full)
_consistency("chiL-v", "chi_L(v) = (1 - 16v^4)^(1/4) chi~_L(v/(1 + 4v^2))",
             ("chiL_v", "chiL4_w_over16", "diffL24_w"), lambda: fx("chiL_v"), chiL_v_full)
_consistency("chiH-v", "chi_H(v) = (1 - 16v^4)^(1/4) chi~_H(v/(1 + 4v^2))/(2v)",
             ("chiH_v", "chiH3_w_over8", "diffH13_w"), lambda: fx("chiH_v"), chiH_v_full)
_consistency("G-v", "G(v) = (chi_H(v) - 1)/4", ("G_v", "chiH3_w_over8", "diffH13_w"),
             lambda: fx("G_v"), G_v)
_consistency("diffL2-v", "chi_L(v) - chi_L^(2)(v) from the w-difference", ("diffL2_v", "diffL2_w"),
             lambda: fx("diffL2_v"), lambda: gen.low_w_to_v(fx("diffL2_w")).to_integer())
_consistency("chiL2-v", "chi_L^(2)(v) = (1 - 16v^4)^(1/4) chi~^(2)(v/(1 + 4v^2))", ("chiL2_v",),
             lambda: fx("chiL2_v"), lambda: gen.chiL2_v(fx("chiL2_v").precision))
_consistency("chiL2-landen", "chi~^(2) = Phi(4v/(1 + 4v^2))", ("chiL2_landen_v",),
             lambda: fx("chiL2_landen_v"),
             lambda: compose(gen.phi(16, "v"), gen.landen_argument(16, "v").scale(4)).to_integer())
_consistency("chiH1-v", "chi_H^(1)(v) = ((1 - 16v^4)/(1 - 2v)^8)^(1/4)", ("chiH1_v",),
             lambda: fx("chiH1_v"), lambda: chiH1_v(fx("chiH1_v").precision))
_consistency("over4", "chi~_L/4 table", ("chiL_w_over4", "chiL4_w_over16", "diffL24_w"),
             lambda: fx("chiL_w_over4"), lambda: chiL_w_full().exact_div(4))
_consistency("chiL2-over4", "chi~^(2)/4 = w^4 2F1(3/2, 5/2; 3; 16w^2)", ("chiL2_w_over4",),
             lambda: fx("chiL2_w_over4"), lambda: chiL2_w(fx("chiL2_w_over4").precision).exact_div(4))
_consistency("over2", "chi~_H/2 table", ("chiH_w_over2", "chiH3_w_over8", "diffH13_w"),
             lambda: fx("chiH_w_over2"), lambda: chiH_w_full().exact_div(2))
_consistency("chiH1-over2", "chi~_H^(1)/2 = w/(1 - 4w)", ("chiH1_w_over2",),
             lambda: fx("chiH1_w_over2"), lambda: gen.chiH1_w(fx("chiH1_w_over2").precision).exact_div(2))


# -- running ------------------------------------------------------------------

def select(pattern: str | None = None) -> list[CheckSpec]:
    """Checks whose id or id.branch matches a glob (``C13``, ``C0*``, ``C05.mod2*``)."""
    if not pattern:
        return list(CATALOG)
    pats = [p.strip() for p in pattern.split(",") if p.strip()]
    return [c for c in CATALOG
            if any(fnmatch.fnmatchcase(c.id, p) or fnmatch.fnmatchcase(c.name, p) for p in pats)]


def run_check(spec: CheckSpec, order: int = DEFAULT_ORDER) -> CheckReport:
    t0 = time.perf_counter()
    try:
        out = spec.run(order)
    except MissingFixture as exc:
        return CheckReport(spec.id, spec.branch, SKIP, spec.modulus, 0, None, spec.anchor,
                           time.perf_counter() - t0, str(exc))
    vanished = out.residual is None
    ok = vanished if spec.expect == "zero" else not vanished
    return CheckReport(spec.id, spec.branch, PASS if ok else FAIL, spec.modulus, out.through,
                       out.residual, spec.anchor, time.perf_counter() - t0)


def run_campaign(pattern: str | None = None, order: int = DEFAULT_ORDER) -> list[CheckReport]:
    return [run_check(spec, order) for spec in select(pattern)]


def format_report(reports: list[CheckReport]) -> str:
    lines = [r.line() for r in reports]
    ids = sorted({r.id for r in reports})
    counts = {s: sum(r.status == s for r in reports) for s in (PASS, FAIL, SKIP)}
    lines.append(f"SUMMARY ids={len(ids)} checks={len(reports)} pass={counts[PASS]} "
                 f"fail={counts[FAIL]} skip={counts[SKIP]}")
    return "\n".join(lines) + "\n"

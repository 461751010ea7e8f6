"""Closed-form series generators.

Every integer-valued generator is computed over Q and then converted with an
integrality check, so a wrong parameter shows up as an exception rather than
as silently rounded coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from ..series import (QQ, ZZ, SeriesError, TruncatedSeries, Zmod, compose,
                      derivative, inverse, rational_power, substitute_power)


def hypergeometric_2f1_coeffs(a, b, c, order: int) -> list[Fraction]:
    """Terms t_n of 2F1(a, b; c; z), t_{n+1} = t_n (a+n)(b+n) / ((c+n)(1+n))."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if c.denominator == 1 and c <= 0:
        raise SeriesError(f"2F1 lower parameter {c} is a pole")
    t = [Fraction(1)]
    for n in range(order):
        t.append(t[-1] * (a + n) * (b + n) / ((c + n) * (1 + n)))
    return t


def gen_hypergeometric_2f1(a, b, c, argument: TruncatedSeries, order: int) -> TruncatedSeries:
    """2F1(a, b; c; argument) as a rational series through x^order."""
    v = argument.valuation()
    if argument.coeffs[0] != 0:
        raise SeriesError("2F1 argument must have zero constant term")
    argument = argument.to_rational() if argument.ring != QQ else argument
    if v is None:
        return TruncatedSeries.one(order, QQ, argument.var)
    if argument.precision < order:
        raise SeriesError(f"argument known through {argument.precision}, need {order}")
    terms = hypergeometric_2f1_coeffs(a, b, c, order // v)
    if argument.support() == [v]:
        # monomial argument k*x^v: scale then spread
        k = argument.coeffs[v]
        base = TruncatedSeries([t * k**n for n, t in enumerate(terms)], len(terms) - 1, QQ, argument.var)
        return substitute_power(base, v).truncate(order) if v > 1 else base.truncate(order)
    base = TruncatedSeries(terms, len(terms) - 1, QQ, argument.var)
    return compose(base, argument.truncate(order)).truncate(order)


def _x(order, var, ring=QQ):
    return TruncatedSeries.monomial(1, order, ring, var)


def _poly(coeffs, order, var, ring=QQ):
    return TruncatedSeries.polynomial(coeffs, order, ring, var)


def geometric(order, var="x", ring=ZZ):
    return TruncatedSeries([1] * (order + 1), order, ring, var)


def lacunary(order: int, var: str = "u", ring=ZZ) -> TruncatedSeries:
    """1 + sum_{n>=0} x^(2^n)."""
    terms = {0: 1}
    k = 1
    while k <= order:
        terms[k] = 1
        k *= 2
    return TruncatedSeries.from_terms(terms, order, ring, var)


def landen_argument(order: int, var: str = "v") -> TruncatedSeries:
    """w = v/(1 + 4v^2), the map between the self-dual and the v variable."""
    return _x(order, var) * inverse(_poly([1, 0, 4], order, var))


def chiH1_w(order: int, var: str = "w") -> TruncatedSeries:
    """2w/(1 - 4w)."""
    return (_x(order, var) * inverse(_poly([1, -4], order, var))).scale(2).to_integer()


def quarter_power_prefactor(order: int, var: str = "v") -> TruncatedSeries:
    """(1 - 16v^4)^(1/4)."""
    return rational_power(_poly([1, 0, 0, 0, -16], order, var), Fraction(1, 4))


def chiH1_v(order: int, var: str = "v") -> TruncatedSeries:
    """((1 - 16v^4)/(1 - 2v)^8)^(1/4)."""
    # = (1 - 16v^4)^(1/4) * (1 - 2v)^(-2); the fractional power stays on a sparse argument
    inv_sq = TruncatedSeries([(n + 1) * 2**n for n in range(order + 1)], order, QQ, var)
    return (quarter_power_prefactor(order, var) * inv_sq).to_integer()


def phi(order: int, var: str = "x") -> TruncatedSeries:
    """x^4/64 * 2F1([3/2, 5/2], [3], x^2)."""
    arg = TruncatedSeries.monomial(2, order, QQ, var)
    return gen_hypergeometric_2f1(Fraction(3, 2), Fraction(5, 2), 3, arg, order).shift(4).truncate(order).scale(Fraction(1, 64))


def psi(order: int, var: str = "x") -> TruncatedSeries:
    """(1 + x)/x * phi'(x); phi' has valuation 3 so the division is exact."""
    dphi = derivative(phi(order + 2, var))  # known through order+1
    shifted = TruncatedSeries(dphi.coeffs[1:], order, QQ, var)
    return shifted.mul_poly([1, 1]).truncate(order)


def chiL2_w(order: int, var: str = "w") -> TruncatedSeries:
    """4 w^4 2F1([3/2, 5/2], [3], 16 w^2)."""
    arg = TruncatedSeries.monomial(2, order, QQ, var, 16)
    f = gen_hypergeometric_2f1(Fraction(3, 2), Fraction(5, 2), 3, arg, order)
    return f.shift(4).truncate(order).scale(4).to_integer()


def w_to_v(f: TruncatedSeries, var: str = "v") -> TruncatedSeries:
    """Re-expand a w-series in v through w = v/(1 + 4v^2)."""
    return compose(f.to_rational(), landen_argument(f.precision, var))


def low_w_to_v(f: TruncatedSeries, var: str = "v") -> TruncatedSeries:
    """chi_L(v) = (1 - 16v^4)^(1/4) * chi~_L(v/(1 + 4v^2)), over the rationals."""
    return quarter_power_prefactor(f.precision, var) * w_to_v(f, var)


def high_w_to_v(f: TruncatedSeries, var: str = "v") -> TruncatedSeries:
    """chi_H(v) = (1 - 16v^4)^(1/4) * chi~_H(v/(1 + 4v^2)) / (2v); f must vanish at 0."""
    g = quarter_power_prefactor(f.precision, var) * w_to_v(f, var)
    if g.coeffs[0] != 0:
        raise SeriesError("high-temperature w-series must have zero constant term")
    return TruncatedSeries(g.coeffs[1:], g.precision - 1, QQ, var).scale(Fraction(1, 2))


def chiL2_v(order: int, var: str = "v") -> TruncatedSeries:
    """(1 - 16v^4)^(1/4) * chiL2_w(v/(1 + 4v^2))."""
    return low_w_to_v(chiL2_w(order), var).to_integer()


def catalan(order: int, var: str = "x") -> TruncatedSeries:
    """(1 - sqrt(1 - 4x))/(2x), i.e. the root of x C^2 - C + 1 = 0."""
    s = rational_power(_poly([1, -4], order + 1, var), Fraction(1, 2))
    # (1 - s)/(2x): drop the constant, shift down by one
    c = [-s.coeffs[k + 1] / 2 for k in range(order + 1)]
    return TruncatedSeries(c, order, QQ, var).to_integer()


# -- mod 2^r closed forms ---------------------------------------------------

def _mod_combo(order, var, m_exp, poly_terms, lac_terms, p=2):
    """sum(poly_terms) + (sum lac_terms) * L(x) reduced mod p^m_exp.

    Both arguments are {exponent: coefficient} dicts.
    """
    ring = Zmod(p, m_exp)
    L = lacunary(order, var, ring)
    out = TruncatedSeries.from_terms(poly_terms, order, ring, var)
    if lac_terms:
        out = out + L.mul_poly(_dense(lac_terms, ring)).truncate(order)
    return out


def _dense(terms, ring):
    top = max(terms)
    return [ring.convert(terms.get(i, 0)) for i in range(top + 1)]


def F32_closed(order, var="u"):
    """20u^2 + 24u^4 + 16u^2 L(u) mod 32."""
    return _mod_combo(order, var, 5, {2: 20, 4: 24}, {2: 16})


def F64_closed(order, var="u"):
    """60u^2 (11 + 8u + 10u^2 + 8u^4 + 8u^6) + (48u^2 + 32u^4) L(u) mod 64."""
    poly = {2 + k: 60 * c for k, c in {0: 11, 1: 8, 2: 10, 4: 8, 6: 8}.items()}
    return _mod_combo(order, var, 6, poly, {2: 48, 4: 32})


P13 = {0: 2, 1: -1, 2: -8, 3: -15, 4: 12, 5: -4, 6: 8, 7: 4, 9: -8, 11: 4, 13: -8}
P28 = {28: 4, 26: -12, 24: -2, 22: 6, 20: 4, 18: -16, 14: 10, 12: 10, 11: 4,
       10: -2, 9: 4, 8: 12, 7: -10, 6: -13, 5: -11, 4: 11, 3: -6, 2: -1, 1: -3, 0: 3}


def F128_Lform(order, var="u", leading=4):
    """Series determined mod 128 by u^2 F(u) = F(u^2) + 32u^6 (3 - u^2) L(u) + 8u^5 p13(u).

    Comparing u^k coefficients gives a_{k-2} = [k even] a_{k/2} + r_k, which
    fixes everything except a_2; that free coefficient is the leading term
    4u^2 of the low-temperature series.
    """
    ring = Zmod(2, 7)
    m = ring.m
    n = order + 2
    L = lacunary(n, var, ring)
    rhs = L.mul_poly(_dense({6: 96, 8: -32}, ring)).truncate(n)
    rhs = rhs + TruncatedSeries.from_terms({5 + k: 8 * c for k, c in P13.items()}, n, ring, var)
    r = rhs.coeffs
    a = [0] * (order + 1)
    if r[2] or r[3] or r[4]:
        raise SeriesError("inhomogeneous part is inconsistent at low order")
    a[2] = leading % m
    for k in range(5, n + 1):
        val = r[k] + (a[k // 2] if k % 2 == 0 else 0)
        a[k - 2] = val % m
    return TruncatedSeries(a, order, ring, var)


def chiH_mod16_closed(order, var="w"):
    """10w + 8w^3 + 8w^5 + 8w L(w) mod 16."""
    return _mod_combo(order, var, 4, {1: 10, 3: 8, 5: 8}, {1: 8})


def chiH_mod32_closed(order, var="w"):
    """10w + 16w^2 + 8w^3 + 8w^5 + 16w^9 + 24w L(w) mod 32."""
    return _mod_combo(order, var, 5, {1: 10, 2: 16, 3: 8, 5: 8, 9: 16}, {1: 24})


def chiH3_mod2_closed(order, var="w"):
    """w L(w) - w (w^4 + w^2 + w + 1) mod 2."""
    return _mod_combo(order, var, 1, {5: -1, 3: -1, 2: -1, 1: -1}, {1: 1})


def chiH3_mod4_closed(order, var="w"):
    """3w L(w) + w (2w^8 + w^4 + w^2 + w + 1) mod 4."""
    return _mod_combo(order, var, 2, {9: 2, 5: 1, 3: 1, 2: 1, 1: 1}, {1: 3})


def chiL4_mod4_closed(order, var="w"):
    """2w^4 L(w) + w^16 + 2w^4 (w^28 + w^8 + w^4 + w^2 + w + 1) mod 4."""
    poly = {16: 1}
    for e in (28, 8, 4, 2, 1, 0):
        poly[4 + e] = poly.get(4 + e, 0) + 2
    return _mod_combo(order, var, 2, poly, {4: 2})


def diffL_mod64_closed(order, var="w"):
    """32w^4 L(w) + 16w^16 + 32w^4 (w^28 - w^8 - w^4 - w^2 - w - 1) mod 64."""
    poly = {16: 16, 32: 32}
    for e in (8, 4, 2, 1, 0):
        poly[4 + e] = poly.get(4 + e, 0) - 32
    return _mod_combo(order, var, 6, poly, {4: 32})


def diffL24_mod128_closed(order, var="w"):
    """64w^4 L(w) - 64w^4 (w^16 + w^8 + w^4 + w^2 + w + 1) mod 128."""
    poly = {}
    for e in (16, 8, 4, 2, 1, 0):
        poly[4 + e] = -64
    return _mod_combo(order, var, 7, poly, {4: 64})


def _lacunary_tail(order, var, m_exp, head, coef, shift, kmin):
    """head + coef * sum_{k>=kmin} x^(2^k + shift) mod 2^m_exp."""
    terms = dict(head)
    k = 1 << kmin
    while k + shift <= order:
        terms[k + shift] = terms.get(k + shift, 0) + coef
        k <<= 1
    return TruncatedSeries.from_terms(terms, order, Zmod(2, m_exp), var)


def chiL_over4_mod8_closed(order, var="w"):
    """w^4 + 4w^6 + 6w^8 + 4w^12 + 4 sum_{k>=4} w^(2^k+4) mod 8."""
    return _lacunary_tail(order, var, 3, {4: 1, 6: 4, 8: 6, 12: 4}, 4, 4, 4)


def chiH_over2_mod8_closed(order, var="w"):
    """w + 4w^2 + 4 sum_{k>=3} w^(2^k+1) mod 8."""
    return _lacunary_tail(order, var, 3, {1: 1, 2: 4}, 4, 1, 3)


def chiH_over2_mod16_closed(order, var="w"):
    """w + 4w^2 + 4w^9 + 12 sum_{k>=4} w^(2^k+1) mod 16."""
    return _lacunary_tail(order, var, 4, {1: 1, 2: 4, 9: 4}, 12, 1, 4)


def G_mod2_closed(order, var="v"):
    """L(v) - 1 mod 2."""
    return _mod_combo(order, var, 1, {0: -1}, {0: 1})


def G_mod4_closed(order, var="v"):
    """3L(v) - 3 - 2v mod 4."""
    return _mod_combo(order, var, 2, {0: -3, 1: -2}, {0: 3})


def _chiL2_mod32(order, var="w"):
    """4w^4 + 16w^6 + 24w^8 + 16w^16 + 16 sum_{k>=3} w^(2^k+4) mod 32."""
    poly = {4: 4, 6: 16, 8: 24, 16: 16}
    for e in (0, 1, 2, 4):
        poly[4 + e] = poly.get(4 + e, 0) - 16
    return _mod_combo(order, var, 5, poly, {4: 16})


def _chiL_mod32(order, var="w"):
    """Same lacunary form without the 16w^16 term."""
    return _chiL2_mod32(order, var) - TruncatedSeries.monomial(16, order, Zmod(2, 5), var, 16)


GENERATORS: dict[str, tuple[Callable[..., TruncatedSeries], str]] = {
    "chiH1_w": (chiH1_w, "w"),
    "chiH1_v": (chiH1_v, "v"),
    "chiL2_w": (chiL2_w, "w"),
    "chiL2_v": (chiL2_v, "v"),
    "lacunary_L": (lacunary, "u"),
    "catalan_C": (catalan, "x"),
    "phi": (phi, "x"),
    "psi": (psi, "x"),
    "landen_w_of_v": (lambda n, var="v": landen_argument(n, var), "v"),
    "quarter_prefactor": (quarter_power_prefactor, "v"),
    "F32_closed": (F32_closed, "u"),
    "F64_closed": (F64_closed, "u"),
    "F128_Lform": (F128_Lform, "u"),
    "chiH_mod16_closed": (chiH_mod16_closed, "w"),
    "chiH_mod32_closed": (chiH_mod32_closed, "w"),
    "chiH3_mod2_closed": (chiH3_mod2_closed, "w"),
    "chiH3_mod4_closed": (chiH3_mod4_closed, "w"),
    "chiL4_mod4_closed": (chiL4_mod4_closed, "w"),
    "diffL_mod64_closed": (diffL_mod64_closed, "w"),
    "diffL24_mod128_closed": (diffL24_mod128_closed, "w"),
    "chiL_over4_mod8_closed": (chiL_over4_mod8_closed, "w"),
    "chiH_over2_mod8_closed": (chiH_over2_mod8_closed, "w"),
    "chiH_over2_mod16_closed": (chiH_over2_mod16_closed, "w"),
    "G_mod2_closed": (G_mod2_closed, "v"),
    "G_mod4_closed": (G_mod4_closed, "v"),
    "chiL2_mod32_lacunary": (_chiL2_mod32, "w"),
    "chiL_mod32_lacunary": (_chiL_mod32, "w"),
}


def gen_named(name: str, order: int, var: str | None = None) -> TruncatedSeries:
    try:
        fn, default_var = GENERATORS[name]
    except KeyError:
        raise KeyError(f"unknown generator {name!r}; known: {', '.join(sorted(GENERATORS))}") from None
    if order < 0:
        raise SeriesError("order must be >= 0")
    return fn(order, var or default_var)

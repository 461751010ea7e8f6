"""Taylor expansion of multivariate rational functions and their diagonals."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .series import QQ, ZZ, TruncatedSeries

DEFAULT_MAX_TERMS = 2_000_000

Poly = dict  # {exponent tuple: integer coefficient}


class DiagonalError(ValueError):
    pass


_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")
_FACTOR = re.compile(r"^([A-Za-z_]\w*)(?:\^(\d+))?$")


def parse_polynomial(text: str, variables: list[str] | None = None) -> tuple[list[str], Poly]:
    """Parse a sum of signed integer monomials such as ``1 - x - 2*x^2*y``.

    Returns the variable list (given, or sorted by first appearance) and the
    sparse coefficient dict keyed by exponent tuples.
    """
    if not text.strip():
        raise DiagonalError("empty polynomial")
    raw: list[tuple[int, dict[str, int]]] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise DiagonalError(f"cannot parse polynomial near {text[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        if m.group(1) is None and pos > 0:
            raise DiagonalError(f"missing operator near {text[pos:]!r}")
        coeff, exps = sign, {}
        for tok in (t.strip() for t in m.group(2).split("*")):
            if not tok:
                raise DiagonalError(f"empty factor in {m.group(2).strip()!r}")
            if tok.isdigit():
                coeff *= int(tok)
                continue
            f = _FACTOR.match(tok)
            if not f:
                raise DiagonalError(f"bad factor {tok!r}")
            exps[f.group(1)] = exps.get(f.group(1), 0) + int(f.group(2) or 1)
        raw.append((coeff, exps))
        pos = m.end()
    names = list(variables) if variables is not None else []
    for _, exps in raw:
        for v in exps:
            if v not in names:
                if variables is not None:
                    raise DiagonalError(f"unknown variable {v!r}")
                names.append(v)
    poly: Poly = {}
    for coeff, exps in raw:
        key = tuple(exps.get(v, 0) for v in names)
        poly[key] = poly.get(key, 0) + coeff
    return names, {k: c for k, c in poly.items() if c}


@dataclass(frozen=True)
class MultivariateRational:
    variables: tuple[str, ...]
    numerator: Poly
    denominator: Poly

    def __post_init__(self):
        k = len(self.variables)
        if k == 0:
            raise DiagonalError("at least one variable is required")
        for poly in (self.numerator, self.denominator):
            if any(len(e) != k or min(e) < 0 for e in poly):
                raise DiagonalError("exponent tuples must match the variable list")
        if not self.denominator.get((0,) * k):
            raise DiagonalError("denominator has zero constant term; no Taylor expansion at 0")

    @classmethod
    def parse(cls, numerator: str, denominator: str, variables=None) -> "MultivariateRational":
        if variables is None:
            names, _ = parse_polynomial(f"{numerator} + {denominator}")
            names = sorted(names)
        else:
            names = list(variables)
        _, num = parse_polynomial(numerator, names)
        _, den = parse_polynomial(denominator, names)
        return cls(tuple(names), num, den)

    @property
    def nvars(self) -> int:
        return len(self.variables)


def _expand(fr: MultivariateRational, points) -> dict:
    """Coefficients at every point of a down-closed set, visited in lexicographic order."""
    k = fr.nvars
    zero = (0,) * k
    d0 = fr.denominator[zero]
    rest = [(e, c) for e, c in fr.denominator.items() if e != zero]
    exact = d0 in (1, -1)
    out: dict = {}
    for alpha in points:
        acc = fr.numerator.get(alpha, 0)
        for beta, c in rest:
            prev = tuple(a - b for a, b in zip(alpha, beta))
            if min(prev) >= 0:
                acc -= c * out.get(prev, 0)
        out[alpha] = acc * d0 if exact else Fraction(acc, d0)
    return out


def expand_taylor(fr: MultivariateRational, order: int, max_terms: int = DEFAULT_MAX_TERMS) -> dict:
    """Taylor coefficients on the simplex of total degree <= order * nvars (zeros included)."""
    if order < 0:
        raise DiagonalError("order must be >= 0")
    k = fr.nvars
    top = order * k
    size = comb(top + k, k)
    if size > max_terms:
        raise DiagonalError(f"{size} coefficients exceed the cap of {max_terms}")
    pts = (a for a in itertools.product(range(top + 1), repeat=k) if sum(a) <= top)
    return _expand(fr, pts)


def diagonal(fr: MultivariateRational, order: int, max_terms: int = DEFAULT_MAX_TERMS,
             var: str = "t") -> TruncatedSeries:
    """c_n = [x_1^n ... x_k^n] fr for n = 0..order."""
    if order < 0:
        raise DiagonalError("order must be >= 0")
    k = fr.nvars
    size = (order + 1) ** k
    if size > max_terms:
        raise DiagonalError(f"{size} coefficients exceed the cap of {max_terms}")
    # the box [0, order]^k is down-closed, which is all the recurrence needs
    coeffs = _expand(fr, itertools.product(range(order + 1), repeat=k))
    diag = [coeffs[(n,) * k] for n in range(order + 1)]
    if all(isinstance(c, int) or c.denominator == 1 for c in diag):
        return TruncatedSeries([int(c) for c in diag], order, ZZ, var)
    return TruncatedSeries(diag, order, QQ, var)

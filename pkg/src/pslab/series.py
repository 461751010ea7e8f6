"""Truncated power series over Q, Z and Z/p^r.

A :class:`TruncatedSeries` stores the exact coefficients c_0..c_N of a
one-variable series together with the precision N: everything beyond x^N is
unknown.  All operations propagate precision conservatively so that a result
never claims more exact coefficients than its inputs support.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

RATIONAL = "rational"
INTEGER = "integer"
MOD = "mod"

# numpy int64 convolution is exact while (terms)*(m-1)^2 stays below this
_INT64_SAFE = 2**62


class SeriesError(ValueError):
    """Raised on ring/variable mismatches and violated preconditions."""


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Miller-Rabin with the first 13 prime bases, deterministic for n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _iroot(m: int, r: int) -> int:
    """Largest x with x**r <= m."""
    x = int(round(m ** (1.0 / r))) if m < 2**1000 else 1 << (m.bit_length() // r)
    while x**r > m:
        x -= 1
    while (x + 1) ** r <= m:
        x += 1
    return x


def p_valuation(a: int, p: int) -> int | None:
    """Exponent of p in a, or None for a == 0."""
    if a == 0:
        return None
    k = 0
    while a % p == 0:
        a //= p
        k += 1
    return k


@dataclass(frozen=True)
class Modulus:
    p: int
    r: int = 1

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise SeriesError(f"modulus base {self.p!r} is not prime")
        if not isinstance(self.r, int) or self.r < 1:
            raise SeriesError(f"modulus exponent {self.r!r} must be >= 1")

    @property
    def m(self) -> int:
        return self.p**self.r

    @classmethod
    def from_int(cls, m: int) -> "Modulus":
        """Factor a prime power m = p^r."""
        if m < 2:
            raise SeriesError(f"{m} is not a prime power")
        for r in range(m.bit_length(), 0, -1):
            p = _iroot(m, r)
            if p >= 2 and p**r == m and is_prime(p):
                return cls(p, r)
        raise SeriesError(f"{m} is not a prime power")

    def __str__(self):
        return f"{self.m}"


@dataclass(frozen=True)
class CoefficientRing:
    kind: str
    modulus: Modulus | None = None

    def __post_init__(self):
        if self.kind not in (RATIONAL, INTEGER, MOD):
            raise SeriesError(f"unknown ring kind {self.kind!r}")
        if (self.kind == MOD) != (self.modulus is not None):
            raise SeriesError("a modulus is required exactly for the mod ring")

    @classmethod
    def rational(cls):
        return cls(RATIONAL)

    @classmethod
    def integer(cls):
        return cls(INTEGER)

    @classmethod
    def mod(cls, p: int, r: int = 1):
        return cls(MOD, Modulus(p, r))

    @property
    def m(self) -> int | None:
        return self.modulus.m if self.modulus else None

    def convert(self, c):
        """Coerce a Python number into this ring."""
        if self.kind == MOD:
            m = self.modulus.m
            if isinstance(c, Fraction):
                if c.denominator % self.modulus.p == 0:
                    raise SeriesError(f"denominator of {c} is not invertible mod {m}")
                return c.numerator * pow(c.denominator, -1, m) % m
            return int(c) % m
        if self.kind == INTEGER:
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise SeriesError(f"non-integral coefficient {c}")
                return int(c.numerator)
            if isinstance(c, int):
                return c
            raise SeriesError(f"cannot treat {c!r} as an integer")
        if isinstance(c, float):
            raise SeriesError("floats are not exact coefficients")
        return Fraction(c)

    def is_unit(self, c) -> bool:
        if self.kind == RATIONAL:
            return c != 0
        if self.kind == INTEGER:
            return c in (1, -1)
        return c % self.modulus.p != 0

    def inv(self, c):
        if not self.is_unit(c):
            raise SeriesError(f"{c} is not a unit in the {self} ring")
        if self.kind == RATIONAL:
            return 1 / Fraction(c)
        if self.kind == INTEGER:
            return c
        return pow(c, -1, self.modulus.m)

    def __str__(self):
        if self.kind == MOD:
            return f"mod {self.modulus.m}"
        return self.kind


QQ = CoefficientRing.rational()
ZZ = CoefficientRing.integer()


def Zmod(p: int, r: int = 1) -> CoefficientRing:
    return CoefficientRing.mod(p, r)


def _poly_valuation(coeffs: Sequence) -> int | None:
    for i, c in enumerate(coeffs):
        if c != 0:
            return i
    return None


class TruncatedSeries:
    """c_0 + c_1 x + ... + c_N x^N + O(x^(N+1)).

    Instances are immutable; arithmetic returns new series.  Binary operations
    require the same ring and the same variable name.
    """

    __slots__ = ("_coeffs", "_ring", "_var")

    def __init__(self, coeffs: Iterable, precision: int | None = None,
                 ring: CoefficientRing = ZZ, var: str = "x"):
        coeffs = list(coeffs)
        if precision is None:
            precision = len(coeffs) - 1
        if precision < 0:
            raise SeriesError("precision must be >= 0")
        coeffs = coeffs[: precision + 1]
        coeffs.extend([0] * (precision + 1 - len(coeffs)))
        self._ring = ring
        self._var = var
        self._coeffs = tuple(ring.convert(c) for c in coeffs)

    @classmethod
    def _raw(cls, coeffs: tuple, ring: CoefficientRing, var: str) -> "TruncatedSeries":
        s = cls.__new__(cls)
        s._coeffs = coeffs
        s._ring = ring
        s._var = var
        return s

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_terms(cls, terms: dict, precision: int, ring: CoefficientRing = ZZ,
                   var: str = "x") -> "TruncatedSeries":
        """Build from {exponent: coefficient}; exponents above precision are dropped."""
        coeffs = [0] * (precision + 1)
        for e, c in terms.items():
            if e < 0:
                raise SeriesError("negative exponents are not supported")
            if e <= precision:
                coeffs[e] += c
        return cls(coeffs, precision, ring, var)

    @classmethod
    def zero(cls, precision: int, ring: CoefficientRing = ZZ, var: str = "x"):
        return cls._raw((ring.convert(0),) * (precision + 1), ring, var)

    @classmethod
    def one(cls, precision: int, ring: CoefficientRing = ZZ, var: str = "x"):
        return cls.monomial(0, precision, ring, var)

    @classmethod
    def monomial(cls, k: int, precision: int, ring: CoefficientRing = ZZ,
                 var: str = "x", coeff=1):
        return cls.from_terms({k: coeff}, precision, ring, var)

    @classmethod
    def polynomial(cls, coeffs: Sequence, precision: int, ring: CoefficientRing = ZZ,
                   var: str = "x"):
        return cls.from_terms(dict(enumerate(coeffs)), precision, ring, var)

    # -- basic accessors --------------------------------------------------
    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    @property
    def precision(self) -> int:
        return len(self._coeffs) - 1

    @property
    def ring(self) -> CoefficientRing:
        return self._ring

    @property
    def var(self) -> str:
        return self._var

    def __getitem__(self, n):
        if isinstance(n, slice):
            return self._coeffs[n]
        if n < 0:
            raise IndexError(n)
        if n > self.precision:
            raise IndexError(f"x^{n} is beyond precision {self.precision}")
        return self._coeffs[n]

    def __len__(self):
        return len(self._coeffs)

    def valuation(self) -> int | None:
        """Least k with c_k != 0, or None when every stored coefficient vanishes."""
        return _poly_valuation(self._coeffs)

    def support(self) -> list[int]:
        return [i for i, c in enumerate(self._coeffs) if c != 0]

    def terms(self) -> dict:
        return {i: c for i, c in enumerate(self._coeffs) if c != 0}

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self._ring == other._ring and self._var == other._var
                and self._coeffs == other._coeffs)

    def __hash__(self):
        return hash((self._ring, self._var, self._coeffs))

    def __repr__(self):
        shown = [f"{c}*{self._var}^{i}" for i, c in enumerate(self._coeffs) if c != 0][:8]
        body = " + ".join(shown) if shown else "0"
        return f"<{body} + O({self._var}^{self.precision + 1}) over {self._ring}>"

    # -- helpers ----------------------------------------------------------
    def _check(self, other: "TruncatedSeries"):
        if not isinstance(other, TruncatedSeries):
            raise SeriesError(f"expected a series, got {type(other).__name__}")
        if self._ring != other._ring:
            raise SeriesError(f"ring mismatch: {self._ring} vs {other._ring}")
        if self._var != other._var:
            raise SeriesError(f"variable mismatch: {self._var} vs {other._var}")

    def _new(self, coeffs, ring=None, var=None) -> "TruncatedSeries":
        ring = ring or self._ring
        if ring.kind == MOD:
            m = ring.modulus.m
            coeffs = tuple(int(c) % m for c in coeffs)
        else:
            coeffs = tuple(coeffs)
        return TruncatedSeries._raw(coeffs, ring, var or self._var)

    def truncate(self, precision: int) -> "TruncatedSeries":
        if precision > self.precision:
            raise SeriesError(f"cannot raise precision {self.precision} to {precision}")
        return self._new(self._coeffs[: precision + 1])

    def rename(self, var: str) -> "TruncatedSeries":
        return TruncatedSeries._raw(self._coeffs, self._ring, var)

    def with_ring(self, ring: CoefficientRing) -> "TruncatedSeries":
        """Reinterpret coefficients in another ring (Z->Q, Q->Z with integrality check, ...)."""
        return TruncatedSeries(self._coeffs, self.precision, ring, self._var)

    def to_rational(self):
        return self.with_ring(QQ)

    def to_integer(self):
        """Convert to the integer ring; fails loudly on any non-integral coefficient."""
        if self._ring.kind == MOD:
            raise SeriesError("use lift() to leave a residue ring")
        return self.with_ring(ZZ)

    def lift(self) -> "TruncatedSeries":
        """Residues in [0, m) as an integer series."""
        return TruncatedSeries._raw(self._coeffs, ZZ, self._var)

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self + self._scalar_series(other)
        self._check(other)
        n = min(self.precision, other.precision)
        return self._new(a + b for a, b in zip(self._coeffs[: n + 1], other._coeffs))

    __radd__ = __add__

    def __neg__(self):
        return self._new(-c for c in self._coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _scalar_series(self, c):
        return TruncatedSeries.monomial(0, self.precision, self._ring, self._var, c)

    def scale(self, c) -> "TruncatedSeries":
        c = self._ring.convert(c)
        return self._new(c * a for a in self._coeffs)

    def exact_div(self, d: int) -> "TruncatedSeries":
        """Divide every coefficient by the integer d, which must divide it."""
        if self._ring.kind == RATIONAL:
            return self.scale(Fraction(1, d))
        if self._ring.kind == MOD:
            m = self._ring.modulus.m
            if m % d:
                raise SeriesError(f"{d} does not divide the modulus {m}")
            if any(c % d for c in self._coeffs):
                raise SeriesError(f"coefficients are not divisible by {d}")
            ring = CoefficientRing.mod(self._ring.modulus.p, self._ring.modulus.r - _exp_of(d, self._ring.modulus.p))
            return TruncatedSeries._raw(tuple(c // d % ring.m for c in self._coeffs), ring, self._var)
        for c in self._coeffs:
            if c % d:
                raise SeriesError(f"coefficient {c} is not divisible by {d}")
        return self._new(c // d for c in self._coeffs)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check(other)
        n = min(self.precision, other.precision)
        return self._new(_convolve(self._coeffs[: n + 1], other._coeffs[: n + 1], n, self._ring))

    def __rmul__(self, other):
        return self.scale(other)

    def mul_poly(self, poly: Sequence) -> "TruncatedSeries":
        """Multiply by an exact polynomial; precision grows by its valuation.

        If f is known through x^N and P has valuation v, P*f is known through x^(N+v).
        """
        v = _poly_valuation(poly)
        if v is None:
            return TruncatedSeries.zero(self.precision, self._ring, self._var)
        n = self.precision + v
        poly = [self._ring.convert(c) for c in poly[: n + 1]]
        return self._new(_convolve(poly, self._coeffs, n, self._ring))

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by x^k (k >= 0)."""
        if k < 0:
            raise SeriesError("negative shifts would need Laurent series")
        z = self._ring.convert(0)
        return self._new((z,) * k + self._coeffs)

    def __pow__(self, n: int):
        return power(self, n)

    # -- analysis ---------------------------------------------------------
    def first_difference(self, other: "TruncatedSeries") -> int | None:
        """Least index where the two series differ within shared precision."""
        self._check(other)
        for i, (a, b) in enumerate(zip(self._coeffs, other._coeffs)):
            if a != b:
                return i
        return None

    def agrees_with(self, other: "TruncatedSeries", through: int | None = None) -> bool:
        d = self.first_difference(other)
        if through is None:
            return d is None
        if through > min(self.precision, other.precision):
            raise SeriesError(f"cannot compare through {through}: precision is "
                              f"{min(self.precision, other.precision)}")
        return d is None or d > through


def _exp_of(d: int, p: int) -> int:
    k = p_valuation(d, p)
    if p**k != d:
        raise SeriesError(f"{d} is not a power of {p}")
    return k


def _convolve(a: Sequence, b: Sequence, n: int, ring: CoefficientRing) -> list:
    """Cauchy product of a and b truncated to indices 0..n."""
    a = a[: n + 1]
    b = b[: n + 1]
    if not a or not b:
        return [0] * (n + 1)
    if ring.kind == MOD:
        m = ring.modulus.m
        if min(len(a), len(b)) * (m - 1) ** 2 < _INT64_SAFE:
            out = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
            res = [int(c) % m for c in out[: n + 1]]
            res.extend([0] * (n + 1 - len(res)))
            return res
    elif ring.kind == INTEGER:
        ma = max(abs(c) for c in a)
        mb = max(abs(c) for c in b)
        if min(len(a), len(b)) * ma * mb < _INT64_SAFE:
            out = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
            res = [int(c) for c in out[: n + 1]]
            res.extend([0] * (n + 1 - len(res)))
            return res
    # exact fallback: skip zero entries, which is where lacunary inputs win
    out = [0] * (n + 1)
    nz_b = [(j, c) for j, c in enumerate(b) if c != 0]
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        lim = n - i
        for j, cb in nz_b:
            if j > lim:
                break
            out[i + j] += ca * cb
    return out


# ---------------------------------------------------------------------------
# module-level operations

def add(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    return f + g


def mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    return f * g


def inverse(f: TruncatedSeries) -> TruncatedSeries:
    """1/f through the precision of f; the constant term must be a unit."""
    ring = f.ring
    c = f.coeffs
    n = f.precision
    inv0 = ring.inv(c[0])
    g = [inv0]
    nz = [(k, ck) for k, ck in enumerate(c) if k > 0 and ck != 0]
    m = ring.m
    for i in range(1, n + 1):
        acc = 0
        for k, ck in nz:
            if k > i:
                break
            acc += ck * g[i - k]
        v = -acc * inv0
        if m:
            v %= m
        g.append(v)
    return f._new(g)


def compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """f(g(x)) for g with zero constant term.

    Sound precision is min(N_g, val(g)*(N_f+1) - 1): truncating g perturbs the
    result at order N_g+1, truncating f perturbs it at order val(g)*(N_f+1).
    """
    if f.ring != g.ring:
        raise SeriesError(f"ring mismatch: {f.ring} vs {g.ring}")
    v = g.valuation()
    if g.coeffs[0] != 0:
        raise SeriesError("inner series must have zero constant term")
    if v is None:
        return TruncatedSeries.one(g.precision, g.ring, g.var).scale(f.coeffs[0])
    n = min(g.precision, v * (f.precision + 1) - 1)
    inner = g.truncate(n)
    top = min(f.precision, n // v)
    # Horner: c_0 + g*(c_1 + g*(c_2 + ...))
    acc = TruncatedSeries.monomial(0, n, g.ring, g.var, f.coeffs[top])
    for k in range(top - 1, -1, -1):
        acc = acc * inner + f.coeffs[k]
    return acc


def substitute_power(f: TruncatedSeries, k: int) -> TruncatedSeries:
    """f(x^k); precision becomes k*N + (k-1)."""
    if k < 1:
        raise SeriesError("substitution exponent must be >= 1")
    if k == 1:
        return f
    n = k * f.precision + k - 1
    z = f.ring.convert(0)
    out = [z] * (n + 1)
    for i, c in enumerate(f.coeffs):
        out[k * i] = c
    return f._new(out)


def power(f: TruncatedSeries, n: int) -> TruncatedSeries:
    if n < 0:
        return power(inverse(f), -n)
    result = TruncatedSeries.one(f.precision, f.ring, f.var)
    base = f
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def rational_power(f: TruncatedSeries, alpha) -> TruncatedSeries:
    """(1 + u)^alpha by the recurrence from f*g' = alpha*f'*g; needs c_0 = 1."""
    alpha = Fraction(alpha)
    if f.ring.kind != RATIONAL:
        raise SeriesError("rational powers are computed over the rationals")
    c = f.coeffs
    if c[0] != 1:
        raise SeriesError("rational_power needs constant term 1; factor out the unit first")
    g = [Fraction(1)]
    nz = [(k, ck) for k, ck in enumerate(c) if k > 0 and ck != 0]
    for n in range(1, f.precision + 1):
        acc = Fraction(0)
        for k, ck in nz:
            if k > n:
                break
            acc += (alpha * k - (n - k)) * ck * g[n - k]
        g.append(acc / n)
    return f._new(g)


def root(f: TruncatedSeries, d: int) -> TruncatedSeries:
    """d-th root with constant term 1 (integer inputs are rooted over Q and checked)."""
    if d < 2:
        raise SeriesError("root degree must be >= 2")
    if f.ring.kind == MOD:
        raise SeriesError("roots over Z/m are not supported")
    out = rational_power(f.to_rational(), Fraction(1, d))
    return out.to_integer() if f.ring.kind == INTEGER else out


def derivative(f: TruncatedSeries) -> TruncatedSeries:
    if f.precision == 0:
        raise SeriesError("derivative of an O(x) series carries no information")
    return f._new(i * c for i, c in enumerate(f.coeffs) if i > 0)


def reduce_mod(f: TruncatedSeries, modulus: Modulus | int, r: int | None = None) -> TruncatedSeries:
    """Coefficientwise image of an integer/rational series in Z/p^r."""
    if isinstance(modulus, int):
        modulus = Modulus(modulus, r or 1) if r is not None else Modulus.from_int(modulus)
    if f.ring.kind == MOD:
        src = f.ring.modulus
        if src.p != modulus.p or modulus.r > src.r:
            raise SeriesError(f"cannot reduce mod {src.m} series to mod {modulus.m}")
    return TruncatedSeries(f.coeffs, f.precision, CoefficientRing(MOD, modulus), f.var)

"""Frobenius-linear functional equations and algebraic relations over Z/p^r.

A Frobenius relation reads  sum_n p_n(x) f(x^(p^n)) = q(x)  mod p^r.
An algebraic relation reads  sum_{i,j} c_ij x^i f(x)^j = 0  mod p.

Every residual is reported only through the *sound* precision: the largest
order at which each term is determined by the truncated data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .modlinalg import ModMatrix, nullspace
from .series import (MOD, CoefficientRing, Modulus, SeriesError, TruncatedSeries, p_valuation,
                     power, substitute_power)

VERIFIED = "verified"
CONJECTURAL = "conjectural"
SAFETY_FACTOR = 1.25


class RelationError(ValueError):
    pass


@dataclass(frozen=True)
class Residual:
    """Outcome of a truncated verification.

    ``first_nonzero`` is the least order with a nonzero residual coefficient
    (None if the residual vanishes), ``through`` the last order checked.
    """

    first_nonzero: int | None
    through: int

    @property
    def ok(self) -> bool:
        return self.first_nonzero is None

    def __str__(self):
        return "none" if self.ok else f"order {self.first_nonzero}"


def _trim(coeffs, m: int) -> tuple[int, ...]:
    c = [int(x) % m for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _valuation(poly: Sequence[int]) -> int | None:
    return next((i for i, c in enumerate(poly) if c), None)


def _format_poly(poly: Sequence[int]) -> str:
    return " ".join(str(c) for c in poly) if poly else "0"


def _parse_poly(text: str) -> list[int]:
    return [int(t) for t in text.replace(",", " ").split()]


@dataclass(frozen=True)
class FrobeniusRelation:
    modulus: Modulus
    polys: tuple[tuple[int, ...], ...]
    inhomogeneous: tuple[int, ...] = ()
    verified_through: int = -1
    status: str = CONJECTURAL
    trivial: bool = False

    def __post_init__(self):
        m = self.modulus.m
        polys = tuple(_trim(p, m) for p in self.polys)
        if not polys:
            raise RelationError("a relation needs at least p_0")
        object.__setattr__(self, "polys", polys)
        object.__setattr__(self, "inhomogeneous", _trim(self.inhomogeneous, m))
        if self.status not in (VERIFIED, CONJECTURAL):
            raise RelationError(f"unknown status {self.status!r}")

    @property
    def h(self) -> int:
        return len(self.polys) - 1

    @property
    def is_zero(self) -> bool:
        return not any(self.polys)

    def key(self) -> tuple[int, int, int]:
        """(h, total degree, nonzero terms) with h the highest iterate actually used."""
        used = [i for i, p in enumerate(self.polys) if p]
        h = max(used, default=0)
        degs = [len(p) - 1 for p in self.polys if p]
        if self.inhomogeneous:
            degs.append(len(self.inhomogeneous) - 1)
        terms = sum(1 for p in (*self.polys, self.inhomogeneous) for c in p if c)
        return (h, max(degs, default=0), terms)

    def dumps(self) -> str:
        lines = [f"frobenius-relation mod={self.modulus.m} h={self.h}"]
        lines += [f"p{i}: {_format_poly(p)}" for i, p in enumerate(self.polys)]
        lines.append(f"q: {_format_poly(self.inhomogeneous)}")
        lines.append(f"status: {self.status} through={self.verified_through}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class AlgebraicRelation:
    """P(x, y) as ``grid[j][i]`` = coefficient of x^i y^j, over Z/p."""

    prime: int
    grid: tuple[tuple[int, ...], ...]
    verified_through: int = -1
    status: str = CONJECTURAL

    def __post_init__(self):
        grid = tuple(_trim(row, self.prime) for row in self.grid)
        while grid and not grid[-1]:
            grid = grid[:-1]
        if not grid:
            raise RelationError("P(x, y) must not be identically zero")
        object.__setattr__(self, "grid", grid)

    @property
    def dy(self) -> int:
        return len(self.grid) - 1

    @property
    def dx(self) -> int:
        return max(len(row) for row in self.grid) - 1

    def terms(self) -> dict[tuple[int, int], int]:
        return {(i, j): c for j, row in enumerate(self.grid) for i, c in enumerate(row) if c}

    def key(self) -> tuple[int, int, int]:
        t = self.terms()
        return (self.dy, max(i + j for i, j in t), len(t))

    def dumps(self) -> str:
        lines = [f"algebraic-relation p={self.prime} dx={self.dx} dy={self.dy}"]
        lines += [f"y{j}: {_format_poly(row)}" for j, row in enumerate(self.grid)]
        lines.append(f"status: {self.status} through={self.verified_through}")
        return "\n".join(lines) + "\n"

    def __str__(self):
        parts = []
        for (i, j), c in sorted(self.terms().items(), key=lambda t: (-t[0][1], -t[0][0])):
            mono = "*".join(s for s in (f"x^{i}" if i > 1 else "x" if i else "",
                                        f"y^{j}" if j > 1 else "y" if j else "") if s) or "1"
            parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts)


def _parse_header(line: str, kind: str) -> dict[str, int]:
    head, *fields = line.split()
    if head != kind:
        raise RelationError(f"expected {kind!r}, got {head!r}")
    out = {}
    for f in fields:
        k, _, v = f.partition("=")
        out[k] = int(v)
    return out


def _parse_status(line: str) -> tuple[str, int]:
    if not line.startswith("status:"):
        raise RelationError(f"expected status line, got {line!r}")
    parts = line[len("status:"):].split()
    status = parts[0]
    through = int(parts[1].partition("=")[2]) if len(parts) > 1 else -1
    return status, through


def loads_relation(text: str) -> FrobeniusRelation | AlgebraicRelation:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise RelationError("empty relation text")
    try:
        if lines[0].startswith("frobenius-relation"):
            hdr = _parse_header(lines[0], "frobenius-relation")
            modulus = Modulus.from_int(hdr["mod"])
            polys, q = [], []
            for ln in lines[1:-1]:
                tag, _, body = ln.partition(":")
                if tag == "q":
                    q = _parse_poly(body)
                elif tag == f"p{len(polys)}":
                    polys.append(_parse_poly(body))
                else:
                    raise RelationError(f"unexpected line {ln!r}")
            if len(polys) != hdr["h"] + 1:
                raise RelationError(f"header says h={hdr['h']} but {len(polys)} polynomials follow")
            status, through = _parse_status(lines[-1])
            return FrobeniusRelation(modulus, tuple(polys), tuple(q), through, status)
        if lines[0].startswith("algebraic-relation"):
            hdr = _parse_header(lines[0], "algebraic-relation")
            rows = []
            for ln in lines[1:-1]:
                tag, _, body = ln.partition(":")
                if tag != f"y{len(rows)}":
                    raise RelationError(f"unexpected line {ln!r}")
                rows.append(_parse_poly(body))
            status, through = _parse_status(lines[-1])
            return AlgebraicRelation(hdr["p"], tuple(rows), through, status)
    except (KeyError, ValueError, SeriesError) as exc:
        if isinstance(exc, RelationError):
            raise
        raise RelationError(f"malformed relation: {exc}") from None
    raise RelationError(f"unknown relation header {lines[0]!r}")


# -- verification -----------------------------------------------------------

def _require_mod(f: TruncatedSeries) -> Modulus:
    if f.ring.kind != MOD:
        raise RelationError("series must have coefficients in Z/p^r")
    return f.ring.modulus


def _padded(f: TruncatedSeries, n: int) -> TruncatedSeries:
    """f read as an exact polynomial, carried to precision n."""
    if n <= f.precision:
        return f.truncate(n)
    return TruncatedSeries(f.coeffs, n, f.ring, f.var)


def _first_nonzero(s: TruncatedSeries, through: int) -> int | None:
    return next((i for i, c in enumerate(s.coeffs[: through + 1]) if c), None)


def frobenius_terms_precision(rel: FrobeniusRelation, n_f: int) -> int:
    """Sound precision of sum_n p_n(x) f(x^(p^n)) for f known through x^n_f."""
    p = rel.modulus.p
    bounds = []
    for n, poly in enumerate(rel.polys):
        v = _valuation(poly)
        if v is not None:
            bounds.append(p**n * (n_f + 1) - 1 + v)
    return min(bounds, default=n_f)


def frobenius_residual(rel: FrobeniusRelation, f: TruncatedSeries) -> tuple[TruncatedSeries, int]:
    """The series sum_n p_n f(x^(p^n)) - q and its sound precision."""
    mod = _require_mod(f)
    if mod != rel.modulus:
        raise RelationError(f"modulus mismatch: series mod {mod.m}, relation mod {rel.modulus.m}")
    through = frobenius_terms_precision(rel, f.precision)
    total = TruncatedSeries.from_terms({}, through, f.ring, f.var)
    for n, poly in enumerate(rel.polys):
        if not poly:
            continue
        g = substitute_power(f, rel.modulus.p**n) if n else f
        total = total + g.mul_poly(poly).truncate(through)
    q = TruncatedSeries.from_terms(dict(enumerate(rel.inhomogeneous)), through, f.ring, f.var)
    return total - q, through


def verify_frobenius(rel: FrobeniusRelation, f: TruncatedSeries) -> Residual:
    res, through = frobenius_residual(rel, f)
    return Residual(_first_nonzero(res, through), through)


def algebraic_terms_precision(rel: AlgebraicRelation, f: TruncatedSeries) -> int:
    v = f.valuation()
    v = f.precision + 1 if v is None else v
    bounds = [f.precision + (j - 1) * v + i for (i, j) in rel.terms() if j >= 1]
    return min(bounds, default=f.precision)


def verify_algebraic(rel: AlgebraicRelation, f: TruncatedSeries) -> Residual:
    mod = _require_mod(f)
    if mod.r != 1 or mod.p != rel.prime:
        raise RelationError(f"prime mismatch: series mod {mod.m}, relation mod {rel.prime}")
    through = algebraic_terms_precision(rel, f)
    base = _padded(f, through)
    total = TruncatedSeries.from_terms({}, through, f.ring, f.var)
    for j, row in enumerate(rel.grid):
        if not row:
            continue
        fj = power(base, j)
        total = total + fj.mul_poly(row).truncate(through)
    return Residual(_first_nonzero(total, through), through)


def frobenius_property_check(f: TruncatedSeries) -> bool:
    """f(x)^p == f(x^p) through the sound precision of both sides."""
    mod = _require_mod(f)
    if mod.r != 1:
        raise RelationError("the Frobenius property is a statement mod a prime")
    p = mod.p
    v = f.valuation()
    v = f.precision + 1 if v is None else v
    through = min(f.precision + (p - 1) * v, p * (f.precision + 1) - 1)
    lhs = power(_padded(f, through), p)
    rhs = substitute_power(f, p).truncate(through)
    return lhs.first_difference(rhs) is None


# -- discovery --------------------------------------------------------------

def _normalize(vec: list[int], modulus: Modulus) -> list[int]:
    """Scale so the first nonzero entry is p^k (unit part 1)."""
    m, p = modulus.m, modulus.p
    for c in vec:
        if c % m:
            k = p_valuation(c % m, p)
            unit = (c % m) // p**k
            inv = pow(unit, -1, m)
            return [(x * inv) % m for x in vec]
    return vec


def _status(rows: int, unknowns: int, ok: bool) -> str:
    return VERIFIED if ok and rows >= SAFETY_FACTOR * unknowns else CONJECTURAL


@dataclass
class FrobeniusSearch:
    """Solver output: relations (best first) plus discarded p-torsion solutions."""

    relations: list[FrobeniusRelation]
    torsion: list[FrobeniusRelation] = field(default_factory=list)
    rows: int = 0
    unknowns: int = 0
    # kernel vectors of the truncated system that fail once every known
    # coefficient of f is used (the residual check reaches past row N)
    refuted: list[FrobeniusRelation] = field(default_factory=list)

    def __iter__(self):
        return iter(self.relations)

    def __len__(self):
        return len(self.relations)

    def __getitem__(self, i):
        return self.relations[i]


def solve_frobenius(f: TruncatedSeries, h: int, dpoly: int, dinhom: int) -> FrobeniusSearch:
    """Search for sum_{n<=h} p_n(x) f(x^(p^n)) = q(x) with deg p_n <= dpoly, deg q <= dinhom."""
    mod = _require_mod(f)
    if min(h, dpoly) < 0:
        raise RelationError("h and dpoly must be >= 0")
    p, m = mod.p, mod.m
    n_rows = f.precision + 1
    unknowns = (h + 1) * (dpoly + 1) + max(dinhom + 1, 0)
    if n_rows < 1:
        raise RelationError("no equation rows available")
    if not any(f.coeffs):
        rel = FrobeniusRelation(mod, ((1,),), (), f.precision, VERIFIED, trivial=True)
        return FrobeniusSearch([rel], [], n_rows, unknowns)

    # columns ordered from most to least expensive so the bottom echelon rows,
    # which become the first kernel generators, use the cheapest terms
    cols: list[tuple[str, int, int]] = []
    for i in range(h, -1, -1):
        for j in range(dpoly, -1, -1):
            cols.append(("p", i, j))
    for j in range(dinhom, -1, -1):
        cols.append(("q", 0, j))
    N = f.precision
    streams = []
    for kind, i, j in cols:
        if kind == "p":
            g = substitute_power(f, p**i) if i else f
            c = (0,) * j + tuple(g.coeffs[: N + 1 - j]) if j <= N else (0,) * (N + 1)
            streams.append(c[: N + 1])
        else:
            # q moves to the left-hand side with a minus sign
            c = [0] * (N + 1)
            if j <= N:
                c[j] = m - 1
            streams.append(tuple(c))
    A = ModMatrix.from_rows(mod, [list(r) for r in zip(*streams)], len(cols))
    kernel = nullspace(A)

    found: dict[tuple, FrobeniusRelation] = {}
    torsion: dict[tuple, FrobeniusRelation] = {}
    for vec in kernel:
        polys = [[0] * (dpoly + 1) for _ in range(h + 1)]
        q = [0] * (dinhom + 1) if dinhom >= 0 else []
        for (kind, i, j), c in zip(cols, vec):
            if kind == "p":
                polys[i][j] = c
            else:
                q[j] = c
        flat = _normalize([c for poly in polys for c in poly] + q, mod)
        polys = [flat[k * (dpoly + 1):(k + 1) * (dpoly + 1)] for k in range(h + 1)]
        q = flat[(h + 1) * (dpoly + 1):]
        rel = FrobeniusRelation(mod, tuple(map(tuple, polys)), tuple(q))
        target = torsion if all(c % p == 0 for poly in polys for c in poly) else found
        target.setdefault((rel.polys, rel.inhomogeneous), rel)

    def finish(rel: FrobeniusRelation) -> tuple[FrobeniusRelation, bool]:
        r = verify_frobenius(rel, f)
        return FrobeniusRelation(mod, rel.polys, rel.inhomogeneous, r.through,
                                 _status(n_rows, unknowns, r.ok)), r.ok

    def order(rels):
        return sorted(rels, key=lambda r: (r.key(), r.polys, r.inhomogeneous))

    checked = [finish(r) for r in found.values()]
    rels = order(r for r, ok in checked if ok)
    refuted = order(r for r, ok in checked if not ok)
    return FrobeniusSearch(rels, order(torsion.values()), n_rows, unknowns, refuted)


def find_algebraic(f: TruncatedSeries, dx: int, dy: int) -> list[AlgebraicRelation]:
    """Nullspace of the streams x^i f^j (i <= dx, j <= dy) over Z/p, best relations first."""
    mod = _require_mod(f)
    if mod.r != 1:
        raise RelationError("algebraic relations are searched mod a prime")
    if dx < 0 or dy < 1:
        raise RelationError("need dx >= 0 and dy >= 1")
    p = mod.p
    N = f.precision
    n_rows = N + 1
    unknowns = (dx + 1) * (dy + 1)
    cols = [(i, j) for j in range(dy, -1, -1) for i in range(dx, -1, -1)]
    powers = [TruncatedSeries.one(N, f.ring, f.var)]
    for _ in range(dy):
        powers.append(powers[-1] * f)
    streams = []
    for i, j in cols:
        c = powers[j].coeffs
        streams.append(((0,) * i + tuple(c))[: N + 1])
    A = ModMatrix.from_rows(mod, [list(r) for r in zip(*streams)], len(cols))
    out: dict[tuple, AlgebraicRelation] = {}
    for vec in nullspace(A):
        grid = [[0] * (dx + 1) for _ in range(dy + 1)]
        for (i, j), c in zip(cols, vec):
            grid[j][i] = c
        flat = _normalize([c for row in grid for c in row], mod)
        grid = [flat[j * (dx + 1):(j + 1) * (dx + 1)] for j in range(dy + 1)]
        rel = AlgebraicRelation(p, tuple(map(tuple, grid)))
        out.setdefault(rel.grid, rel)
    results = []
    for rel in out.values():
        r = verify_algebraic(rel, f)
        # relations refuted by coefficients past the truncated system are dropped
        if r.ok:
            results.append(AlgebraicRelation(p, rel.grid, r.through, _status(n_rows, unknowns, True)))
    return sorted(results, key=lambda r: (r.key(), r.grid))


def frobenius_from_algebraic(rel: AlgebraicRelation) -> FrobeniusRelation | None:
    """sum_k a_k(x) y^(p^k) as a Frobenius relation; None if P has other y-powers."""
    p = rel.prime
    polys: dict[int, tuple[int, ...]] = {}
    q: tuple[int, ...] = ()
    for j, row in enumerate(rel.grid):
        if not row:
            continue
        if j == 0:
            q = tuple((-c) % p for c in row)
            continue
        k = p_valuation(j, p)
        if p**k != j:
            return None
        polys[k] = row
    h = max(polys, default=0)
    return FrobeniusRelation(Modulus(p, 1), tuple(polys.get(k, ()) for k in range(h + 1)), q)


def same_up_to_torsion(a: FrobeniusRelation, b: FrobeniusRelation, f: TruncatedSeries) -> bool:
    """True iff both relations hold for f and a - c*b is p-torsion for some unit c.

    Two relations for the same f differ by a relation; it is torsion exactly
    when all its p_n vanish mod p, so comparing the p_n mod p up to a unit
    decides equivalence.
    """
    if a.modulus != b.modulus or not (verify_frobenius(a, f).ok and verify_frobenius(b, f).ok):
        return False
    p, h = a.modulus.p, max(a.h, b.h)

    def flat(rel):
        deg = max((len(q) for q in (*a.polys, *b.polys)), default=0)
        polys = list(rel.polys) + [()] * (h - rel.h)
        return [c % p for q in polys for c in (tuple(q) + (0,) * (deg - len(q)))]

    va, vb = flat(a), flat(b)
    return any(all((x - c * y) % p == 0 for x, y in zip(va, vb)) for c in range(1, p))


def ring_of(modulus: Modulus) -> CoefficientRing:
    return CoefficientRing(MOD, modulus)

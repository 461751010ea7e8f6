"""Series fixture files and the registry of printed coefficient tables.

File layout (UTF-8, line oriented)::

    pslab-series 1
    name chiH3_w_over8
    variable w
    ring integer            # or: rational | mod <m> <p> <r>
    precision 28
    provenance <free text>
    9 1
    11 36
    ...

Body lines are ``<exponent> <coefficient>`` with strictly increasing
exponents; missing exponents are zero.  Rationals are written ``num/den``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

from ..series import QQ, ZZ, CoefficientRing, Modulus, SeriesError, TruncatedSeries

MAGIC = "pslab-series 1"
_HEADER_KEYS = ("name", "variable", "ring", "precision", "provenance")


class FixtureFormatError(ValueError):
    def __init__(self, msg: str, line: int | None = None, path=None):
        where = f"{path or '<fixture>'}:{line}: " if line else ""
        super().__init__(where + msg)
        self.line = line


@dataclass(frozen=True)
class SeriesFixture:
    name: str
    series: TruncatedSeries
    provenance: str

    def __post_init__(self):
        if not self.provenance.strip():
            raise ValueError("fixture provenance must be nonempty")

    @property
    def variable(self):
        return self.series.var

    @property
    def ring(self):
        return self.series.ring

    @property
    def precision(self):
        return self.series.precision

    @property
    def coefficients(self):
        return self.series.coeffs


def format_ring(ring: CoefficientRing) -> str:
    if ring.modulus:
        return f"mod {ring.modulus.m} {ring.modulus.p} {ring.modulus.r}"
    return ring.kind


def parse_ring(text: str) -> CoefficientRing:
    parts = text.split()
    if parts == ["integer"]:
        return ZZ
    if parts == ["rational"]:
        return QQ
    if len(parts) == 4 and parts[0] == "mod":
        m, p, r = (int(x) for x in parts[1:])
        mod = Modulus(p, r)
        if mod.m != m:
            raise SeriesError(f"modulus {m} is not {p}^{r}")
        return CoefficientRing("mod", mod)
    raise SeriesError(f"unrecognised ring {text!r}")


def _parse_coeff(tok: str):
    if "/" in tok:
        return Fraction(tok)
    return int(tok)


def dumps_fixture(fx: SeriesFixture) -> str:
    s = fx.series
    lines = [MAGIC, f"name {fx.name}", f"variable {s.var}", f"ring {format_ring(s.ring)}",
             f"precision {s.precision}", f"provenance {fx.provenance}"]
    for e, c in s.terms().items():
        lines.append(f"{e} {c}")
    return "\n".join(lines) + "\n"


def loads_fixture(text: str, path=None) -> SeriesFixture:
    header: dict[str, str] = {}
    body: list[tuple[int, str, int]] = []
    seen_magic = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not seen_magic:
            if line != MAGIC:
                raise FixtureFormatError(f"expected {MAGIC!r}", lineno, path)
            seen_magic = True
            continue
        key, _, rest = line.partition(" ")
        if key in _HEADER_KEYS:
            if body:
                raise FixtureFormatError(f"header {key!r} after coefficient lines", lineno, path)
            if key in header:
                raise FixtureFormatError(f"duplicate header {key!r}", lineno, path)
            header[key] = rest.strip()
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FixtureFormatError(f"cannot parse {line!r}", lineno, path)
        try:
            exp = int(parts[0])
        except ValueError:
            raise FixtureFormatError(f"bad exponent {parts[0]!r}", lineno, path) from None
        body.append((exp, parts[1], lineno))
    if not seen_magic:
        raise FixtureFormatError("empty fixture", None, path)
    missing = [k for k in _HEADER_KEYS if k not in header]
    if missing:
        raise FixtureFormatError(f"missing header(s): {', '.join(missing)}", None, path)
    try:
        ring = parse_ring(header["ring"])
        precision = int(header["precision"])
    except (SeriesError, ValueError) as exc:
        raise FixtureFormatError(str(exc), None, path) from None
    terms = {}
    last = -1
    for exp, tok, lineno in body:
        if exp <= last:
            raise FixtureFormatError("exponents must be strictly increasing", lineno, path)
        if exp > precision:
            raise FixtureFormatError(f"exponent {exp} exceeds precision {precision}", lineno, path)
        try:
            c = _parse_coeff(tok)
        except (ValueError, ZeroDivisionError):
            raise FixtureFormatError(f"bad coefficient {tok!r}", lineno, path) from None
        if ring.modulus and not (0 <= c < ring.modulus.m):
            raise FixtureFormatError(f"residue {c} outside [0, {ring.modulus.m})", lineno, path)
        terms[exp] = c
        last = exp
    try:
        series = TruncatedSeries.from_terms(terms, precision, ring, header["variable"])
    except SeriesError as exc:
        raise FixtureFormatError(str(exc), None, path) from None
    return SeriesFixture(header["name"], series, header["provenance"])


def load_fixture(path) -> SeriesFixture:
    path = Path(path)
    return loads_fixture(path.read_text(encoding="utf-8"), path)


def save_fixture(fx: SeriesFixture, path) -> None:
    Path(path).write_text(dumps_fixture(fx), encoding="utf-8")


def _data_dir():
    return resources.files("pslab.genlib") / "data"


@lru_cache(maxsize=None)
def fixture_names() -> tuple[str, ...]:
    return tuple(sorted(p.name[:-7] for p in _data_dir().iterdir() if p.name.endswith(".series")))


@lru_cache(maxsize=None)
def get_fixture(name: str) -> SeriesFixture:
    """Bundled fixture by name; raises KeyError if absent."""
    res = _data_dir() / f"{name}.series"
    if not res.is_file():
        raise KeyError(f"no fixture named {name!r}")
    return loads_fixture(res.read_text(encoding="utf-8"), f"{name}.series")


def fixture_series(name: str) -> TruncatedSeries:
    return get_fixture(name).series

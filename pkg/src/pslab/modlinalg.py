"""Dense linear algebra over Z/p^r.

Z/p^r is a local ring: every nonzero entry is a unit times p^k.  Row
reduction therefore pivots on the entry of least p-adic valuation, and the
Howell closure adds p^(r-k) * (pivot row) whenever the pivot is p^k with
k > 0.  With r = 1 this is plain Gaussian elimination over F_p.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .series import Modulus, p_valuation


@dataclass(frozen=True, eq=False)
class ModMatrix:
    modulus: Modulus
    entries: np.ndarray

    def __post_init__(self):
        m = self.modulus.m
        a = np.array(self.entries, dtype=_dtype(m))
        if a.ndim == 1 and a.size == 0:
            a = a.reshape(0, 0)
        if a.ndim != 2:
            raise ValueError("ModMatrix entries must be two-dimensional")
        a = a % m
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @classmethod
    def from_rows(cls, modulus: Modulus, rows, cols: int | None = None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if not rows:
            return cls(modulus, np.zeros((0, cols), dtype=_dtype(modulus.m)))
        return cls(modulus, np.array(rows, dtype=_dtype(modulus.m)))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def tolist(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.entries]

    def __matmul__(self, other: "ModMatrix") -> "ModMatrix":
        if self.modulus != other.modulus:
            raise ValueError("modulus mismatch")
        a = self.entries.astype(object)
        b = other.entries.astype(object)
        return ModMatrix(self.modulus, (a @ b) % self.modulus.m) if a.size and b.size else \
            ModMatrix(self.modulus, np.zeros((self.rows, other.cols), dtype=_dtype(self.modulus.m)))

    def apply(self, v) -> list[int]:
        """A @ v mod m for a residue vector v."""
        vv = np.array([int(x) for x in v], dtype=object)
        if self.cols == 0:
            return [0] * self.rows
        return [int(x) % self.modulus.m for x in self.entries.astype(object) @ vv]

    def __eq__(self, other):
        return (isinstance(other, ModMatrix) and self.modulus == other.modulus
                and self.entries.shape == other.entries.shape
                and bool(np.all(self.entries == other.entries)))

    def __repr__(self):
        return f"ModMatrix(mod {self.modulus.m}, {self.tolist()})"


def _dtype(m: int):
    # products of two residues must fit in int64
    return np.int64 if m < 2**31 else object


def _reduce_rows(work: np.ndarray, modulus: Modulus, ncols: int):
    """Howell-style echelon form of work[:, :ncols], carrying the remaining columns along.

    Returns (echelon rows, pivot columns).  Pivot entries are powers of p and
    entries above each pivot are reduced into [0, pivot).
    """
    p, r, m = modulus.p, modulus.r, modulus.m
    pending = [row.copy() for row in work if np.any(row)]
    done: list[np.ndarray] = []
    pivots: list[int] = []
    for col in range(ncols):
        if not pending:
            break
        best, best_val = None, None
        for idx, row in enumerate(pending):
            v = p_valuation(int(row[col]), p)
            if v is not None and (best_val is None or v < best_val):
                best, best_val = idx, v
                if v == 0:
                    break
        if best is None:
            continue
        prow = pending.pop(best)
        unit = int(prow[col]) // p**best_val
        prow = (prow * pow(unit, -1, m)) % m
        pk = p**best_val
        rest = []
        for row in pending:
            e = int(row[col])
            if e:
                row = (row - (e // pk) * prow) % m
            if np.any(row):
                rest.append(row)
        pending = rest
        if best_val > 0:
            closure = (prow * p ** (r - best_val)) % m
            if np.any(closure):
                pending.append(closure)
        done.append(prow)
        pivots.append(col)
    # clear above pivots
    for i, (row, col) in enumerate(zip(done, pivots)):
        pk = int(row[col])
        for j in range(i):
            e = int(done[j][col])
            q = e // pk
            if q:
                done[j] = (done[j] - q * row) % m
    return done, pivots


def howell_form(A: ModMatrix) -> tuple[ModMatrix, ModMatrix]:
    """Howell normal form H of A and a transform T with T @ A == H."""
    n = A.rows
    m = A.modulus.m
    dt = _dtype(m)
    aug = np.concatenate([A.entries.astype(dt), np.eye(n, dtype=dt)], axis=1) if n else \
        np.zeros((0, A.cols), dtype=dt)
    done, _ = _reduce_rows(aug, A.modulus, A.cols)
    done = [row for row in done if np.any(row[: A.cols])]
    H = ModMatrix.from_rows(A.modulus, [row[: A.cols] for row in done], A.cols)
    T = ModMatrix.from_rows(A.modulus, [row[A.cols:] for row in done], n)
    return H, T


def nullspace(A: ModMatrix) -> list[tuple[int, ...]]:
    """Generators of {v : A v = 0 mod m}; empty iff the kernel is zero.

    Row-reduces [A^T | I]; Howell closure guarantees the rows whose A^T part
    vanishes generate the whole kernel, p-torsion included.
    """
    n = A.cols
    m = A.modulus.m
    dt = _dtype(m)
    if n == 0:
        return []
    aug = np.concatenate([A.entries.T.astype(dt), np.eye(n, dtype=dt)], axis=1)
    # the identity block must be reduced too, so the echelon covers every column
    done, _ = _reduce_rows(aug, A.modulus, A.rows + n)
    kernel = [tuple(int(x) for x in row[A.rows:]) for row in done if not np.any(row[: A.rows])]
    return kernel


def rank(A: ModMatrix) -> int:
    """Number of pivots (over F_p this is the usual rank)."""
    done, _ = _reduce_rows(A.entries.astype(_dtype(A.modulus.m)), A.modulus, A.cols)
    return len(done)


def in_row_span(H: ModMatrix, v) -> bool:
    """Membership test for v in the row span of a Howell form H."""
    m = H.modulus.m
    w = [int(x) % m for x in v]
    for row in H.tolist():
        col = next((j for j, e in enumerate(row) if e), None)
        if col is None:
            continue
        e = w[col]
        if e == 0:
            continue
        pk = row[col]
        if e % pk:
            return False
        q = e // pk
        w = [(a - q * b) % m for a, b in zip(w, row)]
    return not any(w)

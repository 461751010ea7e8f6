"""p-DFAO construction by closing a sequence under the decimations n -> p*n + r.

Digits are read least-significant first: after consuming the low digits
d_0 .. d_{k-1} of n, the automaton sits in the state whose stream is
s(m) = a(p^k m + r) with r = d_0 + d_1 p + ... .  When the digits run out the
output is s(0).

States are identified by comparing a finite window of their streams, so the
result is always a conjecture about the infinite sequence.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .series import MOD, TruncatedSeries

DEFAULT_WINDOW = 32
DEFAULT_MAX_STATES = 256


class AutomatonError(ValueError):
    pass


@dataclass(frozen=True)
class Dfao:
    p: int
    transitions: tuple[tuple[int, ...], ...]
    outputs: tuple[int, ...]
    window: int
    depth: int
    initial: int = 0
    status: str = "conjectural"
    # (k, r) of the decimation that first produced each state
    origins: tuple[tuple[int, int], ...] = field(default=(), compare=False)

    def __post_init__(self):
        n = len(self.outputs)
        if not 0 <= self.initial < n:
            raise AutomatonError("initial state out of range")
        for row in self.transitions:
            if len(row) != self.p or any(not 0 <= t < n for t in row):
                raise AutomatonError("transition table is not total")
        if len(self.transitions) != n:
            raise AutomatonError("one transition row per state required")
        if any(not 0 <= o < self.p for o in self.outputs):
            raise AutomatonError("outputs must be residues mod p")

    @property
    def num_states(self) -> int:
        return len(self.outputs)

    def evaluate(self, n: int) -> int:
        return dfao_evaluate(self, n)

    def dumps(self) -> str:
        head = [f"dfao p={self.p} states={self.num_states} window={self.window}",
                f"depth={self.depth} initial={self.initial} status={self.status}",
                "state output " + " ".join(f"d{d}" for d in range(self.p))]
        rows = [f"{i} {o} " + " ".join(map(str, t))
                for i, (o, t) in enumerate(zip(self.outputs, self.transitions))]
        return "\n".join(head + rows) + "\n"


def loads_dfao(text: str) -> Dfao:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    try:
        hdr = dict(f.split("=") for f in lines[0][1:])
        meta = dict(f.split("=") for f in lines[1])
        p, k = int(hdr["p"]), int(hdr["states"])
        rows = lines[3:3 + k]
        if lines[0][0] != "dfao" or len(rows) != k:
            raise AutomatonError("truncated automaton dump")
        outputs = tuple(int(r[1]) for r in rows)
        trans = tuple(tuple(int(x) for x in r[2:]) for r in rows)
        return Dfao(p, trans, outputs, int(hdr["window"]), int(meta["depth"]),
                    int(meta["initial"]), meta["status"])
    except (IndexError, KeyError, ValueError) as exc:
        if isinstance(exc, AutomatonError):
            raise
        raise AutomatonError(f"malformed automaton dump: {exc}") from None


def _closure(a, p, N, W, max_depth, max_states):
    """BFS over decimations; returns None if some candidate lies deeper than max_depth."""
    def window(k, r):
        return tuple(a[p**k * i + r] for i in range(W))

    seen = {window(0, 0): 0}
    origins = [(0, 0)]
    trans: list[list[int]] = []
    queue = deque([0])
    while queue:
        sid = queue.popleft()
        k, r = origins[sid]
        if k + 1 > max_depth:
            return None
        row = []
        for d in range(p):
            child = (k + 1, r + d * p**k)
            w = window(*child)
            if w not in seen:
                if len(origins) >= max_states:
                    raise AutomatonError(f"more than {max_states} states; "
                                         "the sequence may not be automatic at this window")
                seen[w] = len(origins)
                origins.append(child)
                queue.append(seen[w])
            row.append(seen[w])
        trans.append(row)
    outputs = [a[r] for (_, r) in origins]
    return trans, outputs, origins


def p_kernel_closure(f: TruncatedSeries, max_states: int = DEFAULT_MAX_STATES,
                     min_window: int = DEFAULT_WINDOW) -> Dfao:
    """Automaton whose states are the distinct p-decimations of f's coefficients."""
    if f.ring.kind != MOD or f.ring.modulus.r != 1:
        raise AutomatonError("p-kernel closure needs coefficients in Z/p")
    p = f.ring.modulus.p
    a = [int(c) for c in f.coeffs]
    N = f.precision
    depth = 1
    while True:
        W = (N + 1) // p**depth
        if W < min_window:
            raise AutomatonError(f"window underflow: depth {depth} leaves {W} < {min_window} "
                                 f"coefficients; supply a longer series")
        got = _closure(a, p, N, W, depth, max_states)
        if got is not None:
            trans, outputs, origins = got
            return Dfao(p, tuple(map(tuple, trans)), tuple(outputs), W, depth, 0,
                        "conjectural", tuple(origins))
        depth += 1


def dfao_evaluate(a: Dfao, n: int) -> int:
    if n < 0:
        raise AutomatonError("n must be nonnegative")
    s = a.initial
    while n:
        n, d = divmod(n, a.p)
        s = a.transitions[s][d]
    return a.outputs[s]


def export_dot(a: Dfao, name: str = "dfao") -> str:
    """Graphviz digraph; one edge per (state, digit), listed in state then digit order."""
    lines = [f"digraph {name} {{"]
    lines += [f'  q{i} [label="q{i}/{o}"{", shape=doublecircle" if i == a.initial else ""}];'
              for i, o in enumerate(a.outputs)]
    lines += [f'  q{i} -> q{t} [label="{d}"];'
              for i, row in enumerate(a.transitions) for d, t in enumerate(row)]
    lines.append("}")
    return "\n".join(lines) + "\n"

"""Face state sums of adequate diagrams, evaluated in Z[zeta_5].

A state colours every face white (0) or black (1) so that no two black
faces share an edge.  At a crossing the colours of ``F0..F3`` form a 4-bit
code, read with F0 as the most significant bit; the crossing contributes
``x_code`` when negative and ``X_code`` when positive.  Each face contributes
``f0`` (white) or ``f1`` (black).

Two exact evaluators are provided.  ``enumerate`` walks the states one by
one (optionally split across processes).  ``sweep`` processes crossings one
at a time and keeps partial sums keyed by the colours of the faces still
open, which handles diagrams far beyond brute-force reach.  Both give the
same element of Z[zeta_5].
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterator, Sequence

from .cyclotomic import ONE, ZERO, CycloInt, zeta_pow
from .diagram import Diagram, FaceSet, faces

LEGAL_CODES = (0, 1, 2, 4, 5, 8, 10)
BIT_ORDERS = ("msb", "lsb")


class InvariantViolation(RuntimeError):
    """An internal consistency check failed (signals a face/corner bug)."""


def _z(k: int, sign: int = 1) -> CycloInt:
    return zeta_pow(sign, k, 1)


@dataclass(frozen=True)
class VariableTable:
    """Values of the sixteen model variables at ``s = zeta, S = zeta^4``."""

    values: dict = field(default_factory=dict)

    @classmethod
    def default(cls) -> "VariableTable":
        gold = _z(1) + _z(4)
        return cls({
            "f0": ONE, "f1": gold,
            "x0": gold, "X0": gold,
            "x1": _z(4), "X1": _z(1),
            "x2": _z(1), "X2": _z(4),
            "x4": _z(4), "X4": _z(1),
            "x5": _z(3, -1), "X5": _z(2, -1),
            "x8": _z(1), "X8": _z(4),
            "x10": _z(2, -1), "X10": _z(3, -1),
        })

    def __getitem__(self, name: str) -> CycloInt:
        return self.values[name]

    def crossing(self, sign: int, code: int) -> CycloInt:
        return self.values[("X" if sign > 0 else "x") + str(code)]

    def face(self, bit: int) -> CycloInt:
        return self.values["f1" if bit else "f0"]

    def swapped(self, a: str, b: str) -> "VariableTable":
        """Copy with two entries exchanged (used for mutation tests)."""
        vals = dict(self.values)
        vals[a], vals[b] = vals[b], vals[a]
        return replace(self, values=vals)


DEFAULT_TABLE = VariableTable.default()


@dataclass(frozen=True)
class NormalizationConstants:
    """Curl factors: a positive curl multiplies the state sum by ``plus``."""

    plus: CycloInt
    minus: CycloInt

    @classmethod
    def from_table(cls, table: VariableTable = DEFAULT_TABLE, check: bool = True):
        t = table
        plus = t["f0"] * t["X0"] + t["f1"] * t["X4"]
        minus = t["f0"] * t["x0"] + t["f1"] * t["x4"]
        if check:
            chain_p = (plus, t["f0"] * t["X10"], t["f0"] * t["X1"] + t["f1"] * t["X5"])
            chain_m = (minus, t["f0"] * t["x10"], t["f0"] * t["x1"] + t["f1"] * t["x5"])
            if len(set(chain_p)) != 1 or len(set(chain_m)) != 1:
                raise InvariantViolation(f"curl chain identities fail: {chain_p}, {chain_m}")
            if plus * minus != ONE:
                raise InvariantViolation(f"curl factors are not inverse: {plus} * {minus}")
        return cls(plus, minus)


def check_table(table: VariableTable = DEFAULT_TABLE) -> None:
    """Raise unless ``table`` satisfies every move equation and the curl identities."""
    from .polyring import evaluate, load_equations
    for i, eq in enumerate(load_equations(), 1):
        diff = evaluate(eq.difference, table.values)
        if not diff.is_zero():
            raise InvariantViolation(f"variable table violates equation {i}: {eq.text}")
    NormalizationConstants.from_table(table, check=True)


check_table(DEFAULT_TABLE)
DEFAULT_CONSTANTS = NormalizationConstants.from_table(DEFAULT_TABLE)


# ---------------------------------------------------------------------------
# States

def face_adjacency(fs: FaceSet) -> list[frozenset[int]]:
    """Neighbour sets: faces sharing at least one edge.

    A face that meets itself across an edge lists itself as a neighbour and
    so can never be black.
    """
    adj = [set() for _ in range(len(fs))]
    for lab in fs.diagram.darts:
        f, g = fs.edge_faces(lab)
        adj[f].add(g)
        adj[g].add(f)
    return [frozenset(a) for a in adj]


def _dfs(adj: Sequence[frozenset[int]], prefix: tuple[int, ...] = ()) -> Iterator[tuple[int, ...]]:
    nf = len(adj)
    bits = list(prefix) + [0] * (nf - len(prefix))

    def rec(i):
        if i == nf:
            yield tuple(bits)
            return
        bits[i] = 0
        yield from rec(i + 1)
        if i not in adj[i] and not any(bits[j] for j in adj[i] if j < i):
            bits[i] = 1
            yield from rec(i + 1)
            bits[i] = 0

    for i, b in enumerate(prefix):
        if b and (i in adj[i] or any(prefix[j] for j in adj[i] if j < i)):
            return
    yield from rec(len(prefix))


def enumerate_states(fs: FaceSet) -> Iterator[tuple[int, ...]]:
    """Every state once, in lexicographic order of the face bit vectors."""
    return _dfs(face_adjacency(fs))


def count_states(fs: FaceSet) -> int:
    return _sweep(fs, lambda ci, code: 1, lambda bit: 1, _INT_RING)


def crossing_code(bits: Sequence[int], bit_order: str = "msb") -> int:
    """4-bit code of the colours of ``F0..F3``."""
    if bit_order == "msb":
        return (bits[0] << 3) | (bits[1] << 2) | (bits[2] << 1) | bits[3]
    if bit_order == "lsb":
        return bits[0] | (bits[1] << 1) | (bits[2] << 2) | (bits[3] << 3)
    raise ValueError(f"bit_order must be one of {BIT_ORDERS}")


def monomial_value(d: Diagram, fs: FaceSet, state: Sequence[int],
                   table: VariableTable = DEFAULT_TABLE, bit_order: str = "msb") -> CycloInt:
    value = ONE
    for ci, x in enumerate(d.crossings):
        cf = fs.corner_faces(ci)
        code = crossing_code([state[f] for f in cf], bit_order)
        if code not in LEGAL_CODES:
            raise InvariantViolation(f"illegal crossing code {code} at crossing {ci}")
        value = value * table.crossing(x.sign, code)
    blacks = sum(state)
    return value * (table.face(1) ** blacks) * (table.face(0) ** (len(state) - blacks))


# ---------------------------------------------------------------------------
# Frontier sweep

class _IntRing:
    zero, one = 0, 1

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def scaler(w):
        if w == 1:
            return lambda v: v
        return lambda v: v * w


class _CyclicRing:
    """Z[x]/(x^5 - 1) on 5-tuples; maps onto Z[zeta] by x -> zeta.

    Multiplying by a signed power of x is a rotation, which is what almost
    every crossing weight is.
    """
    zero = (0, 0, 0, 0, 0)
    one = (1, 0, 0, 0, 0)

    @staticmethod
    def lift(c: CycloInt) -> tuple:
        return (0, c.n, c.o, c.p, c.q)

    @staticmethod
    def drop(v) -> CycloInt:
        return CycloInt.from_coeffs(v)

    @staticmethod
    def add(a, b):
        return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3], a[4] + b[4])

    @staticmethod
    def mul(a, b):
        return tuple(sum(a[i] * b[(k - i) % 5] for i in range(5)) for k in range(5))

    @classmethod
    def scaler(cls, w):
        for t in set(w):
            shifted = [c - t for c in w]
            nz = [i for i, c in enumerate(shifted) if c]
            if len(nz) == 1 and shifted[nz[0]] in (1, -1):
                k, sign = nz[0], shifted[nz[0]]
                if sign == 1:
                    return (lambda v: v) if k == 0 else (lambda v: v[5 - k:] + v[:5 - k])
                return lambda v: tuple(-c for c in v[5 - k:] + v[:5 - k])
        if not any(w):
            return lambda v: cls.zero
        return lambda v: cls.mul(v, w)


_INT_RING = _IntRing()
_CYCLIC_RING = _CyclicRing()


def _crossing_order(fs: FaceSet) -> list[int]:
    """Greedy order that opens as few new faces as possible at each step."""
    d = fs.diagram
    corners = [set(fs.corner_faces(ci)) for ci in range(d.n)]
    remaining = [0] * len(fs)
    for ci in range(d.n):
        for f in fs.corner_faces(ci):
            remaining[f] += 1
    done = [False] * d.n
    active: set[int] = set()
    order = []
    for _ in range(d.n):
        best = None
        for ci in range(d.n):
            if done[ci] or (order and not corners[ci] & active):
                continue
            cf = fs.corner_faces(ci)
            opened = len(corners[ci] - active)
            closed = sum(1 for f in corners[ci] if remaining[f] == cf.count(f))
            score = (opened - closed, opened, ci)
            if best is None or score < best[0]:
                best = (score, ci)
        ci = best[1]
        done[ci] = True
        order.append(ci)
        for f in fs.corner_faces(ci):
            remaining[f] -= 1
        active |= corners[ci]
        active = {f for f in active if remaining[f]}
    return order


def _sweep(fs: FaceSet, crossing_weight: Callable, face_weight: Callable, ring,
           bit_order: str = "msb"):
    """Sum over states of a product of per-crossing and per-face weights.

    Keys are bitmasks over face indices holding the colours of the open
    faces.  A face opens at its first corner and is multiplied out and
    cleared after its last one.  ``crossing_weight(ci, code)`` is only asked
    about legal codes.
    """
    d = fs.diagram
    remaining = [0] * len(fs)
    for ci in range(d.n):
        for f in fs.corner_faces(ci):
            remaining[f] += 1
    shifts = (3, 2, 1, 0) if bit_order == "msb" else (0, 1, 2, 3)
    w0, w1 = face_weight(0), face_weight(1)
    states = {0: ring.one}
    active: set[int] = set()
    for ci in _crossing_order(fs):
        cf = fs.corner_faces(ci)
        old = sorted(set(f for f in cf if f in active))
        new = sorted(set(f for f in cf if f not in active))
        scale = {}
        for code in LEGAL_CODES:
            scale[code] = ring.scaler(crossing_weight(ci, code))
        # legal extensions for each colouring of the old corner faces
        ext_table = {}
        for pat in range(1 << len(old)):
            colour = {f: (pat >> j) & 1 for j, f in enumerate(old)}
            exts = []
            for ext in range(1 << len(new)):
                colour.update({f: (ext >> j) & 1 for j, f in enumerate(new)})
                code = sum(colour[f] << sh for f, sh in zip(cf, shifts))
                if code in scale:
                    mask = sum(1 << f for j, f in enumerate(new) if (ext >> j) & 1)
                    exts.append((mask, scale[code]))
            ext_table[pat] = exts
        nxt: dict[int, object] = {}
        for key, val in states.items():
            pat = 0
            for j, f in enumerate(old):
                pat |= ((key >> f) & 1) << j
            for mask, sc in ext_table[pat]:
                k2 = key | mask
                v = sc(val)
                prev = nxt.get(k2)
                nxt[k2] = v if prev is None else ring.add(prev, v)
        states = nxt
        active.update(new)
        for f in cf:
            remaining[f] -= 1
        closing = [f for f in set(cf) if remaining[f] == 0]
        if closing:
            done_mask = sum(1 << f for f in closing)
            k = len(closing)
            powers = []
            for b in range(k + 1):
                w = ring.one
                for _ in range(b):
                    w = ring.mul(w, w1)
                for _ in range(k - b):
                    w = ring.mul(w, w0)
                powers.append(ring.scaler(w))
            merged: dict[int, object] = {}
            for key, val in states.items():
                v = powers[(key & done_mask).bit_count()](val)
                k2 = key & ~done_mask
                prev = merged.get(k2)
                merged[k2] = v if prev is None else ring.add(prev, v)
            states = merged
            active.difference_update(closing)
    if active:
        raise InvariantViolation("faces left open after the sweep")
    return states.get(0, ring.zero)


# ---------------------------------------------------------------------------
# Evaluation

def _check_bit_order(bit_order):
    if bit_order not in BIT_ORDERS:
        raise ValueError(f"bit_order must be one of {BIT_ORDERS}")


def _bracket_sweep(fs: FaceSet, table: VariableTable, bit_order: str) -> CycloInt:
    signs = fs.diagram.signs
    lift = _CYCLIC_RING.lift
    result = _sweep(
        fs,
        lambda ci, code: lift(table.crossing(signs[ci], code)),
        lambda bit: lift(table.face(bit)),
        _CYCLIC_RING,
        bit_order,
    )
    return _CYCLIC_RING.drop(result)


def _partial_sum(args) -> CycloInt:
    d, prefix, table, bit_order = args
    fs = faces(d)
    adj = face_adjacency(fs)
    acc = [0, 0, 0, 0]
    for st in _dfs(adj, prefix):
        v = monomial_value(d, fs, st, table, bit_order)
        acc[0] += v.n
        acc[1] += v.o
        acc[2] += v.p
        acc[3] += v.q
    return CycloInt(*acc)


def split_prefixes(fs: FaceSet, workers: int) -> list[tuple[int, ...]]:
    """Valid colourings of the faces up to the ``ceil(log2(workers))``-th branchable one."""
    if workers <= 1:
        return [()]
    adj = face_adjacency(fs)
    depth = math.ceil(math.log2(workers))
    branchable = [i for i in range(len(fs)) if i not in adj[i]]
    if not branchable:
        return [()]
    last = branchable[min(depth, len(branchable)) - 1] + 1
    return list(_dfs(adj[:last]))


def bracket(d: Diagram, *, method: str = "sweep", workers: int = 1,
            table: VariableTable = DEFAULT_TABLE, bit_order: str = "msb") -> CycloInt:
    """Unnormalised state sum ``[D]``."""
    _check_bit_order(bit_order)
    fs = faces(d)
    if method == "sweep":
        return _bracket_sweep(fs, table, bit_order)
    if method != "enumerate":
        raise ValueError("method must be 'sweep' or 'enumerate'")
    if workers <= 1:
        return _partial_sum((d, (), table, bit_order))
    jobs = [(d, p, table, bit_order) for p in split_prefixes(fs, workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_partial_sum, jobs))
    acc = ZERO
    for part in parts:
        acc = acc + part
    return acc


def normalize(value: CycloInt, wr: int,
              constants: NormalizationConstants = DEFAULT_CONSTANTS) -> CycloInt:
    """Cancel the curl factors: multiply by ``minus^wr`` (``plus^-wr`` if wr < 0)."""
    factor = constants.minus if wr >= 0 else constants.plus
    return value * (factor ** abs(wr))


def invariant(d: Diagram, *, table: VariableTable = DEFAULT_TABLE, bit_order: str = "msb",
              method: str = "sweep", workers: int = 1) -> CycloInt:
    """Writhe-normalised state sum as a canonical quadruple."""
    if table is DEFAULT_TABLE:
        constants = DEFAULT_CONSTANTS
    else:
        constants = NormalizationConstants.from_table(table, check=False)
    raw = bracket(d, method=method, workers=workers, table=table, bit_order=bit_order)
    return normalize(raw, d.writhe, constants)


def amphichiral_obstruction(q: CycloInt) -> bool:
    """True when ``q`` is compatible with an amphichiral link (``q=n`` and ``p=o``)."""
    return q.q == q.n and q.p == q.o


@dataclass
class Evaluation:
    name: str
    crossings: int
    writhe: int
    states: int
    bracket: CycloInt
    invariant: CycloInt

    @property
    def possibly_amphichiral(self) -> bool:
        return amphichiral_obstruction(self.invariant)

    def to_json(self) -> dict:
        return {"name": self.name, "crossings": self.crossings, "writhe": self.writhe,
                "states": self.states, "bracket": self.bracket.to_json(),
                "invariant": self.invariant.to_json(),
                "possibly_amphichiral": self.possibly_amphichiral}


def evaluate(d: Diagram, name: str = "", bit_order: str = "msb", *,
             method: str = "sweep", workers: int = 1) -> Evaluation:
    fs = faces(d)
    raw = bracket(d, method=method, workers=workers, bit_order=bit_order)
    return Evaluation(name, d.n, d.writhe, count_states(fs), raw,
                      normalize(raw, d.writhe))

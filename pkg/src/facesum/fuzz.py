"""Randomised move-invariance testing.

Random diagrams are grown from small seed diagrams by inserting curls, R2
clasps and ribbon pairs.  Every diagram on an orbit must have the same
invariant, and each must satisfy the mirror law.  Moves store raw random
integers that are interpreted against whatever diagram they are applied
to, so any subsequence of an orbit can be replayed when minimising a
counterexample.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .cyclotomic import CycloInt
from .diagram import Diagram, DiagramError, faces, insert_curl, insert_r2, insert_ribbon, mirror, parse_pd
from .statesum import DEFAULT_TABLE, VariableTable, invariant

SEED_DIAGRAMS = {
    "curl+": "X(1,1,2,2)",
    "curl-": "X(2,1,1,2)",
    "trefoil": "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)",
    "figure-eight": "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)",
    "hopf": "X(4,1,3,2) X(2,3,1,4)",
    "cinquefoil": "X(10,5,1,6) X(6,1,7,2) X(2,7,3,8) X(8,3,9,4) X(4,9,5,10)",
}

MOVE_KINDS = ("curl", "r2", "ribbon")


@dataclass(frozen=True)
class Move:
    kind: str
    args: tuple[int, ...]

    @classmethod
    def random(cls, rng: random.Random) -> "Move":
        kind = rng.choices(MOVE_KINDS, weights=(3, 4, 1))[0]
        return cls(kind, tuple(rng.randrange(1 << 30) for _ in range(4)))

    def resolve(self, d: Diagram) -> tuple | None:
        """Concrete parameters for ``d``, or None if the move does not apply."""
        a = self.args
        edges = d.edges
        if self.kind == "curl":
            return (edges[a[0] % len(edges)], 1 if a[1] & 1 else -1,
                    "left" if a[2] & 1 else "right")
        if self.kind == "ribbon":
            return (edges[a[0] % len(edges)], "left" if a[1] & 1 else "right")
        fs = faces(d)
        f = a[0] % len(fs)
        bound = sorted(set(fs.boundary_edges(f)))
        if len(bound) < 2:
            return None
        e1 = bound[a[1] % len(bound)]
        rest = [e for e in bound if e != e1]
        e2 = rest[a[2] % len(rest)]
        return (e1, e2, f, "first" if a[3] & 1 else "second")

    def apply(self, d: Diagram) -> Diagram | None:
        params = self.resolve(d)
        if params is None:
            return None
        if self.kind == "curl":
            return insert_curl(d, *params)
        if self.kind == "ribbon":
            return insert_ribbon(d, *params)
        e1, e2, f, over = params
        return insert_r2(d, e1, e2, face=f, over=over)

    def describe(self, d: Diagram) -> str:
        params = self.resolve(d)
        if params is None:
            return f"{self.kind} (not applicable)"
        if self.kind == "curl":
            return f"curl sign={params[1]:+d} side={params[2]} on edge {params[0]}"
        if self.kind == "ribbon":
            return f"ribbon side={params[1]} on edge {params[0]}"
        return f"r2 edge {params[0]} across edge {params[1]} through face {params[2]} ({params[3]} over)"


@dataclass
class Counterexample:
    base: Diagram
    moves: list[Move]
    expected: CycloInt
    got: CycloInt
    reason: str

    def steps(self) -> list[str]:
        out = []
        d = self.base
        for m in self.moves:
            out.append(m.describe(d))
            d = m.apply(d) or d
        return out

    def final(self) -> Diagram:
        d = self.base
        for m in self.moves:
            d = m.apply(d) or d
        return d

    def to_json(self) -> dict:
        return {"reason": self.reason, "base": self.base.to_json(), "base_pd": self.base.to_pd(),
                "moves": self.steps(), "final": self.final().to_json(),
                "expected": self.expected.to_json(), "got": self.got.to_json()}


@dataclass
class FuzzReport:
    seed: int
    diagrams: int
    moves: int
    checked: int = 0
    max_crossings: int = 0
    elapsed: float = 0.0
    counterexample: Counterexample | None = None
    orbits: list[list[Diagram]] = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def to_json(self) -> dict:
        return {"seed": self.seed, "diagrams": self.diagrams, "moves": self.moves,
                "checked": self.checked, "max_crossings": self.max_crossings,
                "status": "PASS" if self.passed else "FAIL",
                "counterexample": self.counterexample.to_json() if self.counterexample else None}


def random_diagram(rng: random.Random, warmup: int = 3) -> Diagram:
    """A seed diagram grown by up to ``warmup`` random moves."""
    name = rng.choice(sorted(SEED_DIAGRAMS))
    d = parse_pd(SEED_DIAGRAMS[name])
    for _ in range(rng.randint(0, warmup)):
        d = _apply_some(d, rng)[0]
    return d


def _apply_some(d: Diagram, rng: random.Random, tries: int = 20) -> tuple[Diagram, Move]:
    for _ in range(tries):
        m = Move.random(rng)
        out = m.apply(d)
        if out is not None:
            return out, m
    m = Move("curl", (0, 0, 0, 0))
    return m.apply(d), m


def _violation(d: Diagram, expected: CycloInt, table, bit_order,
               check_mirror: bool = True) -> tuple[str, CycloInt] | None:
    value = invariant(d, table=table, bit_order=bit_order)
    if value != expected:
        return "invariant changed along the orbit", value
    if not check_mirror:
        return None
    mirrored = invariant(mirror(d), table=table, bit_order=bit_order)
    if mirrored != value.conj():
        return "mirror law failed", mirrored
    return None


def _replay(base: Diagram, moves: list[Move], table, bit_order,
            check_mirror: bool = True) -> tuple[str, CycloInt, CycloInt] | None:
    expected = invariant(base, table=table, bit_order=bit_order)
    d = base
    for m in moves:
        d = m.apply(d) or d
        bad = _violation(d, expected, table, bit_order, check_mirror)
        if bad:
            return bad[0], expected, bad[1]
    return None


def minimize(base: Diagram, moves: list[Move], table=DEFAULT_TABLE, bit_order="msb",
             check_mirror: bool = True) -> list[Move]:
    """Greedily drop moves while the replay still fails."""
    moves = list(moves)
    i = 0
    while i < len(moves):
        trial = moves[:i] + moves[i + 1:]
        if _replay(base, trial, table, bit_order, check_mirror):
            moves = trial
        else:
            i += 1
    return moves


def run_fuzz(seed: int = 1, diagrams: int = 50, moves: int = 20, *,
             table: VariableTable = DEFAULT_TABLE, bit_order: str = "msb",
             check_mirror: bool = True, keep_orbits: bool = False) -> FuzzReport:
    """Check invariance along ``diagrams`` random orbits of ``moves`` moves each.

    With ``check_mirror`` every diagram is also checked against the mirror
    law, which costs a second evaluation per diagram.
    """
    report = FuzzReport(seed, diagrams, moves)
    start = time.perf_counter()
    for k in range(diagrams):
        rng = random.Random(f"{seed}:{k}")
        base = random_diagram(rng)
        expected = invariant(base, table=table, bit_order=bit_order)
        orbit = [base]
        history: list[Move] = []
        d = base
        report.checked += 1
        bad = _violation(base, expected, table, bit_order, check_mirror)
        for _ in range(moves):
            if bad:
                break
            d, m = _apply_some(d, rng)
            history.append(m)
            orbit.append(d)
            report.max_crossings = max(report.max_crossings, d.n)
            if len(faces(d)) != d.n + 2:
                raise DiagramError("NONPLANAR", "move produced a non-planar diagram")
            bad = _violation(d, expected, table, bit_order, check_mirror)
            report.checked += 1
        if keep_orbits:
            report.orbits.append(orbit)
        if bad:
            small = minimize(base, history, table, bit_order, check_mirror)
            found = _replay(base, small, table, bit_order, check_mirror)
            reason, exp, got = found if found else (bad[0], expected, bad[1])
            report.counterexample = Counterexample(base, small, exp, got, reason)
            break
    report.elapsed = time.perf_counter() - start
    return report

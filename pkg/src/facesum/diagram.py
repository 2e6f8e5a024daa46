"""Oriented link diagrams as combinatorial maps.

A crossing is a PD tuple ``(a, b, c, d)``: the four incident edge labels in
counterclockwise order, starting at the incoming under-edge.  The under
strand runs from slot 0 to slot 2; the over strand enters at ``over_in``
(slot 1 or 3) and leaves at the opposite slot.  A dart is a pair
``(crossing index, slot)``.

Faces are the orbits of ``dart -> (far end of its edge, next slot ccw)``.
Following an orbit keeps the face on the right-hand side of the walk.
Corner ``k`` of a crossing is the angle between slots ``k`` and ``k+1``; it
belongs to the face of the dart ``(crossing, k+1)``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import count
from typing import Hashable, Iterable, Sequence

Dart = tuple[int, int]


class DiagramError(ValueError):
    """Invalid PD input or diagram.  ``kind`` is a short machine-readable tag."""

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


@dataclass(frozen=True)
class Crossing:
    edges: tuple
    over_in: int

    def __post_init__(self):
        if len(self.edges) != 4:
            raise DiagramError("PARSE", f"a crossing needs 4 edge labels, got {self.edges!r}")
        if self.over_in not in (1, 3):
            raise DiagramError("PARSE", f"over_in must be slot 1 or 3, got {self.over_in}")

    @property
    def sign(self) -> int:
        return 1 if self.over_in == 3 else -1

    @property
    def over_out(self) -> int:
        return 4 - self.over_in

    def is_incoming(self, slot: int) -> bool:
        return slot == 0 or slot == self.over_in

    def pd(self) -> str:
        return "X({},{},{},{})".format(*self.edges)


@dataclass(frozen=True)
class Diagram:
    """Oriented link projection.

    ``free_loops`` counts crossingless circles; they only make sense for the
    Kauffman bracket and are rejected by :func:`validate`.
    """

    crossings: tuple[Crossing, ...]
    free_loops: int = 0

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(self.crossings))
        seen: dict = {}
        for ci, x in enumerate(self.crossings):
            for s, lab in enumerate(x.edges):
                seen.setdefault(lab, []).append((ci, s))
        bad = sorted((lab for lab, ds in seen.items() if len(ds) != 2), key=repr)
        if bad:
            raise DiagramError("LABELS", "edge labels must occur exactly twice; offending: "
                               + ", ".join(map(str, bad)))
        for lab, ((c1, s1), (c2, s2)) in seen.items():
            in1 = self.crossings[c1].is_incoming(s1)
            in2 = self.crossings[c2].is_incoming(s2)
            if in1 == in2:
                raise DiagramError("ORIENTATION",
                                   f"edge {lab} is {'incoming' if in1 else 'outgoing'} at both ends")

    # -- basic structure ---------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.crossings)

    def __len__(self) -> int:
        return len(self.crossings)

    @cached_property
    def darts(self) -> dict:
        """Edge label -> ``[tail dart, head dart]``."""
        out: dict = {}
        for ci, x in enumerate(self.crossings):
            for s, lab in enumerate(x.edges):
                out.setdefault(lab, [None, None])[1 if x.is_incoming(s) else 0] = (ci, s)
        return out

    @property
    def edges(self) -> list:
        return sorted(self.darts, key=_label_key)

    def other_end(self, dart: Dart) -> Dart:
        ci, s = dart
        tail, head = self.darts[self.crossings[ci].edges[s]]
        return head if dart == tail else tail

    def tail(self, label) -> Dart:
        return self._dart(label)[0]

    def head(self, label) -> Dart:
        return self._dart(label)[1]

    def _dart(self, label):
        try:
            return self.darts[label]
        except KeyError:
            raise DiagramError("EDGE", f"no edge labelled {label!r}") from None

    @property
    def signs(self) -> list[int]:
        return [x.sign for x in self.crossings]

    def sign(self, i: int) -> int:
        return self.crossings[i].sign

    @property
    def writhe(self) -> int:
        return sum(self.signs)

    @cached_property
    def components(self) -> list[list]:
        """Edge labels of each link component, in orientation order."""
        comps = []
        done = set()
        for ci, x in enumerate(self.crossings):
            for s in (0, x.over_in):
                start = x.edges[s]
                if start in done:
                    continue
                comp = []
                lab = start
                while lab not in done:
                    done.add(lab)
                    comp.append(lab)
                    cj, t = self.darts[lab][1]
                    lab = self.crossings[cj].edges[(t + 2) % 4]
                comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        if not self.crossings:
            return self.free_loops <= 1
        if self.free_loops:
            return False
        seen = {0}
        stack = [0]
        while stack:
            ci = stack.pop()
            for lab in self.crossings[ci].edges:
                for cj, _ in self.darts[lab]:
                    if cj not in seen:
                        seen.add(cj)
                        stack.append(cj)
        return len(seen) == self.n

    # -- rendering ---------------------------------------------------------
    def to_pd(self, explicit: bool = False) -> str:
        if explicit:
            return " ".join(("X+" if x.sign > 0 else "X-") + x.pd()[1:] for x in self.crossings)
        return " ".join(x.pd() for x in self.crossings)

    def to_json(self) -> dict:
        return {"crossings": [list(x.edges) for x in self.crossings],
                "signs": self.signs}

    @classmethod
    def from_json(cls, data) -> "Diagram":
        if isinstance(data, str):
            data = json.loads(data)
        tuples = [tuple(c) for c in data["crossings"]]
        signs = data.get("signs")
        if signs is not None and len(signs) != len(tuples):
            raise DiagramError("PARSE", "signs and crossings differ in length")
        return from_tuples(tuples, signs)

    def __str__(self) -> str:
        return self.to_pd()

    # -- canonical relabelling ----------------------------------------------
    def relabelled(self) -> "Diagram":
        """Same diagram with edges renumbered 1..2n along each component."""
        mapping = {}
        k = count(1)
        for comp in self.components:
            for lab in comp:
                mapping[lab] = next(k)
        crossings = tuple(Crossing(tuple(mapping[e] for e in x.edges), x.over_in)
                          for x in self.crossings)
        return Diagram(crossings, self.free_loops)


def _label_key(lab):
    return (0, lab, "") if isinstance(lab, int) else (1, 0, repr(lab))


# ---------------------------------------------------------------------------
# Parsing

_PD_ITEM = re.compile(r"X([+-]?)\s*[\(\[]([^\)\]]*)[\)\]]")


def parse_pd(text: str) -> Diagram:
    """Parse ``X(a,b,c,d) ...``; ``X+(...)`` / ``X-(...)`` fix the crossing sign."""
    if text is None or not text.strip():
        raise DiagramError("PARSE", "empty PD code")
    tuples = []
    signs = []
    pos = 0
    body = text.strip()
    for m in _PD_ITEM.finditer(body):
        gap = body[pos:m.start()]
        if gap.strip(" \t\r\n,;"):
            raise DiagramError("PARSE", f"unexpected text {gap.strip()!r} in PD code")
        pos = m.end()
        parts = [p.strip() for p in m.group(2).split(",")]
        try:
            labels = tuple(int(p) for p in parts)
        except ValueError:
            raise DiagramError("PARSE", f"non-integer label in {m.group(0)!r}") from None
        if len(labels) != 4:
            raise DiagramError("PARSE", f"{m.group(0)!r} does not have 4 labels")
        tuples.append(labels)
        signs.append({"+": 1, "-": -1}.get(m.group(1)))
    if body[pos:].strip(" \t\r\n,;"):
        raise DiagramError("PARSE", f"unexpected text {body[pos:].strip()!r} in PD code")
    if not tuples:
        raise DiagramError("PARSE", "no crossings found in PD code")
    return from_tuples(tuples, signs)


def from_tuples(tuples: Sequence[Sequence], signs: Sequence[int | None] | None = None) -> Diagram:
    """Build a diagram from PD tuples, working out every over-strand direction.

    Directions follow from the under strands (an edge leaving slot 2 must
    enter its other end).  Components that never pass under fall back to the
    label succession rule; if both successions hold, an explicit sign is
    required.
    """
    tuples = [tuple(t) for t in tuples]
    if signs is None:
        signs = [None] * len(tuples)
    occ: dict = {}
    for ci, t in enumerate(tuples):
        if len(t) != 4:
            raise DiagramError("PARSE", f"a crossing needs 4 edge labels, got {t!r}")
        for s, lab in enumerate(t):
            occ.setdefault(lab, []).append((ci, s))
    bad = sorted((lab for lab, ds in occ.items() if len(ds) != 2), key=_label_key)
    if bad:
        raise DiagramError("LABELS", "edge labels must occur exactly twice; offending: "
                           + ", ".join(map(str, bad)))

    over_in: dict[int, int] = {}
    for ci, sg in enumerate(signs):
        if sg is not None:
            if sg not in (1, -1):
                raise DiagramError("PARSE", f"sign must be +1 or -1, got {sg!r}")
            over_in[ci] = 3 if sg > 0 else 1

    def other(dart):
        a, b = occ[tuples[dart[0]][dart[1]]]
        return b if dart == a else a

    def settle(ci, slot_in):
        if ci in over_in and over_in[ci] != slot_in:
            raise DiagramError("ORIENTATION",
                               f"crossing X{tuples[ci]}: sign contradicts strand orientation")
        if ci not in over_in:
            over_in[ci] = slot_in
            return True
        return False

    def propagate():
        work = [(ci, 2, False) for ci in range(len(tuples))]
        work += [(ci, 0, True) for ci in range(len(tuples))]
        for ci, oi in list(over_in.items()):
            work += [(ci, 4 - oi, False), (ci, oi, True)]
        while work:
            ci, s, incoming = work.pop()
            cj, t = other((ci, s))
            if t == 0 or t == 2:
                if (t == 0) == incoming:
                    raise DiagramError("ORIENTATION",
                                       f"edge {tuples[ci][s]} is {'incoming' if incoming else 'outgoing'}"
                                       " at both ends")
                continue
            # slot t is the over strand's incoming slot iff (ci, s) is outgoing
            slot_in = t if not incoming else 4 - t
            if settle(cj, slot_in):
                work += [(cj, 4 - slot_in, False), (cj, slot_in, True)]

    propagate()
    if len(over_in) < len(tuples):
        succ = _label_successors(tuples)
        for ci, t in enumerate(tuples):
            if ci in over_in:
                continue
            _, b, _, d = t
            fw = succ[b] == d
            bw = succ[d] == b
            if fw and bw:
                raise DiagramError(
                    "AMBIGUOUS",
                    f"over-strand direction at X({','.join(map(str, t))}) is ambiguous; "
                    "write X+(...) or X-(...) to give its sign")
            if not (fw or bw):
                raise DiagramError(
                    "ORIENTATION",
                    f"cannot infer the over-strand direction at X({','.join(map(str, t))})")
            over_in[ci] = 1 if fw else 3
            propagate()

    return Diagram(tuple(Crossing(t, over_in[ci]) for ci, t in enumerate(tuples)))


def _label_successors(tuples) -> dict:
    parent: dict = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, c, d in tuples:
        parent[find(a)] = find(c)
        parent[find(b)] = find(d)
    groups: dict = {}
    for lab in parent:
        groups.setdefault(find(lab), []).append(lab)
    succ = {}
    for labs in groups.values():
        labs.sort(key=_label_key)
        for i, lab in enumerate(labs):
            succ[lab] = labs[(i + 1) % len(labs)]
    return succ


# ---------------------------------------------------------------------------
# Validation and faces

def validate(d: Diagram) -> None:
    """Raise unless ``d`` is connected and has at least one crossing."""
    if not d.crossings:
        raise DiagramError("NO_CROSSINGS",
                           "diagram has no crossings; replace a bare circle by a curl or "
                           "a two-crossing unknot")
    if not d.is_connected():
        raise DiagramError("DISCONNECTED",
                           "diagram is split (its projection is disconnected); prepare it by "
                           "pushing one part over another with an R2 clasp (see insert_r2)")


@dataclass(frozen=True)
class FaceSet:
    diagram: Diagram
    faces: tuple[tuple[Dart, ...], ...]
    face_of_dart: dict = field(repr=False)

    def __len__(self) -> int:
        return len(self.faces)

    def corner(self, ci: int, k: int) -> int:
        """Face containing corner ``k`` (between slots k and k+1) of crossing ``ci``."""
        return self.face_of_dart[(ci, (k + 1) % 4)]

    def corner_faces(self, ci: int) -> tuple[int, int, int, int]:
        """``(F0, F1, F2, F3)``: F0 sits between the two incoming strands, then ccw."""
        k0 = 0 if self.diagram.crossings[ci].over_in == 1 else 3
        return tuple(self.corner(ci, (k0 + j) % 4) for j in range(4))

    def edge_faces(self, label) -> tuple[int, int]:
        """Faces on the two sides of an edge."""
        ci, s = self.diagram.tail(label)
        return self.corner(ci, (s - 1) % 4), self.corner(ci, s)

    def faces_of_edge_darts(self, label) -> dict[Dart, int]:
        return {dt: self.face_of_dart[dt] for dt in self.diagram.darts[label]}

    def boundary_edges(self, f: int) -> list:
        return [self.diagram.crossings[ci].edges[s] for ci, s in self.faces[f]]


def faces(d: Diagram) -> FaceSet:
    validate(d)
    face_of: dict[Dart, int] = {}
    orbits = []
    for ci in range(d.n):
        for s in range(4):
            if (ci, s) in face_of:
                continue
            fid = len(orbits)
            orbit = []
            dart = (ci, s)
            while dart not in face_of:
                face_of[dart] = fid
                orbit.append(dart)
                cj, t = d.other_end(dart)
                dart = (cj, (t + 1) % 4)
            orbits.append(tuple(orbit))
    if len(orbits) != d.n + 2:
        raise DiagramError("NONPLANAR",
                           f"{len(orbits)} faces traced for {d.n} crossings (expected {d.n + 2}); "
                           "the PD code does not describe a planar diagram")
    return FaceSet(d, tuple(orbits), face_of)


def corner_faces(d: Diagram, i: int, fs: FaceSet | None = None) -> tuple[int, int, int, int]:
    return (fs or faces(d)).corner_faces(i)


def sign(d: Diagram, i: int) -> int:
    return d.crossings[i].sign


def writhe(d: Diagram) -> int:
    return d.writhe


# ---------------------------------------------------------------------------
# Mirror image and move insertion

def mirror(d: Diagram) -> Diagram:
    """Swap over and under at every crossing."""
    out = []
    for x in d.crossings:
        a, b, c, e = x.edges
        if x.over_in == 1:
            out.append(Crossing((b, c, e, a), 3))
        else:
            out.append(Crossing((e, a, b, c), 1))
    return Diagram(tuple(out), d.free_loops)


_fresh = count()


def _new_label():
    return ("new", next(_fresh))


def _from_arms(arms) -> Crossing:
    """Crossing from arms ``(label, incoming, over)`` listed ccw."""
    k = next(i for i, (_, inc, ov) in enumerate(arms) if inc and not ov)
    rot = arms[k:] + arms[:k]
    over_in = next(i for i, (_, inc, ov) in enumerate(rot) if inc and ov)
    return Crossing(tuple(lab for lab, _, _ in rot), over_in)


def _replace(edges: list[list], dart: Dart, label) -> None:
    edges[dart[0]][dart[1]] = label


def _rebuild(d: Diagram, edges: list[list], extra: Iterable[Crossing]) -> Diagram:
    xs = [Crossing(tuple(e), x.over_in) for e, x in zip(edges, d.crossings)]
    xs.extend(extra)
    return Diagram(tuple(xs), d.free_loops)


def _curl_raw(d: Diagram, edge, sign: int, side: str) -> tuple[Diagram, Hashable]:
    if sign not in (1, -1):
        raise ValueError("curl sign must be +1 or -1")
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    tail, head = d._dart(edge)
    a, loop, b = _new_label(), _new_label(), _new_label()
    edges = [list(x.edges) for x in d.crossings]
    _replace(edges, tail, a)
    _replace(edges, head, b)
    first_over = (sign == 1) == (side == "right")
    fo, so = first_over, not first_over
    # arms ccw from east: E, N, W, S; the strand enters from the south
    if side == "right":
        arms = [(loop, True, so), (loop, False, fo), (b, False, so), (a, True, fo)]
    else:
        arms = [(b, False, so), (loop, False, fo), (loop, True, so), (a, True, fo)]
    return _rebuild(d, edges, [_from_arms(arms)]), b


def insert_curl(d: Diagram, edge, sign: int, side: str = "right") -> Diagram:
    """Put a one-crossing curl of the given sign on ``edge``.

    ``side`` says which side of the oriented edge the new loop lies on.
    """
    return _curl_raw(d, edge, sign, side)[0].relabelled()


def insert_ribbon(d: Diagram, edge, side: str = "right") -> Diagram:
    """Put a positive and a negative curl on the same side of ``edge``.

    Writhe is unchanged but the winding number changes by two, so the two
    diagrams are related by a framed (ribbon) move and not by regular isotopy.
    """
    d1, out = _curl_raw(d, edge, 1, side)
    d2, _ = _curl_raw(d1, out, -1, side)
    return d2.relabelled()


def insert_r2(d: Diagram, edge1, edge2, face: int | None = None,
              fs: FaceSet | None = None, over: str = "first") -> Diagram:
    """Push ``edge1`` across ``edge2`` through a face they share.

    Two crossings of opposite sign are created and the shared face is split,
    so the face count grows by two.  ``over`` picks which strand is on top.
    """
    if edge1 == edge2:
        raise DiagramError("EDGE", "insert_r2 needs two different edges")
    if over not in ("first", "second"):
        raise ValueError("over must be 'first' or 'second'")
    d._dart(edge1), d._dart(edge2)
    fs = fs or faces(d)
    d1s = fs.faces_of_edge_darts(edge1)
    d2s = fs.faces_of_edge_darts(edge2)
    shared = sorted(set(d1s.values()) & set(d2s.values()))
    if face is None:
        if not shared:
            raise DiagramError("EDGE", f"edges {edge1} and {edge2} do not border a common face")
        face = shared[0]
    elif face not in shared:
        raise DiagramError("EDGE", f"edges {edge1} and {edge2} do not both border face {face}")
    dart1 = next(dt for dt, f in d1s.items() if f == face)
    dart2 = next(dt for dt, f in d2s.items() if f == face)

    # Local frame: the face walk goes up edge1 (face on its right) and down
    # edge2; edge1 bulges to the right across edge2 at C1 (low) and C2 (high).
    up1 = dart1 == d.tail(edge1)
    down2 = dart2 == d.tail(edge2)
    p1, p2, p3, r1, r2, r3 = (_new_label() for _ in range(6))
    edges = [list(x.edges) for x in d.crossings]
    _replace(edges, dart1, p1)
    _replace(edges, d.other_end(dart1), p3)
    _replace(edges, dart2, r1)
    _replace(edges, d.other_end(dart2), r3)
    ov1 = over == "first"
    ov2 = not ov1
    # arms E, N, W, S
    c1 = [(p2, not up1, ov1), (r2, down2, ov2), (p1, up1, ov1), (r3, not down2, ov2)]
    c2 = [(p2, up1, ov1), (r1, down2, ov2), (p3, not up1, ov1), (r2, not down2, ov2)]
    return _rebuild(d, edges, [_from_arms(c1), _from_arms(c2)]).relabelled()

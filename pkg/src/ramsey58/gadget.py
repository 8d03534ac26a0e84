"""The gadget pattern, the Phase A universe and gadget enumeration.

Slots are 0-based here: slot 0 is the first gadget vertex, slot 5 the last.
The pattern is two triangles {0,1,2} and {3,4,5} joined by the bridge 2-3.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .core import DomainError, ParseError, canon

EDGE_SLOTS = ((0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (3, 5))
NONEDGE_SLOTS = ((0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 4), (2, 5))
# which of (c1, c2, c2') colors each edge slot
EDGE_ROLE = {(0, 1): 0, (2, 3): 0, (4, 5): 0, (0, 2): 1, (1, 2): 1, (3, 4): 2, (3, 5): 2}
# sharable slot pairs whose count is bounded for each sharable edge
SCAFFOLD_SLOTS = ((0, 3), (1, 3), (2, 4), (2, 5))

EDGE_ROLE_CLASS = {
    (0, 1): "12/56", (4, 5): "12/56",
    (0, 2): "13/23/45/46", (1, 2): "13/23/45/46", (3, 4): "13/23/45/46", (3, 5): "13/23/45/46",
    (2, 3): "34",
}


@dataclass(frozen=True, order=True)
class ColoredGadget:
    slots: tuple[int, int, int, int, int, int]
    c1: int
    c2: int
    c2p: int

    def variants(self) -> list["ColoredGadget"]:
        a, b, x, y, z, w = self.slots
        out = []
        for s, (k2, k2p) in (((a, b, x, y, z, w), (self.c2, self.c2p)), ((w, z, y, x, b, a), (self.c2p, self.c2))):
            s0, s1, s2, s3, s4, s5 = s
            for p in (s0, s1), (s1, s0):
                for q in (s4, s5), (s5, s4):
                    out.append(ColoredGadget((p[0], p[1], s2, s3, q[0], q[1]), self.c1, k2, k2p))
        return out

    def canonical(self) -> "ColoredGadget":
        return min(self.variants())

    def is_canonical(self) -> bool:
        a, b, _, _, z, w = self.slots
        return a < b and z < w and a < z


def gadget_edges(g: ColoredGadget) -> list[tuple[tuple[int, int], int]]:
    cols = (g.c1, g.c2, g.c2p)
    return [(canon(g.slots[i], g.slots[j]), cols[EDGE_ROLE[(i, j)]]) for i, j in EDGE_SLOTS]


def gadget_nonedges(g: ColoredGadget) -> list[tuple[int, int]]:
    return [canon(g.slots[i], g.slots[j]) for i, j in NONEDGE_SLOTS]


def hit_pairs(g: ColoredGadget) -> set[tuple[int, int]]:
    s = g.slots
    return (
        {(v, g.c1) for v in s}
        | {(v, g.c2) for v in s[:3]}
        | {(v, g.c2p) for v in s[3:]}
    )


@dataclass
class PhaseAUniverse:
    """Sampled ground structure: sharable pairs, color pools, removed vertex-color pairs."""

    n: int
    sharable: np.ndarray
    a1: tuple[int, ...]
    a2: tuple[int, ...]
    removed: frozenset[tuple[int, int]] = frozenset()
    p: float | None = None
    _allowed_bits: list[int] = field(default=None, init=False, repr=False)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        self.sharable = np.asarray(self.sharable, dtype=bool)
        if self.sharable.shape != (self.n, self.n):
            raise DomainError("sharable matrix must be n x n")
        if set(self.a1) & set(self.a2):
            raise DomainError("C_A1 and C_A2 must be disjoint")
        self.removed = frozenset(self.removed)
        allowed = [0] * self.n
        pool = self.all_colors()
        for v in range(self.n):
            bits = 0
            for c in pool:
                if (v, c) not in self.removed:
                    bits |= 1 << c
            allowed[v] = bits
        self._allowed_bits = allowed

    def all_colors(self) -> tuple[int, ...]:
        return tuple(self.a1) + tuple(self.a2)

    def is_sharable(self, u: int, v: int) -> bool:
        return bool(self.sharable[u, v])

    def is_kept(self, u: int, v: int) -> bool:
        return u != v and not self.sharable[u, v]

    def allowed(self, v: int, c: int) -> bool:
        return (v, c) not in self.removed

    def sharable_edges(self) -> list[tuple[int, int]]:
        iu, ju = np.triu_indices(self.n, 1)
        mask = self.sharable[iu, ju]
        return [(int(a), int(b)) for a, b in zip(iu[mask], ju[mask])]

    def kept_edges(self) -> list[tuple[int, int]]:
        iu, ju = np.triu_indices(self.n, 1)
        mask = ~self.sharable[iu, ju]
        return [(int(a), int(b)) for a, b in zip(iu[mask], ju[mask])]

    def allowed_bits(self, v: int) -> int:
        return self._allowed_bits[v]

    def a1_mask(self) -> int:
        return sum(1 << c for c in self.a1)

    def a2_mask(self) -> int:
        return sum(1 << c for c in self.a2)

    @classmethod
    def from_sets(
        cls,
        n: int,
        sharable: Iterable[tuple[int, int]],
        a1: Iterable[int],
        a2: Iterable[int],
        removed: Iterable[tuple[int, int]] = (),
        p: float | None = None,
    ) -> "PhaseAUniverse":
        mat = np.zeros((n, n), dtype=bool)
        for u, v in sharable:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"bad sharable pair ({u},{v})")
            mat[u, v] = mat[v, u] = True
        return cls(n, mat, tuple(a1), tuple(a2), frozenset(removed), p)


SECTIONS = ("E''", "C_A1", "C_A2", "V'-removed")


def dumps_universe(u: PhaseAUniverse) -> str:
    lines = [str(u.n), "E''"]
    lines += [f"{a} {b}" for a, b in u.sharable_edges()]
    lines.append("C_A1")
    lines += [str(c) for c in u.a1]
    lines.append("C_A2")
    lines += [str(c) for c in u.a2]
    lines.append("V'-removed")
    lines += [f"{v} {c}" for v, c in sorted(u.removed)]
    return "\n".join(lines) + "\n"


def save_universe(u: PhaseAUniverse, path: str | Path) -> None:
    Path(path).write_text(dumps_universe(u), encoding="utf-8")


def loads_universe(text: str) -> PhaseAUniverse:
    rows = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise ParseError("empty universe file")
    head = rows[0].split()
    try:
        n = int(head[-1])
    except ValueError as exc:
        raise ParseError(f"bad header {rows[0]!r}; expected the vertex count") from exc
    data: dict[str, list[list[int]]] = {s: [] for s in SECTIONS}
    section = None
    for row in rows[1:]:
        if row in SECTIONS:
            section = row
            continue
        if section is None:
            raise ParseError(f"data line {row!r} before any section header")
        try:
            data[section].append([int(t) for t in row.split()])
        except ValueError as exc:
            raise ParseError(f"bad line {row!r} in section {section}") from exc
    try:
        return PhaseAUniverse.from_sets(
            n,
            [tuple(r) for r in data["E''"]],  # type: ignore[misc]
            [r[0] for r in data["C_A1"]],
            [r[0] for r in data["C_A2"]],
            [tuple(r) for r in data["V'-removed"]],  # type: ignore[misc]
        )
    except (DomainError, IndexError, TypeError, ValueError) as exc:
        raise ParseError(str(exc)) from exc


def load_universe(path: str | Path) -> PhaseAUniverse:
    return loads_universe(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------- validity


@dataclass(frozen=True)
class Validity:
    ok: bool
    failed_condition: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_valid(g: ColoredGadget, u: PhaseAUniverse) -> Validity:
    """Check the five placement conditions; report the first that fails."""
    s = g.slots
    if len(set(s)) != 6 or not all(0 <= v < u.n for v in s):
        return Validity(False, 1)
    if any(not u.is_kept(a, b) for (a, b), _ in gadget_edges(g)):
        return Validity(False, 1)
    if any(not u.is_sharable(a, b) for a, b in gadget_nonedges(g)):
        return Validity(False, 2)
    if g.c1 not in u.a1 or g.c2 not in u.a2 or g.c2p not in u.a2:
        return Validity(False, 3)
    if any(not u.allowed(v, c) for v, c in hit_pairs(g)):
        return Validity(False, 4)
    if any(u.allowed(v, g.c2p) for v in s[:3]) or any(u.allowed(v, g.c2) for v in s[3:]):
        return Validity(False, 5)
    return Validity(True)


# ---------------------------------------------------------------- enumeration


def _bits(it: Iterable[int]) -> int:
    out = 0
    for v in it:
        out |= 1 << v
    return out


def _iter_bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


_EDGE_SET = {frozenset(e) for e in EDGE_SLOTS}


class Enumerator:
    """Bitset-driven search for gadget placements in a universe.

    ``blocked_edges`` and ``used_pairs`` restrict the search to gadgets that
    are still placeable next to an existing packing.
    """

    def __init__(
        self,
        u: PhaseAUniverse,
        blocked_edges: np.ndarray | None = None,
        used_pairs: dict[int, int] | None = None,
    ):
        self.u = u
        n = u.n
        kept = ~u.sharable
        np.fill_diagonal(kept, False)
        if blocked_edges is not None:
            kept = kept & ~blocked_edges
        self.kept_bits = [_bits(np.nonzero(kept[v])[0].tolist()) for v in range(n)]
        self.share_bits = [_bits(np.nonzero(u.sharable[v])[0].tolist()) for v in range(n)]
        used = used_pairs or {}
        self.free_bits = [u.allowed_bits(v) & ~used.get(v, 0) for v in range(n)]
        self.allowed = [u.allowed_bits(v) for v in range(n)]
        self.a1 = u.a1_mask()
        self.a2 = u.a2_mask()
        self.all_vertices = (1 << n) - 1

    def shapes(self, fixed: dict[int, int]) -> Iterator[tuple[int, ...]]:
        """Slot tuples with the pattern's kept/sharable structure extending ``fixed``."""
        for s, v in fixed.items():
            for t, w in fixed.items():
                if s < t:
                    if v == w:
                        return
                    bits = self.kept_bits if frozenset((s, t)) in _EDGE_SET else self.share_bits
                    if not (bits[v] >> w) & 1:
                        return
        assign = dict(fixed)
        yield from self._extend(assign)

    def _extend(self, assign: dict[int, int]) -> Iterator[tuple[int, ...]]:
        if len(assign) == 6:
            yield tuple(assign[i] for i in range(6))
            return
        open_slots = [s for s in range(6) if s not in assign]
        slot = max(open_slots, key=lambda s: (sum(1 for t in assign if frozenset((s, t)) in _EDGE_SET), -s))
        cand = self.all_vertices
        for t, w in assign.items():
            cand &= self.kept_bits[w] if frozenset((slot, t)) in _EDGE_SET else self.share_bits[w]
            cand &= ~(1 << w)
        for v in _iter_bits(cand):
            assign[slot] = v
            yield from self._extend(assign)
            del assign[slot]

    def colorings(self, s: tuple[int, ...], c1: int | None = None, c2: int | None = None,
                  c2p: int | None = None) -> Iterator[ColoredGadget]:
        fb, al = self.free_bits, self.allowed
        m1 = self.a1 & fb[s[0]] & fb[s[1]] & fb[s[2]] & fb[s[3]] & fb[s[4]] & fb[s[5]]
        m2 = self.a2 & fb[s[0]] & fb[s[1]] & fb[s[2]] & ~al[s[3]] & ~al[s[4]] & ~al[s[5]]
        m2p = self.a2 & fb[s[3]] & fb[s[4]] & fb[s[5]] & ~al[s[0]] & ~al[s[1]] & ~al[s[2]]
        if c1 is not None:
            m1 &= 1 << c1
        if c2 is not None:
            m2 &= 1 << c2
        if c2p is not None:
            m2p &= 1 << c2p
        if not (m1 and m2 and m2p):
            return
        slots = tuple(s)
        for a in _iter_bits(m1):
            for b in _iter_bits(m2):
                for c in _iter_bits(m2p):
                    yield ColoredGadget(slots, a, b, c)  # type: ignore[arg-type]

    def anchored(self, anchor: tuple | None) -> Iterator[ColoredGadget]:
        """Every valid gadget through ``anchor`` (an edge or a (vertex, color) pair), once each."""
        if anchor is None:
            for s in self.shapes({}):
                if s[0] < s[1] and s[4] < s[5] and s[0] < s[4]:
                    yield from self.colorings(s)
            return
        kind, payload = _anchor_kind(anchor, self.u)
        seen: set[ColoredGadget] = set()
        for fixed, colors in _anchor_placements(kind, payload, self.u):
            for s in self.shapes(fixed):
                for g in self.colorings(s, *colors):
                    key = g.canonical()
                    if key not in seen:
                        seen.add(key)
                        yield key


class VertexColor(tuple):
    """Marks an anchor as a (vertex, color) pair rather than an edge."""

    def __new__(cls, v: int, c: int):
        return super().__new__(cls, (int(v), int(c)))


def _anchor_kind(anchor: tuple, u: PhaseAUniverse) -> tuple[str, tuple[int, int]]:
    if len(anchor) != 2:
        raise DomainError(f"bad anchor {anchor!r}")
    a, b = (int(x) for x in anchor)
    if isinstance(anchor, VertexColor):
        if not 0 <= a < u.n:
            raise DomainError(f"vertex {a} out of range")
        return "pair", (a, b)
    if a == b or not (0 <= a < u.n and 0 <= b < u.n):
        raise DomainError(f"bad edge anchor {anchor!r}")
    return "edge", (a, b)


def _anchor_placements(kind: str, payload: tuple[int, int], u: PhaseAUniverse):
    if kind == "edge":
        a, b = payload
        for i, j in EDGE_SLOTS:
            yield {i: a, j: b}, (None, None, None)
            yield {i: b, j: a}, (None, None, None)
        return
    v, c = payload
    for slot in range(6):
        yield {slot: v}, (c, None, None)
        if slot < 3:
            yield {slot: v}, (None, c, None)
        else:
            yield {slot: v}, (None, None, c)


def enumerate_gadgets(u: PhaseAUniverse, anchor: tuple | None = None) -> Iterator[ColoredGadget]:
    """All valid gadgets (through ``anchor`` if given), each in canonical form once.

    An anchor is an edge ``(a, b)`` or a :class:`VertexColor` pair.
    """
    yield from Enumerator(u).anchored(anchor)


def sample_gadget(u: PhaseAUniverse, rng: np.random.Generator, anchor: tuple | None = None) -> ColoredGadget | None:
    """Propose a random placement and color triple; return it only if valid."""
    if u.n < 6 or not u.a1 or not u.a2:
        return None
    slots = [int(x) for x in rng.choice(u.n, size=6, replace=False)]
    c1 = int(rng.choice(u.a1))
    c2, c2p = (int(x) for x in rng.choice(u.a2, size=2))
    if anchor is not None:
        kind, (a, b) = _anchor_kind(anchor, u)
        if kind == "edge":
            i, j = EDGE_SLOTS[int(rng.integers(len(EDGE_SLOTS)))]
            if rng.random() < 0.5:
                a, b = b, a
            slots = _force(slots, {i: a, j: b})
        else:
            slot = int(rng.integers(6))
            slots = _force(slots, {slot: a})
            role = int(rng.integers(2))
            if role == 0:
                c1 = b
            elif slot < 3:
                c2 = b
            else:
                c2p = b
    g = ColoredGadget(tuple(slots), c1, c2, c2p)  # type: ignore[arg-type]
    return g if is_valid(g, u) else None


def _force(slots: list[int], fixed: dict[int, int]) -> list[int]:
    out = list(slots)
    for slot, v in fixed.items():
        if v in out:
            k = out.index(v)
            out[k] = out[slot]
        out[slot] = v
    return out


def brute_force_gadgets(u: PhaseAUniverse) -> set[ColoredGadget]:
    """Reference enumeration straight from the definition: every injective
    6-tuple and ordered color triple, validity-checked, then canonicalized."""
    out = set()
    colors = u.all_colors()
    for s in permutations(range(u.n), 6):
        shape = ColoredGadget(s, -1, -1, -1)  # type: ignore[arg-type]
        if any(not u.is_kept(a, b) for (a, b), _ in gadget_edges(shape)):
            continue
        if any(not u.is_sharable(a, b) for a, b in gadget_nonedges(shape)):
            continue
        for c1 in colors:
            for c2 in colors:
                for c2p in colors:
                    g = ColoredGadget(s, c1, c2, c2p)  # type: ignore[arg-type]
                    if is_valid(g, u):
                        out.add(g.canonical())
    return out


def expected_degree(n: int, p: float) -> float:
    """Leading-order H_A degree 27/196 n^7 p^14 + n^7 p^14.5 (documentation aid)."""
    return 27 / 196 * n**7 * p**14 + n**7 * p**14.5


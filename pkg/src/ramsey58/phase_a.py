"""Phase A: sample a universe and greedily pack gadgets into a partial (5,8)-coloring."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .core import (
    DomainError,
    EdgeColoring,
    alt_4cycle_through,
    canon,
    would_violate,
)
from .gadget import (
    ColoredGadget,
    Enumerator,
    PhaseAUniverse,
    gadget_edges,
    hit_pairs,
    is_valid,
)

# analysis constants of the packing hypergraph (documentation only)
K_A = 19


def n_a(n: int) -> float:
    return 19 / 14 * n * n


@dataclass
class PhaseAConfig:
    n: int
    delta: float = 0.25
    p: float | None = None
    seed: int = 0
    max_consecutive_failures: int | None = None
    a1_size: int | None = None
    a2_size: int | None = None
    tries_per_anchor: int = 48

    def __post_init__(self) -> None:
        if self.n < 7:
            raise DomainError(f"n must be at least 7, got {self.n}")
        if not 0 < self.prob < 1:
            raise DomainError(f"sampling probability must lie in (0,1), got {self.prob}")

    @property
    def prob(self) -> float:
        return self.p if self.p is not None else self.n ** (-self.delta)

    @property
    def failure_cap(self) -> int:
        return self.max_consecutive_failures if self.max_consecutive_failures is not None else 20 * self.n

    def pool_sizes(self) -> tuple[int, int]:
        p = self.prob
        a1 = self.a1_size if self.a1_size is not None else round((1 - p) * 3 * self.n / 7)
        a2 = self.a2_size if self.a2_size is not None else round(3 * self.n / 7)
        return a1, a2


def setup(config: PhaseAConfig, rng: np.random.Generator) -> PhaseAUniverse:
    """Sample the sharable pairs and the removed vertex-color pairs."""
    n, p = config.n, config.prob
    k1, k2 = config.pool_sizes()
    a1 = tuple(range(k1))
    a2 = tuple(range(k1, k1 + k2))
    iu, ju = np.triu_indices(n, 1)
    pick = rng.random(len(iu)) < p
    share = np.zeros((n, n), dtype=bool)
    share[iu[pick], ju[pick]] = True
    share |= share.T
    drop = rng.random((n, k2)) < p
    removed = frozenset((int(v), a2[int(j)]) for v, j in zip(*np.nonzero(drop)))
    return PhaseAUniverse(n, share, a1, a2, removed, p)


@dataclass
class MatchingState:
    universe: PhaseAUniverse
    placed: list[ColoredGadget] = field(default_factory=list)
    used_edges: set[tuple[int, int]] = field(default_factory=set)
    used_pairs: set[tuple[int, int]] = field(default_factory=set)
    coloring: EdgeColoring = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.coloring is None:
            self.coloring = EdgeColoring(self.universe.n)

    def used_pair_bits(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for v, c in self.used_pairs:
            out[v] = out.get(v, 0) | (1 << c)
        return out

    def blocked_matrix(self) -> np.ndarray:
        return self.coloring.mat >= 0


@dataclass(frozen=True)
class Placement:
    accepted: bool
    reason: str = "ok"
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.accepted


def alt_4cycle_check(coloring: EdgeColoring, new_edges) -> "ConflictWitness | None":
    """Witness for an alternating 4-cycle that uses one of ``new_edges``."""
    S = alt_4cycle_through(coloring, new_edges)
    return None if S is None else ConflictWitness("Alt4Cycle", (), S)


def matching_clash(state: MatchingState, g: ColoredGadget) -> bool:
    return any(e in state.used_edges for e, _ in gadget_edges(g)) or bool(hit_pairs(g) & state.used_pairs)


def try_place(state: MatchingState, g: ColoredGadget) -> Placement:
    """Add ``g`` unless it breaks the matching rules, makes an alternating
    4-cycle or creates a (5,8)-violation."""
    if not is_valid(g, state.universe):
        raise DomainError(f"gadget {g} is not valid in this universe")
    if matching_clash(state, g):
        return Placement(False, "matching")
    new = gadget_edges(g)
    w = alt_4cycle_through(state.coloring, new)
    if w is not None:
        return Placement(False, "alt4cycle", w)
    S = would_violate(state.coloring, new, 5, 8)
    if S is not None:
        return Placement(False, "violation", S)
    state.placed.append(g)
    for (a, b), c in new:
        state.used_edges.add((a, b))
        state.coloring.set(a, b, c)
    state.used_pairs |= hit_pairs(g)
    return Placement(True)


@dataclass
class PhaseAStats:
    placed: int = 0
    colored_edges: int = 0
    attempts: int = 0
    rejections: Counter = field(default_factory=Counter)
    class_sizes: dict[int, int] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "placed": self.placed,
            "colored_edges": self.colored_edges,
            "anchor_attempts": self.attempts,
            "rejections": dict(sorted(self.rejections.items())),
            "class_sizes": {str(c): s for c, s in sorted(self.class_sizes.items())},
        }


def _anchor_candidates(state: MatchingState, edge: tuple[int, int]) -> list[ColoredGadget]:
    enum = Enumerator(state.universe, state.blocked_matrix(), state.used_pair_bits())
    return list(enum.anchored(edge))


def run_phase_a(config: PhaseAConfig, universe: PhaseAUniverse | None = None,
                rng: np.random.Generator | None = None):
    """Random greedy packing anchored on kept edges.

    Kept edges are visited in random order. For each still-uncolored edge the
    gadgets through it that respect the matching rules are listed, shuffled,
    and tried one by one (at most ``tries_per_anchor``). The run ends when
    every edge was visited or after ``failure_cap`` anchors in a row placed
    nothing.
    """
    if rng is None:
        rng = np.random.default_rng(config.seed)
    if universe is None:
        universe = setup(config, rng)
    state = MatchingState(universe)
    stats = PhaseAStats()
    edges = universe.kept_edges()
    order = rng.permutation(len(edges))
    fails = 0
    for k in order:
        e = edges[int(k)]
        if state.coloring.is_colored(*e):
            continue
        stats.attempts += 1
        cands = _anchor_candidates(state, e)
        if not cands:
            stats.rejections["no_candidate"] += 1
            placed = False
        else:
            placed = False
            for idx in rng.permutation(len(cands))[: config.tries_per_anchor]:
                res = try_place(state, cands[int(idx)])
                if res:
                    placed = True
                    break
                stats.rejections[res.reason] += 1
        fails = 0 if placed else fails + 1
        if fails >= config.failure_cap:
            break
    stats.placed = len(state.placed)
    stats.colored_edges = state.coloring.num_colored()
    stats.class_sizes = {c: len(state.coloring.color_class(c)) for c in state.coloring.colors()}
    return state.coloring, state, universe, stats


# ---------------------------------------------------------------- structure checks


def class_shape_errors(coloring: EdgeColoring, universe: PhaseAUniverse) -> list[str]:
    """Empty when C_A1 classes are matchings and C_A2 classes are vertex-disjoint 2-paths."""
    errs = []
    a1, a2 = set(universe.a1), set(universe.a2)
    for c in coloring.colors():
        deg = Counter(v for e in coloring.color_class(c) for v in e)
        if c in a1 and max(deg.values()) > 1:
            errs.append(f"color {c} is not a matching")
        elif c in a2:
            if max(deg.values()) > 2:
                errs.append(f"color {c} has a vertex of degree > 2")
            centers = [v for v, d in deg.items() if d == 2]
            if len(coloring.color_class(c)) != 2 * len(centers):
                errs.append(f"color {c} is not a union of vertex-disjoint 2-paths")
        elif c not in a1 | a2:
            errs.append(f"color {c} is not a Phase A color")
    return errs


def recover_gadgets(coloring: EdgeColoring, universe: PhaseAUniverse) -> list[ColoredGadget]:
    """Rebuild the placed gadgets of a Phase A coloring from its color classes."""
    a1, a2 = set(universe.a1), set(universe.a2)
    mat = coloring.mat
    c1_partner: dict[int, int] = {}
    for c in a1:
        for a, b in coloring.color_class(c):
            c1_partner[a], c1_partner[b] = b, a
    halves = {}
    for c in sorted(a2):
        deg = Counter(v for e in coloring.color_class(c) for v in e)
        for x, d in deg.items():
            if d == 2:
                ends = sorted(v for e in coloring.color_class(c) if x in e for v in e if v != x)
                halves[x] = (ends[0], ends[1], c)
    out = []
    for x, (a, b, c2) in halves.items():
        y = c1_partner.get(x)
        if y is None or y not in halves or x > y:
            continue
        z, w, c2p = halves[y]
        c1 = int(mat[x, y])
        g = ColoredGadget((a, b, x, y, z, w), c1, c2, c2p)
        if all(mat[e] == col for e, col in gadget_edges(g)):
            out.append(g.canonical())
    return sorted(out)


# ---------------------------------------------------------------- conflict taxonomy


class ClassificationError(ValueError):
    """A configuration that the conflict taxonomy does not cover."""


@dataclass(frozen=True)
class ConflictWitness:
    kind: str
    gadgets: tuple[ColoredGadget, ...]
    S: tuple[int, ...]


def _edges_in(gadgets, S) -> list[tuple[tuple[int, int], int, int]]:
    """(edge, color, gadget index) for gadget edges with both ends in S."""
    Sset = set(S)
    out = []
    for i, g in enumerate(gadgets):
        for (a, b), c in gadget_edges(g):
            if a in Sset and b in Sset:
                out.append(((a, b), c, i))
    return out


def _alt_cycle(items) -> tuple | None:
    by_edge = {e: (c, i) for e, c, i in items}
    verts = sorted({v for e in by_edge for v in e})
    for quad in combinations(verts, 4):
        a, b, c, d = quad
        for m1, m2 in (
            (((a, b), (c, d)), ((a, c), (b, d))),
            (((a, b), (c, d)), ((a, d), (b, c))),
            (((a, c), (b, d)), ((a, d), (b, c))),
        ):
            es = [canon(*e) for e in m1 + m2]
            if not all(e in by_edge for e in es):
                continue
            x1, x2, y1, y2 = (by_edge[e][0] for e in es)
            if x1 == x2 and y1 == y2 and x1 != y1:
                return quad, [by_edge[e][1] for e in es]
    return None


def _triangle_third(pair_edges, items) -> tuple | None:
    """For a single-gadget monochromatic 2-path, its closing edge from the same gadget."""
    (e, _, gi), (f, _, gj) = pair_edges
    if gi != gj:
        return None
    shared = set(e) & set(f)
    if len(shared) != 1:
        return None
    third = canon(*(set(e) ^ set(f)))
    for h, c, k in items:
        if h == third and k == gi:
            return h, c
    return None


def classify_conflict(gadgets, S) -> ConflictWitness:
    """Name the conflict type realized by ``gadgets`` on the vertex set ``S``.

    ``S`` is a 4-set carrying an alternating 4-cycle or a 5-set with at least
    three repetitions. Alternating 4-cycles are reported first (Type1 when the
    four edges come from four different gadgets, Alt4Cycle otherwise). For a
    5-set, selections of repeated-color edges with exactly three repetitions
    are tried in a fixed order until one matches a type.
    """
    gadgets = tuple(gadgets)
    S = tuple(sorted(S))
    items = _edges_in(gadgets, S)
    cyc = _alt_cycle(items)
    if cyc is not None:
        quad, owners = cyc
        kind = "Type1" if len(set(owners)) == 4 else "Alt4Cycle"
        return ConflictWitness(kind, tuple(gadgets[i] for i in sorted(set(owners))), quad)
    if len(S) != 5:
        raise ClassificationError(f"4-set {S} has no alternating 4-cycle")
    by_color: dict[int, list] = {}
    for it in items:
        by_color.setdefault(it[1], []).append(it)
    reps = sum(len(v) - 1 for v in by_color.values())
    if reps < 3:
        raise ClassificationError(f"{S} has only {reps} repetitions among gadget edges")
    options = []
    for c, its in sorted(by_color.items()):
        if len(its) >= 2:
            subs = [list(s) for k in range(2, len(its) + 1) for s in combinations(its, k)]
            options.append(subs)
    for pick in _selections(options, 3):
        kind = _match_type(pick, items)
        if kind is not None:
            owners = sorted({i for grp in pick for _, _, i in grp})
            return ConflictWitness(kind, tuple(gadgets[i] for i in owners), S)
    raise ClassificationError(f"no conflict type matches the configuration on {S}: {items}")


def _selections(options, target):
    """Choices of at most one edge group per repeated color with exactly ``target`` repetitions."""
    def rec(i, acc, total):
        if total == target:
            yield list(acc)
            return
        if i == len(options) or total > target:
            return
        for sub in options[i]:
            acc.append(sub)
            yield from rec(i + 1, acc, total + len(sub) - 1)
            acc.pop()
        yield from rec(i + 1, acc, total)
    yield from rec(0, [], 0)


def _group_form(grp, items):
    """Describe a same-color group: ('path', third_edge) or ('pair', None) or ('path+edge', third)."""
    edges = [e for e, _, _ in grp]
    if len(grp) == 2:
        if set(edges[0]) & set(edges[1]):
            t = _triangle_third(grp, items)
            return ("path", t) if t is not None else (None, None)
        if grp[0][2] != grp[1][2]:
            return ("pair", None)
        return (None, None)
    if len(grp) == 3:
        for k in range(3):
            two = [grp[j] for j in range(3) if j != k]
            rest = grp[k]
            if set(two[0][0]) & set(two[1][0]):
                t = _triangle_third(two, items)
                if t is None:
                    continue
                path_v = set(two[0][0]) | set(two[1][0])
                if not (set(rest[0]) & path_v) and rest[2] != two[0][2]:
                    return ("path+edge", t)
        return (None, None)
    return (None, None)


def _match_type(pick, items) -> str | None:
    forms = [_group_form(g, items) for g in pick]
    if any(f is None for f, _ in forms):
        return None
    sizes = sorted(len(g) for g in pick)
    if sizes == [2, 3]:
        three = next(f for f in forms if f[0] == "path+edge")
        two = next((f for g, f in zip(pick, forms) if len(g) == 2), None)
        if three and two and two[0] == "pair":
            return "Type2"
        return None
    if sizes != [2, 2, 2]:
        return None
    paths = [(g, f) for g, f in zip(pick, forms) if f[0] == "path"]
    pairs = [(g, f) for g, f in zip(pick, forms) if f[0] == "pair"]
    if len(paths) == 2:
        tri = [set(f[1][0]) | set(g[0][0]) for g, f in paths]
        return "Type4" if len(tri[0] & tri[1]) == 1 else None
    if len(paths) == 1:
        (g, (_, (third, third_color))) = paths[0]
        repeated = {grp[0][1] for grp in pick}
        for grp, _ in pairs:
            if grp[0][1] == third_color:
                return "Type3"
        if third_color not in repeated:
            return "Type5"
        return None
    if len(paths) == 0 and len(pairs) == 3:
        return "Type6"
    return None

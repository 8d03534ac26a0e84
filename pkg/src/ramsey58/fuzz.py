"""Random gadget matchings with planted conflicts, for exercising the conflict taxonomy.

The universe is decided lazily: a pair becomes sharable or kept, and a
vertex-color pair allowed or removed, the first time a gadget needs it.
Every gadget added is therefore valid in the universe that results, and the
gadgets form a matching (edge-disjoint, hit pairs used at most once). The
usual greedy guards against violations are skipped on purpose.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .core import EdgeColoring, alternating_4cycles, find_violations, reps_batch
from .gadget import EDGE_ROLE, ColoredGadget, PhaseAUniverse, gadget_edges, gadget_nonedges, hit_pairs
from .phase_a import classify_conflict


@dataclass
class LazyMatching:
    n: int
    a1: tuple[int, ...]
    a2: tuple[int, ...]
    sharable: dict[tuple[int, int], bool] = field(default_factory=dict)
    allowed: dict[tuple[int, int], bool] = field(default_factory=dict)
    gadgets: list[ColoredGadget] = field(default_factory=list)
    used_pairs: set[tuple[int, int]] = field(default_factory=set)

    def __post_init__(self) -> None:
        self.coloring = EdgeColoring(self.n)

    def _needs(self, g: ColoredGadget):
        s = g.slots
        share = {e: False for e, _ in gadget_edges(g)}
        share.update({e: True for e in gadget_nonedges(g)})
        allow = {hp: True for hp in hit_pairs(g)}
        allow.update({(v, g.c2p): False for v in s[:3]})
        allow.update({(v, g.c2): False for v in s[3:]})
        return share, allow

    def fits(self, g: ColoredGadget) -> bool:
        if len(set(g.slots)) != 6 or g.c2 == g.c2p:
            return False
        if any(self.coloring.is_colored(*e) for e, _ in gadget_edges(g)):
            return False
        share, allow = self._needs(g)
        if any(self.sharable.get(e, want) != want for e, want in share.items()):
            return False
        if any(self.allowed.get(k, want) != want for k, want in allow.items()):
            return False
        return not (hit_pairs(g) & self.used_pairs)

    def add(self, g: ColoredGadget) -> bool:
        if not self.fits(g):
            return False
        share, allow = self._needs(g)
        self.sharable.update(share)
        self.allowed.update(allow)
        self.used_pairs |= hit_pairs(g)
        for (a, b), c in gadget_edges(g):
            self.coloring.set(a, b, c)
        self.gadgets.append(g)
        return True

    def random_gadget(self, rng: np.random.Generator, fixed: dict[int, int] | None = None,
                      colors: tuple[int, int, int] | None = None) -> ColoredGadget:
        slots = [-1] * 6
        for k, v in (fixed or {}).items():
            slots[k] = v
        free = [v for v in rng.permutation(self.n) if v not in slots]
        for k in range(6):
            if slots[k] < 0:
                slots[k] = int(free.pop())
        if colors is None:
            c2, c2p = rng.choice(self.a2, 2, replace=False)
            colors = (int(rng.choice(self.a1)), int(c2), int(c2p))
        return ColoredGadget(tuple(slots), *colors)

    def universe(self) -> PhaseAUniverse:
        """Freeze the decisions; undecided pairs become kept and allowed."""
        share = [e for e, s in self.sharable.items() if s]
        removed = [k for k, a in self.allowed.items() if not a]
        return PhaseAUniverse.from_sets(self.n, share, self.a1, self.a2, removed)


def _reps(col: EdgeColoring, S) -> int:
    return int(reps_batch(col.mat, np.array([sorted(S)], dtype=np.int64))[0])


def _score(colors: list[int]) -> int:
    return 16 * (len(colors) - len(set(colors))) + len(colors)


_TRIANGLES = ((0, 1, 2), (3, 4, 5))


def _candidate(m: LazyMatching, rng: np.random.Generator, S: tuple[int, ...], present: list[int],
               open_pairs: list[tuple[int, int]]) -> ColoredGadget | None:
    """A gadget meeting S in one edge (or one triangle) on pairs still open to coloring.

    Usually the edge in S reuses a color already present in S.
    """
    c1 = int(rng.choice(m.a1))
    c2, c2p = (int(x) for x in rng.choice(m.a2, 2, replace=False))
    role = int(rng.integers(3))
    if present and rng.random() < 0.8:
        c = int(rng.choice(present))
        if c in m.a1:
            c1, role = c, 0
        elif rng.random() < 0.5:
            c2, c2p, role = c, (c2p if c2p != c else c2), 1
        else:
            c2, c2p, role = (c2 if c2 != c else c2p), c, 2
    if rng.random() < 0.25:
        tri = _TRIANGLES[0 if role == 1 else 1 if role == 2 else int(rng.integers(2))]
        verts = [int(x) for x in rng.permutation(S)[:3]]
        if not all(tuple(sorted(p)) in open_pairs for p in combinations(verts, 2)):
            return None
        fixed = dict(zip(tri, verts))
    else:
        a, b = open_pairs[int(rng.integers(len(open_pairs)))]
        if rng.random() < 0.5:
            a, b = b, a
        slots = [e for e, r in EDGE_ROLE.items() if r == role]
        i, j = slots[int(rng.integers(len(slots)))]
        fixed = {i: a, j: b}
    outside = [int(v) for v in rng.permutation(m.n) if v not in S]
    for k in range(6):
        if k not in fixed:
            fixed[k] = outside.pop()
    return ColoredGadget(tuple(fixed[k] for k in range(6)), c1, c2, c2p)


def plant(m: LazyMatching, rng: np.random.Generator, steps: int = 10, width: int = 150) -> tuple[int, ...]:
    """Add gadgets through a random 5-set, each a random improving one among ``width`` samples.

    Improving means more repetitions (or, failing that, more colored edges)
    inside the 5-set. Stops at three repetitions or after ``steps`` gadgets.
    """
    S = tuple(sorted(int(x) for x in rng.choice(m.n, 5, replace=False)))
    Sset = set(S)
    for _ in range(steps):
        inside = [c for a, b in combinations(S, 2) if (c := m.coloring.get(a, b)) is not None]
        if len(inside) - len(set(inside)) >= 3:
            break
        base = _score(inside)
        present = sorted(set(inside))
        open_pairs = [(a, b) for a, b in combinations(S, 2)
                      if not m.coloring.is_colored(a, b) and not m.sharable.get((a, b), False)]
        if not open_pairs:
            break
        better = []
        for _ in range(width):
            g = _candidate(m, rng, S, present, open_pairs)
            if g is None:
                continue
            new = [c for (a, b), c in gadget_edges(g) if a in Sset and b in Sset]
            sc = _score(inside + new)
            if sc > base and m.fits(g):
                better.append((sc >= base + 16, g))
        if not better:
            break
        if any(r for r, _ in better):
            better = [x for x in better if x[0]]
        m.add(better[int(rng.integers(len(better)))][1])
    return S


def random_instance(n: int, rng: np.random.Generator, background: int = 8, plants: int = 2,
                    k1: int = 3, k2: int = 4, attempts: int = 4) -> LazyMatching:
    """A valid gadget matching on K_n: planted dense 5-sets, then random background gadgets.

    Each plant gets up to ``attempts`` fresh 5-sets to reach three repetitions.
    """
    m = LazyMatching(n, tuple(range(k1)), tuple(range(k1, k1 + k2)))
    for _ in range(plants):
        for _ in range(attempts):
            if _reps(m.coloring, plant(m, rng)) >= 3:
                break
    added = 0
    for _ in range(background * 4):
        if added >= background:
            break
        added += m.add(m.random_gadget(rng))
    return m


def conflicts(m: LazyMatching) -> list[tuple[int, ...]]:
    """Every (5,8)-violating 5-set and every alternating 4-cycle of the union coloring."""
    return find_violations(m.coloring, 5, 8) + alternating_4cycles(m.coloring)


def classify_all(m: LazyMatching):
    return [classify_conflict(m.gadgets, S) for S in conflicts(m)]


def valid_background(n: int, rng: np.random.Generator, gadgets: int = 5, k1: int = 3, k2: int = 4,
                     tries: int = 50) -> LazyMatching:
    """A random gadget matching with no violation and no alternating 4-cycle."""
    for _ in range(tries):
        m = LazyMatching(n, tuple(range(k1)), tuple(range(k1, k1 + k2)))
        for _ in range(gadgets * 6):
            g = m.random_gadget(rng)
            if not m.fits(g):
                continue
            trial = m.coloring.copy()
            for (a, b), c in gadget_edges(g):
                trial.set(a, b, c)
            if find_violations(trial, 5, 8, limit=1) or alternating_4cycles(trial):
                continue
            m.add(g)
            if len(m.gadgets) >= gadgets:
                break
        return m
    raise RuntimeError("no background found")


def random_d_members(m: LazyMatching, classes, rng: np.random.Generator, size: int | None = None):
    """Fresh-color assignments on uncolored pairs of one random 5-set, paired up by color.

    The 5-set is biased towards sets already holding Phase A repetitions.
    """
    n = m.n
    best = None
    for _ in range(int(rng.choice([1, 1, 8]))):
        S = tuple(sorted(int(x) for x in rng.choice(n, 5, replace=False)))
        r = _reps(m.coloring, S)
        if best is None or r > best[0]:
            best = (r, S)
    S = best[1]
    free = [(a, b) for a, b in combinations(S, 2) if classes.of((a, b)) != 0]
    if len(free) < 2:
        return []
    pairs = int(rng.choice([1, 2, 2, 3, 3])) if size is None else size // 2
    members = []
    left = list(free)
    for k in range(pairs):
        order = [left[int(i)] for i in rng.permutation(len(left))]
        if len(order) < 2:
            break
        e = order[0]
        same = [f for f in order[1:] if classes.of(f) == classes.of(e)]
        disjoint = [f for f in same if not set(f) & set(e)]
        pool = disjoint if disjoint and rng.random() < 0.8 else same
        if not pool:
            break
        f = pool[0]
        members += [(e, 10_000 + k), (f, 10_000 + k)]
        left = [x for x in left if x not in (e, f)]
    return members

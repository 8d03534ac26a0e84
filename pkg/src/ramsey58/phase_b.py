"""Phase B: color the leftover edges from two fresh pools without creating violations.

An assignment of color c to edge e is accepted when, with f ranging over
the edges already holding c:

* no f touches e (every Phase B class is a matching);
* the 4-set e + f carries at most one repetition;
* every 5-set e + f + t carries at most two repetitions.

On a valid Phase A coloring this is exactly freeness from the conflict
system D built from the S-families (checked literally by the ``is_*``
predicates below), and it implies the final coloring is a (5,8)-coloring.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from math import log

import numpy as np

from .core import DomainError, EdgeColoring, canon, reps_batch
from .sfamily import NONSHARABLE, SHARABLE, SFamilyIndex, UncoloredClasses


class PhaseBFailure(RuntimeError):
    def __init__(self, message: str, edge=None, blocked=()):
        super().__init__(message)
        self.edge = edge
        self.blocked = tuple(blocked)


def default_d_b(n: int) -> int:
    return max(1, round(n * log(n) ** (-0.1)))


@dataclass
class PhaseBConfig:
    n: int
    d_b: int | None = None
    seed: int = 0
    max_restarts: int = 50
    strategy: str = "random-greedy-restart"

    def __post_init__(self) -> None:
        if self.d_b is None:
            self.d_b = default_d_b(self.n)
        if self.d_b < 1:
            raise DomainError("d_B must be at least 1")
        if self.strategy not in ("random-greedy-restart", "backtracking"):
            raise DomainError(f"unknown strategy {self.strategy!r}")


@dataclass
class ListAssignment:
    b1: tuple[int, ...]
    b2: tuple[int, ...]
    classes: UncoloredClasses

    def pool(self, e) -> tuple[int, ...]:
        k = self.classes.of(canon(*e))
        if k == SHARABLE:
            return self.b1
        if k == NONSHARABLE:
            return self.b2
        raise DomainError(f"edge {e} is not uncolored")

    def edges(self) -> list[tuple[int, int]]:
        return self.classes.edges()


def build_lists(classes: UncoloredClasses, config: PhaseBConfig, first_color: int) -> ListAssignment:
    """Two disjoint pools of 2*d_B fresh colors starting at ``first_color``."""
    size = 2 * config.d_b
    b1 = tuple(range(first_color, first_color + size))
    b2 = tuple(range(first_color + size, first_color + 2 * size))
    return ListAssignment(b1, b2, classes)


class _Checker:
    def __init__(self, coloring: EdgeColoring):
        self.col = coloring
        self.n = coloring.n
        self.touch = [set() for _ in range(self.n)]
        self.classes: dict[int, list[tuple[int, int]]] = {}

    def ok(self, e: tuple[int, int], c: int) -> bool:
        u, v = e
        if c in self.touch[u] or c in self.touch[v]:
            return False
        fs = self.classes.get(c)
        if not fs:
            return True
        mat = self.col.mat
        mat[u, v] = mat[v, u] = c
        try:
            quads = np.array([(u, v) + f for f in fs], dtype=np.int64)
            if (reps_batch(mat, quads) > 1).any():
                return False
            n = self.n
            rows = []
            for f in fs:
                base = (u, v) + f
                rest = np.setdiff1d(np.arange(n), base)
                rows.append(np.hstack([np.tile(base, (len(rest), 1)), rest[:, None]]))
            return not (reps_batch(mat, np.vstack(rows)) > 2).any()
        finally:
            mat[u, v] = mat[v, u] = -1

    def assign(self, e, c) -> None:
        self.col.set(*e, c)
        self.touch[e[0]].add(c)
        self.touch[e[1]].add(c)
        self.classes.setdefault(c, []).append(e)

    def release(self, e, c) -> None:
        self.col.unset(*e)
        self.touch[e[0]].discard(c)
        self.touch[e[1]].discard(c)
        self.classes[c].remove(e)


def admissible(phase_a: EdgeColoring, members) -> bool:
    """Whether the (edge, color) assignments pass the incremental check one after another."""
    chk = _Checker(phase_a.copy())
    for e, c in members:
        e = canon(*e)
        if not chk.ok(e, c):
            return False
        chk.assign(e, c)
    return True


@dataclass
class PhaseBReport:
    restarts: int = 0
    colors_used_b1: int = 0
    colors_used_b2: int = 0
    tries_histogram: Counter = field(default_factory=Counter)
    stuck_edge: tuple[int, int] | None = None

    def as_dict(self) -> dict:
        return {
            "restarts": self.restarts,
            "colors_used_b1": self.colors_used_b1,
            "colors_used_b2": self.colors_used_b2,
            "blocked_colors_before_success": {str(k): v for k, v in sorted(self.tries_histogram.items())},
            "stuck_edge": list(self.stuck_edge) if self.stuck_edge else None,
        }


def assign_colors(partial: EdgeColoring, lists: ListAssignment, config: PhaseBConfig,
                  rng: np.random.Generator | None = None, report: PhaseBReport | None = None) -> EdgeColoring:
    """Complete ``partial`` with colors from the lists, avoiding every conflict of D."""
    if rng is None:
        rng = np.random.default_rng(config.seed)
    report = report if report is not None else PhaseBReport()
    edges = lists.edges()
    for e in edges:
        if partial.is_colored(*e):
            raise DomainError(f"edge {e} is colored but listed as uncolored")
    if config.strategy == "backtracking":
        out = _backtrack(partial, lists, edges, report)
    else:
        out = _greedy_restart(partial, lists, edges, config, rng, report)
    used = set(out.colors())
    report.colors_used_b1 = len(used & set(lists.b1))
    report.colors_used_b2 = len(used & set(lists.b2))
    return out


def _greedy_restart(partial, lists, edges, config, rng, report) -> EdgeColoring:
    last = None
    for attempt in range(config.max_restarts + 1):
        col = partial.copy()
        chk = _Checker(col)
        hist: Counter = Counter()
        stuck = None
        for k in rng.permutation(len(edges)):
            e = edges[int(k)]
            pool = lists.pool(e)
            tried = 0
            for idx in rng.permutation(len(pool)):
                c = pool[int(idx)]
                if chk.ok(e, c):
                    chk.assign(e, c)
                    break
                tried += 1
            else:
                stuck = e
                break
            hist[tried] += 1
        if stuck is None:
            report.restarts = attempt
            report.tries_histogram = hist
            return col
        last = stuck
    report.restarts = config.max_restarts
    report.stuck_edge = last
    raise PhaseBFailure(
        f"no conflict-free color for edge {last} after {config.max_restarts} restarts",
        last, lists.pool(last) if last else (),
    )


def _backtrack(partial, lists, edges, report) -> EdgeColoring:
    """Most-constrained-edge-first search with chronological backtracking."""
    col = partial.copy()
    chk = _Checker(col)
    todo = set(edges)
    stack: list[tuple[tuple[int, int], int, list[int]]] = []
    steps = 0
    while todo:
        best, opts = None, None
        for e in sorted(todo):
            cand = [c for c in lists.pool(e) if chk.ok(e, c)]
            if opts is None or len(cand) < len(opts):
                best, opts = e, cand
                if not cand:
                    break
        while not opts:
            if not stack:
                report.stuck_edge = best
                raise PhaseBFailure(f"backtracking exhausted at edge {best}", best, lists.pool(best))
            e, c, rest = stack.pop()
            chk.release(e, c)
            todo.add(e)
            best, opts = e, [d for d in rest if chk.ok(e, d)]
        chk.assign(best, opts[0])
        todo.discard(best)
        stack.append((best, opts[0], opts[1:]))
        steps += 1
    report.tries_histogram = Counter({0: steps})
    return col


# ---------------------------------------------------------------- conflict system D


@dataclass(frozen=True)
class DConflict:
    kind: str
    members: tuple[tuple[tuple[int, int], int], ...]


def _same_class(sfam: SFamilyIndex, e, f) -> bool:
    return sfam.classes.of(canon(*e)) == sfam.classes.of(canon(*f)) != 0


def is_2_conflict(e, f, c, coloring: EdgeColoring, classes: UncoloredClasses, sfam: SFamilyIndex) -> bool:
    e, f = canon(*e), canon(*f)
    if e == f:
        raise DomainError("a 2-conflict needs two distinct edges")
    if classes.of(e) != classes.of(f):
        raise DomainError(f"edges {e} and {f} lie in different classes")
    if set(e) & set(f):
        return True
    for x, y in ((e, f), (f, e)):
        if any(True for _ in sfam.supersets(y, x, 4, 1)) or any(True for _ in sfam.supersets(y, x, 5, 2)):
            return True
    return False


def _pairs_ok(groups, sfam) -> None:
    colors = [c for c, _ in groups]
    if len(set(colors)) != len(colors):
        raise DomainError("color pairs must use distinct colors")
    for c, (x, y) in groups:
        if x == y:
            raise DomainError("a color pair needs two distinct edges")
        if not _same_class(sfam, x, y):
            raise DomainError(f"edges {x}, {y} colored {c} are not in one uncolored class")


def _group(members) -> list[tuple[int, tuple]]:
    by: dict[int, list] = {}
    for e, c in members:
        by.setdefault(c, []).append(canon(*e))
    out = []
    for c, es in by.items():
        if len(es) != 2:
            raise DomainError(f"color {c} appears {len(es)} times; expected pairs")
        out.append((c, tuple(es)))
    return out


def _in_family(members, sizes, sfam) -> bool:
    edges = [canon(*e) for e, _ in members]
    U = set(v for e in edges for v in e)
    for anchor in edges:
        for a, b in sizes:
            if len(U) <= a and any(True for _ in sfam.supersets(U, anchor, a, b)):
                return True
    return False


def is_4_conflict(quad, coloring: EdgeColoring, sfam: SFamilyIndex) -> bool:
    groups = _group(quad)
    if len(groups) != 2 or len(quad) != 4:
        raise DomainError("a 4-conflict has two color pairs")
    _pairs_ok(groups, sfam)
    return _in_family(quad, ((4, 0), (5, 1)), sfam)


def is_6_conflict(sext, coloring: EdgeColoring, sfam: SFamilyIndex) -> bool:
    if len(sext) != 6:
        return False
    groups = _group(sext)
    if len(groups) != 3:
        raise DomainError("a 6-conflict has three color pairs")
    _pairs_ok(groups, sfam)
    return _in_family(sext, ((5, 0),), sfam)


def is_conflict(members, coloring, sfam) -> bool:
    """Whether ``members`` (edge, color) pairs form a conflict of D by themselves."""
    members = tuple(members)
    try:
        groups = _group(members)
    except DomainError:
        return False
    if any(not _same_class(sfam, x, y) for _, (x, y) in groups):
        return False
    if len(members) == 2:
        (c, (e, f)), = groups
        return is_2_conflict(e, f, c, coloring, sfam.classes, sfam)
    if len(members) == 4:
        return is_4_conflict(members, coloring, sfam)
    if len(members) == 6:
        return is_6_conflict(members, coloring, sfam)
    return False


def _sub_conflicts(members, coloring, sfam):
    members = tuple(members)
    for size in (2, 4, 6):
        for sub in combinations(members, size):
            if is_conflict(sub, coloring, sfam):
                yield sub


def minimal_conflicts(witness: DConflict, coloring: EdgeColoring, sfam: SFamilyIndex) -> bool:
    """True when no proper subset of the witness is itself a conflict of D."""
    members = witness.members
    for size in (2, 4):
        if size >= len(members):
            break
        for sub in combinations(members, size):
            if is_conflict(sub, coloring, sfam):
                return False
    return True


def violates_d(members, coloring, sfam) -> bool:
    return any(True for _ in _sub_conflicts(members, coloring, sfam))


def contains_minimal(members, coloring, sfam) -> bool:
    for sub in _sub_conflicts(members, coloring, sfam):
        if minimal_conflicts(DConflict({2: "two", 4: "four", 6: "six"}[len(sub)], sub), coloring, sfam):
            return True
    return False


def d_conflicts_in(phase_a: EdgeColoring, final: EdgeColoring, classes: UncoloredClasses) -> list[tuple]:
    """Post-hoc scan: every conflict of D among the Phase B assignments of ``final``."""
    sfam = SFamilyIndex(phase_a, classes)
    by_color: dict[int, list] = {}
    for e in classes.edges():
        c = final.get(*e)
        if c is not None:
            by_color.setdefault(c, []).append(e)
    pairs = [(c, e, f) for c, es in by_color.items() for e, f in combinations(sorted(es), 2)]
    found = []
    for c, e, f in pairs:
        if is_2_conflict(e, f, c, phase_a, classes, sfam):
            found.append(((e, c), (f, c)))
    # Larger conflicts live on one 5-set; index disjoint pairs by their 4 vertices.
    support: dict[frozenset, list] = {}
    for pr in pairs:
        U = frozenset(pr[1] + pr[2])
        if len(U) == 4:
            support.setdefault(U, []).append(pr)
    seen = set()
    for U4 in support:
        for t in range(final.n):
            if t in U4:
                continue
            U = U4 | {t}
            key = tuple(sorted(U))
            if key in seen:
                continue
            seen.add(key)
            inside = [pr for v in key for pr in support.get(U - {v}, ())]
            for x, y in combinations(inside, 2):
                if x[0] != y[0]:
                    quad = ((x[1], x[0]), (x[2], x[0]), (y[1], y[0]), (y[2], y[0]))
                    if is_4_conflict(quad, phase_a, sfam):
                        found.append(quad)
            for x, y, z in combinations(inside, 3):
                if len({x[0], y[0], z[0]}) == 3:
                    sext = tuple((g, pr[0]) for pr in (x, y, z) for g in pr[1:])
                    if is_6_conflict(sext, phase_a, sfam):
                        found.append(sext)
    return sorted(set(tuple(sorted(m)) for m in found))

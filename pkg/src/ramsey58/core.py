"""Partial edge colorings of K_n, color repetitions and (p,q)-violation search."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

UNCOLORED = -1


class DomainError(ValueError):
    """An argument lies outside the documented domain of an operation."""


class ParseError(ValueError):
    """A coloring or universe file could not be read."""


def canon(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("RF_THREADS", "1")))
    except ValueError:
        return 1


def q_lin(p: int) -> int:
    """Smallest q for which f(n, p, q) grows linearly in n."""
    if p < 3:
        raise DomainError(f"q_lin needs p >= 3, got {p}")
    return comb(p, 2) - p + 3


def violation_threshold(p: int, q: int) -> int:
    """Number of repetitions on a p-set that makes it a (p,q)-violation."""
    if p < 2:
        raise DomainError(f"p must be at least 2, got {p}")
    if not 1 <= q <= comb(p, 2):
        raise DomainError(f"q must lie in [1, C(p,2)], got q={q} for p={p}")
    return comb(p, 2) - q + 1


class EdgeColoring:
    """A partial assignment of color ids to the edges of K_n.

    Colors live in a symmetric int matrix with ``UNCOLORED`` for missing
    edges; a per-color edge index is kept in sync for fast class lookups.
    """

    def __init__(self, n: int):
        if n < 0:
            raise DomainError("n must be non-negative")
        self.n = n
        self.mat = np.full((n, n), UNCOLORED, dtype=np.int32)
        self._classes: dict[int, set[tuple[int, int]]] = {}

    def _check(self, u: int, v: int) -> tuple[int, int]:
        if u == v or not (0 <= u < self.n and 0 <= v < self.n):
            raise DomainError(f"invalid edge ({u},{v}) for n={self.n}")
        return canon(u, v)

    def get(self, u: int, v: int) -> int | None:
        c = int(self.mat[u, v])
        return None if c == UNCOLORED else c

    def is_colored(self, u: int, v: int) -> bool:
        return self.mat[u, v] != UNCOLORED

    def set(self, u: int, v: int, c: int) -> None:
        e = self._check(u, v)
        if c < 0:
            raise DomainError(f"color ids are non-negative, got {c}")
        old = int(self.mat[u, v])
        if old != UNCOLORED:
            self._classes[old].discard(e)
            if not self._classes[old]:
                del self._classes[old]
        self.mat[u, v] = self.mat[v, u] = c
        self._classes.setdefault(c, set()).add(e)

    def unset(self, u: int, v: int) -> None:
        e = self._check(u, v)
        old = int(self.mat[u, v])
        if old == UNCOLORED:
            return
        self._classes[old].discard(e)
        if not self._classes[old]:
            del self._classes[old]
        self.mat[u, v] = self.mat[v, u] = UNCOLORED

    def color_class(self, c: int) -> set[tuple[int, int]]:
        return self._classes.get(c, set())

    def colors(self) -> list[int]:
        return sorted(self._classes)

    def num_colors(self) -> int:
        return len(self._classes)

    def edges(self) -> Iterator[tuple[tuple[int, int], int]]:
        iu, ju = np.triu_indices(self.n, 1)
        vals = self.mat[iu, ju]
        for a, b, c in zip(iu[vals >= 0], ju[vals >= 0], vals[vals >= 0]):
            yield (int(a), int(b)), int(c)

    def num_colored(self) -> int:
        return sum(len(s) for s in self._classes.values())

    def is_full(self) -> bool:
        return self.num_colored() == comb(self.n, 2)

    def uncolored_edges(self) -> list[tuple[int, int]]:
        iu, ju = np.triu_indices(self.n, 1)
        mask = self.mat[iu, ju] == UNCOLORED
        return [(int(a), int(b)) for a, b in zip(iu[mask], ju[mask])]

    def copy(self) -> "EdgeColoring":
        out = EdgeColoring(self.n)
        out.mat = self.mat.copy()
        out._classes = {c: set(s) for c, s in self._classes.items()}
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EdgeColoring) and self.n == other.n and bool(
            np.array_equal(self.mat, other.mat)
        )

    @classmethod
    def from_edges(cls, n: int, items: Iterable[tuple[tuple[int, int], int]]) -> "EdgeColoring":
        col = cls(n)
        for (u, v), c in items:
            col.set(u, v, c)
        return col


# ---------------------------------------------------------------- file I/O


def dumps_coloring(col: EdgeColoring) -> str:
    lines = [f"{col.n} {col.num_colors()}"]
    lines += [f"{u} {v} {c}" for (u, v), c in col.edges()]
    return "\n".join(lines) + "\n"


def save_coloring(col: EdgeColoring, path: str | Path) -> None:
    Path(path).write_text(dumps_coloring(col), encoding="utf-8")


def loads_coloring(text: str) -> EdgeColoring:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise ParseError("empty coloring file")
    try:
        n, k = (int(t) for t in rows[0])
    except ValueError as exc:
        raise ParseError(f"bad header {' '.join(rows[0])!r}; expected 'n k'") from exc
    if n < 0:
        raise ParseError("negative vertex count")
    col = EdgeColoring(n)
    for lineno, row in enumerate(rows[1:], start=2):
        try:
            u, v, c = (int(t) for t in row)
        except ValueError as exc:
            raise ParseError(f"line {lineno}: expected 'u v c', got {' '.join(row)!r}") from exc
        if not (0 <= u < v < n) or c < 0:
            raise ParseError(f"line {lineno}: need 0 <= u < v < n and c >= 0")
        if col.is_colored(u, v):
            raise ParseError(f"line {lineno}: duplicate pair ({u},{v})")
        col.set(u, v, c)
    if col.num_colors() != k:
        raise ParseError(f"header declares {k} colors but {col.num_colors()} are used")
    return col


def load_coloring(path: str | Path) -> EdgeColoring:
    return loads_coloring(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------- repetitions


@dataclass(frozen=True)
class RepetitionReport:
    subset: tuple[int, ...]
    colored_edges: int
    distinct_colors: int

    @property
    def repetitions(self) -> int:
        return self.colored_edges - self.distinct_colors


def _subset(col: EdgeColoring, S: Iterable[int]) -> tuple[int, ...]:
    S = tuple(sorted(set(int(v) for v in S)))
    for v in S:
        if not 0 <= v < col.n:
            raise DomainError(f"vertex {v} out of range for n={col.n}")
    return S


def repetitions(col: EdgeColoring, S: Iterable[int]) -> RepetitionReport:
    S = _subset(col, S)
    cs = [col.mat[a, b] for a, b in combinations(S, 2) if col.mat[a, b] != UNCOLORED]
    return RepetitionReport(S, len(cs), len(set(cs)))


def is_violation(col: EdgeColoring, S: Iterable[int], p: int, q: int) -> bool:
    S = _subset(col, S)
    if len(S) != p:
        raise DomainError(f"|S| = {len(S)} but p = {p}")
    return repetitions(col, S).repetitions >= violation_threshold(p, q)


@lru_cache(maxsize=64)
def _pair_index(p: int) -> tuple[np.ndarray, np.ndarray]:
    ii, jj = np.triu_indices(p, 1)
    return ii, jj


def reps_batch(mat: np.ndarray, sets: np.ndarray) -> np.ndarray:
    """Repetition counts for each row of an (m, p) array of vertex sets."""
    if len(sets) == 0:
        return np.zeros(0, dtype=np.int64)
    ii, jj = _pair_index(sets.shape[1])
    s = np.sort(mat[sets[:, ii], sets[:, jj]], axis=1)
    colored = s >= 0
    x = colored.sum(axis=1)
    y = colored[:, 0].astype(np.int64) + ((s[:, 1:] != s[:, :-1]) & colored[:, 1:]).sum(axis=1)
    return x - y


@lru_cache(maxsize=256)
def combo_array(m: int, k: int) -> np.ndarray:
    """All k-subsets of range(m) in lexicographic order, as an int array."""
    if k < 0 or k > m:
        return np.zeros((0, max(k, 0)), dtype=np.int64)
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    arr = np.fromiter(
        (x for c in combinations(range(m), k) for x in c), dtype=np.int64, count=comb(m, k) * k
    )
    arr = arr.reshape(-1, k)
    arr.setflags(write=False)
    return arr


def _scan_first(mat: np.ndarray, n: int, p: int, t: int, a: int, limit: int | None) -> list[tuple[int, ...]]:
    rest = combo_array(n - a - 1, p - 1)
    out: list[tuple[int, ...]] = []
    step = 200_000
    for lo in range(0, len(rest), step):
        block = rest[lo : lo + step] + (a + 1)
        sets = np.hstack([np.full((len(block), 1), a, dtype=np.int64), block])
        hit = np.nonzero(reps_batch(mat, sets) >= t)[0]
        out.extend(tuple(int(x) for x in sets[i]) for i in hit)
        if limit is not None and len(out) >= limit:
            break
    return out


def find_violations(col: EdgeColoring, p: int, q: int, limit: int | None = None) -> list[tuple[int, ...]]:
    """All p-subsets that are (p,q)-violations, in lexicographic order.

    Scans every p-subset. With ``limit`` the scan stops once that many
    violations are known. RF_THREADS > 1 spreads first vertices over threads.
    """
    t = violation_threshold(p, q)
    n = col.n
    if n < p:
        return []
    firsts = range(n - p + 1)
    found: list[tuple[int, ...]] = []
    workers = thread_count()
    if workers > 1 and limit is None:
        with ThreadPoolExecutor(workers) as pool:
            for part in pool.map(lambda a: _scan_first(col.mat, n, p, t, a, None), firsts):
                found.extend(part)
        return found
    for a in firsts:
        found.extend(_scan_first(col.mat, n, p, t, a, None if limit is None else limit - len(found)))
        if limit is not None and len(found) >= limit:
            return found[:limit]
    return found


def core_sets(mat: np.ndarray, n: int, p: int, core: Sequence[int]) -> np.ndarray:
    """All p-subsets of [0,n) containing ``core``, rows sorted."""
    core = sorted(set(core))
    k = p - len(core)
    if k < 0:
        return np.zeros((0, p), dtype=np.int64)
    others = np.array([v for v in range(n) if v not in core], dtype=np.int64)
    ext = others[combo_array(len(others), k)]
    sets = np.hstack([np.tile(np.array(core, dtype=np.int64), (len(ext), 1)), ext])
    return np.sort(sets, axis=1)


def _violations_through_cores(
    mat: np.ndarray, n: int, p: int, t: int, cores: Iterable[tuple[int, ...]]
) -> set[tuple[int, ...]]:
    found: set[tuple[int, ...]] = set()
    seen: set[tuple[int, ...]] = set()
    for core in cores:
        key = tuple(sorted(set(core)))
        if key in seen or len(key) > p:
            continue
        seen.add(key)
        sets = core_sets(mat, n, p, key)
        for i in np.nonzero(reps_batch(mat, sets) >= t)[0]:
            found.add(tuple(int(x) for x in sets[i]))
    return found


def find_violations_fast(col: EdgeColoring, p: int, q: int) -> list[tuple[int, ...]]:
    """Same result as :func:`find_violations`, built from same-color edge pairs.

    A set with at least one repetition contains two edges of one color, so
    only p-sets around such pairs are examined.
    """
    t = violation_threshold(p, q)
    cores = []
    for c in col.colors():
        cls = sorted(col.color_class(c))
        for e, f in combinations(cls, 2):
            cores.append(tuple(sorted(set(e) | set(f))))
    return sorted(_violations_through_cores(col.mat, col.n, p, t, cores))


def would_violate(
    col: EdgeColoring, new_edges: Sequence[tuple[tuple[int, int], int]], p: int, q: int
) -> tuple[int, ...] | None:
    """Smallest p-set that would be a violation after adding ``new_edges``.

    Assumes the current coloring has no (p,q)-violation. Any new violation
    must then contain a new edge together with another edge of its color,
    so only p-sets around such pairs are scanned.
    """
    t = violation_threshold(p, q)
    seen: set[tuple[int, int]] = set()
    for (u, v), c in new_edges:
        e = canon(u, v)
        if u == v or not (0 <= u < col.n and 0 <= v < col.n):
            raise DomainError(f"invalid edge ({u},{v})")
        if col.is_colored(*e):
            raise DomainError(f"edge {e} is already colored")
        if e in seen:
            raise DomainError(f"edge {e} listed twice")
        if c < 0:
            raise DomainError("color ids are non-negative")
        seen.add(e)
    mat = col.mat.copy()
    for (u, v), c in new_edges:
        mat[u, v] = mat[v, u] = c
    by_color: dict[int, list[tuple[int, int]]] = {}
    for (u, v), c in new_edges:
        by_color.setdefault(c, []).append(canon(u, v))
    cores = []
    for c, news in by_color.items():
        partners = list(col.color_class(c)) + news
        for e in news:
            for f in partners:
                if f != e:
                    cores.append(tuple(sorted(set(e) | set(f))))
    found = _violations_through_cores(mat, col.n, p, t, cores)
    return min(found) if found else None


# ---------------------------------------------------------------- components

SHAPES = ("isolated-edge", "2-path", "3-path", "3-star", "triangle", "other")


@dataclass(frozen=True)
class MonoComponent:
    color: int
    edges: tuple[tuple[int, int], ...]
    shape: str

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted({v for e in self.edges for v in e}))


def classify_shape(edges: Sequence[tuple[int, int]]) -> str:
    deg: dict[int, int] = {}
    for u, v in edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    ds = sorted(deg.values())
    m = len(edges)
    if m == 1:
        return "isolated-edge"
    if m == 2:
        return "2-path"
    if m == 3 and ds == [1, 1, 2, 2]:
        return "3-path"
    if m == 3 and ds == [1, 1, 1, 3]:
        return "3-star"
    if m == 3 and ds == [2, 2, 2]:
        return "triangle"
    return "other"


def monochromatic_components(col: EdgeColoring) -> list[MonoComponent]:
    """Maximal connected single-color pieces, sorted by (smallest edge, color)."""
    comps = []
    for c in col.colors():
        adj: dict[int, list[tuple[int, int]]] = {}
        for e in col.color_class(c):
            for v in e:
                adj.setdefault(v, []).append(e)
        seen: set[tuple[int, int]] = set()
        for start in sorted(col.color_class(c)):
            if start in seen:
                continue
            stack, piece = [start], []
            seen.add(start)
            while stack:
                e = stack.pop()
                piece.append(e)
                for v in e:
                    for f in adj[v]:
                        if f not in seen:
                            seen.add(f)
                            stack.append(f)
            piece.sort()
            comps.append(MonoComponent(c, tuple(piece), classify_shape(piece)))
    comps.sort(key=lambda m: (m.edges[0], m.color))
    return comps


# ---------------------------------------------------------------- alternating 4-cycles


def alternating_4cycles(col: EdgeColoring) -> list[tuple[int, ...]]:
    """Every 4-set carrying a 4-cycle whose edges alternate between two colors."""
    n = col.n
    if n < 4:
        return []
    sets = combo_array(n, 4)
    m = col.mat
    a, b, c, d = sets[:, 0], sets[:, 1], sets[:, 2], sets[:, 3]
    ab, cd, ac, bd, ad, bc = m[a, b], m[c, d], m[a, c], m[b, d], m[a, d], m[b, c]
    mono1 = (ab >= 0) & (ab == cd)
    mono2 = (ac >= 0) & (ac == bd)
    mono3 = (ad >= 0) & (ad == bc)
    hit = (mono1 & mono2 & (ab != ac)) | (mono1 & mono3 & (ab != ad)) | (mono2 & mono3 & (ac != ad))
    return [tuple(int(x) for x in s) for s in sets[hit]]


def alt_4cycle_through(col: EdgeColoring, new_edges: Sequence[tuple[tuple[int, int], int]]) -> tuple[int, ...] | None:
    """A 4-set whose alternating 4-cycle uses a new edge, after adding ``new_edges``."""
    mat = col.mat.copy()
    classes: dict[int, set[tuple[int, int]]] = {}
    for (u, v), c in new_edges:
        mat[u, v] = mat[v, u] = c
        classes.setdefault(c, set(col.color_class(c))).add(canon(u, v))
    best = None
    for (u, v), x in new_edges:
        for w, z in classes[x]:
            if len({u, v, w, z}) < 4:
                continue
            for p_, q_ in ((w, z), (z, w)):
                y = mat[u, p_]
                if y >= 0 and y != x and mat[v, q_] == y:
                    key = tuple(sorted((u, v, w, z)))
                    best = key if best is None or key < best else best
    return best

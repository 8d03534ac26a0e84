"""Executable lower-bound certificate: any (5,8)-coloring of K_n uses at least 6(n-1)/7 colors.

The colored edges are cut into monochromatic components, merged into parts
of eight kinds, and every part is charged with the (vertex, color) pairs it
hits. Each pair is hit at most once, which gives the hit inequality; the
parts cover every edge exactly once, which gives the edge identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import ceil, comb

from .core import EdgeColoring, MonoComponent, canon, find_violations, monochromatic_components, would_violate

EDGE_COUNTS = (6, 5, 5, 5, 3, 4, 7, 1)
HIT_COUNTS = (13, 10, 10, 9, 6, 7, 12, 2)
SCHEMA_VERSION = 1


class CertificateError(ValueError):
    """The input breaks a structural claim of the argument; carries the offending edges."""

    def __init__(self, message: str, witness=()):
        super().__init__(message)
        self.witness = tuple(witness)


class NormalizationError(CertificateError):
    pass


@dataclass
class Part:
    kind: int
    edges: tuple[tuple[int, int], ...]
    hit_pairs: frozenset[tuple[int, int]]


@dataclass
class Certificate:
    n: int
    x: tuple[int, ...]
    colors_used: int
    edge_sum: int
    hit_sum: int
    bound: Fraction
    flags: dict[str, bool] = field(default_factory=dict)

    @property
    def bound_ceil(self) -> int:
        return ceil(self.bound)

    @property
    def passed(self) -> bool:
        return all(self.flags.values())

    def as_dict(self) -> dict:
        d = {"schema_version": SCHEMA_VERSION, "n": self.n}
        d.update({f"x{i + 1}": v for i, v in enumerate(self.x)})
        d.update(
            edge_sum=self.edge_sum,
            edges_total=comb(self.n, 2),
            hit_sum=self.hit_sum,
            hit_capacity=self.n * self.colors_used,
            colors_used=self.colors_used,
            bound_numerator=self.bound.numerator,
            bound_denominator=self.bound.denominator,
            bound_ceil=self.bound_ceil,
            flags=dict(self.flags),
            passed=self.passed,
        )
        return d


def _mono_triangles(col: EdgeColoring) -> list[tuple[int, int, int]]:
    out = []
    for c in col.colors():
        cls = col.color_class(c)
        adj: dict[int, set[int]] = {}
        for a, b in cls:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        for a, b in sorted(cls):
            for w in sorted(adj[a] & adj[b]):
                if w > b:
                    out.append((a, b, w))
    return sorted(out)


def _require_valid(col: EdgeColoring) -> None:
    if not col.is_full():
        raise CertificateError(f"coloring is partial: {col.num_colored()} of {comb(col.n, 2)} edges colored")
    bad = find_violations(col, 5, 8, limit=1)
    if bad:
        raise CertificateError(f"input has a (5,8)-violation on {bad[0]}", bad[0])


def normalize_triangles(col: EdgeColoring, check_input: bool = True, max_rounds: int | None = None) -> EdgeColoring:
    """Remove monochromatic triangles by swapping a triangle edge with an incident edge.

    Each accepted swap keeps the coloring (5,8)-valid and strictly lowers the
    number of monochromatic triangles, so the loop ends.
    """
    if check_input:
        _require_valid(col)
    out = col.copy()
    rounds = 0
    tris = _mono_triangles(out)
    while tris:
        rounds += 1
        if max_rounds is not None and rounds > max_rounds:
            raise NormalizationError("too many normalization rounds", tris[0])
        a, b, w = tris[0]
        if not _swap_one(out, (a, b, w), len(tris)):
            raise NormalizationError(f"no color swap removes the triangle {tris[0]}", tris[0])
        tris = _mono_triangles(out)
    return out


def _swap_one(col: EdgeColoring, tri: tuple[int, int, int], count: int) -> bool:
    n = col.n
    t_color = col.get(tri[0], tri[1])
    for e in combinations(tri, 2):
        for x in e:
            for y in range(n):
                if y in e:
                    continue
                f = canon(x, y)
                cf = col.get(*f)
                if cf is None or cf == t_color:
                    continue
                trial = col.copy()
                trial.unset(*e)
                trial.unset(*f)
                if would_violate(trial, [(e, cf), (f, t_color)], 5, 8) is not None:
                    continue
                trial.set(*e, cf)
                trial.set(*f, t_color)
                if len(_mono_triangles(trial)) < count:
                    col.unset(*e)
                    col.unset(*f)
                    col.set(*e, cf)
                    col.set(*f, t_color)
                    return True
    return False


class _Builder:
    def __init__(self, col: EdgeColoring):
        self.col = col
        self.comps = monochromatic_components(col)
        self.by_edge: dict[tuple[int, int], MonoComponent] = {}
        for m in self.comps:
            for e in m.edges:
                self.by_edge[e] = m
        self.used: set[tuple[tuple[int, int], ...]] = set()
        self.parts: list[Part] = []

    def color(self, u: int, v: int) -> int:
        return int(self.col.mat[u, v])

    def singleton(self, u: int, v: int) -> MonoComponent:
        m = self.by_edge[canon(u, v)]
        if m.shape != "isolated-edge":
            raise CertificateError(f"edge {canon(u, v)} should be a singleton but is a {m.shape}", m.edges)
        if m.edges in self.used:
            raise CertificateError(f"singleton {m.edges[0]} claimed by two parts", m.edges)
        return m

    def emit(self, kind: int, comps: list[MonoComponent], extra: list[tuple[int, int]]) -> None:
        keys = [m.edges for m in comps]
        if len(set(keys)) != len(keys):
            raise CertificateError(f"kind-{kind} part repeats a component", [e for k in keys for e in k])
        for k in keys:
            if k in self.used:
                raise CertificateError(f"component {k} claimed twice", k)
        edges = tuple(sorted(e for m in comps for e in m.edges))
        hits = {(v, m.color) for m in comps for e in m.edges for v in e}
        for h in extra:
            if h in hits:
                raise CertificateError(f"extra hit {h} already hit inside the kind-{kind} part", edges)
            hits.add(h)
        if len(edges) != EDGE_COUNTS[kind - 1] or len(hits) != HIT_COUNTS[kind - 1]:
            raise CertificateError(
                f"kind-{kind} part has {len(edges)} edges and {len(hits)} hits", edges
            )
        self.used.update(keys)
        self.parts.append(Part(kind, edges, frozenset(hits)))

    def free(self, m: MonoComponent) -> bool:
        return m.edges not in self.used

    def run(self) -> list[Part]:
        for m in self.comps:
            if m.shape in ("triangle", "other"):
                raise CertificateError(f"component of shape {m.shape}", m.edges)
        self._stars()
        self._three_paths()
        self._double_paths()
        self._kind4()
        self._remaining_paths()
        for m in self.comps:
            if self.free(m):
                if m.shape != "isolated-edge":
                    raise CertificateError(f"unmerged {m.shape}", m.edges)
                self.emit(8, [m], [])
        return self.parts

    def _stars(self) -> None:
        for m in self.comps:
            if m.shape != "3-star":
                continue
            deg: dict[int, int] = {}
            for e in m.edges:
                for v in e:
                    deg[v] = deg.get(v, 0) + 1
            x = next(v for v, d in deg.items() if d == 3)
            leaves = sorted(v for v in deg if v != x)
            singles = [self.singleton(a, b) for a, b in combinations(leaves, 2)]
            self.emit(1, [m] + singles, [(x, s.color) for s in singles])

    def _three_paths(self) -> None:
        for m in self.comps:
            if m.shape != "3-path":
                continue
            u, x, y, v = _path_order(m.edges)
            s1, s2 = self.singleton(u, y), self.singleton(x, v)
            self.emit(2, [m, s1, s2], [(x, s1.color), (y, s2.color)])

    def _paths(self) -> list[MonoComponent]:
        return [m for m in self.comps if m.shape == "2-path" and self.free(m)]

    def _double_paths(self) -> None:
        by_ends: dict[tuple[int, int], list[MonoComponent]] = {}
        for m in self._paths():
            a, _, b = _path_order(m.edges)
            by_ends.setdefault(canon(a, b), []).append(m)
        for ends, group in sorted(by_ends.items()):
            if len(group) < 2:
                continue
            if len(group) > 2:
                raise CertificateError(f"three 2-paths share endpoints {ends}", [e for m in group for e in m.edges])
            p1, p2 = group
            s = self.singleton(*ends)
            c1, c2 = _path_order(p1.edges)[1], _path_order(p2.edges)[1]
            self.emit(3, [p1, p2, s], [(c1, s.color), (c2, s.color)])

    def _kind4(self) -> None:
        for m in self._paths():
            if not self.free(m):
                continue
            a, y, b = _path_order(m.edges)
            base = self.by_edge[canon(a, b)]
            if base.shape != "2-path" or not self.free(base) or base is m:
                continue
            _, c, _ = _path_order(base.edges)
            o = b if c == a else a
            far = next(v for e in base.edges for v in e if v not in (a, b))
            s = self.singleton(o, far)
            self.emit(4, [m, base, s], [(c, s.color)])

    def _remaining_paths(self) -> None:
        for m in self._paths():
            if not self.free(m):
                continue
            u, x, v = _path_order(m.edges)
            base = self.singleton(u, v)
            blue = base.color
            xy = [e for e in self.col.color_class(blue) if x in e]
            if not xy:
                self.emit(5, [m, base], [(x, blue)])
                continue
            y = next(w for w in xy[0] if w != x)
            partner = None
            for q in self.col.color_class(blue):
                if y in q or q == base.edges[0]:
                    continue
                z, w = q
                cz, cw = self.color(y, z), self.color(y, w)
                if cz == cw:
                    cand = self.by_edge[canon(y, z)]
                    if cand.shape == "2-path" and canon(y, w) in cand.edges:
                        if partner is not None:
                            raise CertificateError("two kind-7 partners", m.edges)
                        partner = (cand, q)
            link = self.singleton(x, y)
            if partner is None:
                self.emit(6, [m, base, link], [])
            else:
                other, q = partner
                if not self.free(other):
                    raise CertificateError("kind-7 partner path already merged", other.edges)
                self.emit(7, [m, other, base, link, self.singleton(*q)], [])


def _path_order(edges) -> tuple[int, ...]:
    """Vertices of a path component from one end to the other."""
    deg: dict[int, list[int]] = {}
    for a, b in edges:
        deg.setdefault(a, []).append(b)
        deg.setdefault(b, []).append(a)
    start = min(v for v, nb in deg.items() if len(nb) == 1)
    order, prev = [start], None
    while len(order) <= len(edges):
        cur = order[-1]
        nxt = [w for w in deg[cur] if w != prev]
        if not nxt:
            break
        prev = cur
        order.append(nxt[0])
    return tuple(order)


def build_partition(col: EdgeColoring) -> list[Part]:
    """Merge monochromatic components into the eight part kinds.

    Order: 3-stars, 3-paths, pairs of 2-paths with equal ends, the kind-4
    pattern, then the remaining 2-paths; leftover singletons become kind 8.
    """
    if _mono_triangles(col):
        raise CertificateError("coloring has a monochromatic triangle; normalize first", _mono_triangles(col)[0])
    return _Builder(col).run()


def hit_ledger(parts: list[Part]) -> dict[tuple[int, int], int]:
    """Map each hit (vertex, color) pair to the index of the part hitting it."""
    ledger: dict[tuple[int, int], int] = {}
    for i, part in enumerate(parts):
        for h in sorted(part.hit_pairs):
            if h in ledger:
                raise CertificateError(
                    f"pair {h} hit by parts {ledger[h]} (kind {parts[ledger[h]].kind}) and {i} (kind {part.kind})",
                    parts[ledger[h]].edges + part.edges,
                )
            ledger[h] = i
    return ledger


def lower_bound(n: int) -> Fraction:
    return Fraction(12, 7) * comb(n, 2) / n if n else Fraction(0)


def certify(col: EdgeColoring, check_input: bool = True) -> Certificate:
    """Run the whole argument on a full (5,8)-coloring and report its counts."""
    norm = normalize_triangles(col, check_input=check_input)
    parts = build_partition(norm)
    ledger = hit_ledger(parts)
    x = [0] * 8
    for p in parts:
        x[p.kind - 1] += 1
    edge_sum = sum(a * b for a, b in zip(EDGE_COUNTS, x))
    hit_sum = sum(a * b for a, b in zip(HIT_COUNTS, x))
    covered = sorted(e for p in parts for e in p.edges)
    n = col.n
    colors = norm.num_colors()
    bound = lower_bound(n)
    flags = {
        "partition_exact": len(covered) == comb(n, 2) and len(set(covered)) == len(covered),
        "edge_identity": edge_sum == comb(n, 2),
        "ledger_consistent": len(ledger) == hit_sum,
        "hit_inequality": hit_sum <= n * colors,
        "colors_at_least_bound": colors >= ceil(bound),
        "color_count_preserved": colors == col.num_colors(),
    }
    return Certificate(n, tuple(x), colors, edge_sum, hit_sum, bound, flags)

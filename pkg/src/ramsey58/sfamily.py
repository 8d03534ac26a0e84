"""Danger families S_{a,b}(e) over the uncolored edges of a Phase A coloring.

An entry is a vertex set S of size a with b color repetitions that contains
the uncolored edge e and a partner e' that is uncolored, disjoint from e and
in the same class (sharable or not) as e.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from pathlib import Path

import numpy as np

from .core import DomainError, EdgeColoring, canon, combo_array, reps_batch
from .gadget import PhaseAUniverse

PAIRS = ((4, 0), (4, 1), (5, 0), (5, 1), (5, 2))
SHARABLE, NONSHARABLE = 1, 2


class UncoloredClasses:
    """Class label per vertex pair: 0 colored, 1 sharable (E''), 2 other uncolored (E''')."""

    def __init__(self, labels: np.ndarray):
        self.labels = np.asarray(labels, dtype=np.int8)

    @classmethod
    def from_phase_a(cls, coloring: EdgeColoring, universe: PhaseAUniverse) -> "UncoloredClasses":
        lab = np.where(universe.sharable, SHARABLE, NONSHARABLE).astype(np.int8)
        lab[coloring.mat >= 0] = 0
        np.fill_diagonal(lab, 0)
        return cls(lab)

    @classmethod
    def single_class(cls, coloring: EdgeColoring) -> "UncoloredClasses":
        lab = np.where(coloring.mat >= 0, 0, NONSHARABLE).astype(np.int8)
        np.fill_diagonal(lab, 0)
        return cls(lab)

    def of(self, e: tuple[int, int]) -> int:
        return int(self.labels[e[0], e[1]])

    def edges(self, cls_id: int | None = None) -> list[tuple[int, int]]:
        n = len(self.labels)
        iu, ju = np.triu_indices(n, 1)
        lab = self.labels[iu, ju]
        mask = lab > 0 if cls_id is None else lab == cls_id
        return [(int(a), int(b)) for a, b in zip(iu[mask], ju[mask])]


@dataclass(frozen=True, order=True)
class SFamilyEntry:
    a: int
    b: int
    S: tuple[int, ...]
    e: tuple[int, int]
    partner: tuple[int, int]


def _check_anchor(coloring: EdgeColoring, classes: UncoloredClasses, e) -> tuple[int, int]:
    e = canon(*e)
    if e[0] == e[1] or not (0 <= e[0] < coloring.n and 0 <= e[1] < coloring.n):
        raise DomainError(f"bad edge {e}")
    if coloring.is_colored(*e):
        raise DomainError(f"edge {e} is colored")
    if classes.of(e) == 0:
        raise DomainError(f"edge {e} has no uncolored class")
    return e


def enumerate_S(coloring: EdgeColoring, classes: UncoloredClasses, e, a: int, b: int) -> list[SFamilyEntry]:
    """All (S, e') entries of S_{a,b}(e), sorted.

    The five pairs used downstream are (4,0), (4,1), (5,0), (5,1), (5,2);
    any b >= 0 is accepted so that the emptiness of larger b can be checked.
    """
    if a not in (4, 5) or b < 0:
        raise DomainError(f"unsupported family ({a},{b})")
    e = _check_anchor(coloring, classes, e)
    k = classes.of(e)
    n = coloring.n
    others = np.array([v for v in range(n) if v not in e], dtype=np.int64)
    ext = others[combo_array(len(others), a - 2)]
    if len(ext) == 0:
        return []
    sets = np.hstack([np.tile(np.array(e, dtype=np.int64), (len(ext), 1)), ext])
    keep = reps_batch(coloring.mat, sets) == b
    ext, sets = ext[keep], sets[keep]
    out = []
    lab = classes.labels
    for i, j in combinations(range(a - 2), 2):
        ok = lab[ext[:, i], ext[:, j]] == k
        for row, srow in zip(ext[ok], sets[ok]):
            out.append(SFamilyEntry(a, b, tuple(sorted(int(x) for x in srow)), e, canon(int(row[i]), int(row[j]))))
    out.sort()
    return out


def count_matrix(coloring: EdgeColoring, classes: UncoloredClasses, e) -> dict[tuple[int, int], dict[str, int]]:
    """Entry and distinct-set counts of each of the five families."""
    out = {}
    for a, b in PAIRS:
        ents = enumerate_S(coloring, classes, e, a, b)
        out[(a, b)] = {"entries": len(ents), "sets": len({x.S for x in ents})}
    return out


def brute_force_S(coloring: EdgeColoring, classes: UncoloredClasses, e, a: int, b: int) -> list[SFamilyEntry]:
    """Reference enumeration straight from the definition, recounting colors from scratch."""
    e = canon(*e)
    k = classes.of(e)
    out = []
    for S in combinations(range(coloring.n), a):
        if e[0] not in S or e[1] not in S:
            continue
        cs = [coloring.get(x, y) for x, y in combinations(S, 2)]
        cs = [c for c in cs if c is not None]
        if len(cs) - len(set(cs)) != b:
            continue
        for f in combinations(S, 2):
            if set(f) & set(e):
                continue
            if coloring.get(*f) is None and classes.of(f) == k:
                out.append(SFamilyEntry(a, b, S, e, f))
    return sorted(out)


def overlap_pairs(coloring: EdgeColoring, classes: UncoloredClasses, e1, e2) -> int:
    """Triples (S1, S2, e') with S_j in S_{4,1}(e_j) or S_{5,2}(e_j) and the same partner e'."""
    def partners(e):
        out: dict[tuple[int, int], int] = {}
        for a, b in ((4, 1), (5, 2)):
            for x in enumerate_S(coloring, classes, e, a, b):
                out[x.partner] = out.get(x.partner, 0) + 1
        return out

    p1, p2 = partners(e1), partners(e2)
    return sum(cnt * p2[f] for f, cnt in p1.items() if f in p2)


# ---------------------------------------------------------------- case taxonomy

# Templates on vertices 0, 1, 2, "u"=3, "v"=4 (4-vertex ones use 0, 1, u, v).
# Each colored edge carries a label; "k" marks a triangle edge whose color does
# not repeat. Dashed pairs may serve as the partner.
_U, _V = 3, 4
_T = {
    "3": ({(0, _V): "b", (1, _U): "b"}, [(0, 1)]),
    "4": ({(1, 2): "b", (2, _U): "b", (1, _U): "k"}, [(0, 1), (0, 2)]),
    "5": ({(2, _U): "b", (0, _V): "b"}, [(0, 1), (0, 2), (1, 2)]),
    "6": ({(1, 2): "b", (0, _V): "b"}, [(0, 1), (0, 2)]),
    "7": ({(1, 2): "b", (2, _U): "b", (1, _U): "k", (0, _V): "b"}, [(0, 1), (0, 2)]),
    "8": ({(1, 2): "b", (2, _U): "b", (0, 1): "r", (0, _V): "r", (1, _U): "k", (1, _V): "k"}, [(0, 2)]),
    "9": ({(1, 2): "b", (2, _U): "b", (1, _U): "r", (0, _V): "r"}, [(0, 1), (0, 2)]),
    "10": ({(1, 2): "b", (2, _U): "b", (1, _V): "r", (0, _U): "r", (1, _U): "k"}, [(0, 1), (0, 2)]),
    "11": ({(1, 2): "b", (2, _U): "b", (0, 1): "r", (2, _V): "r", (1, _U): "k"}, [(0, 2)]),
    "12": ({(1, 2): "b", (2, _U): "b", (0, 2): "r", (1, _V): "r", (1, _U): "k"}, [(0, 1)]),
    "13": ({(0, 2): "b", (0, _U): "b", (2, _U): "r", (0, 1): "r"}, [(1, 2)]),
    "14": ({(0, 2): "b", (0, _U): "b", (2, _U): "r", (0, _V): "r"}, [(0, 1), (1, 2)]),
    "15": ({(2, _V): "b", (0, 1): "b", (2, _U): "r", (0, _V): "r"}, [(0, 2), (1, 2)]),
    "16": ({(2, _U): "b", (0, 1): "b", (1, 2): "r", (0, _V): "r"}, [(0, 2)]),
    # placements missing from the drawn list: a triangle centred at u whose closing
    # color repeats on an edge at u, and alternating 4-edge paths p1..p5 with the
    # anchor at p1p4 or p2p4
    "13x": ({(0, _U): "b", (1, _U): "b", (0, 1): "r", (2, _U): "r"}, [(0, 2), (1, 2)]),
    "15x": ({(_U, 0): "b", (0, 1): "r", (1, _V): "b", (2, _V): "r"}, [(0, 2), (1, 2)]),
    "16x": ({(0, _U): "b", (_U, 1): "r", (1, _V): "b", (2, _V): "r"}, [(0, 1), (0, 2), (1, 2)]),
}
_CASES_BY_SIZE = {4: ["3"], 5: [k for k in _T if k != "3"]}


class CaseError(ValueError):
    """An S-family entry whose colored structure matches no known case."""


def _orientations(edges: dict, size: int) -> list[dict]:
    """Rotate each triangle (a monochromatic 2-path plus closing edge) through its three centers."""
    tris = []
    labels: dict[str, list] = {}
    for e, lab in edges.items():
        labels.setdefault(lab, []).append(e)
    for lab, es in labels.items():
        if lab == "k":
            continue
        for f, g in combinations(es, 2):
            shared = set(f) & set(g)
            if shared:
                third = canon(*(set(f) ^ set(g)))
                if third in edges:
                    tris.append((tuple(sorted(set(f) | set(g))), shared.pop()))
    variants = [dict(edges)]
    for verts, center in tris:
        nxt = []
        for var in variants:
            for new_center in verts:
                perm = {center: new_center, new_center: center}
                moved = {}
                for e, lab in var.items():
                    if set(e) <= set(verts):
                        e = canon(perm.get(e[0], e[0]), perm.get(e[1], e[1]))
                    moved[e] = lab
                nxt.append(moved)
        variants = nxt
    uniq, seen = [], set()
    for var in variants:
        key = tuple(sorted(var.items()))
        if key not in seen:
            seen.add(key)
            uniq.append(var)
    return uniq


def drawn_structure(coloring: EdgeColoring, S) -> dict[tuple[int, int], int]:
    """Colored edges of S worth drawing: repeated colors plus the closing edges of triangles."""
    S = sorted(S)
    cols = {canon(x, y): coloring.get(x, y) for x, y in combinations(S, 2)}
    cols = {e: c for e, c in cols.items() if c is not None}
    count: dict[int, int] = {}
    for c in cols.values():
        count[c] = count.get(c, 0) + 1
    drawn = {e: c for e, c in cols.items() if count[c] >= 2}
    for (e, c), (f, d) in combinations(list(drawn.items()), 2):
        if c == d and set(e) & set(f):
            third = canon(*(set(e) ^ set(f)))
            if third in cols:
                drawn[third] = cols[third]
    return drawn


def _matches(template: dict, dashed, drawn: dict, verts: list[int], e, partner) -> bool:
    others = [v for v in verts if v not in e]
    tv = [0, 1, 2][: len(others)]
    for uv in (e, e[::-1]):
        for perm in permutations(others):
            phi = dict(zip(tv, perm))
            phi[_U], phi[_V] = uv
            inv = {v: k for k, v in phi.items()}
            if canon(inv[partner[0]], inv[partner[1]]) not in {canon(*d) for d in dashed}:
                continue
            mapped = {canon(phi[a], phi[b]): lab for (a, b), lab in template.items()}
            if set(mapped) != set(drawn):
                continue
            lab2col: dict[str, int] = {}
            col2lab: dict[int, str] = {}
            ok = True
            for edge, lab in mapped.items():
                c = drawn[edge]
                if lab == "k":
                    if c in col2lab:
                        ok = False
                        break
                    col2lab[c] = "k"
                    continue
                if lab2col.setdefault(lab, c) != c or col2lab.setdefault(c, lab) != lab:
                    ok = False
                    break
            if ok:
                return True
    return False


def classify_case(coloring: EdgeColoring, entry: SFamilyEntry) -> str | None:
    """Case tag of an entry, matched up to color permutation and triangle orientation."""
    if entry.b == 0:
        return None
    drawn = drawn_structure(coloring, entry.S)
    for tag in _CASES_BY_SIZE[entry.a]:
        edges, dashed = _T[tag]
        for var in _orientations(edges, entry.a):
            if _matches(var, dashed, drawn, list(entry.S), entry.e, entry.partner):
                return tag
    raise CaseError(f"no case matches S={entry.S} e={entry.e} partner={entry.partner} drawn={drawn}")


def dump_entries(coloring: EdgeColoring, entries: list[SFamilyEntry], path: str | Path | None = None) -> str:
    lines = []
    for x in entries:
        try:
            tag = classify_case(coloring, x) or "-"
        except CaseError:
            tag = "unmatched"
        S = " ".join(map(str, x.S))
        lines.append(f"{x.a} {x.b} {S} {x.e[0]}-{x.e[1]} {x.partner[0]}-{x.partner[1]} {tag}")
    text = "\n".join(lines) + ("\n" if lines else "")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


class SFamilyIndex:
    """Cached membership queries "is S in S_{a,b}(e)" for the conflict predicates."""

    def __init__(self, coloring: EdgeColoring, classes: UncoloredClasses):
        self.coloring = coloring
        self.classes = classes
        self._reps: dict[tuple[int, ...], int] = {}

    def reps(self, S: tuple[int, ...]) -> int:
        S = tuple(sorted(S))
        if S not in self._reps:
            self._reps[S] = int(reps_batch(self.coloring.mat, np.array([S], dtype=np.int64))[0])
        return self._reps[S]

    def contains(self, S, e, a: int, b: int) -> bool:
        S = tuple(sorted(set(S)))
        e = canon(*e)
        if len(S) != a or not set(e) <= set(S):
            return False
        k = self.classes.of(e)
        if k == 0 or self.coloring.is_colored(*e):
            return False
        if self.reps(S) != b:
            return False
        rest = [v for v in S if v not in e]
        return any(self.classes.of(canon(x, y)) == k for x, y in combinations(rest, 2))

    def supersets(self, U, e, a: int, b: int):
        """Members of S_{a,b}(e) containing the vertex set U."""
        U = set(U) | set(e)
        if len(U) > a:
            return
        rest = [v for v in range(self.coloring.n) if v not in U]
        for ext in combinations(rest, a - len(U)):
            S = tuple(sorted(U | set(ext)))
            if self.contains(S, e, a, b):
                yield S

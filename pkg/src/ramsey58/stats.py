"""Quasirandomness diagnostics for Phase A outputs and exact H_A degree counts on fixtures."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .core import EdgeColoring, canon
from .gadget import (
    EDGE_ROLE,
    EDGE_ROLE_CLASS,
    NONEDGE_SLOTS,
    SCAFFOLD_SLOTS,
    ColoredGadget,
    PhaseAUniverse,
    VertexColor,
    is_valid,
)
from .phase_a import recover_gadgets
from .sfamily import PAIRS, UncoloredClasses, count_matrix, overlap_pairs

SCHEMA_VERSION = 1


class ResourceError(RuntimeError):
    pass


@dataclass
class QuasiReport:
    n: int
    uncolored_degree: list[int]
    shareable_gadget_counts: dict[tuple[int, int], int]
    sfam_counts: dict[tuple[int, int], int]
    overlap_max: int
    sampled_edges: list[tuple[int, int]] = field(default_factory=list)
    placed: int = 0

    @property
    def max_uncolored_degree(self) -> int:
        return max(self.uncolored_degree, default=0)

    def reference_scales(self, eps: float = 0.25, delta: float = 0.25) -> dict[str, float]:
        n = self.n
        return {
            "uncolored_degree": n ** (1 - eps**3),
            "overlap": n ** (1 - delta / 2),
            **{f"S_{a}_{b}": float(n ** (a - b - 2)) for a, b in PAIRS},
        }

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "n": self.n,
            "placed_gadgets": self.placed,
            "uncolored_degree": self.uncolored_degree,
            "uncolored_degree_max": self.max_uncolored_degree,
            "shareable_gadget_counts": {f"{u}-{v}": c for (u, v), c in sorted(self.shareable_gadget_counts.items())},
            "shareable_gadget_max": max(self.shareable_gadget_counts.values(), default=0),
            "sfam_max": {f"{a},{b}": c for (a, b), c in sorted(self.sfam_counts.items())},
            "overlap_max": self.overlap_max,
            "sampled_edges": [f"{u}-{v}" for u, v in self.sampled_edges],
            "reference_scales": self.reference_scales(),
        }


def scaffold_counts(gadgets: list[ColoredGadget], universe: PhaseAUniverse) -> dict[tuple[int, int], int]:
    """Per sharable pair, how many gadgets use it in a scaffold slot pair."""
    out = {e: 0 for e in universe.sharable_edges()}
    for g in gadgets:
        for i, j in SCAFFOLD_SLOTS:
            e = canon(g.slots[i], g.slots[j])
            if e in out:
                out[e] += 1
    return out


def quasi_report(coloring: EdgeColoring, universe: PhaseAUniverse, sample_size: int = 20,
                 rng: np.random.Generator | None = None) -> QuasiReport:
    """Measure the four quasirandomness quantities on a Phase A output."""
    rng = rng if rng is not None else np.random.default_rng(0)
    n = coloring.n
    unc = (coloring.mat < 0)
    np.fill_diagonal(unc, False)
    degree = [int(x) for x in unc.sum(axis=1)]
    gadgets = recover_gadgets(coloring, universe)
    classes = UncoloredClasses.from_phase_a(coloring, universe)
    edges = classes.edges()
    k = min(sample_size, len(edges))
    picks = sorted(int(i) for i in rng.choice(len(edges), size=k, replace=False)) if k else []
    sample = [edges[i] for i in picks]
    sfam = {ab: 0 for ab in PAIRS}
    for e in sample:
        for ab, cnt in count_matrix(coloring, classes, e).items():
            sfam[ab] = max(sfam[ab], cnt["entries"])
    overlap = 0
    for i in range(len(sample)):
        for j in range(i + 1, len(sample)):
            if classes.of(sample[i]) == classes.of(sample[j]):
                overlap = max(overlap, overlap_pairs(coloring, classes, sample[i], sample[j]))
    return QuasiReport(n, degree, scaffold_counts(gadgets, universe), sfam, overlap, sample, len(gadgets))


# ---------------------------------------------------------------- exact degrees

def _labeled_gadgets(universe: PhaseAUniverse, budget: int):
    """All valid labeled gadgets (every automorphic copy listed), by direct search."""
    n = universe.n
    colors1, colors2 = list(universe.a1), list(universe.a2)
    work = n ** 6 * max(1, len(colors1)) * max(1, len(colors2)) ** 2
    if work > budget:
        raise ResourceError(f"census needs about {work} checks, budget is {budget}")
    for s in permutations(range(n), 6):
        if not all(universe.is_kept(s[i], s[j]) for i, j in EDGE_ROLE):
            continue
        if not all(universe.is_sharable(s[i], s[j]) for i, j in NONEDGE_SLOTS):
            continue
        for c1 in colors1:
            for c2 in colors2:
                for c2p in colors2:
                    if c2 == c2p:
                        continue
                    g = ColoredGadget(s, c1, c2, c2p)
                    if is_valid(g, universe):
                        yield g


def degree_census(universe: PhaseAUniverse, anchors: list, budget: int = 50_000_000) -> list[dict]:
    """Exact H_A degree of every anchor with its role split.

    Edge anchors split by the role class of the slot pair holding the edge;
    vertex-color anchors (``VertexColor``) split by vertex role (leaf or hub)
    and color role (c1 or path color).
    Each gadget is counted once per anchor even though its labeled copies repeat.
    Results come back in anchor order.
    """
    edge_roles: dict[tuple[int, int], Counter] = {}
    pair_roles: dict[tuple[int, int], Counter] = {}
    for a in anchors:
        if isinstance(a, VertexColor):
            pair_roles[(int(a[0]), int(a[1]))] = Counter()
        else:
            edge_roles[canon(*a)] = Counter()
    seen = set()
    for g in _labeled_gadgets(universe, budget):
        key = g.canonical()
        if key in seen:
            continue
        seen.add(key)
        s = g.slots
        role_color = (g.c1, g.c2, g.c2p)
        for i, j in EDGE_ROLE:
            e = canon(s[i], s[j])
            if e in edge_roles:
                edge_roles[e][EDGE_ROLE_CLASS[(i, j)]] += 1
        for slot, v in enumerate(s):
            for r, name in ((0, "c1"), (1 if slot < 3 else 2, "c2")):
                pc = (v, role_color[r])
                if pc in pair_roles:
                    pair_roles[pc][f"{'hub' if slot in (2, 3) else 'leaf'}:{name}"] += 1
    out = []
    for a in anchors:
        if isinstance(a, VertexColor):
            cnt, kind = pair_roles[(int(a[0]), int(a[1]))], "pair"
        else:
            cnt, kind = edge_roles[canon(*a)], "edge"
        out.append({"anchor": a, "kind": kind, "total": sum(cnt.values()), "roles": dict(sorted(cnt.items()))})
    return out

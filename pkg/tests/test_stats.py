from itertools import combinations

import numpy as np
import pytest

from oracles import fixture_universes
from ramsey58.core import EdgeColoring, loads_coloring, dumps_coloring
from ramsey58.fuzz import valid_background
from ramsey58.gadget import (
    ColoredGadget,
    PhaseAUniverse,
    VertexColor,
    enumerate_gadgets,
    gadget_edges,
    gadget_nonedges,
    loads_universe,
    dumps_universe,
)
from ramsey58.phase_a import PhaseAConfig, run_phase_a
from ramsey58.stats import ResourceError, degree_census, quasi_report, scaffold_counts

FIXTURES = fixture_universes()
IDENT = ColoredGadget((0, 1, 2, 3, 4, 5), 0, 1, 2)


def packed(n=20, seed=1):
    m = valid_background(n, np.random.default_rng(seed), gadgets=6)
    col, st, u, _ = run_phase_a(PhaseAConfig(n, seed=seed), m.universe())
    return col, st, u


class TestQuasiReport:
    def test_empty_packing(self):
        u = PhaseAUniverse.from_sets(9, [(0, 1)], [0], [1, 2])
        r = quasi_report(EdgeColoring(9), u, sample_size=4)
        assert r.uncolored_degree == [8] * 9 and r.placed == 0
        assert all(v == 0 for k, v in r.sfam_counts.items() if k[1] > 0)
        assert r.overlap_max == 0

    def test_handshake(self):
        col, st, u = packed()
        r = quasi_report(col, u, sample_size=6)
        assert r.placed == len(st.placed) > 0
        assert sum(r.uncolored_degree) == 2 * (20 * 19 // 2 - 7 * r.placed)
        assert all(v >= 0 for v in r.shareable_gadget_counts.values())

    def test_round_trip(self):
        col, _, u = packed(seed=2)
        a = quasi_report(col, u, 5, np.random.default_rng(3)).as_dict()
        b = quasi_report(loads_coloring(dumps_coloring(col)), loads_universe(dumps_universe(u)),
                         5, np.random.default_rng(3)).as_dict()
        assert a == b and a["schema_version"] == 1


class TestScaffold:
    def test_single_gadget(self):
        u = FIXTURES["single"]
        counts = scaffold_counts([IDENT], u)
        # the designated non-edge 1-3 and its automorphic images
        assert counts[(1, 3)] == 1
        assert {e for e, c in counts.items() if c} == {(0, 3), (1, 3), (2, 4), (2, 5)}
        assert set(counts) == set(gadget_nonedges(IDENT))

    def test_variants_agree(self):
        u = FIXTURES["single"]
        base = scaffold_counts([IDENT], u)
        for v in IDENT.variants():
            assert scaffold_counts([v], u) == base


class TestCensus:
    def test_no_sharable_pairs(self):
        u = PhaseAUniverse.from_sets(8, [], [0], [1, 2])
        res = degree_census(u, [(0, 1), VertexColor(0, 0)])
        assert [r["total"] for r in res] == [0, 0]

    def test_single_gadget_roles(self):
        u = FIXTURES["single"]
        res = degree_census(u, [e for e, _ in gadget_edges(IDENT)])
        roles = {r["anchor"]: r["roles"] for r in res}
        assert all(r["total"] == 1 for r in res)
        assert roles[(0, 1)] == {"12/56": 1} and roles[(4, 5)] == {"12/56": 1}
        assert roles[(2, 3)] == {"34": 1}
        assert all(roles[e] == {"13/23/45/46": 1} for e in ((0, 2), (1, 2), (3, 4), (3, 5)))

    def test_vertex_roles(self):
        u = FIXTURES["single"]
        res = degree_census(u, [VertexColor(2, 0), VertexColor(0, 1), VertexColor(4, 2), VertexColor(4, 1)])
        assert [r["roles"] for r in res] == [{"hub:c1": 1}, {"leaf:c2": 1}, {"leaf:c2": 1}, {}]

    @pytest.mark.parametrize("name", sorted(FIXTURES))
    def test_matches_anchored_enumeration(self, name):
        u = FIXTURES[name]
        edges = list(combinations(range(u.n), 2))
        pairs = [VertexColor(v, c) for v in range(u.n) for c in u.all_colors()]
        res = degree_census(u, edges + pairs)
        for r in res:
            assert r["total"] == len(list(enumerate_gadgets(u, r["anchor"])))
            assert sum(r["roles"].values()) == r["total"]

    def test_budget(self):
        with pytest.raises(ResourceError):
            degree_census(FIXTURES["double10"], [(0, 1)], budget=1000)

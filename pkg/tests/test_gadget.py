from itertools import combinations, permutations

import numpy as np
import pytest

from oracles import fixture_universes
from ramsey58.core import DomainError
from ramsey58.gadget import (
    EDGE_SLOTS,
    NONEDGE_SLOTS,
    ColoredGadget,
    PhaseAUniverse,
    VertexColor,
    brute_force_gadgets,
    dumps_universe,
    enumerate_gadgets,
    gadget_edges,
    gadget_nonedges,
    hit_pairs,
    is_valid,
    load_universe,
    loads_universe,
    sample_gadget,
    save_universe,
)

IDENT = ColoredGadget((0, 1, 2, 3, 4, 5), 10, 20, 30)
FIXTURES = fixture_universes()


def test_pattern_counts():
    assert len(EDGE_SLOTS) == 7 and len(NONEDGE_SLOTS) == 8
    assert set(EDGE_SLOTS) | set(NONEDGE_SLOTS) == set(combinations(range(6), 2))


def test_identity_edges():
    assert dict(gadget_edges(IDENT)) == {
        (0, 1): 10, (2, 3): 10, (4, 5): 10, (0, 2): 20, (1, 2): 20, (3, 4): 30, (3, 5): 30,
    }


def test_identity_nonedges():
    assert sorted(gadget_nonedges(IDENT)) == [(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 4), (2, 5)]


def test_pattern_integrity():
    g = ColoredGadget((7, 3, 9, 1, 4, 0), 1, 2, 3)
    by = {}
    for e, c in gadget_edges(g):
        by.setdefault(c, []).append(e)
    assert len(by[1]) == 3 and len({v for e in by[1] for v in e}) == 6
    for c, centre in ((2, 9), (3, 1)):
        assert len(by[c]) == 2 and set(by[c][0]) & set(by[c][1]) == {centre}


def test_hit_pairs():
    hp = hit_pairs(IDENT)
    assert len(hp) == 12
    assert (4, 20) not in hp and (4, 30) in hp and (0, 20) in hp
    other = ColoredGadget((6, 7, 8, 9, 10, 11), 11, 21, 31)
    assert not hp & hit_pairs(other)


def test_automorphisms():
    vs = IDENT.variants()
    assert len(set(vs)) == 8
    edge_sets = {frozenset(gadget_edges(v)) for v in vs}
    assert len(edge_sets) == 1
    assert all(v.canonical() == IDENT.canonical() for v in vs)
    assert IDENT.canonical().is_canonical()


class TestValidity:
    def test_no_sharable(self):
        u = PhaseAUniverse.from_sets(8, [], [0], [1, 2], removed=[(v, c) for v in range(8) for c in (1, 2)])
        assert is_valid(ColoredGadget((0, 1, 2, 3, 4, 5), 0, 1, 2), u).failed_condition == 2
        assert list(enumerate_gadgets(u)) == []

    def test_nothing_removed(self):
        everything = [e for e in combinations(range(8), 2) if e not in
                      {(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (3, 5)}]
        u = PhaseAUniverse.from_sets(8, everything, [0], [1, 2])
        assert is_valid(ColoredGadget((0, 1, 2, 3, 4, 5), 0, 1, 2), u).failed_condition == 5
        assert list(enumerate_gadgets(u)) == []

    def test_single_fixture(self):
        u = FIXTURES["single"]
        g = ColoredGadget((0, 1, 2, 3, 4, 5), 0, 1, 2)
        assert is_valid(g, u)
        assert list(enumerate_gadgets(u)) == [g.canonical()]

    def test_equal_path_colors_never_valid(self):
        for u in FIXTURES.values():
            for s in permutations(range(u.n), 6):
                for c in u.a2:
                    assert not is_valid(ColoredGadget(s, u.a1[0], c, c), u)

    @pytest.mark.parametrize("name", sorted(FIXTURES))
    def test_emitted_gadgets_rechecked(self, name):
        u = FIXTURES[name]
        for g in enumerate_gadgets(u):
            assert all(not u.sharable[e] for e, _ in gadget_edges(g))
            assert all(u.sharable[e] for e in gadget_nonedges(g))


class TestEnumeration:
    @pytest.mark.parametrize("name", sorted(FIXTURES))
    def test_matches_brute_force(self, name):
        u = FIXTURES[name]
        got = list(enumerate_gadgets(u))
        assert len(got) == len(set(got))
        assert set(got) == brute_force_gadgets(u)

    @pytest.mark.parametrize("name", sorted(FIXTURES))
    def test_anchored_counts(self, name):
        u = FIXTURES[name]
        every = brute_force_gadgets(u)
        for e in combinations(range(u.n), 2):
            want = {g for g in every if e in {x for x, _ in gadget_edges(g)}}
            assert set(enumerate_gadgets(u, e)) == want
        for v in range(u.n):
            for c in u.all_colors():
                want = {g for g in every if (v, c) in hit_pairs(g)}
                assert set(enumerate_gadgets(u, VertexColor(v, c))) == want

    def test_frozen_counts(self):
        assert {k: len(list(enumerate_gadgets(u))) for k, u in FIXTURES.items()} == {
            "single": 1, "random9": 6, "double10": 12,
        }

    def test_bad_anchor(self):
        with pytest.raises(DomainError):
            list(enumerate_gadgets(FIXTURES["single"], (3, 3)))


class TestSampling:
    def test_empty_universe(self):
        u = PhaseAUniverse.from_sets(8, [], [0], [1, 2])
        rng = np.random.default_rng(0)
        assert all(sample_gadget(u, rng) is None for _ in range(200))

    def test_finds_single(self):
        u = FIXTURES["single"]
        rng = np.random.default_rng(0)
        hits = [g for g in (sample_gadget(u, rng) for _ in range(100_000)) if g is not None]
        assert hits
        assert {g.canonical() for g in hits} == {ColoredGadget((0, 1, 2, 3, 4, 5), 0, 1, 2)}

    def test_anchored_samples_valid(self):
        u = FIXTURES["double10"]
        rng = np.random.default_rng(1)
        for _ in range(3000):
            g = sample_gadget(u, rng, (2, 3))
            if g is not None:
                assert is_valid(g, u) and (2, 3) in {e for e, _ in gadget_edges(g)}


class TestUniverseFile:
    def test_round_trip(self, tmp_path):
        u = FIXTURES["random9"]
        path = tmp_path / "u.txt"
        save_universe(u, path)
        back = load_universe(path)
        assert dumps_universe(back) == dumps_universe(u)
        assert set(enumerate_gadgets(back)) == set(enumerate_gadgets(u))

    def test_comments_and_defaults(self):
        text = "# tiny\n6\nE''\n0 3\nC_A1\n0\nC_A2\n1 2\nV'-removed\n4 1\n"
        u = loads_universe(text)
        assert u.n == 6 and u.is_sharable(0, 3) and u.is_kept(0, 1)
        assert not u.allowed(4, 1) and u.allowed(4, 2)

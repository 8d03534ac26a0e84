from itertools import combinations
from math import comb

import numpy as np
import pytest

from oracles import random_partial, s_family_of
from ramsey58.core import DomainError, EdgeColoring
from ramsey58.fuzz import valid_background
from ramsey58.gadget import ColoredGadget, PhaseAUniverse, gadget_edges
from ramsey58.phase_a import PhaseAConfig, run_phase_a
from ramsey58.sfamily import (
    PAIRS,
    CaseError,
    SFamilyEntry,
    SFamilyIndex,
    UncoloredClasses,
    brute_force_S,
    classify_case,
    count_matrix,
    dump_entries,
    enumerate_S,
    overlap_pairs,
)


def phase_a_outputs(n, seeds):
    out = []
    for s in seeds:
        m = valid_background(n, np.random.default_rng(s), gadgets=4)
        col, _, u, _ = run_phase_a(PhaseAConfig(n, seed=s), m.universe())
        out.append((col, UncoloredClasses.from_phase_a(col, u)))
    return out


def as_pairs(entries):
    return {(x.S, x.partner) for x in entries}


class TestEmptyColoring:
    @pytest.mark.parametrize("n", [7, 10, 13])
    def test_counts(self, n):
        col = EdgeColoring(n)
        cl = UncoloredClasses.single_class(col)
        m = count_matrix(col, cl, (0, 1))
        assert m[(4, 0)] == {"entries": comb(n - 2, 2), "sets": comb(n - 2, 2)}
        # each 5-set offers the three pairs of its three extra vertices
        assert m[(5, 0)] == {"entries": 3 * comb(n - 2, 3), "sets": comb(n - 2, 3)}
        assert all(m[k]["entries"] == 0 for k in ((4, 1), (5, 1), (5, 2)))

    def test_overlap_zero(self):
        col = EdgeColoring(9)
        assert overlap_pairs(col, UncoloredClasses.single_class(col), (0, 1), (2, 3)) == 0


class TestErrors:
    def test_colored_anchor(self):
        col = EdgeColoring.from_edges(6, [((0, 1), 0)])
        with pytest.raises(DomainError):
            enumerate_S(col, UncoloredClasses.single_class(col), (0, 1), 4, 0)

    @pytest.mark.parametrize("a,b", [(3, 0), (6, 1), (4, -1)])
    def test_bad_family(self, a, b):
        col = EdgeColoring(6)
        with pytest.raises(DomainError):
            enumerate_S(col, UncoloredClasses.single_class(col), (0, 1), a, b)


class TestOracle:
    @pytest.mark.parametrize("seed", range(4))
    def test_synthetic(self, seed):
        rng = np.random.default_rng(seed)
        n = 11
        col = random_partial(n, rng, 0.4, 4)
        lab = np.where(rng.random((n, n)) < 0.5, 1, 2)
        lab = np.triu(lab, 1)
        lab = lab + lab.T
        lab[col.mat >= 0] = 0
        cl = UncoloredClasses(lab)
        for e in cl.edges()[:6]:
            for a, b in PAIRS:
                got = enumerate_S(col, cl, e, a, b)
                assert as_pairs(got) == s_family_of(col, lab, e, a, b)
                assert got == brute_force_S(col, cl, e, a, b)

    def test_phase_a_outputs(self):
        for col, cl in phase_a_outputs(14, range(2)):
            assert col.num_colored() > 0
            for e in cl.edges()[::9]:
                for a, b in PAIRS:
                    assert as_pairs(enumerate_S(col, cl, e, a, b)) == s_family_of(col, cl.labels, e, a, b)

    def test_one_gadget_off_anchor(self):
        g = ColoredGadget((0, 1, 2, 3, 4, 5), 0, 1, 2)
        col = EdgeColoring.from_edges(10, gadget_edges(g))
        cl = UncoloredClasses.single_class(col)
        counts = {k: len(enumerate_S(col, cl, (8, 9), *k)) for k in PAIRS}
        assert counts == {k: len(s_family_of(col, cl.labels, (8, 9), *k)) for k in PAIRS}
        # three gadget vertices with a repetition leave no uncolored partner
        assert counts[(5, 1)] == counts[(5, 2)] == 0 and counts[(5, 0)] > 0

    def test_entries_have_two_disjoint_open_pairs(self):
        for col, cl in phase_a_outputs(13, [5]):
            for e in cl.edges()[::7]:
                for a, b in PAIRS:
                    for x in enumerate_S(col, cl, e, a, b):
                        assert not set(x.e) & set(x.partner)
                        assert not col.is_colored(*x.e) and not col.is_colored(*x.partner)
                        assert cl.of(x.e) == cl.of(x.partner)


class TestEmptinessLaws:
    def test_phase_a_outputs(self):
        for col, cl in phase_a_outputs(13, range(3)):
            for e in cl.edges():
                assert enumerate_S(col, cl, e, 4, 2) == [] and enumerate_S(col, cl, e, 4, 3) == []
                assert enumerate_S(col, cl, e, 5, 3) == [] and enumerate_S(col, cl, e, 5, 4) == []

    def test_breaks_on_violating_coloring(self):
        col = EdgeColoring.from_edges(6, [((0, 1), 0), ((2, 3), 0), ((0, 2), 1), ((1, 3), 1)])
        cl = UncoloredClasses.single_class(col)
        assert enumerate_S(col, cl, (4, 5), 5, 2) == []
        assert len(enumerate_S(col, cl, (0, 3), 4, 2)) == 1


class TestCases:
    def test_crossing_pair_shape(self):
        # one monochromatic matching pair across the anchor
        col = EdgeColoring.from_edges(6, [((0, 3), 5), ((1, 2), 5)])
        cl = UncoloredClasses.single_class(col)
        (x,) = [x for x in enumerate_S(col, cl, (2, 3), 4, 1)]
        assert classify_case(col, x) == "3"

    def test_b_zero_untagged(self):
        col = EdgeColoring(7)
        x = enumerate_S(col, UncoloredClasses.single_class(col), (0, 1), 4, 0)[0]
        assert classify_case(col, x) is None

    def test_phase_a_outputs_all_matched(self):
        seen = set()
        for col, cl in phase_a_outputs(14, range(3)):
            for e in cl.edges():
                for a, b in ((4, 1), (5, 1), (5, 2)):
                    for x in enumerate_S(col, cl, e, a, b):
                        seen.add(classify_case(col, x))
        assert seen and None not in seen

    def test_unmatched_raises(self):
        col = EdgeColoring.from_edges(6, [((0, 1), 0), ((1, 2), 0), ((2, 3), 0)])
        x = SFamilyEntry(5, 2, (0, 1, 2, 3, 4), (0, 4), (1, 3))
        with pytest.raises(CaseError):
            classify_case(col, x)


class TestOverlap:
    def test_symmetric(self):
        for col, cl in phase_a_outputs(12, [2]):
            es = cl.edges()[:8]
            for e1, e2 in combinations(es, 2):
                assert overlap_pairs(col, cl, e1, e2) == overlap_pairs(col, cl, e2, e1)

    def test_matches_brute_force(self):
        col, cl = phase_a_outputs(12, [4])[0]
        lab = cl.labels
        for e1, e2 in list(combinations(cl.edges(), 2))[:40]:
            want = 0
            for a1, b1 in ((4, 1), (5, 2)):
                for a2, b2 in ((4, 1), (5, 2)):
                    for _, f1 in s_family_of(col, lab, e1, a1, b1):
                        want += sum(f2 == f1 for _, f2 in s_family_of(col, lab, e2, a2, b2))
            assert overlap_pairs(col, cl, e1, e2) == want


class TestIndex:
    def test_contains_agrees(self):
        col, cl = phase_a_outputs(11, [1])[0]
        idx = SFamilyIndex(col, cl)
        for e in cl.edges()[::5]:
            for a, b in PAIRS:
                want = {S for S, _ in s_family_of(col, cl.labels, e, a, b)}
                got = {S for S in combinations(range(11), a) if idx.contains(S, e, a, b)}
                assert got == want
                assert set(idx.supersets(e, e, a, b)) == want


def test_dump_format(tmp_path):
    col = EdgeColoring.from_edges(6, [((0, 3), 5), ((1, 2), 5)])
    ents = enumerate_S(col, UncoloredClasses.single_class(col), (2, 3), 4, 1)
    text = dump_entries(col, ents, tmp_path / "d.txt")
    assert text == "4 1 0 1 2 3 2-3 0-1 3\n"
    assert (tmp_path / "d.txt").read_text() == text
    assert dump_entries(col, []) == ""

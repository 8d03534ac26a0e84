from collections import Counter

import numpy as np
import pytest

from ramsey58.core import DomainError, EdgeColoring, alternating_4cycles, find_violations
from ramsey58.fuzz import LazyMatching, valid_background
from ramsey58.gadget import ColoredGadget, PhaseAUniverse, gadget_edges, hit_pairs, is_valid
from ramsey58.phase_a import (
    ClassificationError,
    MatchingState,
    PhaseAConfig,
    alt_4cycle_check,
    class_shape_errors,
    classify_conflict,
    recover_gadgets,
    run_phase_a,
    setup,
    try_place,
)


def universe_for(n, a1, a2, gadgets):
    """The universe that decides exactly the pairs the given gadgets need."""
    m = LazyMatching(n, tuple(a1), tuple(a2))
    share, allow = {}, {}
    for g in gadgets:
        s, a = m._needs(g)
        for d, new in ((share, s), (allow, a)):
            for k, v in new.items():
                assert d.setdefault(k, v) == v, f"gadgets disagree on {k}"
    return PhaseAUniverse.from_sets(n, [e for e, s in share.items() if s], a1, a2,
                                    [k for k, a in allow.items() if not a])


A = ColoredGadget((0, 1, 2, 3, 4, 5), 0, 2, 3)
B = ColoredGadget((0, 6, 7, 8, 9, 3), 1, 4, 5)   # meets A in the non-edge 0-3


class TestSetup:
    def test_tiny_probability(self):
        cfg = PhaseAConfig(20, p=1e-9)
        u = setup(cfg, np.random.default_rng(0))
        assert u.sharable_edges() == [] and not u.removed

    def test_deterministic(self):
        cfg = PhaseAConfig(25, delta=0.3)
        a, b = (setup(cfg, np.random.default_rng(7)) for _ in range(2))
        assert np.array_equal(a.sharable, b.sharable) and a.removed == b.removed

    def test_sharable_count_concentrates(self):
        u = setup(PhaseAConfig(100, p=0.1), np.random.default_rng(0))
        # binomial(4950, 0.1): mean 495, sd about 21
        assert abs(len(u.sharable_edges()) - 495) < 4 * 21.2
        assert np.array_equal(u.sharable, u.sharable.T) and not u.sharable.diagonal().any()

    def test_pool_sizes(self):
        cfg = PhaseAConfig(70, p=0.3)
        assert cfg.pool_sizes() == (21, 30)
        u = setup(cfg, np.random.default_rng(1))
        assert u.a1 == tuple(range(21)) and u.a2 == tuple(range(21, 51))

    @pytest.mark.parametrize("kw", [{"n": 6}, {"n": 20, "p": 0.0}, {"n": 20, "p": 1.0}])
    def test_bad_config(self, kw):
        with pytest.raises(DomainError):
            PhaseAConfig(**kw)

    def test_default_failure_cap(self):
        assert PhaseAConfig(30).failure_cap == 600
        assert PhaseAConfig(30, max_consecutive_failures=5).failure_cap == 5


class TestTryPlace:
    def test_first_gadget(self):
        st = MatchingState(universe_for(10, [0, 1], [2, 3, 4, 5], [A]))
        assert try_place(st, A)
        assert st.coloring.num_colored() == 7 and st.used_pairs == hit_pairs(A)

    def test_allowed_intersection(self):
        u = universe_for(10, [0, 1], [2, 3, 4, 5], [A, B])
        assert is_valid(A, u) and is_valid(B, u)
        st = MatchingState(u)
        assert try_place(st, A) and try_place(st, B)
        assert st.coloring.num_colored() == 14 and not st.coloring.is_colored(0, 3)

    def test_edge_against_nonedge_never_coexists(self):
        # C uses 0-3 as an edge while A needs it sharable
        C = ColoredGadget((0, 3, 6, 7, 8, 9), 1, 4, 5)
        with pytest.raises(AssertionError):
            universe_for(10, [0, 1], [2, 3, 4, 5], [A, C])

    def test_reused_hit_pair(self):
        C = ColoredGadget((0, 6, 7, 8, 9, 10), 0, 4, 5)
        assert (0, 0) in hit_pairs(A) & hit_pairs(C)
        st = MatchingState(universe_for(11, [0, 1], [2, 3, 4, 5], [A, C]))
        assert try_place(st, A)
        res = try_place(st, C)
        assert not res and res.reason == "matching"
        assert st.coloring.num_colored() == 7

    def test_invalid_gadget(self):
        st = MatchingState(universe_for(10, [0, 1], [2, 3, 4, 5], [A]))
        with pytest.raises(DomainError):
            try_place(st, ColoredGadget((4, 5, 6, 7, 8, 9), 1, 4, 5))

    def test_forbidden_overlap_rejected(self):
        # three gadgets from the conflict corpus whose union has an alternating 4-cycle
        S, gadgets, k1, k2 = CORPUS["Type1"]
        u = universe_for(30, range(k1), range(k1, k1 + k2), gadgets)
        st = MatchingState(u)
        reasons = [try_place(st, g).reason for g in gadgets]
        assert "alt4cycle" in reasons or "violation" in reasons
        assert not alternating_4cycles(st.coloring) and not find_violations(st.coloring, 5, 8)


def test_alt_4cycle_check():
    col = EdgeColoring.from_edges(4, [((0, 1), 0), ((2, 3), 0), ((0, 2), 1)])
    w = alt_4cycle_check(col, [((1, 3), 1)])
    assert w is not None and w.S == (0, 1, 2, 3)
    assert alt_4cycle_check(col, [((1, 3), 2)]) is None


# default parameters pack very little at n = 20, so start from a universe
# that is known to hold a few compatible gadgets
def _seeded_run():
    m = valid_background(20, np.random.default_rng(1), gadgets=6)
    return run_phase_a(PhaseAConfig(20, seed=1), m.universe())


@pytest.fixture(scope="module")
def run():
    return _seeded_run()


class TestRun:

    def test_no_conflicts(self, run):
        col, state, u, stats = run
        assert state.placed
        assert find_violations(col, 5, 8) == [] and alternating_4cycles(col) == []
        assert class_shape_errors(col, u) == []

    def test_counts(self, run):
        col, state, u, stats = run
        assert stats.placed == len(state.placed)
        assert col.num_colored() == 7 * stats.placed == stats.colored_edges
        assert all(is_valid(g, u) for g in state.placed)
        # hit pairs are used at most once
        c = Counter(hp for g in state.placed for hp in hit_pairs(g))
        assert max(c.values()) == 1

    def test_recover(self, run):
        col, state, u, _ = run
        assert {g.canonical() for g in recover_gadgets(col, u)} == {g.canonical() for g in state.placed}

    def test_deterministic(self, run):
        again = _seeded_run()
        assert again[0] == run[0]


def test_shape_errors_flag_bad_classes():
    u = PhaseAUniverse.from_sets(6, [], [0], [1])
    col = EdgeColoring.from_edges(6, [((0, 1), 0), ((1, 2), 0), ((3, 4), 1)])
    errs = class_shape_errors(col, u)
    assert any("color 0" in e for e in errs) and any("color 1" in e for e in errs)


# conflict corpus: (S, gadgets, |C_A1|, |C_A2|) found by the random planting search
def _g(slots, c1, c2, c2p):
    return ColoredGadget(slots, c1, c2, c2p)


CORPUS = {
    "Type1": ((8, 9, 13, 16, 28), [
        _g((9, 29, 16, 27, 26, 4), 2, 6, 3), _g((24, 5, 22, 28, 13, 11), 2, 4, 6),
        _g((9, 8, 28, 2, 17, 15), 1, 5, 3), _g((3, 5, 21, 13, 16, 14), 0, 3, 5),
        _g((10, 18, 0, 1, 11, 23), 0, 4, 5)], 3, 4),
    "Type2": ((1, 3, 16, 17, 22), [
        _g((16, 3, 22, 9, 20, 18), 2, 4, 6), _g((11, 24, 21, 1, 7, 17), 1, 5, 4),
        _g((28, 0, 20, 2, 1, 3), 0, 5, 3), _g((12, 4, 17, 16, 6, 27), 0, 6, 5),
        _g((13, 25, 10, 14, 29, 26), 2, 5, 6)], 3, 4),
    "Type3": ((1, 11, 18, 19, 29), [
        _g((4, 22, 25, 11, 19, 1), 0, 4, 5), _g((2, 6, 29, 18, 21, 23), 0, 4, 6),
        _g((7, 1, 29, 27, 8, 24), 2, 3, 6), _g((15, 11, 18, 13, 3, 17), 2, 3, 4),
        _g((12, 5, 15, 0, 25, 16), 1, 5, 6)], 3, 4),
    "Type4": ((3, 6, 9, 24, 29), [
        _g((7, 9, 29, 22, 1, 4), 1, 8, 6), _g((17, 8, 11, 3, 24, 28), 0, 6, 8),
        _g((1, 2, 8, 6, 3, 9), 2, 5, 4), _g((20, 13, 21, 29, 24, 6), 3, 6, 7),
        _g((18, 26, 19, 0, 14, 16), 0, 5, 4), _g((26, 7, 25, 23, 13, 5), 2, 7, 4)], 4, 5),
    "Type5": ((3, 6, 10, 20, 28), [
        _g((8, 1, 24, 10, 0, 6), 0, 4, 6), _g((25, 29, 18, 3, 7, 20), 0, 5, 6),
        _g((25, 4, 23, 6, 7, 28), 3, 4, 7), _g((20, 12, 10, 11, 17, 16), 1, 7, 5),
        _g((26, 15, 8, 28, 3, 10), 2, 5, 8), _g((29, 13, 19, 2, 21, 12), 3, 8, 6)], 4, 5),
}


class TestClassify:
    @pytest.mark.parametrize("kind", sorted(CORPUS))
    def test_corpus(self, kind):
        S, gadgets, k1, k2 = CORPUS[kind]
        u = universe_for(30, range(k1), range(k1, k1 + k2), gadgets)
        assert all(is_valid(g, u) for g in gadgets)
        w = classify_conflict(gadgets, S)
        assert w.kind == kind and set(w.S) <= set(S)
        assert len(w.gadgets) >= 2

    def test_type1_is_four_gadget_cycle(self):
        S, gadgets, _, _ = CORPUS["Type1"]
        col = EdgeColoring(30)
        for g in gadgets:
            for (a, b), c in gadget_edges(g):
                col.set(a, b, c)
        quads = [q for q in alternating_4cycles(col) if set(q) <= set(S)]
        assert quads
        w = classify_conflict(gadgets, quads[0])
        assert w.kind == "Type1" and len(w.gadgets) == 4

    def test_too_few_repetitions(self):
        with pytest.raises(ClassificationError):
            classify_conflict([A], (0, 1, 2, 3, 4))

    def test_four_set_without_cycle(self):
        with pytest.raises(ClassificationError):
            classify_conflict([A], (0, 1, 2, 3))

"""
Packing gadgets
===============

Phase A samples a universe (sharable pairs and removed vertex-color pairs)
and then greedily packs 6-vertex gadgets, each carrying 7 colored edges,
while never creating a (5,8)-violation or an alternating 4-cycle.
"""

import numpy as np

from ramsey58.core import alternating_4cycles, find_violations
from ramsey58.phase_a import PhaseAConfig, class_shape_errors, run_phase_a, setup

cfg = PhaseAConfig(n=40, seed=0)
print(f"n={cfg.n} p={cfg.prob:.3f} pools {cfg.pool_sizes()}")

universe = setup(cfg, np.random.default_rng(0))
print("sharable pairs:", len(universe.sharable_edges()), "removed pairs:", len(universe.removed))

col, state, universe, stats = run_phase_a(cfg, universe, np.random.default_rng(1))
print(stats.as_dict())

# every check below is exhaustive
print("violations:", len(find_violations(col, 5, 8)))
print("alternating 4-cycles:", len(alternating_4cycles(col)))
print("class shape errors:", class_shape_errors(col, universe))

# at this size most kept edges stay uncolored and are left for Phase B
print(f"colored {col.num_colored()} of {cfg.n * (cfg.n - 1) // 2} pairs")

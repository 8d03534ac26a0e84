"""
From empty graph to certified coloring
======================================

Phase B colors every pair Phase A left open, drawing from two fresh pools
(one for sharable pairs, one for the rest). The result is then verified
and certified. The CLI ``ramsey58 build`` runs the same steps.
"""

import numpy as np

from ramsey58 import certify, find_violations
from ramsey58.phase_a import PhaseAConfig, run_phase_a, setup
from ramsey58.phase_b import PhaseBConfig, PhaseBReport, assign_colors, build_lists
from ramsey58.sfamily import UncoloredClasses, count_matrix

n = 30
cfg_a = PhaseAConfig(n, seed=0)
partial, _, universe, _ = run_phase_a(cfg_a, setup(cfg_a, np.random.default_rng(0)), np.random.default_rng(1))
classes = UncoloredClasses.from_phase_a(partial, universe)

# how crowded one open pair is: sizes of the danger families around it
e = classes.edges()[0]
print("families around", e, {k: v["entries"] for k, v in count_matrix(partial, classes, e).items()})

cfg_b = PhaseBConfig(n, seed=2)
lists = build_lists(classes, cfg_b, first_color=len(universe.all_colors()))
report = PhaseBReport()
final = assign_colors(partial, lists, cfg_b, report=report)
print("phase B:", report.as_dict()["restarts"], "restarts,",
      report.colors_used_b1, "+", report.colors_used_b2, "fresh colors")

print("full:", final.is_full(), "violations:", len(find_violations(final, 5, 8)))
cert = certify(final)
print(f"{cert.colors_used} colors, certified bound {cert.bound_ceil}, passed={cert.passed}")

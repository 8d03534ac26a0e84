"""
Checking and certifying colorings
=================================

A (5,8)-coloring of K_n gives every 5 vertices at least 8 distinct colors
on their 10 edges. Here we break one on purpose, then certify a good one.
"""

from itertools import combinations

import numpy as np

from ramsey58 import EdgeColoring, certify, find_violations, repetitions

# a rainbow K_8 is trivially fine
n = 8
pairs = list(combinations(range(n), 2))
rainbow = EdgeColoring.from_edges(n, [(e, i) for i, e in enumerate(pairs)])
print("violations in rainbow K_8:", find_violations(rainbow, 5, 8))

# reuse two colors on an alternating square plus one 2-path
bad = rainbow.copy()
for (u, v), c in [((0, 1), 0), ((2, 3), 0), ((0, 2), 1), ((1, 3), 1), ((0, 4), 2), ((1, 4), 2)]:
    bad.set(u, v, c)
S = find_violations(bad, 5, 8, limit=1)[0]
r = repetitions(bad, S)
print(f"witness {S}: {r.colored_edges} edges, {r.distinct_colors} colors, {r.repetitions} repetitions")

# the certificate cuts the coloring into parts and counts (vertex, color) hits
cert = certify(rainbow)
print("part counts x1..x8:", cert.x)
print(f"colors used {cert.colors_used} >= bound {cert.bound_ceil}: {cert.passed}")

# the bound is ceil(6(n-1)/7) for every n
print({m: int(np.ceil(6 * (m - 1) / 7)) for m in (8, 15, 50)})

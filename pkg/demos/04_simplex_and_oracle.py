"""
The bundled simplex solver against brute-force vertex enumeration, and a
look at its tableau trace.
"""

import logging

import numpy as np

from jointexo import LinearProgram, Sense, enumerate_vertices, solve

# max x0 + 2 x1 subject to x0 + x1 + x2 = 4, x0 - x1 + x3 = 1
lp = LinearProgram(
    objective=[1, 2, 0, 0],
    eq_matrix=[[1, 1, 1, 0], [1, -1, 0, 1]],
    eq_rhs=[4, 1],
    sense=Sense.MAX,
)
print(solve(lp))
print(enumerate_vertices(lp))

# agreement on random instances
rng = np.random.default_rng(0)
worst = 0.0
for _ in range(200):
    a = rng.uniform(-1, 1, (4, 8))
    a[0] = 1.0  # keeps the feasible set bounded
    b = a @ rng.exponential(size=8)
    c = rng.uniform(-1, 1, 8)
    p = LinearProgram(c, a, b)
    s, v = solve(p), enumerate_vertices(p)
    assert s.status == v.status
    worst = max(worst, abs(s.objective_value - v.objective_value))
print(f"largest objective gap over 200 LPs: {worst:.1e}")

# DEBUG logging prints every pivot as a tab-separated tableau
logging.basicConfig(level=logging.DEBUG, format="%(message)s")
solve(lp)

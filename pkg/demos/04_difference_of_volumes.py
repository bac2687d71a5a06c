"""
A signed integral as one volume
===============================

When the integrand changes sign, the positive and negative parts give two
compact sets K1 and K2.  Their difference is made a single compact set by
cutting space into grid cubes, moving the cubes that meet K2 onto cubes
inside K1, and removing the moved copy of K2.
"""

import math
from pathlib import Path

import numpy as np

from periodred import parse_problem, parse_set, reduce_period
from periodred.diffvol import difference_set
from periodred.numeric import compile_set, estimate_volume

HERE = Path(__file__).resolve().parent

# square minus disk: 4 - pi
K1 = parse_set("{0 <= x <= 2, 0 <= y <= 2}", ("x", "y"))
K2 = parse_set("{x^2 + y^2 <= 1}", ("x", "y"))
D = difference_set(K1, K2)
print(f"grid: r = {D.grid.r}, n = {D.grid.n}, cubes moved: {len(D.perm.moved())}")
e = estimate_volume(D, D.box, 2_000_000, seed=0)
print(f"vol = {e.value:.4f} +- {e.half_width:.1g}   (4 - pi = {4 - math.pi:.4f})")

# the translation respects K2: x in K2 iff Psi(x) lies in the moved copy
X = np.random.default_rng(1).uniform(0, D.grid.r, (10_000, 2))
bad = np.count_nonzero(D.psi_k2_member(D.psi(X)) != compile_set(D.K2)(X))
print("transport violations:", bad)

# the same machinery inside the pipeline
prob = parse_problem((HERE / "problems" / "signed.txt").read_text())
red = reduce_period(prob.piece(), samples=100_000)
print("K1 =", red.K1.set)
print("K2 =", red.K2.set)
e = red.K_volume(1_000_000, seed=2)
print(f"sign {red.sign:+d}, vol(K) = {e.value:.4f} +- {e.half_width:.1g}   (exact: 1)")

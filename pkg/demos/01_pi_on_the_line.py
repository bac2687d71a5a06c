"""
Pi from an integral over the whole line
=======================================

The integral of 1/(1+x^2) over R is unbounded in extent, so it is first cut
at x = -1 and x = 1 and the outer parts are moved into [-1, 1] by x -> 1/x.
The integrand is its own pullback there, which is why both slabs look alike.
"""

from pathlib import Path

from periodred import ReductionTrace, parse_problem, reduce_period

HERE = Path(__file__).resolve().parent
prob = parse_problem((HERE / "problems" / "pi.txt").read_text())
print("integrand:", prob.integrand, "over", prob.domain)

trace = ReductionTrace()
red = reduce_period(prob.piece(), trace=trace, samples=100_000)

# the projective cut and the chart change
for rec in trace.records[:3]:
    print(rec.format())

# two slabs under the same graph, translated apart along x
print("K =", red.K)
print("box:", [(str(lo), str(hi)) for lo, hi in red.box])
est = red.K_volume(1_000_000, seed=0)
print(f"vol(K) = {est.value:.5f} +- {est.half_width:.1g}")

# the slabs share their base, so one can be mirrored below t = 0 instead
glued = reduce_period(prob.piece(), reflect=True, samples=100_000)
print("reflected K =", glued.K)
est = glued.K_volume(1_000_000, seed=1)
print(f"vol(reflected K) = {est.value:.5f} +- {est.half_width:.1g}")

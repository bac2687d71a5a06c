"""
Three blow-ups for an unbounded area
====================================

{x > 1, 0 < y(1+x^2) < 1} has area pi/4.  After the chart change at
infinity the density is 1/x^3 on a cusp touching the origin.  Each blow-up
at the origin lowers the pole order by one, and the logged M climbs
-2, -1, 0; at M = 0 the density is gone.
"""

from pathlib import Path

from periodred import ReductionTrace, parse_problem, reduce_period
from periodred.pipeline import stage_estimate

HERE = Path(__file__).resolve().parent
prob = parse_problem((HERE / "problems" / "quarter_pi.txt").read_text())

trace = ReductionTrace()
red = reduce_period(prob.piece(), trace=trace, samples=100_000)

print("after compactification:")
for p in red.pieces("compact"):
    print("   ", p)

print("blow-ups:")
for rec in trace.find("blowup"):
    pay = rec.payload
    print(f"    at {pay['center']}, line {pay['line']}, M = {pay['M']}")
    print("       ", pay["after"][0])

# every stage carries the same integral
for stage in ("compact", "resolved"):
    e = stage_estimate(red.pieces(stage), 400_000, seed=0)
    print(f"{stage:>9}: {e.value:.5f} +- {e.half_width:.1g}")
e = red.K_volume(1_000_000, seed=0)
print(f"{'vol(K)':>9}: {e.value:.5f} +- {e.half_width:.1g}   (pi/4 = 0.78540)")

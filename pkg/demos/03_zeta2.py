"""
zeta(2) over the simplex
========================

1/((1-x)y) on {0 < x < y < 1} has poles at both ends of the diagonal.
The blow-up at the origin turns the triangle into the unit square with
density 1/(1-xy); the remaining pole sits at the corner (1, 1), and the only
admissible chart line there is x + y = 2, so the last chart is a rotation
normalized by sqrt(2).
"""

from pathlib import Path

from periodred import ReductionTrace, parse_problem, reduce_period

HERE = Path(__file__).resolve().parent
prob = parse_problem((HERE / "problems" / "zeta2.txt").read_text())

trace = ReductionTrace()
red = reduce_period(prob.piece(), radicand=prob.radicand, trace=trace, samples=100_000)

for rec in trace.find("blowup"):
    pay = rec.payload
    print(f"blow-up at {pay['center']} (chart {pay['chart']}, line {pay['line']})")
    print("    substitution:", ", ".join(f"{k} <- {v}" for k, v in pay["substitution"].items()))
    for text in pay["after"]:
        print("    ->", text)

oracle = sum(1 / n ** 2 for n in range(1, 100_001))
e = red.K_volume(2_000_000, seed=0)
print(f"vol(K) = {e.value:.4f} +- {e.half_width:.1g}; partial sum of 1/n^2: {oracle:.4f}")

"""The reduction of an integral to the volume of one compact set.

sign split -> compactification -> pole resolution -> graphs -> difference.
Each stage keeps the integral: the sum over its pieces equals the input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .blowup2 import resolve_poles
from .certify import bounding_box, reduce_set
from .diffvol import DifferenceSet, difference_set
from .hypograph import Assembly, assemble_disjoint, graph_set, reflect_pair
from .numeric import Estimate, estimate_integral, estimate_volume
from .projcharts import compactify_domain
from .semialg import Condition, IntegralPiece, SemiAlgSet, sign_partition
from .trace import ReductionTrace

__all__ = ["Reduction", "reduce_period", "sign_split", "stage_estimate"]


@dataclass
class Reduction:
    input: IntegralPiece
    stages: dict = field(default_factory=dict)   # stage name -> list of (sign, IntegralPiece)
    regions: dict = field(default_factory=dict)  # +1 / -1 -> list of GraphRegion
    K1: Assembly | None = None
    K2: Assembly | None = None
    K: SemiAlgSet | DifferenceSet | None = None
    box: list = field(default_factory=list)
    sign: int = 0
    trace: ReductionTrace = field(default_factory=ReductionTrace)
    volumes: dict = field(default_factory=dict)

    def pieces(self, stage: str) -> list[IntegralPiece]:
        return [p for _, p in self.stages.get(stage, [])]

    def K_volume(self, samples: int = 1_000_000, seed=0) -> Estimate:
        return estimate_volume(self.K, self.box, samples, seed)


def sign_split(piece: IntegralPiece, trace: ReductionTrace) -> list[tuple[int, IntegralPiece]]:
    plus, minus = sign_partition(piece)
    P, Q = piece.integrand.num, piece.integrand.den
    split_conds = [Condition(f, r) for f in (P, Q) for r in (">", "<")]
    out = []
    for s, part in ((1, plus), (-1, minus)):
        part = reduce_set(part, split_conds)
        if part.pieces:
            out.append((s, IntegralPiece(part, piece.integrand)))
    trace.add("sum-by-domain", "split by the sign of the integrand", stage="sign-partition",
              parts=[f"{'+' if s > 0 else '-'}: {p.domain}" for s, p in out],
              objects=[p for _, p in out])
    return out


def stage_estimate(pieces, samples: int = 100_000, seed=0) -> Estimate:
    """Sum of per-piece Monte-Carlo integral estimates (bounded pieces only)."""
    total, hw2, n = 0.0, 0.0, 0
    warnings = []
    for k, p in enumerate(pieces):
        box = p.meta.get("box") or bounding_box(p.domain)
        e = estimate_integral(p, box, samples, seed=None if seed is None else seed + k)
        total += e.value
        hw2 += e.half_width ** 2
        n += e.samples
        if e.warning:
            warnings.append(e.warning)
    return Estimate(total, math.sqrt(hw2), n, "; ".join(warnings))


def _run(stage, trace, fn, *args, **kw):
    """Call a stage; failures carry the stage name and the last trace step."""
    try:
        return fn(*args, **kw)
    except (ValueError, RuntimeError, NotImplementedError) as exc:
        exc.stage = stage
        exc.trace_step = len(trace)
        raise


def reduce_period(piece: IntegralPiece, radicand: int = 0, trace: ReductionTrace | None = None,
                  step_budget: int = 64, reflect: bool = False, samples: int = 200_000,
                  seed=0, max_cubes: int = 1 << 21) -> Reduction:
    """Full pipeline; K is one compact set with vol(K) = |I| and sign ``sign``."""
    trace = trace if trace is not None else ReductionTrace()
    red = Reduction(piece, trace=trace)
    radicand = radicand or piece.integrand.num.radicand() or piece.integrand.den.radicand() \
        or max((p.radicand() for p in piece.domain.polys()), default=0)

    split = _run("sign-partition", trace, sign_split, piece, trace)
    red.stages["sign"] = split

    compact = []
    for s, p in split:
        for q in _run("compactify", trace, compactify_domain, p, trace, label="+" if s > 0 else "-"):
            compact.append((s, q))
    red.stages["compact"] = compact

    resolved = []
    for s, p in compact:
        for q in _run("resolve", trace, resolve_poles, p, trace, radicand, step_budget,
                      label="+" if s > 0 else "-"):
            resolved.append((s, q))
    red.stages["resolved"] = resolved

    regions = {1: [], -1: []}
    for s, p in resolved:
        g = _run("hypograph", trace, graph_set, p, s)
        regions[s].append(g)
        trace.add("sum-by-integrand", "integral as the volume under the graph", stage="hypograph",
                  side=s, base=str(p.domain), integrand=str(p.integrand), region=str(g.region),
                  objects=[g])
    if reflect:
        for s in (1, -1):
            if len(regions[s]) == 2:
                glued = reflect_pair(*regions[s])
                if glued is not None:
                    regions[s] = [glued]
                    trace.add("change-of-variables", "mirror the second graph across t = 0",
                              stage="reflect", side=s, region=str(glued.region), objects=[glued])
    red.regions = regions

    asm = {}
    for s in (1, -1):
        if regions[s]:
            a = assemble_disjoint(regions[s])
            asm[s] = a
            trace.add("change-of-variables", "translate the graphs apart and unite them",
                      stage="assemble", side=s, shifts=[str(x) for x in a.shifts],
                      set=str(a.set), objects=[a])
    red.K1, red.K2 = asm.get(1), asm.get(-1)

    if red.K2 is None or red.K1 is None:
        only = red.K1 or red.K2
        if only is None:
            red.K, red.box, red.sign = SemiAlgSet.empty(piece.vars + ("z",)), [], 0
            return red
        red.K, red.box = only.set, only.box
        red.sign = 1 if red.K1 is not None else -1
        return red

    v1 = estimate_volume(red.K1.set, red.K1.box, samples, seed)
    v2 = estimate_volume(red.K2.set, red.K2.box, samples, seed)
    red.volumes = {"K1": v1, "K2": v2}
    if abs(v1.value - v2.value) <= v1.half_width + v2.half_width:
        trace.warn(f"vol(K1) and vol(K2) are not separated by {samples} samples")
    big, small, sign = (red.K1, red.K2, 1) if v1.value >= v2.value else (red.K2, red.K1, -1)
    D = _run("difference", trace, difference_set, big.set, small.set, big.box, small.box,
             trace, max_cubes)
    red.K, red.box, red.sign = D, D.box, sign
    return red

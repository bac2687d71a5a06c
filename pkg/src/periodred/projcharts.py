"""Projective charts and the compactification of unbounded domains.

The regions V_0 (the open unit cube) and V_i (points where |x_i| >= 1 is the
largest coordinate) cover R^d up to the arrangement {x_i = ±1, x_i = ±x_j}.
On V_i the chart x_i <- 1/x_0, x_j <- x_j/x_0 sends the piece into the unit
cube.  New coordinates keep the old names, the fresh x_0 taking the slot and
the name of x_i.
"""

from __future__ import annotations

from dataclasses import dataclass

from .certify import Unbounded, bounding_box, reduce_set
from .poly import Poly, RatFunc
from .semialg import BasicSet, Condition, IntegralPiece, SemiAlgSet
from .trace import ReductionTrace

__all__ = [
    "ChartMap",
    "projective_partition",
    "arrangement_polys",
    "chart_poly",
    "pullback_piece",
    "compactify_domain",
]

_TMP = "__x0"


@dataclass(frozen=True)
class ChartMap:
    index: int
    vars: tuple

    @property
    def dimension(self) -> int:
        return len(self.vars)

    def substitution(self) -> dict[str, str]:
        if self.index == 0:
            return {v: v for v in self.vars}
        xi = self.vars[self.index - 1]
        return {v: (f"1/{xi}" if v == xi else f"{v}/{xi}") for v in self.vars}

    def jacobian(self) -> RatFunc:
        """Signed Jacobian determinant of the substitution, in the new coordinates."""
        if self.index == 0:
            return RatFunc.from_poly(Poly.const(1, self.vars))
        d = self.dimension
        x0 = Poly.var(self.vars[self.index - 1], self.vars)
        # the row of x_i = 1/x0 has the single entry -1/x0^2; the rest is diagonal 1/x0
        return RatFunc(Poly.const(-1, self.vars), x0 ** (d + 1))

    def forward(self, point):
        """Image in the original coordinates of a point in the chart."""
        if self.index == 0:
            return list(point)
        i = self.index - 1
        x0 = point[i]
        return [1 / x0 if j == i else point[j] / x0 for j in range(len(point))]


def projective_partition(vars) -> list[SemiAlgSet]:
    """Open regions V_0..V_d."""
    vars = tuple(vars)
    d = len(vars)
    if d < 1:
        raise ValueError("dimension must be at least 1")
    xs = Poly.gens(vars)
    regions = [SemiAlgSet.basic(vars, [c for x in xs for c in (Condition(x + 1, ">"), Condition(x - 1, "<"))])]
    for i in range(d):
        xi = xs[i]
        pos = [Condition(xi - 1, ">")]
        neg = [Condition(xi + 1, "<")]
        for j in range(d):
            if j != i:
                pos += [Condition(xi - xs[j], ">"), Condition(xi + xs[j], ">")]
                neg += [Condition(xi - xs[j], "<"), Condition(xi + xs[j], "<")]
        regions.append(SemiAlgSet(vars, [BasicSet(vars, pos), BasicSet(vars, neg)]))
    return regions


def arrangement_polys(vars) -> list[Poly]:
    xs = Poly.gens(tuple(vars))
    out = []
    for i, xi in enumerate(xs):
        out += [xi - 1, xi + 1]
        for xj in xs[i + 1:]:
            out += [xi - xj, xi + xj]
    return out


def chart_poly(f: Poly, index: int) -> tuple[Poly, int]:
    """(G, deg f) with f o phi = G / x0^deg f in chart ``index`` (1-based)."""
    vars = f.vars
    i = index - 1
    deg = max(f.degree(), 0)
    H = f.homogenize(_TMP)
    H = H.eval_partial({vars[i]: 1})
    tmp_vars = tuple(_TMP if j == i else v for j, v in enumerate(vars))
    G = H.with_vars(tmp_vars).rename({_TMP: vars[i]})
    return G, deg


def _pull_condition(c: Condition, index: int, branch: int) -> Condition:
    G, deg = chart_poly(c.poly, index)
    if branch < 0 and deg % 2:
        G = -G
    return Condition(G, c.rel)


def pullback_piece(piece: IntegralPiece, index: int) -> list[IntegralPiece]:
    """Pull a piece (inside V_index) back through the chart, one piece per x0-sign branch.

    Branches with identical integrands are merged into one piece.
    """
    if index == 0:
        return [piece]
    vars = piece.vars
    d = len(vars)
    x0 = Poly.var(vars[index - 1], vars)
    P, Q = piece.integrand.num, piece.integrand.den
    GP, dP = chart_poly(P, index)
    GQ, dQ = chart_poly(Q, index)
    e = dQ - dP - (d + 1)
    out: list[IntegralPiece] = []
    for branch in (1, -1):
        pieces = []
        for b in piece.domain.pieces:
            conds = [_pull_condition(c, index, branch) for c in b.conditions]
            conds.append(Condition(x0, ">" if branch > 0 else "<"))
            pieces.append(BasicSet(vars, conds))
        domain = SemiAlgSet(vars, pieces)
        sign = 1 if branch > 0 else (-1) ** (d + 1)
        num = GP * sign * (x0 ** e if e > 0 else 1)
        den = GQ * (x0 ** (-e) if e < 0 else 1)
        integrand = RatFunc(num, den)
        for prev in out:
            if prev.integrand == integrand:
                prev.domain = prev.domain | domain
                break
        else:
            out.append(IntegralPiece(domain, integrand))
    return out


def compactify_domain(piece: IntegralPiece, trace: ReductionTrace | None = None,
                      label: str = "") -> list[IntegralPiece]:
    """Split by V_0..V_d, send each unbounded part into the unit cube by a chart."""
    trace = trace if trace is not None else ReductionTrace()
    vars = piece.vars
    regions = projective_partition(vars)
    pieces: list[IntegralPiece] = []
    parts = []
    for i, V in enumerate(regions):
        removable = [c for b in V.pieces for c in b.conditions]
        part = reduce_set(piece.domain & V, removable)
        parts.append(part)
    used = {str(p) for i, V in enumerate(regions) if parts[i].pieces
            for b in V.pieces for p in (c.canonical().poly for c in b.conditions)}
    cuts = [str(p) for p in arrangement_polys(vars) if str(p.normalized()) in used]
    trace.add("sum-by-domain", "partition by the projective regions V_0..V_d",
              stage="compactify-partition", source=label, cuts=cuts,
              regions=[f"V{i}: {parts[i]}" for i in range(len(regions)) if parts[i].pieces],
              objects=parts)
    for i, part in enumerate(parts):
        if not part.pieces:
            continue
        sub = IntegralPiece(part, piece.integrand)
        if i == 0:
            pulled = [sub]
        else:
            pulled = pullback_piece(sub, i)
            chart = ChartMap(i, vars)
            results = []
            for q in pulled:
                dom = reduce_set(q.domain)
                if dom.pieces:
                    results.append(IntegralPiece(dom, q.integrand))
            pulled = results
            trace.add("change-of-variables", f"projective chart {i} ({vars[i - 1]} at infinity)",
                      stage="compactify-chart", chart=i, substitution=chart.substitution(),
                      jacobian=str(chart.jacobian()), before=str(sub),
                      after=[str(q) for q in pulled],
                      integrands=[str(q.integrand) for q in pulled], objects=pulled)
        for q in pulled:
            try:
                q.meta["box"] = bounding_box(q.domain)
            except Unbounded as exc:
                raise Unbounded(f"chart {i} left {q.domain} unbounded: {exc}") from exc
            pieces.append(q)
    return pieces

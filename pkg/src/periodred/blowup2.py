"""Resolution of boundary poles of planar integrals by point blow-ups.

At a pole p on the boundary we cut the domain by the real lines of the
tangent cone of the active boundary, pick for each part a line L through p
meeting the part's closure only at p and transverse to the cone, and pull
back by the chart of the blow-up at p that misses L.  The pulled-back part
is bounded, the pole order drops, and the loop repeats on the new pieces.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd

from .certify import (
    Unbounded,
    bounding_box,
    certify_sign,
    poly_upper,
    reduce_basic,
)
from .exactnum import AlgNum, as_algnum, sqrt_in_field
from .poly import Poly, RatFunc, divexact, homogeneous_components, poly_gcd, resultant
from .roots import cone_real_lines, exact_roots, refine_dense, rational_norm
from .semialg import BasicSet, Condition, IntegralPiece, SemiAlgSet, boundary_zariski
from .trace import ReductionTrace

__all__ = [
    "BlowupChart",
    "UnresolvedPoint",
    "ChartBudgetExceeded",
    "StepBudgetExceeded",
    "DivergenceError",
    "ScopeError",
    "pole_boundary_points",
    "pole_curve",
    "local_cone",
    "cone_partition",
    "choose_chart_line",
    "make_chart",
    "tau_strict_transform",
    "blowup_piece",
    "resolve_poles_2d",
    "resolve_poles",
]

log = logging.getLogger(__name__)

RHO = Fraction(1, 1024)
_LAM = ("_l",)


class UnresolvedPoint(ValueError):
    pass


class ChartBudgetExceeded(RuntimeError):
    pass


class StepBudgetExceeded(RuntimeError):
    pass


class DivergenceError(ValueError):
    pass


class ScopeError(NotImplementedError):
    pass


def _fmt_point(p) -> str:
    return "(" + ", ".join(str(as_algnum(c)) for c in p) + ")"


# -- pole points --------------------------------------------------------------

def _univariate_roots(h: Poly, radicand: int):
    """Exact roots and residual intervals of a polynomial in one used variable."""
    if h.is_constant():
        return [], []
    roots, residual = exact_roots(h, radicand)
    return [r for r, _ in roots], residual


def _common_zeros(f: Poly, g: Poly, radicand: int):
    """Common real zeros of coprime f, g in two variables.

    Returns exact points and, for zeros outside the field, rational boxes.
    """
    x, y = f.vars
    if f.is_constant() or g.is_constant():
        return [], []
    if not f.depends_on(y) and not g.depends_on(y):
        return [], []
    if not f.depends_on(x) and not g.depends_on(x):
        return [], []
    R = resultant(f, g, y) if (f.depends_on(y) and g.depends_on(y)) else None
    if R is None:
        # one of them is free of y: its roots fix x directly
        R = f if not f.depends_on(y) else g
    xs, xres = _univariate_roots(R, radicand)
    points, boxes = [], []
    for x0 in xs:
        fx = f.eval_partial({x: x0})
        gx = g.eval_partial({x: x0})
        h = poly_gcd(fx, gx) if not (fx.is_zero() or gx.is_zero()) else (fx if gx.is_zero() else gx)
        if h.is_zero():
            continue
        ys, yres = _univariate_roots(h, radicand)
        points.extend((x0, y0) for y0 in ys)
        lo, hi = x0.enclosure()
        boxes.extend(((lo, hi), iv) for iv in yres)
    if xres:
        if f.depends_on(x) and g.depends_on(x):
            R2 = resultant(f, g, x)
        else:
            R2 = f if not f.depends_on(x) else g
        y_all, y_res = _univariate_roots(R2, radicand)
        y_ivs = [y0.enclosure() for y0 in y_all] + list(y_res)
        for xi in xres:
            for yi in y_ivs:
                boxes.append((xi, yi))
    return points, boxes


def _box_outside_closure(box, closure: SemiAlgSet) -> bool:
    for b in closure.pieces:
        inside_possible = True
        for c in b.conditions:
            p = c.poly if c.rel in (">=", "=") else -c.poly
            if c.rel in (">=", "<="):
                up = poly_upper(p, box)
                if up != float("inf") and up.sign() < 0:
                    inside_possible = False
                    break
            elif c.rel == "=":
                up = poly_upper(p, box)
                lo = poly_upper(-p, box)
                if (up != float("inf") and up.sign() < 0) or (lo != float("inf") and lo.sign() < 0):
                    inside_possible = False
                    break
        if inside_possible:
            return False
    return True


def _split_components(Q: Poly, polys: list[Poly]) -> list[Poly]:
    comps = []
    rest = Q
    for b in polys:
        g = poly_gcd(rest, b)
        while not g.is_constant():
            comps.append(g)
            rest = divexact(rest, g)
            g = poly_gcd(rest, b)
    if not rest.is_constant():
        comps.append(rest)
    out = []
    for c in comps:
        c = c.normalized()
        if c not in out:
            out.append(c)
    return out


def pole_boundary_points(piece: IntegralPiece, radicand: int = 0) -> list[tuple]:
    """Points of the domain's closure where the denominator vanishes on the boundary."""
    if piece.ambient_dim != 2:
        raise ScopeError("pole_boundary_points is implemented for dimension 2")
    Q = piece.integrand.den
    if Q.is_constant():
        return []
    closure = piece.domain.closure()
    bpolys = boundary_zariski(piece.domain)
    comps = _split_components(Q, bpolys)
    points = {}
    unresolved = []
    for qc in comps:
        for b in bpolys:
            h = poly_gcd(qc, b)
            f, g = divexact(qc, h), divexact(b, h)
            pts, boxes = _common_zeros(f, g, radicand)
            if not h.is_constant() and h != qc:
                more, mboxes = _common_zeros(h, g, radicand)
                pts += more
                boxes += mboxes
            for p in pts:
                if Q.eval(p).is_zero() and closure.contains(p):
                    points[p] = None
            unresolved.extend(boxes)
    for bx in unresolved:
        if not _box_outside_closure(_refine_box(bx, Q, bpolys), closure):
            raise UnresolvedPoint(
                f"pole candidate near ({float(bx[0][0]):.6g}, {float(bx[1][0]):.6g}) "
                "has coordinates outside the coefficient field")
    return sorted(points, key=lambda p: (float(p[0]), float(p[1])))


def _refine_box(bx, Q, bpolys):
    (xl, xh), (yl, yh) = bx
    # a narrower box around the same zero: shrink by successive halving while
    # the denominator can still vanish there
    box = ((Fraction(xl), Fraction(xh)), (Fraction(yl), Fraction(yh)))
    for _ in range(30):
        (xl, xh), (yl, yh) = box
        if xh - xl < Fraction(1, 10**9) and yh - yl < Fraction(1, 10**9):
            break
        xm, ym = (xl + xh) / 2, (yl + yh) / 2
        candidates = [((a, b), (c, d)) for a, b in ((xl, xm), (xm, xh)) for c, d in ((yl, ym), (ym, yh))]
        keep = [c for c in candidates if _may_vanish(Q, c) and any(_may_vanish(b, c) for b in bpolys)]
        if len(keep) != 1:
            break
        box = keep[0]
    return box


def _may_vanish(p: Poly, box) -> bool:
    up = poly_upper(p, box)
    lo = poly_upper(-p, box)
    inf = float("inf")
    return not ((up != inf and up.sign() < 0) or (lo != inf and lo.sign() < 0))


# -- local boundary and tangent cone -----------------------------------------

def _closure_sign_ok(closure_pieces, point) -> bool:
    return any(b.contains(point) for b in closure_pieces)


def _edge_hits_closure(f: Poly, closure: SemiAlgSet, p, rho: Fraction, radicand: int) -> bool:
    """Does {f = 0} meet the closure on the boundary of the box p ± rho?"""
    x, y = f.vars
    for axis, other in ((0, 1), (1, 0)):
        for sgn in (1, -1):
            fixed = p[axis] + sgn * rho
            g = f.eval_partial({f.vars[axis]: fixed})
            if g.is_zero():
                return True
            if g.is_constant():
                continue
            roots, residual = exact_roots(g, radicand)
            lo_b, hi_b = p[other] - rho, p[other] + rho
            for r, _ in roots:
                if lo_b <= r <= hi_b:
                    pt = [None, None]
                    pt[axis], pt[other] = fixed, r
                    if closure.contains(pt):
                        return True
            for iv in residual:
                if _interval_root_in_closure(g, iv, f.vars[other], axis, fixed, other,
                                             closure, lo_b, hi_b):
                    return True
    return False


def _interval_root_in_closure(g, iv, var, axis, fixed, other, closure, lo_b, hi_b) -> bool:
    norm = [c.to_fraction() for c in rational_norm(g).univariate_coeffs()]
    lo, hi = iv
    for _ in range(60):
        if AlgNum(hi) < lo_b or AlgNum(lo) > hi_b:
            return False
        if AlgNum(lo) >= lo_b and AlgNum(hi) <= hi_b:
            break
        lo, hi = refine_dense(norm, lo, hi, (hi - lo) / 4)
    fixed_iv = as_algnum(fixed).enclosure()
    for _ in range(40):
        box = [None, None]
        box[axis] = fixed_iv
        box[other] = (lo, hi)
        decided = True
        for b in closure.pieces:
            verdict = _box_verdict(b, box)
            if verdict is True:
                return True
            if verdict is None:
                decided = False
        if decided:
            return False
        lo, hi = refine_dense(norm, lo, hi, (hi - lo) / 4)
    return True  # undecided: treat as active


def _box_verdict(b: BasicSet, box):
    """True if every condition holds on the whole box, False if one fails everywhere."""
    inf = float("inf")
    all_hold = True
    for c in b.conditions:
        up = poly_upper(c.poly, box)
        lo = poly_upper(-c.poly, box)
        up_s = None if up == inf else up.sign()
        lo_s = None if lo == inf else (-lo).sign()  # lower bound of poly
        if c.rel in (">=", ">"):
            if up_s is not None and up_s < 0:
                return False
            if lo_s is None or lo_s < 0:
                all_hold = False
        elif c.rel in ("<=", "<"):
            if lo_s is not None and lo_s > 0:
                return False
            if up_s is None or up_s > 0:
                all_hold = False
        else:
            all_hold = False
    return True if all_hold else None


def local_cone(S: SemiAlgSet, p, radicand: int = 0, rho: Fraction = RHO):
    """Tangent cone at p of the boundary polynomials active near p.

    A polynomial vanishing at p is active when its zero set meets the closure
    of S on the boundary of the box p ± rho.  The cone is returned in
    displacement coordinates (same variable names) with the active list.
    """
    closure = S.closure()
    active = []
    for f in boundary_zariski(S):
        if not f.eval(p).is_zero():
            continue
        if _edge_hits_closure(f, closure, p, rho, radicand):
            active.append(f)
    cone = Poly.const(1, S.vars)
    for f in active:
        comps = homogeneous_components(f, p)
        cone = cone * comps[min(comps)]
    return cone, active


# -- cone partition -----------------------------------------------------------

def _line_poly(line, p, vars) -> Poly:
    (a, b) = line
    x, y = Poly.gens(vars)
    return ((x - p[0]) * a + (y - p[1]) * b)


def cone_partition(S: SemiAlgSet, p, cone: Poly, radicand: int = 0):
    """Cut S by the real lines of the cone through p.

    Returns ``(cuts, parts)``: the cut polynomials and the nonempty parts,
    each a one-piece SemiAlgSet.
    """
    lines = [ln for ln, _ in cone_real_lines(cone, radicand)] if not cone.is_constant() else []
    vars = S.vars
    if not lines:
        return [], [SemiAlgSet(vars, [b]) for b in S.pieces]
    cuts = [_line_poly(ln, p, vars).normalized() for ln in lines]
    if len(cuts) == 1:
        a, b = lines[0]
        cuts.append(_line_poly((-b, a), p, vars).normalized())
    parts = []
    for piece in S.pieces:
        for signs in product((">", "<"), repeat=len(cuts)):
            extra = [Condition(c, s) for c, s in zip(cuts, signs)]
            r = reduce_basic(piece.with_conditions(extra), removable=extra)
            if r is not None:
                parts.append(SemiAlgSet(vars, [r]))
    return cuts, parts


# -- chart line choice -----------------------------------------------------------

def _directions(limit: int):
    """Primitive directions, vertical first, then by growing height."""
    yield from ((0, 1), (1, 0), (1, 1), (1, -1))
    for m in range(2, limit + 1):
        for k in range(1, m):
            if gcd(k, m) == 1:
                yield (k, m)
                yield (k, -m)
        for k in range(1, m):
            if gcd(k, m) == 1:
                yield (m, k)
                yield (m, -k)


def _restrict_to_line(f: Poly, p, d) -> Poly:
    lam = Poly.var("_l", _LAM)
    mapping = {f.vars[0]: lam * d[0] + p[0], f.vars[1]: lam * d[1] + p[1]}
    return f.substitute(mapping)


def line_meets_closure_only_at(S: SemiAlgSet, p, d, radicand: int = 0) -> bool:
    """Exact check that the closure of S meets the line p + lambda*d only at p."""
    closure = S.closure()
    for b in closure.pieces:
        if not _line_piece_only_at_p(b, p, d, radicand):
            return False
    return True


def _line_cells(live, radicand: int):
    """Sample points of the open cells cut out on a line by the live conditions,
    and the roots separating them (exact, or as isolating intervals)."""
    prod_poly = Poly.const(1, _LAM)
    for c in live:
        prod_poly = prod_poly * c.poly
    roots, residual = exact_roots(prod_poly, radicand)
    items = [(r.enclosure(), r) for r, _ in roots] + [(iv, None) for iv in residual]
    items.sort(key=lambda it: it[0][0])
    if not items:
        return [Fraction(0)], items
    samples = [items[0][0][0] - 1, items[-1][0][1] + 1]
    for (iv1, _), (iv2, _) in zip(items, items[1:]):
        samples.append((iv1[1] + iv2[0]) / 2)
    return samples, items


def _restricted_live(b: BasicSet, p, d):
    """Conditions of b on the line p + lambda*d; None if one fails identically."""
    restricted = [Condition(_restrict_to_line(c.poly, p, d), c.rel) for c in b.conditions]
    if any(c.constant_truth() is False for c in restricted):
        return None
    return [c for c in restricted if c.constant_truth() is None]


def _line_piece_only_at_p(b: BasicSet, p, d, radicand: int) -> bool:
    live = _restricted_live(b, p, d)
    if live is None:
        return True
    if not live:
        return False  # the whole line lies in the closure
    samples, items = _line_cells(live, radicand)

    def holds_at(lam) -> bool:
        return all(c.holds([lam]) for c in live)

    for s in samples:
        if holds_at(AlgNum(s)):
            return False
    zero = AlgNum(0)
    for iv, r in items:
        if r is not None:
            if r == zero:
                continue
            if holds_at(r):
                return False
        else:
            if _interval_point_holds(live, iv):
                return False
    return True


def _line_segment_in_closure(closure: SemiAlgSet, p, d, radicand: int) -> bool:
    """Does the closed set contain a nondegenerate segment of the line p + lambda*d?"""
    for b in closure.pieces:
        live = _restricted_live(b, p, d)
        if live is None:
            continue
        if not live:
            return True
        samples, _ = _line_cells(live, radicand)
        if any(all(c.holds([AlgNum(s)]) for c in live) for s in samples):
            return True
    return False


def pole_curve(piece: IntegralPiece, radicand: int = 0) -> Poly | None:
    """A linear factor of the denominator vanishing along a segment of the closure.

    Near a smooth boundary arc where Q vanishes and P does not, |P/Q| is at
    least c/dist, which is not integrable.  Nonlinear factors are not examined.
    """
    Q = piece.integrand.den
    if Q.is_constant():
        return None
    closure = piece.domain.closure()
    seen = []
    for b in boundary_zariski(piece.domain):
        h = poly_gcd(Q, b)
        if h.is_constant():
            continue
        for g in _linear_factors(h, radicand):
            if g in seen:
                continue
            seen.append(g)
            p, d = _line_param(g)
            if _line_segment_in_closure(closure, p, d, radicand):
                return g
    return None


def _linear_factors(h: Poly, radicand: int) -> list[Poly]:
    """Linear factors of h with coefficients in the field, found through lines
    parallel to the axes (enough for the exceptional and boundary lines)."""
    out = []
    if h.degree() == 1:
        return [h.normalized()]
    x, y = h.vars
    for v, w in ((x, y), (y, x)):
        if h.degree_in(w) == 0 and h.depends_on(v):
            roots, _ = _univariate_roots(h, radicand)
            for r in roots:
                out.append((Poly.var(v, h.vars) - Poly.const(r, h.vars)).normalized())
    return out


def _line_param(g: Poly):
    """A point and direction of the line g = 0 (g linear)."""
    x, y = g.vars
    a = g.diff(x).constant_value()
    b = g.diff(y).constant_value()
    c = g.eval([AlgNum(0), AlgNum(0)])
    if not b.is_zero():
        return (AlgNum(0), -c / b), (b, -a)
    return (-c / a, AlgNum(0)), (AlgNum(0), AlgNum(1))


def _interval_point_holds(live, iv) -> bool:
    lo, hi = iv
    for c in live:
        h = c.poly
        s_lo = h.eval([AlgNum(lo)]).sign()
        s_hi = h.eval([AlgNum(hi)]).sign()
        if s_lo != s_hi or s_lo == 0:
            continue  # h vanishes at the root: any relaxed relation holds
        if not c.holds_sign(s_lo):
            return False
    return True  # conservative when every sign is compatible


def choose_chart_line(S: SemiAlgSet, p, cone: Poly, radicand: int = 0,
                      budget: int = 64, max_budget: int = 1024):
    """Direction (a, b) of an admissible line through p."""
    limit = budget
    tried = set()
    while limit <= max_budget:
        for d in _directions(limit):
            if d in tried:
                continue
            tried.add(d)
            if not cone.is_constant() and cone.eval(list(d)).is_zero():
                continue
            if line_meets_closure_only_at(S, p, (AlgNum(d[0]), AlgNum(d[1])), radicand):
                return d
        limit *= 2
    raise ChartBudgetExceeded(f"no admissible chart line at {_fmt_point(p)}")


# -- charts --------------------------------------------------------------------

@dataclass
class BlowupChart:
    center: tuple
    direction: tuple          # direction of the excluded line L
    vars: tuple
    substitution: dict        # old variable -> Poly in new variables
    exceptional: str          # name of the exceptional coordinate
    det: AlgNum               # determinant of the linear part before the chart
    kind: str                 # "first" (s, st) or "second" (st, t)

    def line_poly(self) -> Poly:
        a, b = self.direction
        return _line_poly((as_algnum(b), -as_algnum(a)), self.center, self.vars).normalized()

    def jacobian(self) -> RatFunc:
        e = Poly.var(self.exceptional, self.vars)
        return RatFunc(e * self.det)

    def forward(self, point):
        return [self.substitution[v].eval(point) for v in self.vars]

    def describe(self) -> dict:
        return {v: str(self.substitution[v]) for v in self.vars}


def make_chart(p, d, vars, radicand: int = 0) -> BlowupChart:
    """Blow-up chart at p whose missing line has direction d."""
    s, t = Poly.gens(vars)
    p = [as_algnum(c) for c in p]
    a, b = d
    if a == 0:
        sub = {vars[0]: s + p[0], vars[1]: s * t + p[1]}
        return BlowupChart(tuple(p), (0, 1), vars, sub, vars[0], AlgNum(1), "first")
    if b == 0:
        sub = {vars[0]: s * t + p[0], vars[1]: t + p[1]}
        return BlowupChart(tuple(p), (1, 0), vars, sub, vars[1], AlgNum(1), "second")
    if b < 0:
        a, b = -a, -b
    n2 = Fraction(a * a + b * b)
    root = sqrt_in_field(n2, radicand) if radicand else sqrt_in_field(n2, 1)
    if root is not None and (radicand or root.is_rational()):
        da, db = AlgNum(a) / root, AlgNum(b) / root
        det = AlgNum(1)
    else:
        da, db = AlgNum(a), AlgNum(b)
        det = AlgNum(n2)
    # columns R e1 = (db, -da), R e2 = (da, db)
    c1 = (db, -da)
    c2 = (da, db)
    st = s * t
    sub = {vars[0]: s * c1[0] + st * c2[0] + p[0], vars[1]: s * c1[1] + st * c2[1] + p[1]}
    return BlowupChart(tuple(p), (a, b), vars, sub, vars[0], det, "first")


def _pull(f: Poly, chart: BlowupChart) -> tuple[Poly, int]:
    F = f.substitute(chart.substitution)
    m = F.lowest_power_of(chart.exceptional)
    return F.divide_power(chart.exceptional, m), m


def tau_strict_transform(S: SemiAlgSet, chart: BlowupChart) -> list[tuple[int, SemiAlgSet]]:
    """Pulled-back description, one entry per sign of the exceptional coordinate."""
    vars = S.vars
    e = Poly.var(chart.exceptional, vars)
    out = []
    for branch in (1, -1):
        pieces = []
        for b in S.pieces:
            conds = []
            for c in b.conditions:
                g, m = _pull(c.poly, chart)
                if branch < 0 and m % 2:
                    g = -g
                conds.append(Condition(g, c.rel))
            conds.append(Condition(e, ">" if branch > 0 else "<"))
            r = reduce_basic(BasicSet(vars, conds))
            if r is not None:
                pieces.append(r)
        if pieces:
            out.append((branch, SemiAlgSet(vars, pieces).canonical()))
    return out


def blowup_piece(piece: IntegralPiece, chart: BlowupChart):
    """Pull a piece back; returns (pieces, multiplicity data)."""
    vars = piece.vars
    P, Q = piece.integrand.num, piece.integrand.den
    Pf = P.substitute(chart.substitution)
    Qf = Q.substitute(chart.substitution)
    NP = Pf.lowest_power_of(chart.exceptional)
    NQ = Qf.lowest_power_of(chart.exceptional)
    nu = 2
    mult = {"NP": NP, "NQ": NQ, "nu": nu, "M": NP - NQ + nu - 1}
    e = Poly.var(chart.exceptional, vars)
    detabs = chart.det if chart.det.sign() > 0 else -chart.det
    out = []
    for branch, dom in tau_strict_transform(piece.domain, chart):
        jac = e * detabs * branch
        integrand = RatFunc(Pf * jac, Qf)
        out.append(IntegralPiece(dom, integrand))
    return out, mult


# -- the worklist ------------------------------------------------------------------

@dataclass
class _Item:
    piece: IntegralPiece
    lineage: dict = field(default_factory=dict)


def _on_exceptional(p, item: _Item) -> int | None:
    ex = item.lineage.get("exceptional")
    if ex is None:
        return None
    i = item.piece.vars.index(ex)
    return item.lineage["id"] if as_algnum(p[i]).is_zero() else None


def _pole_free(piece: IntegralPiece) -> bool:
    Q = piece.integrand.den
    if Q.is_constant():
        return True
    box = piece.meta.get("box")
    return certify_sign(Q, piece.domain, box) != 0


def resolve_poles(piece: IntegralPiece, trace: ReductionTrace | None = None,
                  radicand: int = 0, step_budget: int = 64, label: str = "") -> list[IntegralPiece]:
    """Dimension dispatch: d = 1 checks, d = 2 resolves, d > 2 is out of scope."""
    trace = trace if trace is not None else ReductionTrace()
    d = piece.ambient_dim
    if d == 1:
        if not _pole_free(piece):
            raise DivergenceError(f"denominator {piece.integrand.den} vanishes on the closure of {piece.domain}")
        return [piece]
    if d == 2:
        return resolve_poles_2d(piece, trace, radicand, step_budget, label)
    if _pole_free(piece):
        return [piece]
    raise ScopeError("unimplemented: resolution for d > 2")


def resolve_poles_2d(piece: IntegralPiece, trace: ReductionTrace | None = None,
                     radicand: int = 0, step_budget: int = 64, label: str = "") -> list[IntegralPiece]:
    trace = trace if trace is not None else ReductionTrace()
    vars = piece.vars
    radicand = radicand or piece.integrand.num.radicand() or piece.integrand.den.radicand()
    work = [_Item(IntegralPiece(SemiAlgSet(vars, [b]), piece.integrand, dict(piece.meta)))
            for b in piece.domain.pieces]
    done: list[IntegralPiece] = []
    steps = 0
    next_lineage = [0]
    while work:
        item = work.pop(0)
        X = item.piece
        if "box" not in X.meta:
            X.meta["box"] = bounding_box(X.domain)
        if _pole_free(X):
            done.append(X)
            continue
        curve = pole_curve(X, radicand)
        if curve is not None:
            raise DivergenceError(f"integrand {X.integrand} has a non-integrable pole along "
                                  f"{curve} = 0 on the boundary of {X.domain}")
        pts = pole_boundary_points(X, radicand)
        if not pts:
            trace.warn(f"denominator of {X} is not certified sign-definite and no boundary pole was found")
            done.append(X)
            continue
        handled = False
        for p in pts:
            cone, active = local_cone(X.domain, p, radicand)
            lines = cone_real_lines(cone, radicand) if not cone.is_constant() else None
            if not lines or not len(lines):
                trace.warn(f"no real tangent line at {_fmt_point(p)}; point skipped")
                continue
            handled = True
            steps += 1
            if steps > step_budget:
                raise StepBudgetExceeded(f"more than {step_budget} blow-ups (last at {_fmt_point(p)})")
            cuts, parts = cone_partition(X.domain, p, cone, radicand)
            if len(parts) > 1:
                trace.add("sum-by-domain", f"cone partition at {_fmt_point(p)}",
                          stage="cone-partition", source=label, center=_fmt_point(p),
                          cuts=[str(c) for c in cuts], parts=[str(q) for q in parts],
                          objects=parts)
            lineage_id = _on_exceptional(p, item)
            if lineage_id is None:
                next_lineage[0] += 1
                lineage_id = next_lineage[0]
            for part in parts:
                sub = IntegralPiece(part, X.integrand)
                if not part.closure().contains(p):
                    work.append(_Item(sub, dict(item.lineage)))
                    continue
                d = choose_chart_line(part, p, cone, radicand)
                chart = make_chart(p, d, vars, radicand)
                children, mult = blowup_piece(sub, chart)
                prev = item.lineage.get("M") if item.lineage.get("id") == lineage_id else None
                if prev is not None and mult["M"] <= prev:
                    trace.warn(f"multiplicity did not increase at {_fmt_point(p)}: {prev} -> {mult['M']}")
                trace.add("change-of-variables", f"blow-up at {_fmt_point(p)}",
                          stage="blowup", source=label, center=_fmt_point(p),
                          line=f"{chart.line_poly()} = 0", chart=chart.kind,
                          substitution=chart.describe(), jacobian=str(chart.jacobian()),
                          NP=mult["NP"], NQ=mult["NQ"], nu=mult["nu"], M=mult["M"],
                          lineage=lineage_id, before=str(sub),
                          after=[str(c) for c in children],
                          domains=[str(c.domain) for c in children],
                          integrands=[str(c.integrand) for c in children],
                          objects=children)
                for c in children:
                    try:
                        c.meta["box"] = bounding_box(c.domain)
                    except Unbounded as exc:
                        raise Unbounded(f"blow-up at {_fmt_point(p)} produced an unbounded piece") from exc
                    work.append(_Item(c, {"id": lineage_id, "M": mult["M"],
                                          "exceptional": chart.exceptional}))
            break
        if not handled:
            done.append(X)
    return done

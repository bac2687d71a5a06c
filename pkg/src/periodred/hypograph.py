"""Integrals of pole-free pieces as volumes: the region under the graph.

For a piece with integrand P/Q of constant sign on a compact domain, the set
between 0 and the graph, {x in S, 0 < t < P/Q} (or P/Q < t < 0), is
described with H = t*Q - P, oriented by the certified sign of Q.  Regions are then translated
apart along the first axis and united.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .certify import certify_empty, certify_sign, is_empty
from .numeric import interval_eval_centered
from .poly import Poly, RatFunc
from .semialg import Condition, IntegralPiece, SemiAlgSet

__all__ = [
    "GraphRegion",
    "Assembly",
    "fresh_var",
    "integrand_sign",
    "value_bound",
    "graph_set",
    "translate_set",
    "assemble_disjoint",
    "reflect_pair",
]

_NAMES = ("z", "t", "w", "u", "v", "s")


def fresh_var(vars) -> str:
    for n in _NAMES:
        if n not in vars:
            return n
    k = 1
    while f"t{k}" in vars:
        k += 1
    return f"t{k}"


@dataclass
class GraphRegion:
    base: SemiAlgSet
    H: Poly
    side: int
    region: SemiAlgSet
    box: list = field(default_factory=list)
    integrand: RatFunc | None = None
    den_sign: int = 0  # certified sign of Q on the base; 0 if unknown

    @property
    def vars(self):
        return self.region.vars

    def __str__(self):
        return str(self.region)


@dataclass
class Assembly:
    set: SemiAlgSet
    shifts: list
    box: list
    regions: list

    @property
    def vars(self):
        return self.set.vars


def _den_sign(piece: IntegralPiece) -> int:
    Q = piece.integrand.den
    if Q.is_constant():
        return Q.constant_value().sign()
    sq = certify_sign(Q, piece.domain, piece.meta.get("box"))
    if sq == 0:
        raise ValueError(f"denominator {Q} is not certified nonvanishing on the closure of {piece.domain}")
    return sq


def integrand_sign(piece: IntegralPiece) -> int:
    """Sign of P/Q on the domain; Q must be certified nonzero on the closure."""
    P = piece.integrand.num
    box = piece.meta.get("box")
    sq = _den_sign(piece)
    if P.is_constant():
        sp = P.constant_value().sign()
        if sp == 0:
            return 0
    else:
        pieces = piece.domain.pieces
        if all(certify_empty(b.conditions + (Condition(P, "<"),), b.vars, box) is True for b in pieces):
            sp = 1
        elif all(certify_empty(b.conditions + (Condition(P, ">"),), b.vars, box) is True for b in pieces):
            sp = -1
        else:
            raise ValueError(f"numerator {P} changes sign on {piece.domain}")
    return sp * sq


def _excluded(S: SemiAlgSet, los, his):
    """Boxes certainly disjoint from the closure of S (interval test)."""
    out = np.ones(los.shape[0], dtype=bool)
    for b in S.pieces:
        ok = np.ones(los.shape[0], dtype=bool)
        for c in b.conditions:
            lo, hi = interval_eval_centered(c.poly, los, his)
            if c.rel in (">", ">="):
                ok &= hi >= 0
            elif c.rel in ("<", "<="):
                ok &= lo <= 0
            else:
                ok &= (lo <= 0) & (hi >= 0)
        out &= ~ok
    return out


def value_bound(piece: IntegralPiece, box, grid: int = 8, rounds: int = 10,
                cap: int = 1 << 17) -> Fraction:
    """Rational upper bound of |P/Q| on the domain, by adaptive interval subdivision."""
    P, Q = piece.integrand.num, piece.integrand.den
    d = len(box)
    lo0 = np.array([float(b[0]) for b in box])
    hi0 = np.array([float(b[1]) for b in box])
    idx = np.array(np.meshgrid(*[np.arange(grid)] * d, indexing="ij")).reshape(d, -1).T
    step = (hi0 - lo0) / grid
    los = lo0 + idx * step
    his = np.minimum(lo0 + (idx + 1) * step, hi0)
    los, his = np.nextafter(los, -np.inf), np.nextafter(his, np.inf)
    best = 0.0
    for _ in range(rounds + 1):
        keep = ~_excluded(piece.domain, los, his)
        los, his = los[keep], his[keep]
        if not los.shape[0]:
            break
        plo, phi = interval_eval_centered(P, los, his)
        qlo, qhi = interval_eval_centered(Q, los, his)
        good = (qlo > 0) | (qhi < 0)
        if good.any():
            pabs = np.maximum(np.abs(plo[good]), np.abs(phi[good]))
            qabs = np.minimum(np.abs(qlo[good]), np.abs(qhi[good]))
            best = max(best, float(np.max(np.nextafter(pabs / qabs, np.inf))))
        los, his = los[~good], his[~good]
        if not los.shape[0]:
            break
        if los.shape[0] * 2 ** d > cap:
            raise ValueError("integrand bound needs too many boxes; is the denominator pole-free?")
        # split every remaining box in half along each axis
        mids = (los + his) / 2
        nl, nh = [], []
        for corner in np.ndindex(*(2,) * d):
            c = np.array(corner, dtype=bool)
            nl.append(np.where(c, mids, los))
            nh.append(np.where(c, his, mids))
        los, his = np.concatenate(nl), np.concatenate(nh)
    else:
        raise ValueError("cannot bound the integrand: the denominator approaches zero")
    if los.shape[0]:
        raise ValueError("cannot bound the integrand: the denominator approaches zero")
    return Fraction(math.ceil(best * 64 + 1e-9), 64)


def graph_set(piece: IntegralPiece, side: int | None = None, var: str | None = None) -> GraphRegion:
    """Region between 0 and the graph of P/Q, one dimension up (new coordinate last)."""
    sign = integrand_sign(piece)
    if side is None:
        side = sign
    if sign != side:
        raise ValueError(f"integrand sign {sign:+d} does not match side {side:+d}")
    vars = piece.vars
    t = var or fresh_var(vars)
    nv = tuple(vars) + (t,)
    P = piece.integrand.num.with_vars(nv)
    Q = piece.integrand.den.with_vars(nv)
    T = Poly.var(t, nv)
    H = T * Q - P
    base = piece.domain.with_vars(nv)
    # 0 < t < P/Q reads tQ < P where Q > 0 and tQ > P where Q < 0; the sign
    # of Q is certified on the base, so only one branch is nonempty and the
    # condition on Q itself is implied
    sq = _den_sign(piece)
    t_rel = ">" if side > 0 else "<"
    h_rel = "<" if side * sq > 0 else ">"
    pieces = []
    for b in base.pieces:
        c = b.with_conditions([Condition(T, t_rel), Condition(H, h_rel)]).canonical()
        if c is not None:
            pieces.append(c)
    region = SemiAlgSet(nv, pieces)
    base_box = piece.meta.get("box")
    if base_box is None:
        from .certify import bounding_box
        base_box = bounding_box(piece.domain)
    M = value_bound(piece, base_box)
    tbox = (Fraction(0), M) if side > 0 else (-M, Fraction(0))
    return GraphRegion(piece.domain, H, side, region, list(base_box) + [tbox], piece.integrand, sq)


def translate_set(S: SemiAlgSet, shift, axis: int = 0) -> SemiAlgSet:
    """Image of S under x_axis -> x_axis + shift."""
    if shift == 0:
        return S
    vars = S.vars
    x = Poly.var(vars[axis], vars)
    return S.substitute({vars[axis]: x - shift}, vars).canonical()


def assemble_disjoint(regions: list, axis: int = 0) -> Assembly:
    """Translate the regions apart along ``axis`` (stride: box width + 1) and unite them."""
    if not regions:
        raise ValueError("nothing to assemble")
    vars = regions[0].vars
    for r in regions:
        if r.vars != vars:
            raise ValueError("regions live in different coordinates")
        if not r.box or any(b is None for b in r.box):
            raise ValueError("region has no bounding box (unbounded?)")
    cursor = regions[0].box[axis][0]
    shifts, pieces, boxes = [], [], []
    for r in regions:
        lo, hi = r.box[axis]
        shift = cursor - lo
        shifts.append(shift)
        moved = translate_set(r.region, shift, axis)
        pieces.extend(moved.pieces)
        bx = list(r.box)
        bx[axis] = (lo + shift, hi + shift)
        boxes.append(bx)
        cursor = hi + shift + 1
    d = len(vars)
    box = [(min(b[i][0] for b in boxes), max(b[i][1] for b in boxes)) for i in range(d)]
    return Assembly(SemiAlgSet(vars, pieces), shifts, box, list(regions))


def _covers(A: SemiAlgSet, B: SemiAlgSet) -> bool:
    """A is inside the closure of B (certified)."""
    outside = B.closure().complement()
    return all(is_empty(SemiAlgSet(A.vars, [a]) & SemiAlgSet(A.vars, [o])) for a in A.pieces for o in outside.pieces)


def reflect_pair(r1: GraphRegion, r2: GraphRegion) -> GraphRegion | None:
    """Glue two same-side regions over the same base across t = 0.

    Returns None unless the bases agree up to boundary and the sides match.
    The second region is mirrored in t; when the integrands agree the result
    is the single description {x in base, -P < tQ < P} (for Q > 0).
    """
    if r1.side != r2.side or r1.vars != r2.vars:
        return None
    if not (_covers(r1.base, r2.base) and _covers(r2.base, r1.base)):
        return None
    vars = r1.vars
    t = vars[-1]
    T = Poly.var(t, vars)
    box = [(min(a[0], b[0]), max(a[1], b[1])) for a, b in zip(r1.box[:-1], r2.box[:-1])]
    tb = max(abs(r1.box[-1][0]), abs(r1.box[-1][1]), abs(r2.box[-1][0]), abs(r2.box[-1][1]))
    box.append((-tb, tb))
    if r1.integrand is not None and r1.integrand == r2.integrand:
        P = r1.integrand.num.with_vars(vars)
        Q = r1.integrand.den.with_vars(vars)
        s = r1.side
        signs = [r1.den_sign] if r1.den_sign else [1, -1]
        pieces = []
        for b in r1.base.with_vars(vars).pieces:
            for sq in signs:
                # |t| < |P/Q|: t*Q - s*P and t*Q + s*P have opposite signs
                lo, hi = ("<", ">") if sq > 0 else (">", "<")
                extra = [Condition(T * Q - P * s, lo), Condition(T * Q + P * s, hi)]
                if not r1.den_sign:
                    extra.append(Condition(Q, ">" if sq > 0 else "<"))
                c = b.with_conditions(extra).canonical()
                if c is not None:
                    pieces.append(c)
        region = SemiAlgSet(vars, pieces)
    else:
        mirrored = r2.region.substitute({t: -T}, vars).canonical()
        region = r1.region | mirrored
    return GraphRegion(r1.base, r1.H, r1.side, region, box, r1.integrand, r1.den_sign)

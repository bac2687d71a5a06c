"""Certificates for basic semi-algebraic sets.

Emptiness is proved per box of a branch-and-bound subdivision, either by a
single condition whose exact range over the box has the wrong sign, or by a
Positivstellensatz-style linear combination: nonnegative multipliers on the
conditions and their pairwise products whose sum is provably nonpositive on
the box while the set forces it positive.  The multipliers come from an LP
and are re-checked in exact arithmetic, so floating point never decides the
outcome.  A box center satisfying every condition exactly proves
nonemptiness.  Anything else is "unknown", which callers treat as possibly
nonempty.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, product

import numpy as np
import sympy
from scipy.optimize import linprog

from .exactnum import AlgNum
from .poly import Poly, _content, divexact
from .semialg import BasicSet, Condition, SemiAlgSet

__all__ = [
    "certify_empty",
    "is_empty",
    "bounding_box",
    "Unbounded",
    "certify_sign",
    "globally_positive",
    "reduce_basic",
    "reduce_set",
    "linear_box",
]

INF = math.inf


class Unbounded(ValueError):
    pass


# -- exact extended-interval bounds ------------------------------------------

def _mul(a, b):
    if a == 0 or b == 0:
        return Fraction(0)
    return a * b


def _pow_range(lo, hi, k):
    if k == 0:
        return Fraction(1), Fraction(1)
    a = lo ** k if lo not in (INF, -INF) else (INF if k % 2 == 0 or lo > 0 else -INF)
    b = hi ** k if hi not in (INF, -INF) else (INF if k % 2 == 0 or hi > 0 else -INF)
    if k % 2 == 0 and lo < 0 < hi:
        return Fraction(0), max(a, b)
    return min(a, b), max(a, b)


def _mul_range(r1, r2):
    ps = [_mul(a, b) for a in r1 for b in r2]
    return min(ps), max(ps)


def mono_range(e, box):
    r = (Fraction(1), Fraction(1))
    for (lo, hi), k in zip(box, e):
        if k:
            r = _mul_range(r, _pow_range(lo, hi, k))
    return r


def poly_upper(p: Poly, box):
    """Exact upper bound of ``p`` on the box (``INF`` when unbounded)."""
    total = AlgNum(0)
    for e, c in p.terms.items():
        lo, hi = mono_range(e, box)
        s = c.sign()
        bound = hi if s > 0 else lo
        if bound in (INF, -INF):
            if (bound == INF) == (s > 0):
                return INF
            continue  # -inf contribution; cannot occur for a closed finite bound
        total = total + c * bound
    return total


def linear_box(conds, vars):
    """Bounds read off single-variable linear conditions (closure semantics)."""
    box = [[-INF, INF] for _ in vars]
    for c in conds:
        used = c.poly.used_vars()
        if len(used) != 1 or c.poly.degree() != 1 or not c.poly.is_rational():
            continue
        i = vars.index(used[0])
        e1 = tuple(1 if j == i else 0 for j in range(len(vars)))
        a = c.poly.terms[e1].to_fraction()
        b = c.poly.constant_value().to_fraction()
        root = -b / a
        rel = c.rel if a > 0 else {">": "<", ">=": "<=", "<": ">", "<=": ">=", "=": "="}[c.rel]
        if rel in (">", ">=", "="):
            box[i][0] = max(box[i][0], root)
        if rel in ("<", "<=", "="):
            box[i][1] = min(box[i][1], root)
    return [tuple(b) for b in box]


# -- facts and the LP certificate --------------------------------------------

def _facts(conds):
    """Conditions as (poly, strict) meaning poly > 0 or poly >= 0."""
    out = []
    for c in conds:
        p = c.poly
        if c.rel == ">":
            out.append((p, True))
        elif c.rel == ">=":
            out.append((p, False))
        elif c.rel == "<":
            out.append((-p, True))
        elif c.rel == "<=":
            out.append((-p, False))
        else:
            out.append((p, False))
            out.append((-p, False))
    return out


def _box_facts(box, vars):
    out = []
    for i, (lo, hi) in enumerate(box):
        x = Poly.var(vars[i], vars)
        if lo != -INF:
            out.append((x - lo, False))
        if hi != INF:
            out.append((hi - x, False))
    return out


def _lp_certificate(facts, box) -> bool:
    if not facts:
        return False
    pool = list(facts)
    for (p, sp), (q, sq) in combinations(facts, 2):
        pool.append((p * q, sp and sq))
    monos = sorted({e for p, _ in pool for e in p.terms if any(e)})
    zero = (0,) * len(box)
    K, M = len(pool), len(monos)
    midx = {m: j for j, m in enumerate(monos)}
    A = np.zeros((M, K))
    c0 = np.zeros(K)
    for k, (p, _) in enumerate(pool):
        for e, c in p.terms.items():
            if e == zero:
                c0[k] = float(c)
            else:
                A[midx[e], k] = float(c)
    rows_ub, b_ub, rows_eq, b_eq = [], [], [], []
    ebounds = []
    for j, m in enumerate(monos):
        lo, hi = mono_range(m, box)
        lo_f, hi_f = float(lo), float(hi)
        e_row = np.zeros(M)
        e_row[j] = -1.0
        if hi != INF:
            rows_ub.append(np.concatenate([A[j] * hi_f, e_row]))
            b_ub.append(0.0)
        else:
            rows_ub.append(np.concatenate([A[j], np.zeros(M)]))
            b_ub.append(0.0)
        if lo != -INF:
            rows_ub.append(np.concatenate([A[j] * lo_f, e_row]))
            b_ub.append(0.0)
        else:
            rows_ub.append(np.concatenate([-A[j], np.zeros(M)]))
            b_ub.append(0.0)
        ebounds.append((0.0, 0.0) if hi == INF and lo == -INF else (None, None))
    strict = np.array([1.0 if s else 0.0 for _, s in pool])
    norm = strict if strict.any() else np.ones(K)
    rows_eq.append(np.concatenate([norm, np.zeros(M)]))
    b_eq.append(1.0)
    cost = np.concatenate([c0, np.ones(M)])
    bounds = [(0.0, 1e3)] * K + ebounds
    try:
        res = linprog(cost, A_ub=np.array(rows_ub) if rows_ub else None,
                      b_ub=np.array(b_ub) if b_ub else None,
                      A_eq=np.array(rows_eq), b_eq=np.array(b_eq),
                      bounds=bounds, method="highs")
    except ValueError:
        return False
    if res.status != 0 or res.fun > 1e-7:
        return False
    lam = res.x[:K]
    for denom in (10**3, 10**6, 10**9):
        exact = []
        for v in lam:
            if v < 1e-10:
                exact.append(Fraction(0))
            else:
                exact.append(Fraction(float(v)).limit_denominator(denom))
        if _verify(pool, exact, box):
            return True
    return False


def _verify(pool, lam, box) -> bool:
    combo = None
    strict_used = False
    for (p, s), l in zip(pool, lam):
        if l == 0:
            continue
        term = p * l
        combo = term if combo is None else combo + term
        strict_used = strict_used or s
    if combo is None:
        return False
    ub = poly_upper(combo, box)
    if ub == INF:
        return False
    s = ub.sign()
    return s < 0 or (s == 0 and strict_used)


# -- branch and bound ---------------------------------------------------------

def _finite_point(lo, hi):
    if lo == -INF and hi == INF:
        return Fraction(0)
    if hi == INF:
        return lo + max(Fraction(1), abs(lo))
    if lo == -INF:
        return hi - max(Fraction(1), abs(hi))
    return (lo + hi) / 2


def _split(box):
    best, key = None, None
    for i, (lo, hi) in enumerate(box):
        if lo == -INF or hi == INF:
            k = (1, 0)
        else:
            k = (0, hi - lo)
        if key is None or k > key:
            best, key = i, k
    lo, hi = box[best]
    m = _finite_point(lo, hi)
    a = list(box)
    b = list(box)
    a[best] = (lo, m)
    b[best] = (m, hi)
    return [tuple(a), tuple(b)]


def _witness_points(box):
    center = [_finite_point(lo, hi) for lo, hi in box]
    yield center
    if all(lo != -INF and hi != INF for lo, hi in box):
        for signs in product((1, 3), repeat=len(box)):
            yield [lo + (hi - lo) * s / 4 for (lo, hi), s in zip(box, signs)]


def _refuted(facts, box) -> bool:
    for p, strict in facts:
        ub = poly_upper(p, box)
        if ub == INF:
            continue
        s = ub.sign()
        if s < 0 or (s == 0 and strict):
            return True
    return False


_CACHE: dict = {}


def certify_empty(conds, vars, box=None, max_boxes: int = 48):
    """True: certified empty; False: exact witness found; None: unknown."""
    vars = tuple(vars)
    conds = list(conds)
    for c in conds:
        t = c.constant_truth()
        if t is False:
            return True
    conds = [c for c in conds if c.constant_truth() is None]
    if not conds:
        return False
    lb = linear_box(conds, vars)
    if box is None:
        box = lb
    else:
        box = [(max(a[0], b[0]), min(a[1], b[1])) for a, b in zip(box, lb)]
    box = tuple((Fraction(lo) if lo not in (INF, -INF) else lo,
                 Fraction(hi) if hi not in (INF, -INF) else hi) for lo, hi in box)
    key = (vars, tuple(sorted(str(c) for c in conds)), box)
    if key in _CACHE:
        return _CACHE[key]
    result = _certify(conds, vars, box, max_boxes)
    _CACHE[key] = result
    return result


def _certify(conds, vars, box, max_boxes):
    if any(lo > hi for lo, hi in box):
        return True
    facts = _facts(conds)
    queue = [box]
    processed = 0
    while queue:
        b = queue.pop(0)
        if any(lo > hi for lo, hi in b):
            continue
        processed += 1
        if processed > max_boxes:
            return None
        if _refuted(facts, b):
            continue
        for pt in _witness_points(b):
            if all(c.holds(pt) for c in conds):
                return False
        if _lp_certificate(facts + _box_facts(b, vars), b):
            continue
        if all(lo == hi for lo, hi in b):
            return None
        queue.extend(_split(b))
    return True


def is_empty(S, box=None, max_boxes: int = 48) -> bool:
    """Certified emptiness of a BasicSet or SemiAlgSet."""
    if isinstance(S, SemiAlgSet):
        return all(is_empty(b, box, max_boxes) for b in S.pieces)
    return certify_empty(S.conditions, S.vars, box, max_boxes) is True


def clear_cache():
    _CACHE.clear()
    _POSITIVE.clear()


# -- derived certificates ---------------------------------------------------------

def bounding_box(B, limit_exp: int = 10, refine: int = 3):
    """Rational box containing the closure of ``B`` (BasicSet or SemiAlgSet)."""
    if isinstance(B, SemiAlgSet):
        boxes = [bounding_box(b, limit_exp, refine) for b in B.pieces]
        if not boxes:
            raise ValueError("bounding box of the empty set")
        return [(min(b[i][0] for b in boxes), max(b[i][1] for b in boxes))
                for i in range(len(B.vars))]
    try:
        return _bounding_box_at(B, None, limit_exp, refine)
    except Unbounded as exc:
        # monomial ranges are loose away from the origin: retry around the
        # critical points of the quadratic conditions
        for c in _quadratic_centers(B):
            try:
                return _bounding_box_at(B, c, limit_exp, refine)
            except Unbounded:
                continue
        raise exc


def _quadratic_centers(B: BasicSet):
    vars = B.vars
    out = []
    for cond in B.conditions:
        p = cond.poly
        if p.degree() != 2 or not p.is_rational():
            continue
        grads = [p.diff(v) for v in vars]
        units = [tuple(int(j == k) for j in range(len(vars))) for k in range(len(vars))]
        A = sympy.Matrix([[g.terms.get(u, AlgNum(0)).to_fraction() for u in units] for g in grads])
        b = sympy.Matrix([-g.eval([AlgNum(0)] * len(vars)).to_fraction() for g in grads])
        if A.det() == 0:
            continue
        sol = A.LUsolve(b)
        c = tuple(Fraction(int(sympy.fraction(v)[0]), int(sympy.fraction(v)[1])) for v in sol)
        if c not in out and any(c):
            out.append(c)
    return out


def _bounding_box_at(B: BasicSet, center, limit_exp: int, refine: int):
    """bounding_box of B in coordinates centered at ``center`` (None: origin)."""
    if center is not None:
        vars = B.vars
        shifted = B.substitute({v: Poly.var(v, vars) + c for v, c in zip(vars, center)}, vars)
        box = _bounding_box_at(shifted, None, limit_exp, refine)
        return [(lo + c, hi + c) for (lo, hi), c in zip(box, center)]
    vars = B.vars
    conds = list(B.closure().conditions)
    box = list(linear_box(conds, vars))

    def empty_with(extra):
        return certify_empty(conds + [extra], vars, box, max_boxes=24) is True

    for i, v in enumerate(vars):
        x = Poly.var(v, vars)
        for side in (1, -1):
            current = box[i][1] if side > 0 else box[i][0]
            if current not in (INF, -INF):
                continue
            found = None
            for k in range(limit_exp + 1):
                R = Fraction(2) ** k
                if empty_with(Condition(x * side - R, ">=")):
                    found = R
                    break
            if found is None:
                raise Unbounded(f"cannot bound {v} {'above' if side > 0 else 'below'}")
            other = box[i][0] if side > 0 else box[i][1]
            lo_t = -found if other in (INF, -INF) else other * side
            hi_t = found
            lo_t = min(lo_t, hi_t)
            for _ in range(refine):
                mid = (lo_t + hi_t) / 2
                if empty_with(Condition(x * side - mid, ">=")):
                    hi_t = mid
                else:
                    lo_t = mid
            if side > 0:
                box[i] = (box[i][0], hi_t)
            else:
                box[i] = (-hi_t, box[i][1])
    return [(Fraction(lo), Fraction(hi)) for lo, hi in box]


def certify_sign(p: Poly, B, box=None) -> int:
    """+1 / -1 when ``p`` is certified positive / negative on the closure of B, else 0."""
    pieces = B.pieces if isinstance(B, SemiAlgSet) else [B]
    closed = [b.closure() for b in pieces]
    if all(certify_empty(b.conditions + (Condition(p, "<="),), b.vars, box) is True for b in closed):
        return 1
    if all(certify_empty(b.conditions + (Condition(p, ">="),), b.vars, box) is True for b in closed):
        return -1
    return 0


_POSITIVE: dict = {}


def globally_positive(p: Poly) -> bool:
    """Certified p > 0 on all of R^d."""
    if p.is_constant():
        return p.constant_value().sign() > 0
    if p in _POSITIVE:
        return _POSITIVE[p]
    ok = False
    if p.degree() % 2 == 0 and p.constant_value().sign() > 0:
        ok = certify_empty([Condition(p, "<=")], p.vars, max_boxes=16) is True
    _POSITIVE[p] = ok
    return ok


def _strip_positive(p: Poly) -> Poly:
    """Divide out content factors (w.r.t. some variable) certified positive."""
    changed = True
    while changed and not p.is_constant():
        changed = False
        for v in p.used_vars():
            c = _content(p, v)
            if not c.is_constant() and globally_positive(c):
                p = divexact(p, c)
                changed = True
                break
    if not p.is_constant() and globally_positive(p):
        return Poly.const(1, p.vars)
    return p


def reduce_basic(B: BasicSet, removable=(), box=None) -> BasicSet | None:
    """Canonical, positive factors stripped, ``None`` if certified empty.

    Conditions equal (after canonicalization) to one in ``removable`` are
    dropped when the others already imply them.
    """
    cb = B.canonical()
    if cb is None:
        return None
    conds = [Condition(_strip_positive(c.poly), c.rel) for c in cb.conditions]
    cb = BasicSet(B.vars, conds).canonical()
    if cb is None:
        return None
    if certify_empty(cb.conditions, cb.vars, box) is True:
        return None
    removable = {c.canonical() for c in removable}
    removable = {Condition(_strip_positive(c.poly), c.rel).canonical() for c in removable}
    conds = list(cb.conditions)
    i = 0
    while i < len(conds):
        c = conds[i]
        if c in removable:
            rest = conds[:i] + conds[i + 1:]
            if all(certify_empty(rest + [n], cb.vars, box) is True for n in c.negate()):
                conds = rest
                continue
        i += 1
    return BasicSet(B.vars, conds)


def reduce_set(S: SemiAlgSet, removable=(), box=None) -> SemiAlgSet:
    out = []
    for b in S.pieces:
        r = reduce_basic(b, removable, box)
        if r is not None:
            out.append(r)
    return SemiAlgSet(S.vars, out).canonical()

"""Floating-point oracle: outward-rounded intervals and Monte-Carlo estimates.

Nothing computed here feeds back into exact results.  Intervals certify
polynomial ranges; sampling checks volumes and integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exactnum import AlgNum
from .poly import Poly

__all__ = [
    "Interval",
    "interval_eval",
    "interval_eval_arrays",
    "interval_eval_centered",
    "compile_poly",
    "compile_set",
    "Estimate",
    "estimate_volume",
    "estimate_integral",
    "combined_agree",
]

_INF = math.inf


def _down(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


class Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        lo, hi = float(lo), float(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def point(cls, x) -> "Interval":
        """Tight enclosure of an exact number."""
        if isinstance(x, AlgNum):
            lo, hi = x.enclosure()
            if lo != hi:
                return cls(_down(float(lo)), _up(float(hi)))
            x = lo
        f = float(x)
        if f == x:
            return cls(f, f)
        return cls(_down(f), _up(f))

    def _lift(self, other):
        return other if isinstance(other, Interval) else Interval.point(other)

    def __add__(self, other):
        other = self._lift(other)
        return Interval(_down(self.lo + other.lo), _up(self.hi + other.hi))

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        ps = [_mul0(a, b) for a in (self.lo, self.hi) for b in (other.lo, other.hi)]
        return Interval(_down(min(ps)), _up(max(ps)))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k == 0:
            return Interval(1.0)
        if k % 2 == 0 and self.lo < 0 < self.hi:
            m = max(-self.lo, self.hi)
            return Interval(0.0, _up(m ** k))
        a, b = self.lo ** k, self.hi ** k
        lo, hi = min(a, b), max(a, b)
        # one ulp per multiplication is a safe budget for pow
        for _ in range(k):
            lo, hi = _down(lo), _up(hi)
        if k % 2 == 0:
            lo = max(lo, 0.0)
        return Interval(lo, hi)

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __contains__(self, x):
        return self.contains(x)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"


def _mul0(a: float, b: float) -> float:
    if a == 0.0 or b == 0.0:
        return 0.0
    return a * b


def interval_eval(p: Poly, box) -> Interval:
    """Sound enclosure of ``p`` over a box of intervals."""
    box = [b if isinstance(b, Interval) else Interval(*b) for b in box]
    if len(box) != len(p.vars):
        raise ValueError("box dimension does not match variable count")
    total = Interval(0.0)
    cache = {}
    for e, c in p.terms.items():
        term = Interval.point(c)
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                if key not in cache:
                    cache[key] = box[i] ** k
                term = term * cache[key]
        total = total + term
    return total


# -- vectorized interval arithmetic over arrays of boxes ---------------------

def _vdown(x):
    return np.nextafter(x, -np.inf)


def _vup(x):
    return np.nextafter(x, np.inf)


_SPLIT = 134217729.0  # 2^27 + 1


def _two_sum_err(a, b, s):
    """Exact a + b - s for s = fl(a + b) (Knuth's TwoSum)."""
    bb = s - a
    return (a - (s - bb)) + (b - bb)


def _two_prod_err(a, b, p):
    """Exact a * b - p for p = fl(a * b) (Dekker's product)."""
    c = _SPLIT * a
    ah = c - (c - a)
    al = a - ah
    c = _SPLIT * b
    bh = c - (c - b)
    bl = b - bh
    return ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _directed(x, err):
    """Bounds of x + err: x itself on the side where it is exact."""
    err = np.where(np.isfinite(x) & np.isfinite(err), err, 0.0)
    return np.where(err < 0, _vdown(x), x), np.where(err > 0, _vup(x), x)


def _vadd(alo, ahi, blo, bhi):
    with np.errstate(all="ignore"):
        slo, shi = alo + blo, ahi + bhi
        lo, _ = _directed(slo, _two_sum_err(alo, blo, slo))
        _, hi = _directed(shi, _two_sum_err(ahi, bhi, shi))
    return lo, hi


def _vmul(alo, ahi, blo, bhi):
    los, his = [], []
    with np.errstate(all="ignore"):
        for a, b in ((alo, blo), (alo, bhi), (ahi, blo), (ahi, bhi)):
            p = a * b
            err = _two_prod_err(a, b, p)
            p = np.nan_to_num(p, nan=0.0, posinf=np.inf, neginf=-np.inf)  # 0 * inf
            lo, hi = _directed(p, err)
            los.append(lo)
            his.append(hi)
    return np.min(los, axis=0), np.max(his, axis=0)


def _vpow_point(a, k):
    lo, hi = a, a
    for _ in range(k - 1):
        lo, hi = _vmul(lo, hi, a, a)
    return lo, hi


def _vpow(lo, hi, k):
    if k == 1:
        return lo, hi
    llo, lhi = _vpow_point(lo, k)
    hlo, hhi = _vpow_point(hi, k)
    if k % 2:
        return llo, hhi
    plo = np.where(lo >= 0, llo, np.where(hi <= 0, hlo, 0.0))
    phi = np.where(lo >= 0, hhi, np.where(hi <= 0, lhi, np.maximum(lhi, hhi)))
    return np.maximum(plo, 0.0), phi


def interval_eval_arrays(p: Poly, los: np.ndarray, his: np.ndarray):
    """Enclosures of ``p`` over many boxes; ``los``/``his`` have shape (N, d)."""
    n = los.shape[0]
    tlo = np.zeros(n)
    thi = np.zeros(n)
    cache = {}
    for e, c in p.terms.items():
        cl, ch = Interval.point(c).lo, Interval.point(c).hi
        mlo = np.full(n, cl)
        mhi = np.full(n, ch)
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                if key not in cache:
                    cache[key] = _vpow(los[:, i], his[:, i], k)
                mlo, mhi = _vmul(mlo, mhi, *cache[key])
        tlo, thi = _vadd(tlo, thi, mlo, mhi)
    return tlo, thi


def _taylor_coeffs(p: Poly):
    """Pairs (alpha, D_alpha p / alpha!) for every multi-index up to deg p."""
    out = []
    frontier = [((0,) * len(p.vars), p)]
    seen = set()
    while frontier:
        alpha, q = frontier.pop()
        if alpha in seen or q.is_zero():
            continue
        seen.add(alpha)
        out.append((alpha, q))
        for i, v in enumerate(p.vars):
            beta = tuple(a + (j == i) for j, a in enumerate(alpha))
            frontier.append((beta, q.diff(v).scale(AlgNum(1) / beta[i])))
    return out


_TAYLOR: dict = {}


def interval_eval_centered(p: Poly, los: np.ndarray, his: np.ndarray):
    """Centered-form enclosures, intersected with the naive ones.

    p(c + h) = sum over alpha of D_alpha(c) h^alpha, with every D_alpha(c)
    enclosed at the float midpoint c; far tighter on small boxes.
    """
    key = p
    if key not in _TAYLOR:
        _TAYLOR[key] = _taylor_coeffs(p)
    mid = (los + his) / 2
    hlo, hhi = _vadd(los, his, -mid, -mid)
    n = los.shape[0]
    tlo = np.zeros(n)
    thi = np.zeros(n)
    for alpha, q in _TAYLOR[key]:
        clo, chi = interval_eval_arrays(q, mid, mid)
        for i, k in enumerate(alpha):
            if k:
                clo, chi = _vmul(clo, chi, *_vpow(hlo[:, i], hhi[:, i], k))
        tlo, thi = _vadd(tlo, thi, clo, chi)
    nlo, nhi = interval_eval_arrays(p, los, his)
    return np.maximum(tlo, nlo), np.minimum(thi, nhi)


# -- compiled point evaluation ------------------------------------------------

def compile_poly(p: Poly):
    """Vectorized float evaluator: ``f(X)`` with X of shape (N, d)."""
    terms = [(np.array(e), float(c)) for e, c in p.terms.items()]

    def f(X):
        X = np.asarray(X, dtype=float)
        out = np.zeros(X.shape[0])
        cache = {}
        for e, c in terms:
            v = np.full(X.shape[0], c)
            for i, k in enumerate(e):
                if k:
                    key = (i, int(k))
                    if key not in cache:
                        cache[key] = X[:, i] ** int(k)
                    v = v * cache[key]
            out += v
        return out

    return f


_CMP = {
    ">": np.greater, ">=": np.greater_equal, "<": np.less,
    "<=": np.less_equal, "=": lambda a, b: np.isclose(a, b, atol=1e-12),
}


def compile_set(S):
    """Vectorized membership test for a SemiAlgSet (float evaluation)."""
    pieces = [[(compile_poly(c.poly), _CMP[c.rel]) for c in b.conditions] for b in S.pieces]

    def member(X):
        X = np.asarray(X, dtype=float)
        out = np.zeros(X.shape[0], dtype=bool)
        for conds in pieces:
            m = np.ones(X.shape[0], dtype=bool)
            for f, cmp in conds:
                idx = np.nonzero(m)[0]
                if not idx.size:
                    break
                m[idx] = cmp(f(X[idx]), 0.0)
            out |= m
        return out

    return member


# -- Monte-Carlo estimation ----------------------------------------------------

@dataclass
class Estimate:
    value: float
    half_width: float
    samples: int
    warning: str = ""

    @property
    def lo(self):
        return self.value - self.half_width

    @property
    def hi(self):
        return self.value + self.half_width

    def __repr__(self):
        w = f", warning={self.warning!r}" if self.warning else ""
        return f"Estimate({self.value:.6g} ± {self.half_width:.2g}, n={self.samples}{w})"


_Z95 = 1.959963984540054
_CHUNK = 1_000_000


def _box_arrays(box):
    lo = np.array([float(b[0]) for b in box])
    hi = np.array([float(b[1]) for b in box])
    return lo, hi


def _sample_stats(fn, box, samples: int, seed):
    lo, hi = _box_arrays(box)
    vol = float(np.prod(hi - lo))
    rng = np.random.default_rng(seed)
    s1 = s2 = 0.0
    n = 0
    dropped = 0
    while n < samples:
        m = min(_CHUNK, samples - n)
        X = lo + (hi - lo) * rng.random((m, lo.size))
        v, bad = fn(X)
        dropped += int(bad)
        s1 += float(v.sum())
        s2 += float((v * v).sum())
        n += m
    mean = s1 / n
    var = max(s2 / n - mean * mean, 0.0)
    return vol * mean, vol * _Z95 * math.sqrt(var / n), n, dropped


def estimate_volume(S, box, samples: int = 100_000, seed=0) -> Estimate:
    """Hit ratio times box volume, with a 95% normal confidence interval."""
    member = S.membership if hasattr(S, "membership") else compile_set(S)

    def fn(X):
        return member(X).astype(float), 0

    value, hw, n, _ = _sample_stats(fn, box, samples, seed)
    return Estimate(value, hw, n)


def estimate_integral(piece, box, samples: int = 100_000, seed=0,
                      pole_eps: float = 1e-12, pole_cap: float = 1e-3) -> Estimate:
    """Mean of the integrand over box samples falling in the domain.

    Samples landing within ``pole_eps`` of the denominator's zero set are
    dropped (counted as zero); if they exceed ``pole_cap`` of the total the
    estimate carries a warning.
    """
    member = compile_set(piece.domain)
    num = compile_poly(piece.integrand.num)
    den = compile_poly(piece.integrand.den)

    def fn(X):
        inside = member(X)
        v = np.zeros(X.shape[0])
        idx = np.nonzero(inside)[0]
        if idx.size:
            q = den(X[idx])
            ok = np.abs(q) > pole_eps
            v[idx[ok]] = num(X[idx[ok]]) / q[ok]
            return v, np.count_nonzero(~ok)
        return v, 0

    value, hw, n, dropped = _sample_stats(fn, box, samples, seed)
    warning = ""
    if dropped > pole_cap * n:
        warning = f"{dropped} of {n} samples hit the pole locus"
    return Estimate(value, hw, n, warning)


def combined_agree(a: Estimate, parts: list[Estimate], slack: float = 0.0) -> bool:
    """|a - sum(parts)| within the quadrature-combined 95% half widths."""
    total = sum(p.value for p in parts)
    hw = math.sqrt(a.half_width ** 2 + sum(p.half_width ** 2 for p in parts))
    return abs(a.value - total) <= hw + slack

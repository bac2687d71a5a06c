"""Univariate real roots: Descartes/bisection isolation and exact Q(sqrt(n)) roots."""

from __future__ import annotations

from fractions import Fraction
from math import lcm

import sympy

from .exactnum import AlgNum, as_algnum, sqrt_in_field
from .poly import Poly

__all__ = [
    "isolate_real_roots",
    "refine_root",
    "exact_roots",
    "rational_norm",
    "cone_real_lines",
    "ConeLines",
]


# -- dense helpers (coefficient lists, low to high) --------------------------

def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _horner(c, x):
    acc = 0
    for a in reversed(c):
        acc = acc * x + a
    return acc


def _deriv(c):
    return [k * c[k] for k in range(1, len(c))]


def _divmod(a, b):
    a = [Fraction(v) for v in a]
    b = _trim(b)
    if len(a) < len(b):
        return [], _trim(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lb = Fraction(b[-1])
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        f = a[-1] / lb
        q[k] = f
        for i, bv in enumerate(b):
            a[i + k] -= f * bv
        a = _trim(a)
    return q, a


def _gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _divmod(a, b)
        a, b = b, r
    if not a:
        return a
    return [Fraction(v) / a[-1] for v in a]


def _squarefree(c):
    g = _gcd(c, _deriv(c))
    if len(g) <= 1:
        return _trim(c)
    q, r = _divmod(c, g)
    assert not r
    return _trim(q)


def _integer(c):
    m = lcm(*(Fraction(v).denominator for v in c))
    return [int(Fraction(v) * m) for v in c]


def _variations(c):
    signs = [v > 0 for v in c if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _taylor_shift(c, a):
    """Coefficients of p(x + a)."""
    c = list(c)
    n = len(c)
    for i in range(n):
        for k in range(n - 2, i - 1, -1):
            c[k] += a * c[k + 1]
    return c


def _descartes_bound(c, lo, hi):
    """Sign variations of (x+1)^n p((lo + hi x)/(x + 1)): bound on roots in (lo, hi)."""
    n = len(c) - 1
    # p(lo + (hi - lo) y) then y = 1/(x + 1)
    q = _taylor_shift(c, lo)
    w = hi - lo
    q = [v * w ** k for k, v in enumerate(q)]
    q = list(reversed(q))
    q = _taylor_shift(q, 1)
    return _variations(q) if n > 0 else 0


def _root_bound(c):
    lc = abs(Fraction(c[-1]))
    m = max(abs(Fraction(v)) for v in c[:-1]) if len(c) > 1 else 0
    b = 1 + m / lc
    k = 1
    while k < b:
        k *= 2
    return Fraction(k)


def isolate_dense(coeffs) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals for the distinct real roots of a rational polynomial.

    Each result is ``(lo, hi)``; ``lo == hi`` marks an exact rational root,
    otherwise the open interval holds exactly one root and no endpoint is one.
    """
    c = _trim([Fraction(v) for v in coeffs])
    if not c:
        raise ValueError("isolate_real_roots of the zero polynomial")
    c = _squarefree(c)
    if len(c) <= 1:
        return []
    c = _integer(c)
    b = _root_bound(c)
    out = []
    stack = [(-b, b)]
    if _horner(c, -b) == 0:
        out.append((-b, -b))
    if _horner(c, b) == 0:
        out.append((b, b))
    while stack:
        lo, hi = stack.pop()
        v = _descartes_bound(c, lo, hi)
        if v == 0:
            continue
        if v == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if _horner(c, mid) == 0:
            out.append((mid, mid))
        stack.append((lo, mid))
        stack.append((mid, hi))
    return sorted(out)


def refine_dense(coeffs, lo: Fraction, hi: Fraction, width) -> tuple[Fraction, Fraction]:
    c = [Fraction(v) for v in coeffs]
    if lo == hi:
        return lo, hi
    slo = _horner(c, lo)
    width = Fraction(width)
    while hi - lo > width:
        mid = (lo + hi) / 2
        sm = _horner(c, mid)
        if sm == 0:
            return mid, mid
        if (sm > 0) == (slo > 0):
            lo, slo = mid, sm
        else:
            hi = mid
    return lo, hi


def _rational_dense(p: Poly) -> list[Fraction]:
    return [v.to_fraction() for v in p.univariate_coeffs()]


def rational_norm(p: Poly) -> Poly:
    """p times its conjugate: a rational polynomial with the same real zeros (and more)."""
    if p.is_rational():
        return p
    conj = Poly(p.vars, {e: c.conjugate() for e, c in p.terms.items()})
    return p * conj


def isolate_real_roots(p: Poly) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals for the real roots of a univariate polynomial."""
    if p.is_zero():
        raise ValueError("isolate_real_roots of the zero polynomial")
    if not p.is_rational():
        return [iv for iv in isolate_dense(_rational_dense(rational_norm(p)))
                if _contains_root(p, iv)]
    return isolate_dense(_rational_dense(p))


def _contains_root(p: Poly, iv) -> bool:
    lo, hi = iv
    coeffs = p.univariate_coeffs()
    if lo == hi:
        return _horner(coeffs, AlgNum(lo)).is_zero()
    # the norm has a single simple root here; p has it iff p changes sign
    s1 = _horner(coeffs, AlgNum(lo)).sign()
    s2 = _horner(coeffs, AlgNum(hi)).sign()
    return s1 != s2 and s1 != 0 and s2 != 0


def refine_root(p: Poly, iv, width) -> tuple[Fraction, Fraction]:
    return refine_dense(_rational_dense(rational_norm(p)), iv[0], iv[1], width)


def _multiplicity(coeffs, r: AlgNum) -> int:
    c = [as_algnum(v) for v in coeffs]
    m = 0
    while len(c) > 1 and _horner(c, r).is_zero():
        # synthetic division by (x - r)
        q = [AlgNum(0)] * (len(c) - 1)
        acc = AlgNum(0)
        for k in range(len(c) - 1, 0, -1):
            acc = acc * r + c[k]
            q[k - 1] = acc
        c = q
        m += 1
    return m


def exact_roots(p: Poly, radicand: int = 0):
    """Real roots of a univariate ``p`` lying in Q(sqrt(radicand)).

    Returns ``(roots, residual)``: ``roots`` is a sorted list of
    ``(AlgNum, multiplicity)`` and ``residual`` holds isolating intervals of
    the remaining real roots.
    """
    n = radicand or p.radicand()
    coeffs = p.univariate_coeffs()
    if len(coeffs) <= 1:
        return [], []
    norm = _rational_dense(rational_norm(p))
    xs = sympy.Symbol("x")
    expr = sympy.Poly(list(reversed([sympy.Rational(v.numerator, v.denominator) for v in norm])), xs)
    candidates = []
    for fac, _ in expr.factor_list()[1]:
        d = fac.degree()
        fc = [Fraction(int(sympy.fraction(v)[0]), int(sympy.fraction(v)[1])) for v in reversed(fac.all_coeffs())]
        if d == 1:
            candidates.append(AlgNum(-fc[0] / fc[1]))
        elif d == 2:
            c0, c1, c2 = fc
            disc = c1 * c1 - 4 * c2 * c0
            s = sqrt_in_field(disc, n)
            if s is None or (n == 0 and not s.is_rational()):
                continue
            for sg in (1, -1):
                candidates.append((AlgNum(-c1) + s * sg) / (2 * c2))
    roots = []
    seen = set()
    for r in candidates:
        if r in seen:
            continue
        seen.add(r)
        m = _multiplicity(coeffs, r)
        if m:
            roots.append((r, m))
    roots.sort(key=lambda rm: float(rm[0]))
    residual = []
    for iv in isolate_dense(norm):
        if any(_interval_holds(iv, r) for r, _ in roots):
            continue
        if p.is_rational() or _contains_root(p, iv):
            residual.append(iv)
    return roots, residual


def _interval_holds(iv, r: AlgNum) -> bool:
    lo, hi = iv
    if lo == hi:
        return r == AlgNum(lo)
    return AlgNum(lo) < r < AlgNum(hi)


class ConeLines:
    """Real linear factors ``a*u + b*v`` of a binary form, with multiplicities.

    ``residual`` lists isolating intervals of the slopes ``r = u/v`` of the
    real directions not split over the coefficient field.
    """

    def __init__(self, lines, residual):
        self.lines = lines
        self.residual = residual

    @property
    def unresolved(self) -> bool:
        return bool(self.residual)

    def __iter__(self):
        return iter(self.lines)

    def __len__(self):
        return len(self.lines)

    def __repr__(self):
        return f"ConeLines({self.lines}, residual={self.residual})"


def cone_real_lines(c: Poly, radicand: int = 0) -> ConeLines:
    """Real linear factors of a homogeneous form in the first two variables."""
    if c.is_zero() or not c.is_homogeneous():
        raise ValueError("cone_real_lines needs a nonzero homogeneous form")
    u, v = c.vars[:2]
    d = c.degree()
    g = c.eval_partial({v: 1})
    k = d - max(g.degree(), 0)
    lines = []
    if k:
        lines.append(((AlgNum(0), AlgNum(1)), k))
    roots, residual = ([], []) if g.is_constant() else exact_roots(g, radicand)
    for r, m in roots:
        lines.append(((AlgNum(1), -r), m))
    return ConeLines(lines, residual)

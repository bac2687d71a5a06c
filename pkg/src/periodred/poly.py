"""Sparse multivariate polynomials and reduced rational functions over AlgNum.

All polynomials taking part in one computation share an ordered variable
tuple; exponent vectors are aligned with it.  Terms are ordered graded
lexicographically, which fixes canonical printing and the normalization of
denominators.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import product
from math import comb, lcm, gcd as igcd

from .exactnum import AlgNum, as_algnum, format_algnum

__all__ = [
    "Poly",
    "RatFunc",
    "VariableCollision",
    "poly_gcd",
    "make_coprime",
    "resultant",
    "divexact",
    "homogeneous_components",
    "tangent_cone",
]

ZERO = AlgNum(0)
ONE = AlgNum(1)


class VariableCollision(ValueError):
    pass


def _grlex_key(exp: tuple[int, ...]):
    return (sum(exp), exp)


class Poly:
    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars, terms=None):
        self.vars = tuple(vars)
        clean = {}
        if terms:
            nv = len(self.vars)
            for e, c in terms.items():
                c = as_algnum(c)
                if c.is_zero():
                    continue
                e = tuple(e)
                if len(e) != nv:
                    raise ValueError(f"exponent {e} does not match variables {self.vars}")
                clean[e] = c
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def const(cls, c, vars) -> "Poly":
        vars = tuple(vars)
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, name: str, vars) -> "Poly":
        vars = tuple(vars)
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls(vars, {tuple(e): ONE})

    @classmethod
    def gens(cls, vars) -> list["Poly"]:
        return [cls.var(v, vars) for v in vars]

    def zero(self) -> "Poly":
        return Poly(self.vars)

    def one(self) -> "Poly":
        return Poly.const(1, self.vars)

    # -- basic queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> AlgNum:
        return self.terms.get((0,) * len(self.vars), ZERO)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, v: str) -> int:
        i = self.vars.index(v)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def depends_on(self, v: str) -> bool:
        i = self.vars.index(v)
        return any(e[i] for e in self.terms)

    def used_vars(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading(self) -> tuple[tuple[int, ...], AlgNum]:
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def leading_coeff(self) -> AlgNum:
        return self.leading()[1]

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.terms.values())

    def radicand(self) -> int:
        for c in self.terms.values():
            if c.n:
                return c.n
        return 0

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other: "Poly"):
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch {self.vars} vs {other.vars}")

    def _lift(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.const(other, self.vars)

    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t[e] + c if e in t else c
        return Poly(self.vars, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = as_algnum(other)
            if c.is_zero():
                return self.zero()
            return Poly(self.vars, {e: v * c for e, v in self.terms.items()})
        self._check(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                t[e] = t[e] + v if e in t else v
        return Poly(self.vars, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = self.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Poly":
        return self * as_algnum(c)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction, AlgNum)):
            return self == Poly.const(other, self.vars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- evaluation and substitution ----------------------------------------
    def eval(self, point) -> AlgNum:
        point = [as_algnum(p) for p in point]
        if len(point) != len(self.vars):
            raise ValueError("point dimension does not match variable count")
        total = ZERO
        powers: dict = {}
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = point[i] ** k
                    term = term * powers[key]
            total = total + term
        return total

    def substitute(self, mapping: dict) -> "Poly":
        """Compose: replace variables by polynomials over a common variable tuple."""
        if not mapping:
            return self
        targets = [m for m in mapping.values() if isinstance(m, Poly)]
        new_vars = targets[0].vars if targets else self.vars
        images = []
        for v in self.vars:
            m = mapping.get(v)
            if m is None:
                if v not in new_vars:
                    raise ValueError(f"variable {v} has no image in {new_vars}")
                images.append(Poly.var(v, new_vars))
            elif isinstance(m, Poly):
                if m.vars != new_vars:
                    raise ValueError("substitution images must share variables")
                images.append(m)
            else:
                images.append(Poly.const(m, new_vars))
        cache: dict = {}
        total = Poly(new_vars)
        for e, c in self.terms.items():
            term = Poly.const(c, new_vars)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    term = term * cache[key]
            total = total + term
        return total

    def eval_partial(self, values: dict) -> "Poly":
        """Fix some variables at constants; the variable tuple is kept."""
        idx = {self.vars.index(v): as_algnum(x) for v, x in values.items()}
        t: dict = {}
        for e, c in self.terms.items():
            ne = list(e)
            for i, x in idx.items():
                if e[i]:
                    c = c * x ** e[i]
                    ne[i] = 0
            ne = tuple(ne)
            t[ne] = t[ne] + c if ne in t else c
        return Poly(self.vars, t)

    def with_vars(self, new_vars) -> "Poly":
        """Re-embed into another variable tuple containing every used variable."""
        new_vars = tuple(new_vars)
        pos = []
        for i, v in enumerate(self.vars):
            if v in new_vars:
                pos.append(new_vars.index(v))
            else:
                if any(e[i] for e in self.terms):
                    raise ValueError(f"variable {v} is used and missing from {new_vars}")
                pos.append(None)
        t = {}
        for e, c in self.terms.items():
            ne = [0] * len(new_vars)
            for i, k in enumerate(e):
                if pos[i] is not None:
                    ne[pos[i]] = k
            t[tuple(ne)] = c
        return Poly(new_vars, t)

    def rename(self, mapping: dict) -> "Poly":
        return Poly(tuple(mapping.get(v, v) for v in self.vars), self.terms)

    def diff(self, v: str) -> "Poly":
        i = self.vars.index(v)
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                t[tuple(ne)] = c * e[i]
        return Poly(self.vars, t)

    def translate(self, shift) -> "Poly":
        """p(x + shift): Taylor shift of every variable by ``shift[i]``."""
        mapping = {}
        for v, s in zip(self.vars, shift):
            s = as_algnum(s)
            if not s.is_zero():
                mapping[v] = Poly.var(v, self.vars) + s
        return self.substitute(mapping) if mapping else self

    # -- coefficient views --------------------------------------------------
    def coeffs_in(self, v: str) -> dict[int, "Poly"]:
        """Coefficients as polynomials free of ``v`` (same variable tuple)."""
        i = self.vars.index(v)
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            ne = e[:i] + (0,) + e[i + 1:]
            out.setdefault(k, {})[ne] = c
        return {k: Poly(self.vars, t) for k, t in out.items()}

    def univariate_coeffs(self) -> list[AlgNum]:
        """Dense coefficient list (low to high) of a polynomial in one used variable."""
        used = self.used_vars()
        if len(used) > 1:
            raise ValueError(f"{self} is not univariate")
        if not self.terms:
            return []
        if not used:
            return [self.constant_value()]
        i = self.vars.index(used[0])
        deg = self.degree_in(used[0])
        out = [ZERO] * (deg + 1)
        for e, c in self.terms.items():
            out[e[i]] = c
        return out

    @classmethod
    def from_univariate(cls, coeffs, v: str, vars) -> "Poly":
        vars = tuple(vars)
        i = vars.index(v)
        t = {}
        for k, c in enumerate(coeffs):
            e = [0] * len(vars)
            e[i] = k
            t[tuple(e)] = c
        return cls(vars, t)

    def lowest_power_of(self, v: str) -> int:
        """Largest k such that v**k divides the polynomial."""
        if not self.terms:
            return 0
        i = self.vars.index(v)
        return min(e[i] for e in self.terms)

    def divide_power(self, v: str, k: int) -> "Poly":
        i = self.vars.index(v)
        t = {}
        for e, c in self.terms.items():
            if e[i] < k:
                raise ValueError(f"{v}^{k} does not divide {self}")
            ne = list(e)
            ne[i] -= k
            t[tuple(ne)] = c
        return Poly(self.vars, t)

    # -- structural operations ----------------------------------------------
    def homogenize(self, new_var: str, position: int = 0) -> "Poly":
        if new_var in self.vars:
            raise VariableCollision(f"{new_var} already among {self.vars}")
        d = max(self.degree(), 0)
        vars = self.vars[:position] + (new_var,) + self.vars[position:]
        t = {}
        for e, c in self.terms.items():
            ne = e[:position] + (d - sum(e),) + e[position:]
            t[ne] = c
        return Poly(vars, t)

    def dehomogenize(self, v: str) -> "Poly":
        """Set ``v = 1`` and drop it from the variable tuple."""
        i = self.vars.index(v)
        vars = self.vars[:i] + self.vars[i + 1:]
        t: dict = {}
        for e, c in self.terms.items():
            ne = e[:i] + e[i + 1:]
            t[ne] = t[ne] + c if ne in t else c
        return Poly(vars, t)

    def content_scalar(self) -> AlgNum:
        """Scalar that normalizes the polynomial (see :meth:`normalized`)."""
        if not self.terms:
            return ONE
        lc = self.leading_coeff()
        if self.is_rational():
            nums = [c.a.numerator for c in self.terms.values()]
            dens = [c.a.denominator for c in self.terms.values()]
            g = abs(reduce(igcd, nums))
            m = reduce(lcm, dens)
            s = Fraction(g, m)
            return AlgNum(s if lc.sign() > 0 else -s)
        return lc

    def normalized(self) -> "Poly":
        """Primitive integer form with positive leading coefficient (rational case), else monic."""
        if not self.terms:
            return self
        return self * self.content_scalar().inverse()

    # -- printing -----------------------------------------------------------
    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return format_poly(self)


def _format_monomial(vars, e) -> str:
    parts = []
    for v, k in zip(vars, e):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def _simple(c: AlgNum) -> bool:
    return c.is_rational() or c.a == 0


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    out = []
    for idx, (e, c) in enumerate(p.sorted_terms()):
        mono = _format_monomial(p.vars, e)
        if _simple(c):
            neg = c.sign() < 0
            mag = -c if neg else c
            if mono:
                body = mono if mag == 1 else f"{format_algnum(mag)}*{mono}"
            else:
                body = format_algnum(mag)
        else:
            neg = False
            body = f"({format_algnum(c)})" + (f"*{mono}" if mono else "")
        if idx == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# ---------------------------------------------------------------------------
# division, gcd, resultants


class NotDivisible(ArithmeticError):
    pass


def divexact(p: Poly, d: Poly) -> Poly:
    """Exact multivariate division; raises :class:`NotDivisible` otherwise."""
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if d.is_constant():
        return p * d.constant_value().inverse()
    de, dc = d.leading()
    dinv = dc.inverse()
    q: dict = {}
    r = p
    while r.terms:
        re_, rc = r.leading()
        if any(a < b for a, b in zip(re_, de)):
            raise NotDivisible(f"{d} does not divide {p}")
        me = tuple(a - b for a, b in zip(re_, de))
        mc = rc * dinv
        q[me] = mc
        r = r - Poly(p.vars, {me: mc}) * d
    return Poly(p.vars, q)


def _main_var(p: Poly, q: Poly):
    for i, v in enumerate(p.vars):
        if any(e[i] for e in p.terms) or any(e[i] for e in q.terms):
            return v
    return None


def _content(p: Poly, v: str) -> Poly:
    coeffs = list(p.coeffs_in(v).values())
    if not coeffs:
        return p.one()
    g = coeffs[0]
    for c in coeffs[1:]:
        if g.is_constant():
            break
        g = poly_gcd(g, c)
    if g.is_constant():
        return p.one()
    return g


def _primitive_part(p: Poly, v: str) -> Poly:
    if p.is_zero():
        return p
    coeffs = p.coeffs_in(v)
    if all(c.is_constant() for c in coeffs.values()):
        return p.normalized()
    c = _content(p, v)
    return divexact(p, c) if not c.is_constant() else p.normalized()


def prem(a: Poly, b: Poly, v: str) -> Poly:
    """Pseudo-remainder of ``a`` by ``b`` with respect to ``v``."""
    db = b.degree_in(v)
    cb = b.coeffs_in(v)
    lcb = cb[db]
    i = a.vars.index(v)
    r = a
    while not r.is_zero() and r.degree_in(v) >= db:
        dr = r.degree_in(v)
        lcr = r.coeffs_in(v)[dr]
        e = [0] * len(a.vars)
        e[i] = dr - db
        shift = Poly(a.vars, {tuple(e): ONE})
        r = r * lcb - lcr * shift * b
    return r


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Greatest common divisor, normalized (see :meth:`Poly.normalized`)."""
    p._check(q)
    if p.is_zero():
        return q.normalized()
    if q.is_zero():
        return p.normalized()
    if p.is_constant() or q.is_constant():
        return p.one()
    v = _main_var(p, q)
    cp = _content(p, v)
    cq = _content(q, v)
    c = poly_gcd(cp, cq)
    a = divexact(p, cp)
    b = divexact(q, cq)
    if a.degree_in(v) < b.degree_in(v):
        a, b = b, a
    while not b.is_zero() and b.degree_in(v) > 0:
        r = prem(a, b, v)
        a, b = b, _primitive_part(r, v)
    g = a if b.is_zero() else a.one()
    if g.degree_in(v) <= 0:
        g = g.one()
    else:
        g = _primitive_part(g, v)
    return (c * g).normalized()


def make_coprime(p: Poly, q: Poly) -> "RatFunc":
    return RatFunc(p, q)


def _det(matrix: list[list[Poly]]) -> Poly:
    """Fraction-free (Bareiss) determinant of a square matrix of polynomials."""
    n = len(matrix)
    m = [row[:] for row in matrix]
    sign = 1
    prev = m[0][0].one()
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if swap is None:
                return prev.zero()
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = divexact(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev)
        prev = m[k][k]
    return m[n - 1][n - 1] * sign


def sylvester_matrix(p: Poly, q: Poly, v: str) -> list[list[Poly]]:
    m = p.degree_in(v)
    n = q.degree_in(v)
    cp = p.coeffs_in(v)
    cq = q.coeffs_in(v)
    z = p.zero()
    size = m + n
    rows = []
    for i in range(n):
        row = [z] * size
        for k in range(m + 1):
            row[i + (m - k)] = cp.get(k, z)
        rows.append(row)
    for i in range(m):
        row = [z] * size
        for k in range(n + 1):
            row[i + (n - k)] = cq.get(k, z)
        rows.append(row)
    return rows


def resultant(p: Poly, q: Poly, v: str) -> Poly:
    """Sylvester resultant eliminating ``v``."""
    p._check(q)
    if p.is_zero() or q.is_zero():
        return p.zero()
    m = p.degree_in(v)
    n = q.degree_in(v)
    if m == 0:
        return p ** n
    if n == 0:
        return q ** m
    return _det(sylvester_matrix(p, q, v))


# ---------------------------------------------------------------------------
# Taylor components and tangent cones


def homogeneous_components(p: Poly, center) -> dict[int, Poly]:
    """Homogeneous components of ``p`` in the displacement ``x - center``.

    Component ``j`` is returned as a polynomial in the same variable names,
    which here stand for the displacement coordinates.
    """
    if len(center) != len(p.vars):
        raise ValueError("center dimension does not match variable count")
    shifted = p.translate(center)
    out: dict[int, dict] = {}
    for e, c in shifted.terms.items():
        out.setdefault(sum(e), {})[e] = c
    return {j: Poly(p.vars, t) for j, t in sorted(out.items())}


def recenter(local: Poly, center) -> Poly:
    """Express a polynomial in displacement coordinates back in absolute ones."""
    return local.translate([-as_algnum(c) for c in center])


def tangent_cone(f: Poly, center) -> tuple[Poly, int]:
    """Lowest nonzero homogeneous component about ``center`` and its order."""
    if f.is_zero():
        raise ValueError("tangent cone of the zero polynomial")
    comps = homogeneous_components(f, center)
    k = min(comps)
    return comps[k], k


# ---------------------------------------------------------------------------
# rational functions


class RatFunc:
    """Reduced fraction num/den with a normalized denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, reduce: bool = True):
        if den is None:
            den = num.one()
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = den.one()
        elif reduce and not den.is_constant():
            g = poly_gcd(num, den)
            if not g.is_constant():
                num = divexact(num, g)
                den = divexact(den, g)
        s = den.content_scalar().inverse()
        self.num = num * s
        self.den = den * s

    @property
    def vars(self):
        return self.num.vars

    @classmethod
    def from_poly(cls, p: Poly) -> "RatFunc":
        return cls(p, p.one(), reduce=False)

    def _lift(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc.from_poly(other)
        return RatFunc.from_poly(Poly.const(other, self.vars))

    def __add__(self, other):
        other = self._lift(other)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num, reduce=False)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num ** k, self.den ** k, reduce=False)

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def eval(self, point) -> AlgNum:
        return self.num.eval(point) / self.den.eval(point)

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def substitute(self, mapping: dict) -> "RatFunc":
        return RatFunc(self.num.substitute(mapping), self.den.substitute(mapping))

    def with_vars(self, vars) -> "RatFunc":
        return RatFunc(self.num.with_vars(vars), self.den.with_vars(vars), reduce=False)

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        return format_ratfunc(self)


def _needs_parens(p: Poly) -> bool:
    if len(p.terms) > 1:
        return True
    (e, c), = p.terms.items()
    if not _simple(c):
        return True
    # a product of two or more factors would bind as (1/a)*b
    return (c != 1) + sum(1 for k in e if k) > 1


def format_ratfunc(r: RatFunc) -> str:
    if r.den == 1:
        return format_poly(r.num)
    num = format_poly(r.num)
    lead = next(iter(r.num.terms.values()))
    if len(r.num.terms) > 1 or not _simple(lead) or lead.a.denominator != 1 or lead.b.denominator != 1:
        num = f"({num})"
    den = format_poly(r.den)
    if _needs_parens(r.den):
        den = f"({den})"
    return f"{num}/{den}"


def binomial_expand(a, b, k: int):
    """Coefficients of (a + b)^k, a helper for tests and oracles."""
    return [comb(k, j) for j in range(k + 1)]


def all_exponents(nvars: int, maxdeg: int):
    for e in product(range(maxdeg + 1), repeat=nvars):
        if sum(e) <= maxdeg:
            yield e

"""Semi-algebraic sets as unions of conjunctions of polynomial sign conditions."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .poly import Poly, RatFunc

__all__ = [
    "Condition",
    "BasicSet",
    "SemiAlgSet",
    "IntegralPiece",
    "RELATIONS",
    "sign_partition",
    "boundary_zariski",
]

RELATIONS = (">", ">=", "<", "<=", "=")
_SIGNS = {">": {1}, ">=": {0, 1}, "<": {-1}, "<=": {-1, 0}, "=": {0}}
_FROM_SIGNS = {frozenset(v): k for k, v in _SIGNS.items()}
_FLIP = {">": "<", ">=": "<=", "<": ">", "<=": ">=", "=": "="}
_RELAX = {">": ">=", "<": "<=", ">=": ">=", "<=": "<=", "=": "="}


@dataclass(frozen=True)
class Condition:
    poly: Poly
    rel: str

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")

    @property
    def vars(self):
        return self.poly.vars

    def holds_sign(self, s: int) -> bool:
        return s in _SIGNS[self.rel]

    def holds(self, point) -> bool:
        return self.holds_sign(self.poly.eval(point).sign())

    def negate(self) -> list["Condition"]:
        """Complement as a union of conditions."""
        allowed = {-1, 0, 1} - _SIGNS[self.rel]
        if allowed == {-1, 1}:
            return [Condition(self.poly, ">"), Condition(self.poly, "<")]
        return [Condition(self.poly, _FROM_SIGNS[frozenset(allowed)])]

    def relaxed(self) -> "Condition":
        return Condition(self.poly, _RELAX[self.rel])

    @property
    def strict(self) -> bool:
        return self.rel in (">", "<")

    def constant_truth(self):
        if self.poly.is_constant():
            return self.holds_sign(self.poly.constant_value().sign())
        return None

    def canonical(self) -> "Condition":
        p = self.poly
        if p.is_zero() or p.is_constant():
            s = p.constant_value().sign()
            return Condition(Poly.const(s, p.vars), self.rel)
        c = p.content_scalar()
        rel = self.rel if c.sign() > 0 else _FLIP[self.rel]
        return Condition(p * c.inverse(), rel)

    def flipped(self) -> "Condition":
        return Condition(-self.poly, _FLIP[self.rel])

    def substitute(self, mapping) -> "Condition":
        return Condition(self.poly.substitute(mapping), self.rel)

    def with_vars(self, vars) -> "Condition":
        return Condition(self.poly.with_vars(vars), self.rel)

    def sort_key(self):
        return (self.poly.degree(), str(self.poly), self.rel)

    def __str__(self):
        return f"{self.poly} {self.rel} 0"


class BasicSet:
    """Conjunction of sign conditions; the empty conjunction is the whole space."""

    __slots__ = ("vars", "conditions")

    def __init__(self, vars, conditions=()):
        self.vars = tuple(vars)
        conds = tuple(conditions)
        for c in conds:
            if c.vars != self.vars:
                raise ValueError(f"condition {c} not over {self.vars}")
        self.conditions = conds

    def contains(self, point) -> bool:
        if len(point) != len(self.vars):
            raise ValueError("point dimension does not match the ambient dimension")
        return all(c.holds(point) for c in self.conditions)

    def closure(self) -> "BasicSet":
        return BasicSet(self.vars, [c.relaxed() for c in self.conditions])

    def polys(self) -> list[Poly]:
        return [c.poly for c in self.conditions]

    def __and__(self, other: "BasicSet") -> "BasicSet":
        return BasicSet(self.vars, self.conditions + other.conditions)

    def with_conditions(self, extra) -> "BasicSet":
        return BasicSet(self.vars, self.conditions + tuple(extra))

    def without(self, index: int) -> "BasicSet":
        return BasicSet(self.vars, self.conditions[:index] + self.conditions[index + 1:])

    def substitute(self, mapping, vars=None) -> "BasicSet":
        conds = [c.substitute(mapping) for c in self.conditions]
        vars = conds[0].vars if conds else (vars or self.vars)
        return BasicSet(vars, conds)

    def with_vars(self, vars) -> "BasicSet":
        return BasicSet(vars, [c.with_vars(vars) for c in self.conditions])

    def canonical(self) -> "BasicSet | None":
        """Canonical form, or ``None`` when a constant condition is false."""
        by_poly: dict[Poly, set] = {}
        for c in self.conditions:
            c = c.canonical()
            t = c.constant_truth()
            if t is True:
                continue
            if t is False:
                return None
            s = by_poly.setdefault(c.poly, {-1, 0, 1})
            s &= _SIGNS[c.rel]
            if not s:
                return None
        conds = [Condition(p, _FROM_SIGNS[frozenset(s)]) for p, s in by_poly.items()]
        conds.sort(key=Condition.sort_key)
        return BasicSet(self.vars, conds)

    def __eq__(self, other):
        return isinstance(other, BasicSet) and self.vars == other.vars and self.conditions == other.conditions

    def __hash__(self):
        return hash((self.vars, self.conditions))

    def __str__(self):
        if not self.conditions:
            return "{ }"
        return "{ " + ", ".join(str(c) for c in self.conditions) + " }"

    def __repr__(self):
        return f"BasicSet({self})"


class SemiAlgSet:
    """Finite union of :class:`BasicSet`; no pieces denotes the empty set."""

    __slots__ = ("vars", "pieces")

    def __init__(self, vars, pieces=()):
        self.vars = tuple(vars)
        ps = tuple(pieces)
        for p in ps:
            if p.vars != self.vars:
                raise ValueError(f"piece {p} not over {self.vars}")
        self.pieces = ps

    @classmethod
    def full(cls, vars) -> "SemiAlgSet":
        return cls(vars, [BasicSet(vars)])

    @classmethod
    def empty(cls, vars) -> "SemiAlgSet":
        return cls(vars)

    @classmethod
    def basic(cls, vars, conditions) -> "SemiAlgSet":
        return cls(vars, [BasicSet(vars, conditions)])

    @property
    def dimension(self) -> int:
        return len(self.vars)

    def _check(self, other: "SemiAlgSet"):
        if self.vars != other.vars:
            raise ValueError(f"dimension mismatch: {self.vars} vs {other.vars}")

    def contains(self, point) -> bool:
        if len(point) != len(self.vars):
            raise ValueError("point dimension does not match the ambient dimension")
        return any(b.contains(point) for b in self.pieces)

    def is_syntactically_empty(self) -> bool:
        return not self.pieces

    def union(self, other: "SemiAlgSet") -> "SemiAlgSet":
        self._check(other)
        return SemiAlgSet(self.vars, self.pieces + other.pieces)

    __or__ = union

    def intersection(self, other: "SemiAlgSet") -> "SemiAlgSet":
        self._check(other)
        return SemiAlgSet(self.vars, [a & b for a in self.pieces for b in other.pieces])

    __and__ = intersection

    def complement(self) -> "SemiAlgSet":
        result = SemiAlgSet.full(self.vars)
        for b in self.pieces:
            alternatives = [BasicSet(self.vars, [n]) for c in b.conditions for n in c.negate()]
            result = result & SemiAlgSet(self.vars, alternatives)
            result = result.canonical()
        return result

    def difference(self, other: "SemiAlgSet") -> "SemiAlgSet":
        return self & other.complement()

    __sub__ = difference

    def closure(self) -> "SemiAlgSet":
        """Relaxation of strict relations; the closure for regular sets."""
        return SemiAlgSet(self.vars, [b.closure() for b in self.pieces])

    def canonical(self) -> "SemiAlgSet":
        seen = {}
        for b in self.pieces:
            cb = b.canonical()
            if cb is not None and cb not in seen:
                seen[cb] = None
        return SemiAlgSet(self.vars, sorted(seen, key=str))

    def polys(self) -> list[Poly]:
        out = {}
        for b in self.pieces:
            for c in b.conditions:
                out.setdefault(c.canonical().poly, None)
        return list(out)

    def substitute(self, mapping, vars) -> "SemiAlgSet":
        return SemiAlgSet(vars, [b.substitute(mapping, vars) for b in self.pieces])

    def with_vars(self, vars) -> "SemiAlgSet":
        return SemiAlgSet(vars, [b.with_vars(vars) for b in self.pieces])

    def __eq__(self, other):
        return isinstance(other, SemiAlgSet) and self.vars == other.vars and self.pieces == other.pieces

    def __hash__(self):
        return hash((self.vars, self.pieces))

    def __str__(self):
        if not self.pieces:
            return "empty"
        return " | ".join(str(b) for b in self.pieces)

    def __repr__(self):
        return f"SemiAlgSet({self})"


@dataclass
class IntegralPiece:
    domain: SemiAlgSet
    integrand: RatFunc
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.integrand.vars != self.domain.vars:
            self.integrand = self.integrand.with_vars(self.domain.vars)

    @property
    def vars(self):
        return self.domain.vars

    @property
    def ambient_dim(self) -> int:
        return len(self.domain.vars)

    def __str__(self):
        return f"{self.domain} :: {self.integrand}"


def sign_partition(piece: IntegralPiece) -> tuple[SemiAlgSet, SemiAlgSet]:
    """Split the domain by the sign of the integrand (up to its zero set)."""
    vars = piece.vars
    P, Q = piece.integrand.num, piece.integrand.den

    def combo(sp: str, sq: str) -> BasicSet:
        return BasicSet(vars, [Condition(P, sp), Condition(Q, sq)])

    plus = SemiAlgSet(vars, [combo(">", ">"), combo("<", "<")])
    minus = SemiAlgSet(vars, [combo(">", "<"), combo("<", ">")])
    return (piece.domain & plus).canonical(), (piece.domain & minus).canonical()


def boundary_zariski(S: SemiAlgSet) -> list[Poly]:
    """Describing polynomials; their product vanishes on the boundary of S."""
    return [p for p in S.polys() if not p.is_constant()]


def sign_vectors(n: int):
    return product((">", "<"), repeat=n)

"""One compact set whose volume is vol(K1) - vol(K2).

Both sets are placed in [0, r]^d and the cube is cut into n^d grid cubes.
Cubes meeting K2 (over-approximated) are matched injectively with cubes
certified inside K1; translating each K2 clip into its partner and cutting it
out of K1 removes exactly vol(K2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .certify import bounding_box
from .numeric import compile_set, interval_eval_centered
from .poly import Poly
from .semialg import BasicSet, Condition, SemiAlgSet
from .trace import ReductionTrace

__all__ = [
    "CubeGrid",
    "CubePermutation",
    "DifferenceSet",
    "BudgetExceeded",
    "riemann_classify",
    "find_n0",
    "build_permutation",
    "difference_set",
]


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class CubeGrid:
    r: int
    n: int
    d: int
    hat1: frozenset = frozenset()
    check1: frozenset = frozenset()
    hat2: frozenset = frozenset()
    check2: frozenset = frozenset()

    @property
    def side(self) -> Fraction:
        return Fraction(self.r, self.n)

    @property
    def cube_volume(self) -> Fraction:
        return self.side ** self.d

    def cube_box(self, k):
        s = self.side
        return [(ki * s, (ki + 1) * s) for ki in k]


@dataclass
class CubePermutation:
    mapping: dict            # Δ̂₂ index -> Δ̌₁ index
    n: int
    d: int

    def __call__(self, k):
        return self.mapping.get(tuple(k), tuple(k))

    def moved(self):
        return {a: b for a, b in self.mapping.items() if a != b}

    def as_permutation(self) -> dict:
        """A bijection of the whole grid extending the injection.

        Targets outside the domain are sent back to the freed sources, in
        sorted order, so every moved cube trades places with one other.
        """
        perm = dict(self.mapping)
        sources = set(perm)
        targets = set(perm.values())
        free_src = sorted(targets - sources)
        free_dst = sorted(sources - targets)
        perm.update(zip(free_src, free_dst))
        return perm


def _cube_arrays(r, n, d):
    idx = np.array(np.meshgrid(*[np.arange(n)] * d, indexing="ij")).reshape(d, -1).T
    s = r / n
    return idx, idx * s, (idx + 1) * s


def _classify_arrays(K: SemiAlgSet, los, his, exact: bool = False):
    """(meets, inside): interval non-exclusion and certified containment per box.

    ``exact`` says the float corners are the true cube corners (dyadic grids);
    otherwise the boxes are widened by one ulp first.
    """
    N = los.shape[0]
    meets = np.zeros(N, dtype=bool)
    inside = np.zeros(N, dtype=bool)
    if exact:
        lo_o, hi_o = los, his
    else:
        lo_o, hi_o = np.nextafter(los, -np.inf), np.nextafter(his, np.inf)
    for b in K.pieces:
        ok = np.ones(N, dtype=bool)
        sure = np.ones(N, dtype=bool)
        for c in b.conditions:
            lo, hi = interval_eval_centered(c.poly, lo_o, hi_o)
            if c.rel == ">":
                ok &= hi > 0
                sure &= lo > 0
            elif c.rel == ">=":
                ok &= hi >= 0
                sure &= lo >= 0
            elif c.rel == "<":
                ok &= lo < 0
                sure &= hi < 0
            elif c.rel == "<=":
                ok &= lo <= 0
                sure &= hi <= 0
            else:
                ok &= (lo <= 0) & (hi >= 0)
                sure &= False
        meets |= ok
        inside |= sure & ok
    return meets, inside


def riemann_classify(K: SemiAlgSet, r: int, n: int, box=None):
    """(Δ̂, Δ̌) for K ⊆ [0, r]^d at subdivision n.

    Δ̂ holds every cube the interval test cannot separate from K (so it
    over-approximates the cubes meeting K); Δ̌ holds cubes on which every
    condition of some piece is certified on the closed cube.
    """
    d = len(K.vars)
    if not K.pieces:
        return frozenset(), frozenset()
    box = box or bounding_box(K)
    if any(lo < 0 or hi > r for lo, hi in box):
        raise ValueError(f"set is not inside [0, {r}]^{d}")
    idx, los, his = _cube_arrays(r, n, d)
    # r/n dyadic with a short mantissa: k * r/n is exact for every grid index
    exact = Fraction(r / n) == Fraction(r, n) and n <= 1 << 30
    meets, inside = _classify_arrays(K, los, his, exact)
    hat = frozenset(map(tuple, idx[meets].tolist()))
    check = frozenset(map(tuple, idx[inside].tolist()))
    return hat, check


def find_n0(K1: SemiAlgSet, K2: SemiAlgSet, r: int, max_cubes: int = 1 << 21,
            trace: ReductionTrace | None = None, box1=None, box2=None) -> tuple[int, CubeGrid]:
    """Smallest n in 1, 2, 4, ... with #Δ̂₂(n) <= #Δ̌₁(n)."""
    d = len(K1.vars)
    if not K2.pieces:
        return 1, CubeGrid(r, 1, d, *riemann_classify(K1, r, 1, box1))
    box1 = box1 or bounding_box(K1)
    box2 = box2 or bounding_box(K2)
    n = 1
    while n ** d <= max_cubes:
        h1, c1 = riemann_classify(K1, r, n, box1)
        h2, c2 = riemann_classify(K2, r, n, box2)
        if trace is not None:
            trace.add("sum-by-domain", f"cube sweep n = {n}", stage="diff-sweep",
                      n=n, hat1=len(h1), check1=len(c1), hat2=len(h2), check2=len(c2))
        if len(h2) <= len(c1):
            return n, CubeGrid(r, n, d, h1, c1, h2, c2)
        n *= 2
    raise BudgetExceeded(
        f"no subdivision up to {n // 2} separates the volumes; they may be too close")


def build_permutation(hat2, check1, n: int = 0, d: int = 0) -> CubePermutation:
    """Injection Δ̂₂ -> Δ̌₁: common indices stay, the rest pair in sorted order."""
    hat2, check1 = set(hat2), set(check1)
    if len(hat2) > len(check1):
        raise ValueError(f"cannot inject {len(hat2)} cubes into {len(check1)}")
    mapping = {k: k for k in hat2 & check1}
    rest_src = sorted(hat2 - check1)
    rest_dst = sorted(check1 - hat2)
    mapping.update(zip(rest_src, rest_dst))
    return CubePermutation(mapping, n, d)


def _open_box(vars, box) -> list[Condition]:
    out = []
    for v, (lo, hi) in zip(vars, box):
        x = Poly.var(v, vars)
        out += [Condition(x - lo, ">"), Condition(x - hi, "<")]
    return out


def _translate(S: SemiAlgSet, shift) -> SemiAlgSet:
    vars = S.vars
    mapping = {v: Poly.var(v, vars) - s for v, s in zip(vars, shift)}
    return S.substitute(mapping, vars)


@dataclass
class DifferenceSet:
    """K = closure of (H ∩ K1) minus Ψ(H ∩ K2), in shifted coordinates.

    ``offset`` is the translation applied to both inputs to bring them into
    [0, r]^d.
    """
    K1: SemiAlgSet
    K2: SemiAlgSet
    grid: CubeGrid
    perm: CubePermutation
    offset: tuple
    box: list = field(default_factory=list)

    @property
    def vars(self):
        return self.K1.vars

    def __post_init__(self):
        g = self.grid
        size = g.n ** g.d
        self._fwd = np.zeros((size, g.d))
        self._back = np.zeros((size, g.d))
        self._is_target = np.zeros(size, dtype=bool)
        s = float(g.side)
        full = self.perm.as_permutation()
        if full:
            src = np.array(list(full.keys()))
            dst = np.array(list(full.values()))
            ls, ld = self._linear(src), self._linear(dst)
            self._fwd[ls] = (dst - src) * s
            self._back[ld] = (src - dst) * s
            self._is_target[self._linear(np.array(list(self.perm.mapping.values())))] = True
        self._m1 = compile_set(self.K1)
        self._m2 = compile_set(self.K2)

    def _linear(self, k):
        n = self.grid.n
        out = np.zeros(k.shape[0], dtype=np.int64)
        for i in range(k.shape[1]):
            out = out * n + k[:, i]
        return out

    def _index(self, X):
        """Linear cube index (clipped) and whether a point is off H (wire net or outside)."""
        g = self.grid
        u = X / float(g.side)
        on_net = np.any(np.abs(u - np.round(u)) < 1e-12, axis=1)
        inside = np.all((u >= 0) & (u < g.n), axis=1)
        k = np.clip(np.floor(u).astype(np.int64), 0, g.n - 1)
        return self._linear(k), on_net | ~inside

    def psi(self, X):
        """Ψ on points of H."""
        X = np.asarray(X, dtype=float)
        lin, _ = self._index(X)
        return X + self._fwd[lin]

    def psi_k2_member(self, Y):
        """Membership in Ψ(H ∩ K2), by pulling back through the matched cube."""
        Y = np.asarray(Y, dtype=float)
        lin, off = self._index(Y)
        out = np.zeros(Y.shape[0], dtype=bool)
        # Ψ(H ∩ K2) lies in the target cubes
        idx = np.nonzero(self._is_target[lin] & ~off)[0]
        if idx.size:
            out[idx] = self._m2(Y[idx] + self._back[lin[idx]])
        return out

    def membership(self, X):
        X = np.asarray(X, dtype=float)
        _, off = self._index(X)
        return self._m1(X) & ~off & ~self.psi_k2_member(X)

    def volume_identity(self) -> str:
        return "vol(K) = vol(K1) - vol(K2)"

    def to_semialg(self) -> SemiAlgSet:
        """Explicit finite union of basic sets."""
        vars = self.vars
        g = self.grid
        d = g.d
        targets = {v: k for k, v in self.perm.mapping.items()}
        pieces: list[BasicSet] = []
        # untouched cubes, merged into runs along the last axis
        for head in product(range(g.n), repeat=d - 1):
            start = None
            for j in range(g.n + 1):
                k = head + (j,) if j < g.n else None
                free = k is not None and k not in targets
                if free and start is None:
                    start = j
                if not free and start is not None:
                    box = [(hk * g.side, (hk + 1) * g.side) for hk in head]
                    box.append((start * g.side, j * g.side))
                    cut = _open_box(vars, box)
                    for b in self.K1.pieces:
                        c = b.with_conditions(cut).canonical()
                        if c is not None and _box_meets(c, box):
                            pieces.append(c)
                    start = None
        # matched cubes: the target cube minus the translated K2 clip
        for t, a in sorted(targets.items()):
            box = g.cube_box(t)
            cut = _open_box(vars, box)
            shift = [(ti - ai) * g.side for ti, ai in zip(t, a)]
            moved = _translate(self.K2, shift)
            relevant = [b for b in moved.pieces if _box_meets(b, box)]
            comp = SemiAlgSet.full(vars)
            for b in relevant:
                comp = comp & SemiAlgSet(vars, [BasicSet(vars, n) for n in _negations(b)])
            for b1 in self.K1.pieces:
                for cb in comp.pieces:
                    c = b1.with_conditions(cut + list(cb.conditions)).canonical()
                    if c is not None:
                        pieces.append(c)
        return SemiAlgSet(vars, pieces)


def _negations(b: BasicSet):
    for c in b.conditions:
        for n in c.negate():
            yield [n]


def _box_meets(b: BasicSet, box) -> bool:
    los = np.array([[float(lo) for lo, _ in box]])
    his = np.array([[float(hi) for _, hi in box]])
    meets, _ = _classify_arrays(SemiAlgSet(b.vars, [b]), los, his)
    return bool(meets[0])


def _placement(box1, box2):
    """Integer offset and radius putting both boxes inside (0, r)^d with a margin."""
    lo = [min(a[0], b[0]) for a, b in zip(box1, box2)]
    hi = [max(a[1], b[1]) for a, b in zip(box1, box2)]
    offset = tuple(Fraction(1 - math.floor(v)) for v in lo)
    extent = max(math.ceil(h + o) for h, o in zip(hi, offset)) + 1
    # a power of two keeps dyadic boundaries on the grid
    r = 1 << (extent - 1).bit_length()
    return offset, r


def _shift_box(box, offset):
    return [(lo + o, hi + o) for (lo, hi), o in zip(box, offset)]


def difference_set(K1: SemiAlgSet, K2: SemiAlgSet, box1=None, box2=None,
                   trace: ReductionTrace | None = None, max_cubes: int = 1 << 21) -> DifferenceSet:
    """Compact set of volume vol(K1) - vol(K2), as a DifferenceSet in shifted coordinates."""
    if K1.vars != K2.vars:
        raise ValueError("K1 and K2 live in different coordinates")
    box1 = box1 or bounding_box(K1)
    box2 = box2 or (bounding_box(K2) if K2.pieces else box1)
    offset, r = _placement(box1, box2)
    A = _translate(K1, offset)
    B = _translate(K2, offset)
    d = len(K1.vars)
    n, grid = find_n0(A, B, r, max_cubes, trace, _shift_box(box1, offset), _shift_box(box2, offset))
    perm = build_permutation(grid.hat2, grid.check1, n, d)
    if trace is not None and K2.pieces:
        trace.add("change-of-variables", "piecewise translation of grid cubes",
                  stage="diff-permutation", n=n, r=r, moved=len(perm.moved()),
                  fixed=len(perm.mapping) - len(perm.moved()))
    return DifferenceSet(A, B, grid, perm, offset, _shift_box(box1, offset))

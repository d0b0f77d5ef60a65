"""Flag manifolds of SL_n on the big cell.

X is realized as the right coset space P\\G with P the block-lower parabolic,
so the big cell is the set of block-unipotent matrices u = 1 + N with N
strictly block-upper.  The free entries of N, read row by row, are the
coordinates z1..zm.  For x in g the induced vector field is

    u' = proj(u x u^-1) u

where proj keeps the strictly block-upper part.  For sl_2 this gives
xi^e = d, xi^h = -2 z d, xi^f = -z^2 d.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from typing import Dict, List, Sequence, Tuple

from gmpy2 import mpq

from .lie import LieAlgebra, SymElement, sl
from .polynomials import PolyZ, PolyZP
from .weyl import OrderError, WeylOperator, compose, divergence, symbol

__all__ = [
    "FlagConfig",
    "FlagModel",
    "ModelError",
    "build_model",
    "build_vector_fields",
    "casimir_operator",
    "half_density_twist",
]


class ModelError(RuntimeError):
    """The realized model violates one of its structural identities."""


@dataclass(frozen=True)
class FlagConfig:
    n: int
    dims: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if not self.dims:
            raise ValueError("dims must be nonempty")
        if any(not 1 <= d <= self.n - 1 for d in self.dims):
            raise ValueError(f"dims must lie in 1..{self.n - 1}")
        if any(a >= b for a, b in zip(self.dims, self.dims[1:])):
            raise ValueError("dims must be strictly increasing")

    @classmethod
    def projective(cls, n: int) -> "FlagConfig":
        return cls(n, (1,))

    @classmethod
    def full(cls, n: int) -> "FlagConfig":
        return cls(n, tuple(range(1, n)))

    @property
    def block_sizes(self) -> Tuple[int, ...]:
        edges = (0,) + self.dims + (self.n,)
        return tuple(b - a for a, b in zip(edges, edges[1:]))

    @cached_property
    def block_of(self) -> Tuple[int, ...]:
        out = []
        for k, size in enumerate(self.block_sizes):
            out += [k] * size
        return tuple(out)

    @cached_property
    def coordinates(self) -> Tuple[Tuple[int, int], ...]:
        """Matrix positions (r, c) of z1..zm."""
        b = self.block_of
        return tuple((r, c) for r in range(self.n) for c in range(self.n) if b[r] < b[c])

    @property
    def m(self) -> int:
        return len(self.coordinates)

    @property
    def is_full(self) -> bool:
        return self.dims == tuple(range(1, self.n))

    @property
    def is_grassmannian(self) -> bool:
        return len(self.dims) == 1

    def label(self) -> str:
        return f"sl{self.n}-" + "-".join(str(d) for d in self.dims)

    def to_json(self) -> dict:
        return {"n": self.n, "dims": list(self.dims)}


def _poly_matmul(a, b, m):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            s = PolyZ.zero(m)
            for k in range(n):
                if a[i][k] and b[k][j]:
                    s = s + a[i][k] * b[k][j]
            row.append(s)
        out.append(row)
    return out


def _const_matrix(mat, m):
    return [[PolyZ.constant(m, x) for x in row] for row in mat]


def build_vector_fields(config: FlagConfig, g: LieAlgebra = None) -> List[WeylOperator]:
    """xi^x for every basis element x of sl_n, as first-order operators."""
    g = g or sl(config.n)
    n, m = config.n, config.m
    coords = config.coordinates
    pos = {rc: k for k, rc in enumerate(coords)}
    one = PolyZ.constant(m, 1)
    nil = [[PolyZ.zero(m) for _ in range(n)] for _ in range(n)]
    for k, (r, c) in enumerate(coords):
        nil[r][c] = PolyZ.var(m, k)
    u = [[nil[i][j] + (one if i == j else PolyZ.zero(m)) for j in range(n)] for i in range(n)]
    # u^-1 = sum_k (-N)^k, N nilpotent of step < number of blocks
    uinv = [[one if i == j else PolyZ.zero(m) for j in range(n)] for i in range(n)]
    power = [[one if i == j else PolyZ.zero(m) for j in range(n)] for i in range(n)]
    neg = [[-e for e in row] for row in nil]
    for _ in range(len(config.block_sizes) - 1):
        power = _poly_matmul(power, neg, m)
        uinv = [[a + b for a, b in zip(r, s)] for r, s in zip(uinv, power)]
    blk = config.block_of
    fields = []
    for a in range(g.dim):
        conj = _poly_matmul(_poly_matmul(u, _const_matrix(g.basis_matrix(a), m), m), uinv, m)
        proj = [[conj[i][j] if blk[i] < blk[j] else PolyZ.zero(m) for j in range(n)] for i in range(n)]
        vel = _poly_matmul(proj, u, m)
        fields.append(WeylOperator.first_order([vel[r][c] for (r, c) in coords]))
        assert all(not vel[i][j] for i in range(n) for j in range(n) if (i, j) not in pos)
    return fields


def half_density_twist(xi: WeylOperator) -> WeylOperator:
    """eta = xi + div(xi)/2 for a first-order xi without constant term."""
    if xi.order() > 1:
        raise OrderError("half-density twist needs a first-order operator")
    if any(not any(k[xi.m:]) for k in xi.terms):
        raise OrderError("vector field must not carry a zeroth-order term")
    return xi + WeylOperator.multiplication(divergence(xi).scale(mpq(1, 2)))


class FlagModel:
    """eta, mu and xi for every sl_n basis element, plus word products."""

    def __init__(self, config: FlagConfig):
        self.config = config
        self.g = sl(config.n)
        self.m = config.m
        self.xi = build_vector_fields(config, self.g)
        self.eta = [half_density_twist(x) for x in self.xi]
        self.mu: List[PolyZP] = [symbol(e, 1) for e in self.eta]
        self._words: Dict[Tuple[int, ...], WeylOperator] = {(): WeylOperator.constant(self.m, 1)}
        self._sym_words: Dict[Tuple[int, ...], WeylOperator] = {}

    def word(self, indices: Sequence[int]) -> WeylOperator:
        """eta^{a1} eta^{a2} ... eta^{ak} (memoized by prefix)."""
        w = tuple(indices)
        hit = self._words.get(w)
        if hit is not None:
            return hit
        out = compose(self.word(w[:-1]), self.eta[w[-1]])
        self._words[w] = out
        return out

    def symmetrized(self, multiset: Sequence[int]) -> WeylOperator:
        """Average of eta-words over all orderings of a multiset."""
        key = tuple(sorted(multiset))
        hit = self._sym_words.get(key)
        if hit is not None:
            return hit
        orders = sorted(set(permutations(key)))
        total = WeylOperator.zero(self.m)
        for w in orders:
            total = total + self.word(w)
        out = total.scale(mpq(1, len(orders)))
        self._sym_words[key] = out
        return out

    def symmetrize(self, f: SymElement) -> WeylOperator:
        total = WeylOperator.zero(self.m)
        for mono, c in f.terms.items():
            total = total + self.symmetrized(mono).scale(c)
        return total

    def eta_of(self, x: Sequence) -> WeylOperator:
        """eta for a coordinate vector x in g."""
        total = WeylOperator.zero(self.m)
        for a, c in enumerate(x):
            if c:
                total = total + self.eta[a].scale(c)
        return total

    def mu_of(self, x: Sequence) -> PolyZP:
        total = PolyZP.zero(self.m)
        for a, c in enumerate(x):
            if c:
                total = total + self.mu[a].scale(c)
        return total

    def mu_monomial(self, multiset: Sequence[int]) -> PolyZP:
        out = PolyZP.constant(self.m, 1)
        for a in multiset:
            out = out * self.mu[a]
        return out


def build_model(config: FlagConfig) -> FlagModel:
    return FlagModel(config)


def casimir_operator(model: FlagModel, c: SymElement) -> WeylOperator:
    """Symmetrized image of an invariant; raises ModelError unless it is a scalar."""
    op = model.symmetrize(c)
    if not op.is_scalar():
        raise ModelError("casimir image is not a scalar operator")
    return op

"""Exact property checks over a computed pipeline.

Each check is a function ``ctx -> (status, witness)`` with status True (pass),
False (fail) or None (reported as data only).  Randomized checks draw from a
generator seeded by the check name, so results never depend on scheduling.
"""

from __future__ import annotations

import random
import zlib
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Optional, Tuple

from gmpy2 import mpq

from . import classical
from .dmodule import (
    ad_action,
    bar_preserves,
    invariants,
    sigma_consistent,
    sigma_D,
    transpose_preserves,
)
from .flag import casimir_operator
from .lie import SymElement
from .linalg import mat_mul, mat_rank, mat_sub, mat_t, mat_vec
from .polynomials import PolyZP
from .quantization import QuantizationData, orthogonal_splitting
from .scalars import I, conj, fmt_scalar, is_real, real, scalar
from .trace import CommutatorTrace
from .weyl import WeylOperator, commutator, compose, symbol, transpose

__all__ = ["CHECKS", "Check", "Context", "run_check"]

ZERO = mpq(0)
ONE = mpq(1)
HALF = mpq(1, 2)


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    fn: Callable


CHECKS: List[Check] = []


def check(name: str, anchor: str):
    def deco(fn):
        CHECKS.append(Check(name, anchor, fn))
        return fn

    return deco


class Context:
    """Pipeline data plus lazily computed tables shared between checks."""

    def __init__(self, q: QuantizationData):
        self.q = q
        self.model = q.model
        self.g = q.model.g
        self.R = q.R
        self.F = q.F
        self.D = q.D
        self._star: Optional[Dict] = None
        self._ctrace: Optional[CommutatorTrace] = None

    def rng(self, name: str) -> random.Random:
        return random.Random(zlib.crc32(name.encode()))

    @property
    def ctrace(self) -> CommutatorTrace:
        if self._ctrace is None:
            self._ctrace = CommutatorTrace(self.F)
        return self._ctrace

    def star_table(self) -> Dict[Tuple[int, int, int, int], List[List]]:
        """C_p coordinates for every pair of graded basis vectors with j + k <= D."""
        if self._star is None:
            table = {}
            for dj in range(self.D + 1):
                for dk in range(self.D + 1 - dj):
                    for i in range(self.R.dim(dj)):
                        for j in range(self.R.dim(dk)):
                            table[(dj, i, dk, j)] = self.q.star_basis(dj, i, dk, j)
            self._star = table
        return self._star

    def basis_mu_index(self, i: int) -> int:
        return self.R.monomials[1][i][0]


def run_check(ctx: Context, c: Check) -> dict:
    try:
        status, witness = c.fn(ctx)
    except Exception as exc:  # a crash is a failed check with its diagnostic
        status, witness = False, f"{type(exc).__name__}: {exc}"
    label = {True: "pass", False: "fail", None: "reported"}[status]
    return {"name": c.name, "anchor": c.anchor, "status": label, "witness": witness}


# -- random data ------------------------------------------------------------------------


def _rand_scalar(rng, complex_=True):
    re = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
    im = Fraction(rng.randint(-6, 6), rng.randint(1, 4)) if complex_ and rng.random() < 0.5 else 0
    return scalar(mpq(re.numerator, re.denominator), mpq(im.numerator, im.denominator) if im else 0)


def _rand_polyzp(rng, m, terms=4, deg=2):
    out = {}
    for _ in range(terms):
        key = tuple(rng.randint(0, deg) for _ in range(2 * m))
        out[key] = _rand_scalar(rng)
    return PolyZP(m, out)


def _rand_weyl(rng, m, order, terms=4, zdeg=2):
    """Random operator of order exactly ``order`` (when nonzero)."""
    out = {}
    for t in range(terms):
        z = tuple(rng.randint(0, zdeg) for _ in range(m))
        dexp = [0] * m
        total = order if t == 0 else rng.randint(0, order)
        for _ in range(total):
            dexp[rng.randrange(m)] += 1
        out[z + tuple(dexp)] = _rand_scalar(rng)
    return WeylOperator(m, out)


def _eq_vec(u, v):
    return len(u) == len(v) and all(a == b for a, b in zip(u, v))


# -- scalars and polynomials ------------------------------------------------------------


@check("scalars.field_axioms", "scalars:field")
def _field(ctx):
    rng = ctx.rng("scalars.field_axioms")
    for _ in range(200):
        a, b, c = (_rand_scalar(rng) for _ in range(3))
        if (a + b) * c != a * c + b * c or (a * b) * c != a * (b * c):
            return False, f"distributivity/associativity at {a}, {b}, {c}"
        if conj(conj(a)) != a or conj(a * b) != conj(a) * conj(b):
            return False, f"conjugation at {a}, {b}"
        if a and a * (1 / a) != 1:
            return False, f"inverse at {a}"
    return True, "200 random triples"


@check("polynomials.ring_axioms", "polynomials:ring")
def _ring(ctx):
    rng = ctx.rng("polynomials.ring_axioms")
    m = ctx.model.m
    for _ in range(40):
        a, b, c = (_rand_polyzp(rng, m) for _ in range(3))
        if (a * b) * c != a * (b * c) or a * (b + c) != a * b + a * c or a * b != b * a:
            return False, f"ring axiom fails at {a.to_text()}"
    return True, "40 random triples"


@check("polynomials.p_degree_split", "polynomials:fiber-grading")
def _split(ctx):
    rng = ctx.rng("polynomials.p_degree_split")
    m = ctx.model.m
    for _ in range(50):
        a = _rand_polyzp(rng, m, terms=6)
        parts = a.p_degree_split()
        total = PolyZP.zero(m)
        for d, part in parts:
            if part.homogeneous_degree() != d:
                return False, f"component of degree {d} is not homogeneous"
            total = total + part
        if total != a:
            return False, f"components do not re-sum to {a.to_text()}"
    return True, "50 random polynomials"


# -- Weyl operators ------------------------------------------------------------------------


@check("weyl.associativity", "weyl:ring")
def _assoc(ctx):
    rng = ctx.rng("weyl.associativity")
    m = ctx.model.m
    for _ in range(25):
        a, b, c = (_rand_weyl(rng, m, rng.randint(0, 2), terms=3) for _ in range(3))
        if compose(compose(a, b), c) != compose(a, compose(b, c)):
            return False, f"associativity fails at {a.to_text()}"
    return True, "25 random triples"


@check("weyl.symbol_commutator", "weyl:symbol-bracket")
def _symcomm(ctx):
    rng = ctx.rng("weyl.symbol_commutator")
    m = ctx.model.m
    for _ in range(25):
        j, k = rng.randint(0, 3), rng.randint(0, 3)
        a, b = _rand_weyl(rng, m, j), _rand_weyl(rng, m, k)
        j, k = a.order(), b.order()
        if j < 0 or k < 0:
            continue
        lhs = symbol(commutator(a, b), j + k - 1) if j + k >= 1 else PolyZP.zero(m)
        rhs = classical.poisson(symbol(a, j), symbol(b, k))
        if lhs != rhs:
            return False, f"symbol of [A,B] differs from the bracket for A={a.to_text()}"
        if symbol(compose(a, b), j + k) != symbol(a, j) * symbol(b, k):
            return False, "symbol is not multiplicative"
    return True, "25 random pairs"


@check("weyl.transpose_bar", "weyl:involutions")
def _tb(ctx):
    rng = ctx.rng("weyl.transpose_bar")
    m = ctx.model.m
    for _ in range(25):
        a, b = _rand_weyl(rng, m, 2), _rand_weyl(rng, m, 1)
        if transpose(a).bar() != transpose(a.bar()):
            return False, "transpose and bar do not commute"
        if transpose(a).order() != a.order() or a.bar().order() != a.order():
            return False, "order not preserved"
        if transpose(transpose(a)) != a or transpose(compose(a, b)) != compose(transpose(b), transpose(a)):
            return False, "transpose is not an involutive anti-automorphism"
    return True, "25 random operators"


# -- Lie algebra ---------------------------------------------------------------------------


@check("lie.jacobi", "lie:structure")
def _jacobi(ctx):
    g = ctx.g
    units = [g.unit(a) for a in range(g.dim)]
    for a, b, c in product(range(g.dim), repeat=3):
        x, y, z = units[a], units[b], units[c]
        s = [p + q + r for p, q, r in zip(g.bracket(x, g.bracket(y, z)), g.bracket(y, g.bracket(z, x)),
                                         g.bracket(z, g.bracket(x, y)))]
        if any(s):
            return False, f"Jacobi fails on ({g.names[a]}, {g.names[b]}, {g.names[c]})"
    for a in range(g.dim):
        for b in range(g.dim):
            mat = g.to_matrix(g.bracket(units[a], units[b]))
            ma, mb = g.basis_matrix(a), g.basis_matrix(b)
            comm = mat_sub(mat_mul(ma, mb), mat_mul(mb, ma))
            if mat != comm:
                return False, f"structure constants disagree with matrices on {g.names[a]}, {g.names[b]}"
    return True, f"{g.dim ** 3} basis triples"


@check("lie.cartan_involution", "lie:cartan-involution")
def _cartan(ctx):
    g = ctx.g
    rng = ctx.rng("lie.cartan_involution")
    for _ in range(30):
        x = [_rand_scalar(rng) for _ in range(g.dim)]
        y = [_rand_scalar(rng) for _ in range(g.dim)]
        if g.cartan_involution(g.bracket(x, y)) != g.bracket(g.cartan_involution(x), g.cartan_involution(y)):
            return False, "sigma is not a Lie automorphism"
        if g.cartan_involution(g.cartan_involution(x)) != x:
            return False, "sigma is not an involution"
        ix = [I * c for c in x]
        if g.cartan_involution(ix) != [-I * c for c in g.cartan_involution(x)]:
            return False, "sigma is not anti-linear"
    return True, "30 random pairs"


@check("lie.trace_form", "lie:invariant-form")
def _trace_form(ctx):
    g = ctx.g
    rng = ctx.rng("lie.trace_form")
    for _ in range(30):
        x, y, w = ([_rand_scalar(rng) for _ in range(g.dim)] for _ in range(3))
        if g.trace_form(g.bracket(x, y), w) + g.trace_form(y, g.bracket(x, w)) != 0:
            return False, "trace form is not invariant"
        if g.trace_form(x, y) != g.trace_form(y, x):
            return False, "trace form is not symmetric"
    if mat_rank(g.killing_matrix) != g.dim:
        return False, "trace form is degenerate"
    return True, "30 random triples"


@check("lie.fischer_pairing", "lie:fischer")
def _fischer(ctx):
    g = ctx.g
    rng = ctx.rng("lie.fischer_pairing")
    for _ in range(20):
        d = rng.randint(1, 3)
        monos = g.sym_basis(d)
        f = SymElement({rng.choice(monos): _rand_scalar(rng) for _ in range(3)})
        h = SymElement({rng.choice(g.sym_basis(rng.randint(0, 3))): _rand_scalar(rng) for _ in range(3)})
        if g.fischer_pair(f, h) != conj(g.fischer_pair(h, f)):
            return False, "pairing is not hermitian"
        norm = g.fischer_pair(f, f)
        if f and not (is_real(norm) and real(norm) > 0):
            return False, f"bh(f,f) is not positive for {f}"
        other = SymElement({rng.choice(g.sym_basis(d + 1)): ONE})
        if g.fischer_pair(f, other):
            return False, "distinct degrees are not orthogonal"
    for a in range(g.dim):
        for b in range(g.dim):
            x = SymElement.monomial((a,))
            y = SymElement.monomial((b,))
            if g.fischer_pair(x, y) != -g.trace_form(g.cartan_involution(g.unit(b)), g.unit(a)):
                return False, "degree-one pairing disagrees with -(sigma(y), x)"
    return True, "20 random pairs and all degree-one pairs"


@check("lie.casimir_invariance", "lie:casimirs")
def _casinv(ctx):
    g = ctx.g
    degs = []
    for c in g.casimirs:
        degs.append(c.degrees()[0])
        for a in range(g.dim):
            if g.ad_sym(a, c):
                return False, f"casimir of degree {degs[-1]} is moved by {g.names[a]}"
    return True, {"degrees": degs}


# -- flag model ----------------------------------------------------------------------------


@check("model.homomorphism", "model:lie-homomorphism")
def _hom(ctx):
    g, M = ctx.g, ctx.model
    for a in range(g.dim):
        for b in range(g.dim):
            if commutator(M.eta[a], M.eta[b]) != M.eta_of(g.bracket(g.unit(a), g.unit(b))):
                return False, f"[eta^{g.names[a]}, eta^{g.names[b]}] differs"
            if commutator(M.xi[a], M.xi[b]) != _xi_of(M, g.bracket(g.unit(a), g.unit(b))):
                return False, "vector fields are not a homomorphism"
    return True, f"{g.dim ** 2} basis pairs"


def _xi_of(M, x):
    out = WeylOperator.zero(M.m)
    for a, c in enumerate(x):
        if c:
            out = out + M.xi[a].scale(c)
    return out


@check("model.transpose_skew", "model:half-density")
def _skew(ctx):
    M = ctx.model
    for a, e in enumerate(M.eta):
        if transpose(e) != -e:
            return False, f"transpose(eta^{ctx.g.names[a]}) != -eta"
        if e.order() > 1:
            return False, "eta is not first order"
    zdeg = max(x.z_degree() for x in M.xi)
    return True, {"max_coefficient_z_degree": zdeg}


@check("model.symbols", "model:momentum")
def _symbols(ctx):
    g, M = ctx.g, ctx.model
    for a in range(g.dim):
        if symbol(M.eta[a], 1) != M.mu[a]:
            return False, "mu^x is not the symbol of eta^x"
        for b in range(g.dim):
            if classical.poisson(M.mu[a], M.mu[b]) != M.mu_of(g.bracket(g.unit(a), g.unit(b))):
                return False, f"{{mu^{g.names[a]}, mu^{g.names[b]}}} differs"
    return True, f"{g.dim ** 2} basis pairs"


@check("model.casimir_scalars", "model:central-character")
def _cas(ctx):
    vals = []
    for c in ctx.g.casimirs:
        op = casimir_operator(ctx.model, c)
        for e in ctx.model.eta:
            if commutator(e, op):
                return False, "casimir image does not commute with eta"
        vals.append(fmt_scalar(op.scalar_value()))
    return True, {"casimir_scalars": vals}


# -- classical side ------------------------------------------------------------------------


def _rand_r(ctx, rng, d):
    vec = [_rand_scalar(rng, complex_=False) if rng.random() < 0.5 else ZERO for _ in range(ctx.R.dim(d))]
    return ctx.R.element(d, vec)


@check("classical.poisson_identities", "classical:poisson")
def _pois(ctx):
    rng = ctx.rng("classical.poisson_identities")
    P = classical.poisson
    for _ in range(15):
        a, b, c = (_rand_r(ctx, rng, rng.randint(0, min(ctx.D, 2))) for _ in range(3))
        if P(a, P(b, c)) + P(b, P(c, a)) + P(c, P(a, b)) != PolyZP.zero(ctx.model.m):
            return False, "Jacobi fails"
        if P(a, b * c) != P(a, b) * c + b * P(a, c):
            return False, "Leibniz fails"
        if P(a, b) != -P(b, a):
            return False, "not antisymmetric"
        if classical.alpha(P(a, b)) != -P(classical.alpha(a), classical.alpha(b)):
            return False, "alpha identity fails"
    return True, "15 random triples"


@check("classical.substitution_equivariance", "classical:moment-map")
def _subeq(ctx):
    g, R = ctx.g, ctx.R
    top = min(ctx.D, 2)
    count = 0
    for d in range(top + 1):
        for mono in g.sym_basis(d):
            f = SymElement.monomial(mono)
            img = R.product(mono)
            for a in range(g.dim):
                lhs = PolyZP.zero(ctx.model.m)
                for m2, c in g.ad_sym(a, f).terms.items():
                    lhs = lhs + R.product(m2).scale(c)
                if lhs != classical.poisson(ctx.model.mu[a], img):
                    return False, f"substitution not equivariant at {mono}"
                count += 1
    return True, f"{count} (monomial, generator) pairs"


@check("classical.ideal_harmonics", "classical:harmonic-complement")
def _ideal(ctx):
    g = ctx.g
    rows = []
    for d in range(ctx.D + 1):
        data = ctx.q.ideal(d)
        for i in data.ideal_elements():
            for h in data.harmonic_elements():
                if g.fischer_pair(h, i):
                    return False, f"I^{d} and H^{d} are not orthogonal"
        if len(data.ideal) + len(data.harmonic) != len(data.monomials):
            return False, f"S^{d} is not I^{d} + H^{d}"
        if len(data.harmonic) != ctx.R.dim(d):
            return False, f"dim H^{d} != dim R^{d}"
        rows.append([d, len(data.monomials), len(data.ideal), ctx.R.dim(d)])
    return True, {"d,dimS,dimI,dimR": rows}


@check("classical.casimir_ideal", "classical:casimirs-generate")
def _casideal(ctx):
    """For the full flag the casimirs generate I; elsewhere the comparison is data."""
    g = ctx.g
    out = []
    for d in range(ctx.D + 1):
        data = ctx.q.ideal(d)
        gens = classical.casimir_ideal_span(d, g)
        vecs = [[e.terms.get(mono, ZERO) for mono in data.monomials] for e in gens]
        rank_gen = mat_rank(vecs) if vecs else 0
        rank_all = mat_rank(vecs + data.ideal) if (vecs or data.ideal) else 0
        out.append([d, len(data.ideal), rank_gen, rank_all == len(data.ideal)])
        if rank_all != len(data.ideal):
            return False, f"casimir multiples of degree {d} are not in I"
    generated = all(r[1] == r[2] for r in out)
    if ctx.q.config.is_full:
        return generated, {"d,dimI,rank_casimir_span,contained": out}
    return None, {"d,dimI,rank_casimir_span,contained": out, "generated": generated}


@check("classical.sigma_R", "classical:sigma")
def _sigmar(ctx):
    g, R = ctx.g, ctx.R
    for d in range(ctx.D + 1):
        data = ctx.q.ideal(d)
        for i in data.ideal_elements():
            img = g.sigma_sym(i)
            poly = PolyZP.zero(ctx.model.m)
            for mono, c in img.terms.items():
                poly = poly + R.product(mono).scale(c)
            if poly:
                return False, f"sigma does not preserve I^{d}"
    rng = ctx.rng("classical.sigma_R")
    for _ in range(15):
        d = rng.randint(0, min(ctx.D, 3))
        vec = [_rand_scalar(rng) for _ in range(R.dim(d))]
        phi = R.element(d, vec)
        if classical.sigma_R(classical.sigma_R(phi, R), R) != phi:
            return False, "sigma_R is not an involution"
    for a in range(g.dim if ctx.D >= 1 else 0):
        b, s = g.sigma_basis[a]
        if classical.sigma_R(ctx.model.mu[a], R) != ctx.model.mu[b].scale(s):
            return False, "sigma_R disagrees with sigma on generators"
    return True, "kernel compatibility in every degree; 15 random involution checks"


# -- operator side ---------------------------------------------------------------------------


@check("dmodule.dimensions", "dmodule:associated-graded")
def _ddims(ctx):
    F, R = ctx.F, ctx.R
    dims = [F.dim(d) for d in range(ctx.D + 1)]
    expect = [sum(R.dim(k) for k in range(d + 1)) for d in range(ctx.D + 1)]
    return dims == expect and F.sorted_word_rank == dims, {"dim_D_le_d": dims}


@check("dmodule.transpose_bar", "dmodule:involutions")
def _dtb(ctx):
    for d in range(ctx.D + 1):
        if not transpose_preserves(ctx.F, d):
            return False, f"transpose fails on D_<={d}"
        if not bar_preserves(ctx.F, d):
            return False, f"bar fails on D_<={d}"
    return True, f"D_<=d for d <= {ctx.D}"


@check("dmodule.sigma", "dmodule:sigma")
def _dsigma(ctx):
    F = ctx.F
    if not sigma_consistent(F):
        return False, "sigma is inconsistent with a relation among eta-words"
    for i in range(len(F.words)):
        if sigma_D(sigma_D(F.operator(i), F), F) != F.operator(i):
            return False, f"sigma^2 != id on word {F.words[i]}"
    rng = ctx.rng("dmodule.sigma")
    for _ in range(20):
        j = rng.randint(0, ctx.D)
        k = rng.randint(0, ctx.D - j)
        a = rng.choice(list(F.indices_of_degree(j)))
        b = rng.choice(list(F.indices_of_degree(k)))
        A = F.operator(a).scale(_rand_scalar(rng))
        B = F.operator(b).scale(_rand_scalar(rng))
        if sigma_D(compose(A, B), F) != compose(sigma_D(A, F), sigma_D(B, F)):
            return False, "sigma is not multiplicative"
        if sigma_D(A.bar(), F) != sigma_D(A, F).bar():
            return False, "sigma and bar do not commute"
    return True, f"{len(F.relations)} relations, 20 random products"


@check("dmodule.ad_invariants", "dmodule:invariants")
def _dinv(ctx):
    F = ctx.F
    d = min(ctx.D, 3)
    for x in range(ctx.g.dim):
        for j in range(F.dim(d)):
            A = ad_action(ctx.model, x, F.operator(j))
            if not F.contains(A) or any(F.coords(A)[F.dim(d):]):
                return False, f"ad does not preserve D_<={d}"
    inv = invariants(F, d)
    one = [ONE] + [ZERO] * (F.dim(d) - 1)
    ok = len(inv) == 1 and _eq_vec([c / inv[0][0] for c in inv[0]], one)
    return ok, {"invariant_dimension": len(inv), "degree": d}


# -- trace ---------------------------------------------------------------------------------


@check("trace.values", "trace:normalization")
def _tvals(ctx):
    q = ctx.q
    one = WeylOperator.constant(ctx.model.m, 1)
    if q.T(one) != 1:
        return False, "T(1) != 1"
    for a, e in enumerate(ctx.model.eta if ctx.D >= 1 else []):
        if q.T(e) != 0:
            return False, f"T(eta^{ctx.g.names[a]}) != 0"
    witness = {}
    if ctx.D >= 2:
        for a, b in [(0, ctx.g.dim - 1), (ctx.g.index[("H", 0)], ctx.g.index[("H", 0)])]:
            witness[f"T(eta^{ctx.g.names[a]} eta^{ctx.g.names[b]})"] = fmt_scalar(
                q.T(compose(ctx.model.eta[a], ctx.model.eta[b])))
    return True, witness


@check("trace.dual_route", "trace:uniqueness")
def _tdual(ctx):
    F, q = ctx.F, ctx.q
    for i in range(len(F.words)):
        if ctx.ctrace(F.operator(i)) != q.tau_words[i]:
            return False, f"word trace and commutator trace differ on {F.words[i]}"
    return True, f"{len(F.words)} basis words"


@check("trace.trace_property", "trace:trace")
def _ttrace(ctx):
    F, q = ctx.F, ctx.q
    rng = ctx.rng("trace.trace_property")
    for _ in range(30):
        j = rng.randint(0, ctx.D)
        k = rng.randint(0, ctx.D - j)
        A = F.operator(rng.choice(list(F.indices_of_degree(j)))).scale(_rand_scalar(rng))
        B = F.operator(rng.choice(list(F.indices_of_degree(k)))).scale(_rand_scalar(rng))
        if q.T(compose(A, B)) != q.T(compose(B, A)):
            return False, "T(AB) != T(BA)"
    for i in range(len(F.words)):
        A = F.operator(i)
        if q.T(transpose(A)) != q.T(A):
            return False, "T is not transpose invariant"
        Ai = A.scale(I + 1)
        if q.T(Ai.bar()) != conj(q.T(Ai)):
            return False, "T does not commute with conjugation"
    return True, "30 random products; transpose and bar on every basis word"


# -- Gram form and splitting ---------------------------------------------------------------


@check("gram.positivity", "gram:positive-definite")
def _gpos(ctx):
    q = ctx.q
    n = len(q.gram)
    if any(q.gram[i][j] != conj(q.gram[j][i]) for i in range(n) for j in range(i, n)):
        return False, "Gram matrix is not hermitian"
    if q.gram[0][0] != 1:
        return False, "gamma(1,1) != 1"
    bad = [k for k, p in enumerate(q.pivots) if not p > 0]
    if bad or len(q.pivots) != n:
        return False, f"non-positive pivot at {bad[:1]}"
    return True, {"pivots": len(q.pivots), "min_pivot": fmt_scalar(min(q.pivots))}


@check("gram.invariance", "gram:g-sharp-invariance")
def _ginv(ctx):
    F, q, M, g = ctx.F, ctx.q, ctx.model, ctx.g
    top = F.dim(ctx.D - 1) if ctx.D >= 1 else 0
    left, right = {}, {}
    for x in range(g.dim):
        b, s = g.sigma_basis[x]
        for i in range(top):
            left[(x, i)] = F.coords(compose(M.eta[x], F.operator(i)))
            right[(x, i)] = F.coords(compose(F.operator(i), M.eta[b].scale(s)))
    n = len(F.words)
    unit = lambda i: [ONE if k == i else ZERO for k in range(n)]
    for x in range(g.dim):
        for i in range(top):
            for j in range(top):
                if q.gamma(left[(x, i)], unit(j)) != q.gamma(unit(i), right[(x, j)]):
                    return False, f"invariance fails for x={g.names[x]}, words {F.words[i]}, {F.words[j]}"
    return True, f"{g.dim * top * top} triples"


@check("split.direct_sum", "split:orthogonal-grading")
def _dsum(ctx):
    q = ctx.q
    n = len(q.V)
    if mat_rank(q.V) != n:
        return False, "splitting vectors are dependent"
    for i, row in enumerate(q.V):
        d = ctx.F.degree(i)
        if any(row[k] for k in range(ctx.F.dim(d), n)) or row[i] != 1:
            return False, "splitting vector leaves its filtration level"
    return True, f"{n} vectors span D_<={ctx.D}"


def _in_V(ctx, vec, d):
    F, q = ctx.F, ctx.q
    if any(vec[F.dim(d):]):
        return False
    lo = F.degree_start[d]
    for k in range(lo):
        if sum((c * q.gram[j][k] for j, c in enumerate(vec) if c), ZERO):
            return False
    return True


@check("split.stability", "split:stable-summands")
def _stab(ctx):
    F, q, M = ctx.F, ctx.q, ctx.model
    for i in range(len(F.words)):
        d = F.degree(i)
        op = q.bq_basis_operator(i)
        imgs = [("transpose", transpose(op)), ("bar", op.scale(I).bar())]
        imgs += [(f"ad {ctx.g.names[x]}", commutator(M.eta[x], op)) for x in range(ctx.g.dim)]
        for label, img in imgs:
            if not _in_V(ctx, F.coords(img), d):
                return False, f"V^{d} not stable under {label}"
    return True, f"{len(F.words)} splitting vectors"


@check("inner.orthogonal_grading", "inner:grading")
def _orth(ctx):
    q, F = ctx.q, ctx.F
    if q.gram_V[0][0] != 1:
        return False, "<1|1> != 1"
    n = len(F.words)
    for i in range(n):
        for j in range(n):
            if F.degree(i) != F.degree(j) and q.gram_V[i][j]:
                return False, f"<R^{F.degree(i)}|R^{F.degree(j)}> != 0"
    return True, f"{n * n} basis pairs"


@check("bq.symmetries", "bq:axioms")
def _bqsym(ctx):
    q, F, M, g, R = ctx.q, ctx.F, ctx.model, ctx.g, ctx.R
    for a in range(g.dim if ctx.D >= 1 else 0):
        if q.bq(M.mu[a]) != M.eta[a]:
            return False, "bq(mu^x) != eta^x"
    for d in range(ctx.D + 1):
        for i in range(R.dim(d)):
            idx = q.r_index(d, i)
            op = q.bq_basis_operator(idx)
            if symbol(op, d) != R.elements[d][i]:
                return False, "bq does not preserve symbols"
            sign = ONE if d % 2 == 0 else -ONE
            if F.coords(transpose(op)) != [sign * c for c in q.V[idx]]:
                return False, "bq(phi^alpha) != bq(phi)^t"
            for x in range(g.dim):
                lhs = q.bq(classical.poisson(M.mu[x], R.elements[d][i]))
                if lhs != commutator(M.eta[x], op):
                    return False, f"bq not equivariant for {g.names[x]}"
    rng = ctx.rng("bq.symmetries")
    for _ in range(10):
        d = rng.randint(0, ctx.D)
        phi = R.element(d, [_rand_scalar(rng) for _ in range(R.dim(d))])
        if q.bq(phi.bar()) != q.bq(phi).bar():
            return False, "bq does not commute with conjugation"
        if q.bq_inverse(q.bq(phi)) != phi:
            return False, "bq^-1 bq != id"
    return True, "every graded basis vector"


# -- star product -------------------------------------------------------------------------


@check("star.leading_terms", "star:leading-terms")
def _star01(ctx):
    R = ctx.R
    for (dj, i, dk, j), coeffs in ctx.star_table().items():
        phi, psi = R.elements[dj][i], R.elements[dk][j]
        if R.element(dj + dk, coeffs[0]) != phi * psi:
            return False, f"C_0 != product on degrees ({dj},{dk})"
        if dj + dk >= 1 and R.element(dj + dk - 1, coeffs[1]) != classical.poisson(phi, psi).scale(HALF):
            return False, f"C_1 != half bracket on degrees ({dj},{dk})"
    return True, f"{len(ctx.star_table())} basis pairs"


@check("star.parity", "star:parity")
def _parity(ctx):
    table = ctx.star_table()
    for (dj, i, dk, j), coeffs in table.items():
        other = table[(dk, j, dj, i)]
        for p, (a, b) in enumerate(zip(coeffs, other)):
            sign = ONE if p % 2 == 0 else -ONE
            if any(x != sign * y for x, y in zip(a, b)):
                return False, f"C_{p} parity fails on degrees ({dj},{dk})"
    return True, f"{len(table)} ordered pairs"


@check("star.support", "star:support")
def _support(ctx):
    table = ctx.star_table()
    for (dj, i, dk, j), coeffs in table.items():
        for p, comp in enumerate(coeffs):
            if dj + dk - p < abs(dj - dk) and any(comp):
                return False, f"C_{p} nonzero below degree |j-k| on ({dj},{dk})"
    return True, f"{len(table)} basis pairs"


@check("star.three_term", "star:three-term")
def _three(ctx):
    q = ctx.q
    table = ctx.star_table()
    count = 0
    for (dj, i, dk, j), coeffs in table.items():
        if dj != 1:
            continue
        x = ctx.basis_mu_index(i)
        for p, comp in enumerate(coeffs):
            if p >= 3 and any(comp):
                return False, f"mu^x * phi has a term at order {p}"
        if dk >= 1:
            lam = [row[j] for row in q.lambda_matrix(x, dk)]
            if not _eq_vec(coeffs[2], lam):
                return False, f"C_2(mu^{ctx.g.names[x]}, .) != Lambda on degree {dk}"
        count += 1
    return True, f"{count} (generator, basis vector) pairs"


# -- Lambda ----------------------------------------------------------------------------------


@check("lambda.degree", "lambda:degree")
def _ldeg(ctx):
    q = ctx.q
    for x in range(ctx.g.dim):
        for d in range(1, ctx.D + 1):
            L = q.lambda_matrix(x, d)
            if len(L) != ctx.R.dim(d - 1) or any(len(r) != ctx.R.dim(d) for r in L):
                return False, "Lambda has the wrong shape"
    return True, f"Lambda^x: R^d -> R^(d-1), d <= {ctx.D}"


@check("lambda.commuting", "lambda:commuting")
def _lcomm(ctx):
    q, g = ctx.q, ctx.g
    for d in range(2, ctx.D + 1):
        for x in range(g.dim):
            for y in range(x + 1, g.dim):
                a = mat_mul(q.lambda_matrix(x, d - 1), q.lambda_matrix(y, d))
                b = mat_mul(q.lambda_matrix(y, d - 1), q.lambda_matrix(x, d))
                if a != b:
                    return False, f"Lambda^{g.names[x]} and Lambda^{g.names[y]} do not commute on R^{d}"
    return True, "all basis pairs"


@check("lambda.equivariance", "lambda:equivariance")
def _leq(ctx):
    q, g = ctx.q, ctx.g
    P = {(x, d): q.poisson_matrix(x, d) for x in range(g.dim) for d in range(ctx.D + 1)}
    for d in range(1, ctx.D + 1):
        for x in range(g.dim):
            for y in range(g.dim):
                L = q.lambda_matrix(y, d)
                lhs = mat_sub(mat_mul(P[(x, d - 1)], L), mat_mul(L, P[(x, d)]))
                rhs = q.lambda_of(g.bracket(g.unit(x), g.unit(y)), d)
                if lhs != rhs:
                    return False, f"[Phi^{g.names[x]}, Lambda^{g.names[y]}] != Lambda^[x,y] on R^{d}"
    return True, "all basis pairs"


@check("lambda.pairing", "lambda:pairing")
def _lpair(ctx):
    q, g = ctx.q, ctx.g
    if ctx.D < 1:
        return None, "needs degree 1"
    P = q.lambda_pairing()
    n = g.dim
    if any(P[x][y] != P[y][x] for x in range(n) for y in range(n)):
        return False, "pairing is not symmetric"
    for z in range(n):
        for x in range(n):
            zx = g.bracket(g.unit(z), g.unit(x))
            for y in range(n):
                zy = g.bracket(g.unit(z), g.unit(y))
                s = sum((c * P[k][y] for k, c in enumerate(zx) if c), ZERO) + sum(
                    (c * P[x][k] for k, c in enumerate(zy) if c), ZERO)
                if s:
                    return False, "pairing is not invariant"
    if mat_rank(P) != n:
        return False, "pairing is degenerate"
    # proportional to the trace form
    K = g.killing_matrix
    a, b = next((a, b) for a in range(n) for b in range(n) if K[a][b])
    kappa = P[a][b] / K[a][b]
    if any(P[x][y] != kappa * K[x][y] for x in range(n) for y in range(n)):
        return False, "pairing is not a multiple of the trace form"
    return True, {"kappa": fmt_scalar(kappa)}


@check("fock.skew_hermitian", "fock:compact-form")
def _fock(ctx):
    q, g = ctx.q, ctx.g
    n = g.n
    compact = []
    for i in range(n):
        for j in range(i + 1, n):
            a, b = g.index[("E", i, j)], g.index[("E", j, i)]
            v = [ZERO] * g.dim
            v[a], v[b] = ONE, -ONE
            compact.append(v)
            w = [ZERO] * g.dim
            w[a], w[b] = I, I
            compact.append(w)
    for k in range(n - 1):
        v = [ZERO] * g.dim
        v[g.index[("H", k)]] = I
        compact.append(v)
    for x in compact:
        if g.cartan_involution(x) != x:
            return False, "element is not in the compact form"
        for d in range(ctx.D):
            up = _mult_of(q, x, d)
            down = q.lambda_of(x, d + 1)
            up = [[I * e for e in r] for r in up]
            down = [[I * e for e in r] for r in down]
            K0, K1 = q.K[d], q.K[d + 1]
            lhs = mat_mul(mat_t(up), K1)
            rhs = mat_mul(K0, [[conj(e) for e in r] for r in down])
            if any(a + b for ra, rb in zip(lhs, rhs) for a, b in zip(ra, rb)):
                return False, f"not skew-hermitian between R^{d} and R^{d + 1}"
            lhs = mat_mul(mat_t(down), K0)
            rhs = mat_mul(K1, [[conj(e) for e in r] for r in up])
            if any(a + b for ra, rb in zip(lhs, rhs) for a, b in zip(ra, rb)):
                return False, f"not skew-hermitian between R^{d + 1} and R^{d}"
    return True, f"{len(compact)} compact generators"


def _mult_of(q, x, d):
    rows, cols = q.r_dim(d + 1), q.r_dim(d)
    out = [[ZERO] * cols for _ in range(rows)]
    for a, c in enumerate(x):
        if c:
            M = q.mult_matrix(a, d)
            out = [[s + c * e for s, e in zip(r1, r2)] for r1, r2 in zip(out, M)]
    return out


@check("inner.lambda_words", "inner:lambda-words")
def _apair(ctx):
    q, g, R = ctx.q, ctx.g, ctx.R
    rng = ctx.rng("inner.lambda_words")
    count = 0
    for d in range(1, min(ctx.D, 3) + 1):
        for _ in range(8):
            word = [rng.randrange(g.dim) for _ in range(d)]
            u = R.coords(R.product(word), d)
            for j in range(R.dim(d)):
                lhs = sum((u[i] * q.K[d][i][j] for i in range(R.dim(d)) if u[i]), ZERO)
                vec = [ONE if k == j else ZERO for k in range(R.dim(d))]
                for level, x in zip(range(d, 0, -1), reversed(word)):
                    b, s = g.sigma_basis[x]
                    vec = [s * e for e in mat_vec(q.lambda_matrix(b, level), vec)]
                if lhs != vec[0]:
                    return False, f"word {word} against basis vector {j} of R^{d}"
                count += 1
    return True, f"{count} (word, basis vector) pairs"


# -- symmetrization and cross-characterizations ----------------------------------------------


@check("bfr.versus_bq", "bfr:multiplicity-free")
def _bfr(ctx):
    q, R = ctx.q, ctx.R
    per_degree = []
    first_bad = None
    for d in range(ctx.D + 1):
        agree = 0
        for i in range(R.dim(d)):
            vec = [ONE if k == i else ZERO for k in range(R.dim(d))]
            if _eq_vec(q.bfr_coords(d, vec), q.V[q.r_index(d, i)]):
                agree += 1
            elif first_bad is None:
                first_bad = (d, i)
        per_degree.append([d, agree, R.dim(d)])
    witness = {"d,agree,dimR": per_degree}
    if first_bad is not None:
        witness["first_difference"] = list(first_bad)
    if q.config.is_grassmannian:
        return first_bad is None, witness
    return None, witness


@check("tau.splitting", "tau:same-splitting")
def _tau(ctx):
    q, F = ctx.q, ctx.F
    tr = q.trace
    # tau(b_i, b_j) = T(b_i bar(b_j)); eta-words have real coefficients
    form = []
    for wi in F.words:
        form.append([tr.pair(wi, tr.symmetric_of_word(wj)) for wj in F.words])
    for j, wj in enumerate(F.words):
        if F.operator(j).bar() != F.operator(j):
            return False, "eta-word is not real"
    W = orthogonal_splitting(form, F)
    return W == q.V, {"dim": len(W)}


@check("trace.orthogonality", "trace:orthogonal-summands")
def _sat(ctx):
    q, F = ctx.q, ctx.F
    tr = q.trace
    lam = [[tr.pair(wi, tr.symmetric_of_word(wj)) for wj in F.words] for wi in F.words]
    VL = mat_mul(mat_mul(q.V, lam), mat_t(q.V))
    n = len(F.words)
    for i in range(n):
        for j in range(n):
            if F.degree(i) != F.degree(j) and VL[i][j]:
                return False, f"T(V^{F.degree(i)} V^{F.degree(j)}) != 0"
    for d in range(ctx.D + 1):
        idx = list(F.indices_of_degree(d))
        if mat_rank([[VL[i][j] for j in idx] for i in idx]) != len(idx):
            return False, f"T-pairing degenerate on V^{d}"
    W = orthogonal_splitting(lam, F)
    return W == q.V, "orthogonality, nondegeneracy, and recomputed splitting"

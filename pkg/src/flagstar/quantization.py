"""Gram form, orthogonal splitting, the preferred quantization map and its star product.

Everything is expressed in the word basis b_0, b_1, ... of D_{<=D} (see
:mod:`flagstar.dmodule`).  For degree-d basis words the splitting vector

    v_i = b_i - sum_{deg j < d} r_ij b_j

is the gamma-orthogonal projection of b_i off D_{<=d-1}; bq sends the basis
vector r_i = symbol(b_i) of R^d to v_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .classical import GradedBasisR, IdealData, build_basis_R, ideal_and_harmonics, poisson
from .dmodule import FilteredBasisD, build_basis_D
from .flag import FlagConfig, FlagModel, ModelError, build_model
from .linalg import (
    NotInSpan,
    ldl_hermitian,
    mat_ct,
    mat_inverse,
    mat_mul,
    mat_t,
    mat_vec,
    solve,
)
from .polynomials import PolyZP
from .scalars import conj
from .trace import WordTrace
from .weyl import WeylOperator, compose

__all__ = [
    "QuantizationData",
    "StarCoefficients",
    "build_quantization",
    "gram_gamma",
    "inner_product",
    "lambda_op",
    "orthogonal_splitting",
    "preferred_bq",
    "star_coeffs",
    "symmetrization_bfr",
    "tau_splitting_check",
]

ZERO = mpq(0)
ONE = mpq(1)


class CertificateError(RuntimeError):
    """A Gram pivot is not positive."""


def orthogonal_splitting(form: List[List], basis: FilteredBasisD) -> List[List]:
    """Rows v_i (word coordinates) with form(v_i, b_j) = 0 for all deg b_j < deg b_i.

    ``form[i][j]`` is the value on (b_i, b_j).  The form only has to be linear
    in its first slot, so this serves sesquilinear and bilinear forms alike.
    """
    n = len(basis.words)
    rows = []
    for d in range(basis.D + 1):
        lo = basis.degree_start[d]
        idx = list(basis.indices_of_degree(d))
        if lo == 0:
            for i in idx:
                rows.append([ONE if k == i else ZERO for k in range(n)])
            continue
        # sum_j r_ij form[j][k] = form[i][k] for k < lo
        A = [[form[j][k] for j in range(lo)] for k in range(lo)]
        rhs = [[form[i][k] for i in idx] for k in range(lo)]
        try:
            sol = solve(A, rhs)
        except NotInSpan as exc:
            raise ModelError(f"form is degenerate on D_<={d - 1}") from exc
        for col, i in enumerate(idx):
            v = [ZERO] * n
            v[i] = ONE
            for j in range(lo):
                v[j] = -sol[j][col]
            rows.append(v)
    return rows


@dataclass
class StarCoefficients:
    j: int
    k: int
    terms: List[Tuple[int, PolyZP]]  # (p, C_p), p = 0 .. j+k

    def coefficient(self, p: int) -> PolyZP:
        for q, c in self.terms:
            if q == p:
                return c
        return PolyZP.zero(self.terms[0][1].m) if self.terms else None


@dataclass
class QuantizationData:
    config: FlagConfig
    D: int
    model: FlagModel
    R: GradedBasisR
    F: FilteredBasisD
    trace: WordTrace
    gram: List[List] = field(default_factory=list)
    pivots: List = field(default_factory=list)
    V: List[List] = field(default_factory=list)
    tau_words: List = field(default_factory=list)
    K: List[List[List]] = field(default_factory=list)
    gram_V: List[List] = field(default_factory=list)
    _bq_ops: Dict[int, WeylOperator] = field(default_factory=dict)
    _lambda: Dict[Tuple[int, int], List[List]] = field(default_factory=dict)
    _mult: Dict[Tuple[int, int], List[List]] = field(default_factory=dict)
    _ideals: Dict[int, IdealData] = field(default_factory=dict)
    _products: Dict[Tuple[int, int], List] = field(default_factory=dict)

    # -- indices ----------------------------------------------------------------
    def r_index(self, d: int, i: int) -> int:
        """Position in the word basis of the i-th basis vector of R^d."""
        return self.F.degree_start[d] + i

    def r_dim(self, d: int) -> int:
        return self.R.dim(d) if 0 <= d <= self.D else 0

    # -- trace and forms ----------------------------------------------------------
    def T(self, A: WeylOperator):
        vec = self.F.coords(A)
        return sum((c * t for c, t in zip(vec, self.tau_words) if c), ZERO)

    def T_coords(self, vec: Sequence):
        return sum((c * t for c, t in zip(vec, self.tau_words) if c), ZERO)

    def gamma(self, u: Sequence, v: Sequence):
        """gamma on word coordinates (linear in u, anti-linear in v)."""
        total = ZERO
        for i, a in enumerate(u):
            if not a:
                continue
            row = self.gram[i]
            for j, b in enumerate(v):
                if b and row[j]:
                    total = total + a * row[j] * conj(b)
        return total

    # -- quantization map -----------------------------------------------------------
    def bq_coords(self, d: int, vec: Sequence) -> List:
        """Word coordinates of bq(phi) for phi in R^d given by basis coordinates."""
        out = [ZERO] * len(self.F.words)
        for i, c in enumerate(vec):
            if not c:
                continue
            row = self.V[self.r_index(d, i)]
            for k, x in enumerate(row):
                if x:
                    out[k] = out[k] + c * x
        return out

    def bq_basis_operator(self, idx: int) -> WeylOperator:
        op = self._bq_ops.get(idx)
        if op is None:
            op = self.F.combine(self.V[idx])
            self._bq_ops[idx] = op
        return op

    def bq(self, phi: PolyZP) -> WeylOperator:
        out = WeylOperator.zero(self.model.m)
        for d, part in phi.p_degree_split():
            vec = self.R.coords(part, d)
            for i, c in enumerate(vec):
                if c:
                    out = out + self.bq_basis_operator(self.r_index(d, i)).scale(c)
        return out

    def split_coords(self, vec: Sequence) -> List[List]:
        """Decompose word coordinates into R^d components (bq^-1 by symbol peeling)."""
        x = list(vec)
        parts: List[List] = [[] for _ in range(self.D + 1)]
        for d in range(self.D, -1, -1):
            idx = list(self.F.indices_of_degree(d))
            comp = [x[i] for i in idx]
            parts[d] = comp
            for c, i in zip(comp, idx):
                if c:
                    for k, y in enumerate(self.V[i]):
                        if y:
                            x[k] = x[k] - c * y
        if any(x):
            raise ModelError("symbol peeling left a remainder")
        return parts

    def bq_inverse(self, A: WeylOperator) -> PolyZP:
        parts = self.split_coords(self.F.coords(A))
        out = PolyZP.zero(self.model.m)
        for d, comp in enumerate(parts):
            out = out + self.R.element(d, comp)
        return out

    # -- inner product ------------------------------------------------------------
    def inner(self, phi: PolyZP, psi: PolyZP):
        """<phi|psi> = gamma(bq(phi), bq(psi))."""
        u = self._bq_vector(phi)
        v = self._bq_vector(psi)
        return self.gamma(u, v)

    def _bq_vector(self, phi: PolyZP) -> List:
        out = [ZERO] * len(self.F.words)
        for d, part in phi.p_degree_split():
            vec = self.bq_coords(d, self.R.coords(part, d))
            out = [a + b for a, b in zip(out, vec)]
        return out

    # -- star product ---------------------------------------------------------------
    def product_coords(self, i: int, j: int) -> List[List]:
        """R-components of bq(r_i) bq(r_j) for word-basis positions i, j."""
        key = (i, j)
        hit = self._products.get(key)
        if hit is None:
            prod = compose(self.bq_basis_operator(i), self.bq_basis_operator(j))
            hit = self.split_coords(self.F.coords(prod))
            self._products[key] = hit
        return hit

    def star_basis(self, dj: int, i: int, dk: int, j: int) -> List[List]:
        """[C_p coordinates in R^{dj+dk-p}] for basis vectors r_i in R^dj, r_j in R^dk."""
        if dj + dk > self.D:
            raise ValueError(f"degree {dj + dk} exceeds the computed bound {self.D}")
        parts = self.product_coords(self.r_index(dj, i), self.r_index(dk, j))
        return [parts[dj + dk - p] if dj + dk - p <= self.D else [] for p in range(dj + dk + 1)]

    def star(self, phi: PolyZP, psi: PolyZP) -> StarCoefficients:
        dj, dk = _homogeneous(phi), _homogeneous(psi)
        if dj + dk > self.D:
            raise ValueError(f"degree {dj + dk} exceeds the computed bound {self.D}")
        u = self.R.coords(phi, dj)
        v = self.R.coords(psi, dk)
        acc = [[ZERO] * self.r_dim(dj + dk - p) for p in range(dj + dk + 1)]
        for a, x in enumerate(u):
            if not x:
                continue
            for b, y in enumerate(v):
                if not y:
                    continue
                coeffs = self.star_basis(dj, a, dk, b)
                for p, comp in enumerate(coeffs):
                    acc[p] = [s + x * y * c for s, c in zip(acc[p], comp)]
        terms = [(p, self.R.element(dj + dk - p, acc[p])) for p in range(dj + dk + 1)]
        return StarCoefficients(dj, dk, terms)

    # -- multiplication and Lambda --------------------------------------------------------
    def mult_matrix(self, x: int, d: int) -> List[List]:
        """Multiplication by mu^x as a matrix R^d -> R^{d+1}."""
        key = (x, d)
        hit = self._mult.get(key)
        if hit is None:
            mu = self.model.mu[x]
            cols = [self.R.coords(mu * r, d + 1) for r in self.R.elements[d]]
            hit = [[col[i] for col in cols] for i in range(self.r_dim(d + 1))]
            self._mult[key] = hit
        return hit

    def poisson_matrix(self, x: int, d: int) -> List[List]:
        """Phi^x = {mu^x, .} on R^d."""
        mu = self.model.mu[x]
        cols = [self.R.coords(poisson(mu, r), d) for r in self.R.elements[d]]
        return [[col[i] for col in cols] for i in range(self.r_dim(d))]

    def lambda_matrix(self, x: int, d: int) -> List[List]:
        """Lambda^x: R^d -> R^{d-1}, the adjoint of multiplication by mu^sigma(x)."""
        key = (x, d)
        hit = self._lambda.get(key)
        if hit is None:
            if d == 0:
                hit = []
            else:
                b, s = self.model.g.sigma_basis[x]
                M = [[s * e for e in row] for row in self.mult_matrix(b, d - 1)]
                # <L phi | psi>_{d-1} = <phi | M psi>_d  =>  L^T K_{d-1} = K_d conj(M)
                rhs = mat_mul(self.K[d], [[conj(e) for e in row] for row in M])
                Lt = mat_mul(rhs, mat_inverse(self.K[d - 1]))
                hit = mat_t(Lt)
            self._lambda[key] = hit
        return hit

    def lambda_of(self, xvec: Sequence, d: int) -> List[List]:
        """Lambda for a coordinate vector in g (Lambda is linear in x)."""
        rows, cols = self.r_dim(d - 1), self.r_dim(d)
        out = [[ZERO] * cols for _ in range(rows)]
        for a, c in enumerate(xvec):
            if c:
                L = self.lambda_matrix(a, d)
                out = [[s + c * e for s, e in zip(r1, r2)] for r1, r2 in zip(out, L)]
        return out

    def lambda_pairing(self) -> List[List]:
        """Lambda^x(mu^y) for basis x, y."""
        g = self.model.g
        out = []
        for x in range(g.dim):
            L = self.lambda_matrix(x, 1)
            row = []
            for y in range(g.dim):
                vec = self.R.coords(self.model.mu[y], 1)
                row.append(mat_vec(L, vec)[0])
            out.append(row)
        return out

    # -- harmonic symmetrization --------------------------------------------------------
    def ideal(self, d: int) -> IdealData:
        if d not in self._ideals:
            self._ideals[d] = ideal_and_harmonics(d, self.R)
        return self._ideals[d]

    def harmonic_lift(self, d: int, vec: Sequence):
        """Coordinates over sym_basis(d) of the harmonic representative of phi."""
        data = self.ideal(d)
        sub_h = [[sum((col[i] * h[k] for k, col in enumerate(data.substitution) if h[k]), ZERO)
                  for h in data.harmonic] for i in range(self.r_dim(d))]
        lam = solve(sub_h, [[c] for c in vec])
        out = [ZERO] * len(data.monomials)
        for l, h in zip(lam, data.harmonic):
            if l[0]:
                out = [o + l[0] * e for o, e in zip(out, h)]
        return out

    def bfr_coords(self, d: int, vec: Sequence) -> List:
        """Word coordinates of the symmetrized harmonic lift of phi in R^d."""
        data = self.ideal(d)
        h = self.harmonic_lift(d, vec)
        op = WeylOperator.zero(self.model.m)
        for c, mono in zip(h, data.monomials):
            if c:
                op = op + self.model.symmetrized(mono).scale(c)
        return self.F.coords(op)

    def bfr(self, phi: PolyZP) -> WeylOperator:
        out = WeylOperator.zero(self.model.m)
        for d, part in phi.p_degree_split():
            out = out + self.F.combine(self.bfr_coords(d, self.R.coords(part, d)))
        return out


def _homogeneous(phi: PolyZP) -> int:
    d = phi.homogeneous_degree()
    if d is None:
        raise ValueError("star coefficients need p-homogeneous inputs")
    return d


def build_quantization(config: FlagConfig, D: int, model: Optional[FlagModel] = None,
                       R: Optional[GradedBasisR] = None, F: Optional[FilteredBasisD] = None) -> QuantizationData:
    model = model or build_model(config)
    R = R or build_basis_R(model, D)
    F = F or build_basis_D(model, R, D)
    trace = WordTrace(model)
    q = QuantizationData(config, D, model, R, F, trace)
    sb = model.g.sigma_basis
    q.tau_words = [trace.tau_word(w) for w in F.words]
    n = len(F.words)
    gram = []
    for i, wi in enumerate(F.words):
        row = []
        for wj in F.words:
            sign = ONE
            img = []
            for a in wj:
                b, s = sb[a]
                sign *= s
                img.append(b)
            row.append(trace.pair(wi, trace.symmetric_of_word(img, sign)))
        gram.append(row)
    q.gram = gram
    L, pivots = ldl_hermitian(gram)
    q.pivots = pivots
    if len(pivots) < n or any(not (p > 0) for p in pivots):
        raise CertificateError("Gram form is not positive definite")
    q.V = orthogonal_splitting(gram, F)
    # gamma on the splitting vectors: V gram V^*
    q.gram_V = mat_mul(mat_mul(q.V, gram), mat_ct(q.V))
    q.K = []
    for d in range(D + 1):
        idx = list(F.indices_of_degree(d))
        q.K.append([[q.gram_V[i][j] for j in idx] for i in idx])
    return q


# flat functional interface over QuantizationData

def gram_gamma(q: QuantizationData) -> List[List]:
    """Blocks K^d of gamma restricted to the graded splitting."""
    return q.K


def preferred_bq(q: QuantizationData, phi: PolyZP) -> WeylOperator:
    return q.bq(phi)


def star_coeffs(q: QuantizationData, phi: PolyZP, psi: PolyZP) -> StarCoefficients:
    return q.star(phi, psi)


def lambda_op(q: QuantizationData, x: int, d: int) -> List[List]:
    return q.lambda_matrix(x, d)


def inner_product(q: QuantizationData, phi: PolyZP, psi: PolyZP):
    return q.inner(phi, psi)


def symmetrization_bfr(q: QuantizationData, phi: PolyZP) -> WeylOperator:
    return q.bfr(phi)


def tau_splitting_check(q: QuantizationData) -> bool:
    """Orthogonality to lower filtration under (u, v) -> tau(u v) reproduces V."""
    tr = q.trace
    form = [[tr.pair(wi, tr.symmetric_of_word(wj)) for wj in q.F.words] for wi in q.F.words]
    return orthogonal_splitting(form, q.F) == q.V

"""Bounded-order feasibility probe for Lambda^x = P^-1 L^x on projective space.

P acts on R^d by (d + n/2)(d + n/2 + 1).  We look for L^x among the
operators on symbol polynomials spanned by

    z^a p^b d_z^c d_p^e,   |c| + |e| <= max_order,  |b| = |e| - 1,  |a| <= max_order,

which lower the fiber degree by one, and ask whether one of them agrees with
P Lambda^x on R^0 + ... + R^D.  The answer is evidence, never an assertion.
"""

from __future__ import annotations

from math import prod
from typing import Dict, List, Tuple

from gmpy2 import mpq

from .linalg import NotInSpan, SpanBasis
from .polynomials import PolyZP, monomials_of_degree
from .quantization import QuantizationData
from .scalars import fmt_scalar

__all__ = ["p_eigenvalue", "rpn_conjecture_probe"]

ZERO = mpq(0)


def p_eigenvalue(n: int, d: int) -> mpq:
    """(d + n/2)(d + n/2 + 1)."""
    h = mpq(n, 2)
    return (d + h) * (d + h + 1)


def _exponents(m: int, top: int):
    for total in range(top + 1):
        yield from monomials_of_degree(m, total)


def _falling(e: int, k: int) -> int:
    return prod(range(e - k + 1, e + 1)) if k <= e else 0


def _candidate_terms(m: int, max_order: int) -> List[Tuple]:
    out = []
    for ce in range(1, max_order + 1):
        for e in monomials_of_degree(m, ce):
            for b in monomials_of_degree(m, ce - 1):
                for c in _exponents(m, max_order - ce):
                    for a in _exponents(m, max_order):
                        out.append((a, b, c, e))
    return out


def _apply(term, f: PolyZP) -> Dict:
    a, b, c, e = term
    m = f.m
    out = {}
    for key, v in f.terms.items():
        zk, pk = key[:m], key[m:]
        coef = 1
        for x, y in zip(zk + pk, c + e):
            coef *= _falling(x, y)
            if not coef:
                break
        if not coef:
            continue
        nz = tuple(x - y + s for x, y, s in zip(zk, c, a))
        np_ = tuple(x - y + s for x, y, s in zip(pk, e, b))
        k = nz + np_
        out[k] = out.get(k, ZERO) + v * coef
    return out


def _term_text(term) -> str:
    a, b, c, e = term
    parts = []
    for name, exps in (("z", a), ("p", b), ("dz", c), ("dp", e)):
        for i, x in enumerate(exps):
            if x:
                parts.append(f"{name}{i + 1}" + (f"^{x}" if x > 1 else ""))
    return "*".join(parts) or "1"


def rpn_conjecture_probe(q: QuantizationData, max_order: int = 4) -> dict:
    config = q.config
    if config.dims != (1,):
        raise ValueError("the probe needs a projective space configuration")
    n = config.n - 1
    m = q.model.m
    terms = _candidate_terms(m, max_order)
    g = q.model.g
    results = []
    images = {}
    for d in range(q.D + 1):
        for i, r in enumerate(q.R.elements[d]):
            for t, term in enumerate(terms):
                for k, v in _apply(term, r).items():
                    images.setdefault(t, {})[(d, i, k)] = v
    # columns of the linear system; independent ones become generators
    span = SpanBasis()
    pivots = []
    for t in range(len(terms)):
        if span.add(images.get(t, {})) is not None:
            pivots.append(t)
    freedom = len(terms) - len(pivots)
    for x in range(g.dim):
        target = {}
        for d in range(1, q.D + 1):
            lam = q.lambda_matrix(x, d)
            scale = p_eigenvalue(n, d - 1)
            for i in range(q.R.dim(d)):
                img = q.R.element(d - 1, [row[i] for row in lam]).scale(scale)
                for k, v in img.terms.items():
                    target[(d, i, k)] = v
        try:
            coords = span.coords(target)
            witness = " + ".join(
                f"[{fmt_scalar(c)}]*{_term_text(terms[t])}" for c, t in zip(coords, pivots) if c
            ) or "0"
            results.append({"x": g.names[x], "feasible": True, "witness": witness,
                            "solution_space_dimension": freedom})
        except NotInSpan:
            results.append({"x": g.names[x], "feasible": False, "witness": None,
                            "solution_space_dimension": None})
    return {
        "n": n,
        "D": q.D,
        "max_order": max_order,
        "unknowns": len(terms),
        "p_eigenvalues": [fmt_scalar(p_eigenvalue(n, d)) for d in range(q.D + 1)],
        "feasible": all(r["feasible"] for r in results),
        "generators": results,
    }

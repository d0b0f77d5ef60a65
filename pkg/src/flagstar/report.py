"""Canonical report bundle: one JSON summary, CSV tables and the serialized data.

Everything is written with sorted keys, fixed row order and exact scalars in
text form, so two runs over the same configuration give identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Dict, List, Sequence

from gmpy2 import mpq

from .classical import dims_table
from .quantization import QuantizationData
from .scalars import GaussianRational, fmt_scalar
from .weyl import compose

__all__ = ["SCHEMA", "bundle_files", "jsonable", "key_values", "write_bundle"]

SCHEMA = "flagstar/1"


def jsonable(obj):
    """Exact scalars become canonical strings; containers are rebuilt recursively."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, (type(mpq(0)), GaussianRational)):
        return fmt_scalar(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "to_text"):
        return obj.to_text()
    return str(obj)


def _dump(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _csv(header: Sequence[str], rows: List[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_scalar(c) if not isinstance(c, (str, int)) else c for c in row])
    return buf.getvalue()


def _dims(q: QuantizationData):
    ideals = [q.ideal(d) for d in range(q.D + 1)]
    return dims_table(q.R, ideals)


def _word_name(q: QuantizationData, word) -> str:
    names = q.model.g.names
    return "*".join(f"eta^{names[a]}" for a in word) or "1"


def key_values(q: QuantizationData) -> Dict:
    """Headline numbers repeated in the summary."""
    g, M = q.model.g, q.model
    one = q.R.elements[0][0]
    out = {
        "inner_one": q.inner(one, one),
        "gram_pivots_positive": all(p > 0 for p in q.pivots),
        "dim_D": len(q.F.words),
    }
    if q.D >= 2:
        h = g.index[("H", 0)]
        out["T(eta^E12 eta^E21)"] = q.T(compose(M.eta[0], M.eta[g.lookup("E21")]))
        out["T(eta^H1 eta^H1)"] = q.T(compose(M.eta[h], M.eta[h]))
    if q.D >= 1:
        P = q.lambda_pairing()
        K = g.killing_matrix
        a, b = next((a, b) for a in range(g.dim) for b in range(g.dim) if K[a][b])
        out["lambda_pairing_over_trace"] = P[a][b] / K[a][b]
    return out


def bundle_files(q: QuantizationData, checks: List[dict], extra: Dict = None) -> Dict[str, str]:
    """File name -> text for the complete bundle."""
    g = q.model.g
    config = dict(q.config.to_json(), max_degree=q.D)
    summary = {
        "schema": SCHEMA,
        "config": config,
        "checks": checks,
        "values": key_values(q),
        "counts": {
            "pass": sum(c["status"] == "pass" for c in checks),
            "fail": sum(c["status"] == "fail" for c in checks),
            "reported": sum(c["status"] == "reported" for c in checks),
        },
    }
    if extra:
        summary.update(extra)
    files = {"summary.json": _dump(summary)}
    files["graded_dims.csv"] = _csv(["d", "dim_S", "dim_I", "dim_R"], [list(r) for r in _dims(q)])
    files["gram_pivots.csv"] = _csv(
        ["index", "degree", "word", "pivot"],
        [[i, q.F.degree(i), _word_name(q, w), p] for i, (w, p) in enumerate(zip(q.F.words, q.pivots))],
    )
    if q.D >= 1:
        P = q.lambda_pairing()
        rows = [[g.names[x]] + P[x] for x in range(g.dim)]
    else:
        rows = []
    files["lambda_pairing.csv"] = _csv(["x"] + list(g.names), rows)
    data = {
        "schema": SCHEMA,
        "config": config,
        "words": [_word_name(q, w) for w in q.F.words],
        "R_basis": [[phi.to_text() for phi in q.R.elements[d]] for d in range(q.D + 1)],
        "gram_pivots": q.pivots,
        "V": q.V,
        "K": q.K,
        "bq": [q.bq_basis_operator(i).to_text() for i in range(len(q.F.words))],
    }
    files["quantization.json"] = _dump(data)
    return files


def write_bundle(out: Path, files: Dict[str, str]) -> None:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    for name in sorted(files):
        (out / name).write_text(files[name], encoding="utf-8")

"""Command line driver: ``flagstar {run,star,lambda,gram,probe-rpn,dims}``.

Configuration comes from a JSON file ``{"n": 3, "dims": [1], "max_degree": 3}``
with optional ``checks`` (list of check names or prefixes) and ``max_order``
(probe).  ``--degree`` overrides ``max_degree``.  Built pipelines are cached
as pickles under ``$FLAGSTAR_CACHE_DIR`` (default ``~/.cache/flagstar``).

Exit status: 0 when every exact check passes, 1 on a failed check, 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import multiprocessing
import os
import pickle
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .checks import CHECKS, Context, run_check
from .classical import dims_table
from .expr import ParseError, parse_mu
from .flag import FlagConfig
from .probe import rpn_conjecture_probe
from .quantization import QuantizationData, build_quantization
from .report import bundle_files, jsonable, write_bundle
from .scalars import fmt_scalar

__all__ = ["RunConfig", "UsageError", "cmd_run", "cmd_star", "load_pipeline", "main"]


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    n: int = 2
    dims: tuple = (1,)
    max_degree: int = 3
    checks: Optional[tuple] = None
    max_order: int = 4
    out: Optional[str] = None
    cache: bool = True
    jobs: int = 1

    def flag(self) -> FlagConfig:
        try:
            return FlagConfig(self.n, tuple(self.dims))
        except (ValueError, TypeError) as exc:
            raise UsageError(str(exc)) from None

    @classmethod
    def from_json(cls, data: dict, **overrides) -> "RunConfig":
        known = {"n", "dims", "max_degree", "checks", "max_order"}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        fields = dict(data)
        if "dims" in fields:
            fields["dims"] = tuple(fields["dims"])
        if fields.get("checks") is not None:
            fields["checks"] = tuple(fields["checks"])
        fields.update({k: v for k, v in overrides.items() if v is not None})
        cfg = cls(**fields)
        for name in ("n", "max_degree", "max_order", "jobs"):
            v = getattr(cfg, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise UsageError(f"{name} must be a non-negative integer")
        if cfg.jobs < 1:
            raise UsageError("jobs must be at least 1")
        cfg.flag()
        return cfg


# -- pipeline cache -----------------------------------------------------------------------


def _cache_dir() -> Path:
    root = os.environ.get("FLAGSTAR_CACHE_DIR")
    return Path(root) if root else Path.home() / ".cache" / "flagstar"


def _cache_key(config: FlagConfig, D: int) -> str:
    blob = json.dumps({"n": config.n, "dims": list(config.dims), "D": D, "v": __version__}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:24]


def load_pipeline(cfg: RunConfig) -> QuantizationData:
    config = cfg.flag()
    path = _cache_dir() / f"{config.label()}-D{cfg.max_degree}-{_cache_key(config, cfg.max_degree)}.pkl"
    if cfg.cache and path.exists():
        try:
            with path.open("rb") as fh:
                return pickle.load(fh)
        except (OSError, pickle.UnpicklingError, EOFError, AttributeError):
            pass
    q = build_quantization(config, cfg.max_degree)
    if cfg.cache:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(f".{os.getpid()}.tmp")
            with tmp.open("wb") as fh:
                pickle.dump(q, fh, protocol=pickle.HIGHEST_PROTOCOL)
            tmp.replace(path)
        except OSError:
            pass
    return q


# -- running checks -----------------------------------------------------------------------

_WORKER_CTX: Optional[Context] = None


def _worker(index: int) -> dict:
    return jsonable(run_check(_WORKER_CTX, CHECKS[index]))


def _selected(cfg: RunConfig) -> List[int]:
    if cfg.checks is None:
        return list(range(len(CHECKS)))
    out = []
    for i, c in enumerate(CHECKS):
        if any(c.name == s or c.name.startswith(s.rstrip(".") + ".") for s in cfg.checks):
            out.append(i)
    if not out:
        raise UsageError("check selection matches nothing")
    return out


def run_checks(q: QuantizationData, indices: Sequence[int], jobs: int = 1) -> List[dict]:
    """Results in registry order, whatever the number of worker processes."""
    global _WORKER_CTX
    ctx = Context(q)
    if jobs <= 1 or len(indices) <= 1:
        return [jsonable(run_check(ctx, CHECKS[i])) for i in indices]
    _WORKER_CTX = ctx
    try:
        mp = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=jobs, mp_context=mp) as pool:
            return list(pool.map(_worker, indices))
    finally:
        _WORKER_CTX = None


def cmd_run(cfg: RunConfig, stream=sys.stdout) -> dict:
    """Build, check and write the bundle; returns the file map."""
    q = load_pipeline(cfg)
    results = run_checks(q, _selected(cfg), cfg.jobs)
    for r in results:
        print(f"{r['status']:8s} {r['name']}  [{r['anchor']}]", file=stream)
    files = bundle_files(q, results)
    if cfg.out:
        write_bundle(Path(cfg.out), files)
    return {"files": files, "results": results, "ok": all(r["status"] != "fail" for r in results)}


def cmd_star(cfg: RunConfig, phi_text: str, psi_text: str, stream=sys.stdout) -> List[str]:
    q = load_pipeline(cfg)
    try:
        phi = parse_mu(phi_text, q.model)
        psi = parse_mu(psi_text, q.model)
    except ParseError as exc:
        raise UsageError(f"parse error: {exc}") from None
    dj, dk = phi.homogeneous_degree(), psi.homogeneous_degree()
    if dj is None or dk is None:
        raise UsageError("inputs must be homogeneous in p")
    if dj + dk > q.D:
        raise UsageError(f"degree {dj} + {dk} exceeds max_degree {q.D}")
    sc = q.star(phi, psi)
    lines = [f"C{p} = {sc.coefficient(p).to_text()}" for p in range(dj + dk + 1)]
    for line in lines:
        print(line, file=stream)
    return lines


# -- argument parsing -------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with n, dims, max_degree")
    common.add_argument("--degree", type=int, help="override max_degree")
    common.add_argument("--out", help="directory for the report bundle")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for the checks")
    common.add_argument("--no-cache", action="store_true", help="rebuild instead of reading the cache")

    ap = argparse.ArgumentParser(prog="flagstar", description="exact star products on flag manifolds")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="full pipeline with every check")
    st = sub.add_parser("star", parents=[common], help="print C_p(phi, psi)")
    st.add_argument("phi")
    st.add_argument("psi")
    lam = sub.add_parser("lambda", parents=[common], help="pairing Lambda^x(mu^y), or Lambda^x on R^d")
    lam.add_argument("--x", help="basis element; prints the matrix of Lambda^x on R^degree")
    sub.add_parser("gram", parents=[common], help="LDL* pivots of the Gram form")
    pr = sub.add_parser("probe-rpn", parents=[common], help="bounded-order probe on projective space")
    pr.add_argument("--max-order", type=int, default=None)
    sub.add_parser("dims", parents=[common], help="graded dimensions of S, I and R")
    return ap


def _config(args) -> RunConfig:
    data = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError("config must be a JSON object")
    return RunConfig.from_json(
        data,
        max_degree=args.degree,
        out=args.out,
        cache=not args.no_cache,
        jobs=args.jobs,
        max_order=getattr(args, "max_order", None),
    )


def _print_matrix(rows, stream):
    for row in rows:
        print("  ".join(fmt_scalar(c) for c in row), file=stream)


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    out = sys.stdout
    try:
        cfg = _config(args)
        if args.command == "run":
            return 0 if cmd_run(cfg, out)["ok"] else 1
        if args.command == "star":
            cmd_star(cfg, args.phi, args.psi, out)
            return 0
        q = load_pipeline(cfg)
        g = q.model.g
        if args.command == "lambda":
            if q.D < 1:
                raise UsageError("Lambda needs max_degree >= 1")
            if args.x:
                try:
                    x = g.lookup(args.x)
                except (KeyError, ValueError):
                    raise UsageError(f"unknown basis element {args.x!r}") from None
                _print_matrix(q.lambda_matrix(x, q.D), out)
            else:
                print("x  " + "  ".join(g.names), file=out)
                for name, row in zip(g.names, q.lambda_pairing()):
                    print(name + "  " + "  ".join(fmt_scalar(c) for c in row), file=out)
            return 0
        if args.command == "gram":
            for i, p in enumerate(q.pivots):
                print(f"{q.F.degree(i)}  {fmt_scalar(p)}", file=out)
            return 0 if all(p > 0 for p in q.pivots) else 1
        if args.command == "probe-rpn":
            try:
                report = rpn_conjecture_probe(q, cfg.max_order)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            print(json.dumps(jsonable(report), sort_keys=True, indent=2), file=out)
            return 0
        if args.command == "dims":
            print("d  dim_S  dim_I  dim_R", file=out)
            for row in dims_table(q.R, [q.ideal(d) for d in range(q.D + 1)]):
                print("  ".join(str(v) for v in row), file=out)
            return 0
    except UsageError as exc:
        print(f"flagstar: error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

    hdresist analyze   --graph G [--pair I J]
    hdresist hessian   --graph G [--target kirchhoff|resistance] [--pair I J] [--method ...]
    hdresist bounds    --graph G [--perturbation P]
    hdresist check     --graph G [--perturbation P]
    hdresist perturb   --graph G --perturbation P [--pair I J]

Exit status: 0 success, 1 invalid input, 2 numerical failure or violated invariant.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .bounds import certify, l1_norm_sandwich
from .errors import HDResistError, InputError, NonFinite, ValidationError
from .graph import Perturbation, build_l1, parse_graph, parse_perturbation
from .hdmatrix import hd_laplacian, hd_pinv_graph, penrose_residuals
from .hessian import METHODS, TARGETS, assemble_hessian, fd_hessian_oracle, hessian_extreme_eigs
from .laplacian import laplacian_context
from .resistance import biharmonic_distance, hd_kirchhoff, hd_resistance, kirchhoff, resistance
from .spectral import frobenius_norm

COMMANDS = ("analyze", "hessian", "bounds", "check", "perturb")
CHECK_TOL = 1e-8
FD_TOL = 1e-4


class UsageError(InputError):
    pass


@dataclass
class RunConfig:
    command: str
    graph_path: str
    perturbation_path: str | None = None
    pair: tuple | None = None
    output_format: str = "text"
    rank_tol: float | None = None
    fd_step: float | None = None
    method: str = "closed_form"
    target: str = "kirchhoff"

    def validate(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.command == "perturb" and self.perturbation_path is None:
            raise UsageError("perturb needs --perturbation")
        if self.command == "hessian" and self.target == "resistance" and self.pair is None:
            raise UsageError("--target resistance needs --pair")


def _read(path):
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _clean(obj):
    """Round floats to 12 significant digits; refuse NaN/inf."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            raise NonFinite("report contains a non-finite number")
        return float(f"{v:.12g}") + 0.0
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def emit_json(report) -> bytes:
    return (json.dumps(_clean(report), indent=2) + "\n").encode("utf-8")


def _slots(h):
    return [h.re, h.eps, h.eps_star, h.eps_eps_star]


def _analyze(cfg, g, p):
    ctx = laplacian_context(g, cfg.rank_tol)
    ev = ctx.spectrum.eigenvalues
    results = {}
    if cfg.pair is not None:
        i, j = cfg.pair
        results["pair"] = [i, j]
        results["resistance"] = resistance(g, i, j, cfg.rank_tol)
        results["biharmonic_distance"] = biharmonic_distance(g, i, j, cfg.rank_tol)
    results["kirchhoff"] = kirchhoff(g, cfg.rank_tol)
    results["spectrum"] = {
        "largest": ctx.largest_eigenvalue,
        "algebraic_connectivity": ctx.algebraic_connectivity,
        "smallest": float(ev[-1]),
        "connected": ctx.connected,
        "eigenvalues": ev,
    }
    return results, {}, []


def _hessian(cfg, g, p):
    pair = cfg.pair if cfg.target == "resistance" else None
    h = assemble_hessian(g, cfg.target, pair, cfg.method, cfg.rank_tol)
    fd = fd_hessian_oracle(g, cfg.target, pair, h=cfg.fd_step, rank_tol=cfg.rank_tol)
    mu_min, mu_max = hessian_extreme_eigs(h)
    diff = float(np.max(np.abs(h.matrix - fd.matrix))) if g.m else 0.0
    scale = max(1.0, float(np.max(np.abs(h.matrix)))) if g.m else 1.0
    violations = []
    if diff > FD_TOL * scale:
        violations.append(f"Hessian differs from finite differences by {diff:.3e}")
    results = {
        "target": h.label,
        "method": cfg.method,
        "edges": [list(e) for e in g.edges],
        "matrix": h.matrix,
        "eigenvalues": [mu_min, mu_max],
    }
    return results, {"fd_max_abs_diff": diff}, violations


def _bounds(cfg, g, p):
    report = certify(g, p, rank_tol=cfg.rank_tol)
    return report.as_dict(), {}, list(report.violations)


def _check(cfg, g, p):
    if p is None:
        p = Perturbation.zeros(g.m)
    ctx = laplacian_context(g, cfg.rank_tol).require_connected()
    lap_hd = hd_laplacian(g, p)
    x = hd_pinv_graph(g, p, cfg.rank_tol)
    residuals = penrose_residuals(lap_hd, x).as_dict()
    n = g.n
    centering = np.eye(n) - np.full((n, n), 1.0 / n)
    lx = lap_hd @ x
    residuals["lx_minus_projector"] = max(
        frobenius_norm(lx.re - centering), *(frobenius_norm(b) for b in lx.blocks[1:])
    )
    ones = np.ones(n)
    residuals["pinv_annihilates_ones"] = max(float(np.linalg.norm(b @ ones)) for b in x.blocks)
    shift = np.full((n, n), 1.0 / n)
    residuals["shifted_inverse"] = frobenius_norm(ctx.pinv - (np.linalg.inv(ctx.laplacian + shift) - shift))
    residuals["l1_row_sums"] = float(np.max(np.abs(build_l1(g, p).sum(axis=1)))) if n else 0.0

    sandwich = l1_norm_sandwich(g, p)
    violations = [f"{k} residual {v:.3e} exceeds {CHECK_TOL:g}" for k, v in residuals.items() if v > CHECK_TOL]
    if not sandwich.holds:
        violations.append("L1 norm sandwich fails")
    results = {"dx": p.dx, "l1_sandwich": sandwich.as_list()}
    return results, residuals, violations


def _perturb(cfg, g, p):
    results = {"dx": p.dx, "kirchhoff": _slots(hd_kirchhoff(g, p, cfg.rank_tol).value)}
    if cfg.pair is not None:
        i, j = cfg.pair
        results["resistance"] = {"pair": [i, j], "value": _slots(hd_resistance(g, p, i, j, cfg.rank_tol).value)}
    return results, {}, []


HANDLERS = {
    "analyze": _analyze,
    "hessian": _hessian,
    "bounds": _bounds,
    "check": _check,
    "perturb": _perturb,
}


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        out = f"{v:.6f}"
        return "0.000000" if out == "-0.000000" else out
    if isinstance(v, (list, tuple, np.ndarray)):
        return " ".join(_fmt(x) for x in v)
    return str(v)


def _text(report):
    lines = [f"command: {report['command']}", f"graph: n = {report['graph']['n']}, m = {report['graph']['m']}"]
    res = report["results"]
    cmd = report["command"]
    if cmd == "analyze":
        if "pair" in res:
            i, j = res["pair"]
            lines.append(f"R({i},{j}) = {_fmt(res['resistance'])}")
            lines.append(f"biharmonic({i},{j}) = {_fmt(res['biharmonic_distance'])}")
        lines.append(f"Kf = {_fmt(res['kirchhoff'])}")
        spectrum = res["spectrum"]
        lines.append(f"lambda_1 = {_fmt(spectrum['largest'])}")
        lines.append(f"lambda_(n-1) = {_fmt(spectrum['algebraic_connectivity'])}")
        lines.append(f"eigenvalues = {_fmt(spectrum['eigenvalues'])}")
    elif cmd == "hessian":
        lines.append(f"target = {res['target']} ({res['method']})")
        lines.append("matrix =")
        lines += ["  " + " ".join(f"{v:10.6f}" for v in row) for row in res["matrix"]]
        lines.append(f"mu_min mu_max = {_fmt(res['eigenvalues'])}")
    elif cmd == "perturb":
        lines.append(f"Kf slots (re, e, e*, ee*) = {_fmt(res['kirchhoff'])}")
        if "resistance" in res:
            i, j = res["resistance"]["pair"]
            lines.append(f"R({i},{j}) slots (re, e, e*, ee*) = {_fmt(res['resistance']['value'])}")
    else:
        for key, val in res.items():
            if key == "resistance_pairs":
                for pb in val:
                    i, j = pb["pair"]
                    lines.append(f"R({i},{j}): bound = {_fmt(pb['bound'])}, observed = {_fmt(pb['observed'])}")
            elif val is not None:
                lines.append(f"{key} = {_fmt(val)}")
    for key, val in report["residuals"].items():
        lines.append(f"{key} = {val:.3e}")
    lines.append("violations: " + ("none" if not report["violations"] else ""))
    lines += [f"  - {v}" for v in report["violations"]]
    return ("\n".join(lines) + "\n").encode("utf-8")


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = sys.stdout.buffer if stdout is None else stdout
    stderr = sys.stderr.buffer if stderr is None else stderr
    try:
        cfg.validate()
        g = parse_graph(_read(cfg.graph_path))
        p = None
        if cfg.perturbation_path is not None:
            p = parse_perturbation(_read(cfg.perturbation_path), g)
        if cfg.pair is not None:
            for v in cfg.pair:
                if not 1 <= v <= g.n:
                    raise ValidationError(f"vertex {v} out of range [1, {g.n}]")
        results, residuals, violations = HANDLERS[cfg.command](cfg, g, p)
        report = {
            "command": cfg.command,
            "graph": {"n": g.n, "m": g.m},
            "results": results,
            "residuals": residuals,
            "violations": violations,
        }
        out = emit_json(report) if cfg.output_format == "json" else _text(_clean(report))
    except InputError as exc:
        _error(stderr, exc, cfg.output_format)
        return 1
    except (HDResistError, ArithmeticError) as exc:
        _error(stderr, exc, cfg.output_format)
        return 2
    stdout.write(out)
    return 2 if violations else 0


def _error(stream, exc, fmt):
    if fmt == "json":
        msg = json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n"
    else:
        msg = f"error: {type(exc).__name__}: {exc}\n"
    stream.write(msg.encode("utf-8"))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog="hdresist", description="Resistance distance and Kirchhoff index sensitivity toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--graph", required=True, dest="graph_path")
        sp.add_argument("--perturbation", dest="perturbation_path")
        sp.add_argument("--pair", nargs=2, type=int, metavar=("I", "J"))
        sp.add_argument("--format", choices=("text", "json"), default="text", dest="output_format")
        sp.add_argument("--rank-tol", type=float)
        sp.add_argument("--fd-step", type=float)
        sp.add_argument("--method", choices=METHODS, default="closed_form")
        sp.add_argument("--target", choices=TARGETS, default="kirchhoff")
    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    fmt = "json" if "json" in argv else "text"
    try:
        ns = build_parser().parse_args(argv)
    except UsageError as exc:
        _error(sys.stderr.buffer, exc, fmt)
        return 1
    cfg = RunConfig(**{k: v for k, v in vars(ns).items()})
    if cfg.pair is not None:
        cfg.pair = tuple(cfg.pair)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())

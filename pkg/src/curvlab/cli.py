"""Command-line front end.

Exit codes: 0 property holds on samples (or suite passed), 3 property
fails, 1 usage or input error.  Every JSON report embeds the manifest of
its run; re-running the manifest reproduces the report byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys

import numpy as np

from . import __version__
from .classify import PropertyQuery, QueryError, check, parse_property
from .curvature import build_R_a, build_R_phi, load_tensor, validate_acdt, validate_acst
from .frames import SamplerConfig
from .geometry import DegenerateMetric, NeutralMetric, Warped, affine_nabla, evaluate, fab
from .polynomial import PolyParseError, parse_poly, parse_poly_matrix
from .pseudolin import DEFAULT_TOL, LinearMap, Signature, exact_array, scalar_str, to_exact
from .suites import SUITES, run_suite

EXIT_OK, EXIT_ERROR, EXIT_FAILS = 0, 1, 3


class UsageError(ValueError):
    pass


# ------------------------------------------------------------- manifest


def manifest(args, command: str, inputs: dict) -> dict:
    return {
        "tool": f"curvlab {__version__}",
        "command": command,
        "inputs": inputs,
        "seed": getattr(args, "seed_value", None),
        "budget": getattr(args, "samples", None),
        "scalar": getattr(args, "scalar", "exact"),
        "tolerance": getattr(args, "tolerance", None),
        "output": getattr(args, "out", None),
    }


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("CURVLAB_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"CURVLAB_SEED must be an integer, got {env!r}") from None


def _emit(args, payload: dict, rows: list[dict] | None = None):
    if args.format == "csv":
        buf = io.StringIO()
        rows = rows or [payload]
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ----------------------------------------------------------------- build


def _kv(tokens: list[str]) -> dict:
    out = {}
    for tok in tokens:
        for part in _split_top(tok):
            if not part:
                continue
            if "=" not in part:
                raise UsageError(f"expected key=value, got {part!r}")
            k, v = part.split("=", 1)
            out[k.strip()] = v.strip().strip('"').strip("'")
    return out


def _split_top(text: str) -> list[str]:
    """Split ``"eps=1,kappa=0"`` or ``"p=2 q=2"`` at separators that precede ``key=``."""
    return re.split(r"[,\s]+(?=[A-Za-z_]\w*=)", text.strip())


def _need(kv: dict, key: str, flag: str) -> str:
    if key not in kv:
        raise UsageError(f"{flag}: missing required {key}=")
    return kv[key]


def _int(kv, key, flag, default=None) -> int:
    if key not in kv:
        if default is None:
            raise UsageError(f"{flag}: missing required {key}=")
        return default
    try:
        return int(kv[key])
    except ValueError:
        raise UsageError(f"{flag}: {key} must be an integer, got {kv[key]!r}") from None


def _parse_phi(text: str, sig: Signature) -> LinearMap:
    if text.startswith("diag:"):
        vals = [to_exact(v) for v in text[5:].split(",") if v]
        M = np.diag(vals).astype(object)
        M[M == 0] = to_exact(0)
    else:
        M = exact_array(json.loads(text))
    if M.shape != (sig.m, sig.m):
        raise UsageError(f"--rphi: phi must be {sig.m}x{sig.m} for signature {sig}, got {M.shape}")
    return LinearMap(M, sig)


def _parse_gamma(tokens: list[str]):
    gamma = {}
    pattern = re.compile(r"G\[(\d+)\]\[(\d+)\]\[(\d+)\]\s*=\s*(.+)")
    entries = []
    u = None
    for tok in tokens:
        for piece in tok.split(";"):
            piece = piece.strip()
            if not piece:
                continue
            if piece.startswith("u="):
                u = int(piece[2:])
                continue
            m = pattern.fullmatch(piece)
            if not m:
                raise UsageError(f"--gamma: expected G[i][j][k]=poly, got {piece!r}")
            i, j, k = (int(g) for g in m.groups()[:3])
            entries.append((i, j, k, m.group(4)))
    if not entries:
        raise UsageError("--gamma: no entries")
    u = u or max(max(i, j, k) for i, j, k, _ in entries)
    names = [f"x{i + 1}" for i in range(u)]
    for i, j, k, text in entries:
        if min(i, j, k) < 1 or max(i, j, k) > u:
            raise UsageError(f"--gamma: index out of range 1..{u} in G[{i}][{j}][{k}]")
        gamma[(i - 1, j - 1, k - 1)] = parse_poly(text, names)
    return affine_nabla(gamma, u)


def _metric_output(mf, at: str | None, scalar: str) -> dict:
    if at is None:
        raise UsageError("metric families need --at with a rational point")
    point = [to_exact(v) for v in at.split(",")]
    ev = evaluate(mf, point)
    R, D = ev.R, ev.nabla_R
    if scalar == "float":
        R, D = R.to_float(), D.to_float()
    return {
        "family": mf.describe(),
        "coordinates": mf.names,
        "point": [scalar_str(v) for v in ev.point],
        "frame": [[scalar_str(c) for c in col] for col in ev.frame.T],
        "curvature": R.to_json(),
        "nabla": D.to_json(),
        "validation": {
            "curvature": len(validate_acst(ev.R)),
            "nabla": len(validate_acdt(ev.nabla_R)),
        },
    }


def cmd_build(args) -> int:
    chosen = [f for f in ("ra", "rphi", "metric_fab", "psi", "gamma", "warped") if getattr(args, f)]
    if len(chosen) != 1:
        raise UsageError("choose exactly one of --ra, --rphi, --metric-fab, --psi, --gamma, --warped")
    which = chosen[0]
    tokens = getattr(args, which)
    inputs = {which.replace("_", "-"): tokens, "at": args.at}
    if which == "ra":
        kv = _kv(tokens)
        R = build_R_a(_int(kv, "p", "--ra"), _int(kv, "q", "--ra"), _int(kv, "a", "--ra"))
        body = {"tensor": (R.to_float() if args.scalar == "float" else R).to_json(),
                "validation": {"curvature": len(validate_acst(R))}}
    elif which == "rphi":
        kv = _kv(tokens)
        sig = Signature(_int(kv, "p", "--rphi", 0), _int(kv, "q", "--rphi"))
        R = build_R_phi(_parse_phi(_need(kv, "phi", "--rphi"), sig))
        body = {"tensor": (R.to_float() if args.scalar == "float" else R).to_json(),
                "validation": {"curvature": len(validate_acst(R))}}
    elif which == "metric_fab":
        kv = _kv(tokens)
        f_text = _need(kv, "f", "--metric-fab")
        u = _int(kv, "u", "--metric-fab", 0) or _infer_u(f_text)
        f = parse_poly(f_text, [f"x{i + 1}" for i in range(u)])
        mf = fab(f, _int(kv, "a", "--metric-fab", 0), _int(kv, "b", "--metric-fab", 0))
        body = _metric_output(mf, args.at, args.scalar)
    elif which == "psi":
        bare = [t for t in tokens if t.lstrip().startswith("[")]
        kv = _kv([t for t in tokens if t not in bare])
        if not bare and "psi" not in kv:
            raise UsageError("--psi: missing matrix (psi=[[...]])")
        text = bare[0] if bare else kv["psi"]
        u = len(json.loads(re.sub(r"[^\[\],]+", "0", text)))
        names = [f"x{i + 1}" for i in range(u)] + [f"y{i + 1}" for i in range(u)]
        a, b = _int(kv, "a", "--psi", 0), _int(kv, "b", "--psi", 0)
        names += [f"w{i + 1}" for i in range(a + b)]
        mf = NeutralMetric(parse_poly_matrix(text, names), u, a, b, "PsiAB", {"psi": text})
        body = _metric_output(mf, args.at, args.scalar)
    elif which == "gamma":
        body = _metric_output(_parse_gamma(tokens), args.at, args.scalar)
    else:
        kv = _kv(tokens)
        mf = Warped(
            _int(kv, "eps", "--warped"),
            _need(kv, "kappa", "--warped"),
            _need(kv, "A", "--warped"),
            _need(kv, "B", "--warped"),
            _int(kv, "fiber", "--warped"),
        )
        body = _metric_output(mf, args.at, args.scalar)
    payload = {"manifest": manifest(args, "build", inputs)}
    payload.update(body)
    _emit(args, payload)
    return EXIT_OK


def _infer_u(f_text: str) -> int:
    idx = [int(m) for m in re.findall(r"x(\d+)", f_text)]
    return max(idx) if idx else 1


# ----------------------------------------------------------------- check


def _load_input(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _select_tensor(data: dict, prop, scalar: str):
    if "components" in data:
        return load_tensor(data, scalar)
    if prop.operator == "szabo":
        key = "nabla"
    elif prop.operator == "nilpotent" and "curvature" not in data and "tensor" not in data:
        key = "nabla"
    else:
        key = "curvature" if "curvature" in data else "tensor"
    if key not in data:
        raise UsageError(f"input has no {key!r} tensor for property {prop.label}")
    return load_tensor(data[key], scalar)


def cmd_check(args) -> int:
    prop = parse_property(args.property)
    T = _select_tensor(_load_input(args.tensor), prop, args.scalar)
    cfg = SamplerConfig(seed=args.seed_value)
    q = PropertyQuery(prop, args.samples, cfg, args.tolerance, args.full_budget, args.threads, args.frame_method)
    rep = check(T, q)
    inputs = {"tensor": args.tensor, "property": args.property, "frame_method": args.frame_method,
              "full_budget": args.full_budget, "sampler": cfg.to_json()}
    payload = {"manifest": manifest(args, "check", inputs)}
    payload.update(rep.to_json())
    row = {"property": rep.property, "verdict": rep.verdict, "samples": rep.samples, "seed": rep.seed,
           "witness_indices": " ".join(map(str, rep.witness["indices"])) if rep.witness and "indices" in rep.witness else ""}
    _emit(args, payload, [row])
    sys.stderr.write(f"{rep.property}: {rep.verdict} after {rep.samples} samples (seed {rep.seed})\n")
    return EXIT_OK if rep.holds else EXIT_FAILS


# ----------------------------------------------------------------- suite


def cmd_suite(args) -> int:
    if args.scalar != "exact":
        raise UsageError("suites run in exact mode only")
    cfg = SamplerConfig(seed=args.seed_value)
    rep = run_suite(args.name, cfg, args.samples)
    payload = {"manifest": manifest(args, "suite", {"name": args.name, "sampler": cfg.to_json()})}
    payload.update(rep.to_json())
    rows = [{"suite": rep.name, "check": it["check"], "ok": it["ok"]} for it in rep.items]
    _emit(args, payload, rows)
    n_ok = sum(it["ok"] for it in rep.items)
    sys.stderr.write(f"suite {rep.name}: {'pass' if rep.passed else 'FAIL'} ({n_ok}/{len(rep.items)} checks)\n")
    return EXIT_OK if rep.passed else EXIT_FAILS


# ------------------------------------------------------------------ main


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scalar", choices=["exact", "float"], default="exact")
    common.add_argument("--tolerance", type=float, default=DEFAULT_TOL, help="float-mode tolerance")
    common.add_argument("--seed", type=int, default=None, help="defaults to $CURVLAB_SEED, then 0")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--format", choices=["json", "csv"], default="json")

    parser = argparse.ArgumentParser(prog="curvlab", description="Exact curvature-operator property checks.")
    parser.add_argument("--version", action="version", version=f"curvlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common], help="build a tensor or evaluate a metric family")
    b.add_argument("--ra", nargs="+", metavar="KEY=VAL", help="p=.. q=.. a=..")
    b.add_argument("--rphi", nargs="+", metavar="KEY=VAL", help="phi=diag:1,1,1 (or a JSON matrix) p=.. q=..")
    b.add_argument("--metric-fab", nargs="+", metavar="KEY=VAL", help='f="x1^2+x2^2" a=.. b=..')
    b.add_argument("--psi", nargs="+", metavar="KEY=VAL", help='psi="[[x1*x1, 0],[0, x2*x2]]" a=.. b=..')
    b.add_argument("--gamma", nargs="+", metavar="G[i][j][k]=POLY", help="torsion-free connection, 1-based")
    b.add_argument("--warped", nargs="+", metavar="KEY=VAL", help="eps=1,kappa=0,A=1,B=1,fiber=2")
    b.add_argument("--at", default=None, help="rational evaluation point, e.g. 0,0,1/2,1")
    b.set_defaults(func=cmd_build, samples=None)

    c = sub.add_parser("check", parents=[common], help="run a property check on a tensor file")
    c.add_argument("tensor", help="JSON file written by 'build' (or a bare tensor)")
    c.add_argument("--property", required=True, help="e.g. timelike-osserman, jordan-osserman-type:1,0")
    c.add_argument("--samples", type=int, default=200)
    c.add_argument("--full-budget", action="store_true", help="do not stop at the first witness")
    c.add_argument("--frame-method", choices=["mixed", "isometry", "coordinate", "gram_schmidt"], default="mixed")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("suite", parents=[common], help="run a named verification suite")
    s.add_argument("name", choices=sorted(SUITES))
    s.add_argument("--samples", type=int, default=None, help="override the suite's budget")
    s.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.seed_value = _resolve_seed(args)
        return args.func(args)
    except (UsageError, PolyParseError, QueryError, DegenerateMetric, ValueError, KeyError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
